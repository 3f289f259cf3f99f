//! Named constructions with certification routines: regular simplex vertex
//! sets and their hulloids, connected bodies with disconnected hulloids in
//! 2D and 3D, a sequence of R-bodies whose Hausdorff limit is not an
//! R-body, and a set separating the R-bodies from the wider ball-contact
//! class.
//!
//! Each `certify_*` routine rebuilds the construction from its parameters,
//! replays the defining properties through the exact engine and the grid
//! oracle, and returns a [`VerificationReport`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{circumsphere, norm, Point, PointSet};
use crate::grid::{
    components, directed_hausdorff, distance_field, hausdorff, hulloid_grid, is_r_body,
    k2_membership, offset, pointset_is_r_body, rasterize, rasterize_points, Grid, OffsetMode,
    Window,
};
use crate::report::VerificationReport;
use crate::shape::ShapeExpr;

/// Relative tolerance for closed-form identities.
const IDENT_TOL: f64 = 1e-12;

/// Default grid spacings per dimension: fine enough that lattice
/// tolerances stay an order of magnitude under feature separations.
pub fn default_spacing(dim: usize, r: f64) -> f64 {
    match dim {
        2 => r / 200.0,
        _ => r / 60.0,
    }
}

// ---------------------------------------------------------------------------
// regular simplex
// ---------------------------------------------------------------------------

/// Vertices of a regular d-simplex inscribed in the sphere of radius `r0`
/// about the origin, together with the derived facet-ball data.
#[derive(Clone, Debug)]
pub struct SimplexConfig {
    pub d: usize,
    pub r0: f64,
    /// Critical ball radius d*r0/2.
    pub r: f64,
    /// The d+1 vertices k_i, centroid at the origin.
    pub vertices: Vec<Point>,
    /// Centers o_j = -(d/2) k_j of the radius-R balls through the facet
    /// vertex sets; each satisfies |o_j| = R and |o_j - k_i| = R for i != j.
    pub facet_centers: Vec<Point>,
}

/// Canonical regular simplex: vertices of the standard simplex in d+1
/// coordinates, centered and expressed in a deterministic orthonormal
/// basis of the zero-sum hyperplane, then scaled to radius `r0`.
pub fn regular_simplex(d: usize, r0: f64) -> Result<SimplexConfig> {
    if !(2..=4).contains(&d) {
        return Err(Error::Unsupported(format!(
            "simplex dimension {d} outside 2..4"
        )));
    }
    if r0 <= 0.0 || !r0.is_finite() {
        return Err(Error::InvalidParameters(
            "circumradius must be positive".into(),
        ));
    }
    let n = d + 1;
    // basis b_j = e_j - e_n of the hyperplane sum(x) = 0, Gram-Schmidt
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut b = vec![0.0; n];
        b[j] = 1.0;
        b[n - 1] = -1.0;
        for u in &basis {
            let proj: f64 = b.iter().zip(u).map(|(x, y)| x * y).sum();
            for (bi, ui) in b.iter_mut().zip(u) {
                *bi -= proj * ui;
            }
        }
        let len = norm(&b);
        for bi in b.iter_mut() {
            *bi /= len;
        }
        basis.push(b);
    }
    let scale = r0 / (d as f64 / (d as f64 + 1.0)).sqrt();
    let centroid = 1.0 / n as f64;
    let mut vertices = Vec::with_capacity(n);
    for i in 0..n {
        let mut coords = Vec::with_capacity(d);
        for b in &basis {
            // inner product of b with e_i - centroid*1; the 1-vector is
            // orthogonal to the hyperplane, so only b[i] survives
            coords.push(scale * (b[i] - centroid * b.iter().sum::<f64>()));
        }
        vertices.push(Point(coords));
    }
    let facet_centers = vertices
        .iter()
        .map(|k| Point(k.0.iter().map(|x| -(d as f64) / 2.0 * x).collect()))
        .collect();
    Ok(SimplexConfig {
        d,
        r0,
        r: d as f64 * r0 / 2.0,
        vertices,
        facet_centers,
    })
}

/// Verifies the closed-form simplex identities and the spherical covering
/// bound by Monte Carlo sampling on the circumsphere.
pub fn simplex_identities_check(
    s: &SimplexConfig,
    samples: usize,
    seed: u64,
) -> VerificationReport {
    let mut rep = VerificationReport::new();
    let d = s.d as f64;
    let k = &s.vertices;
    let tol = IDENT_TOL * s.r0.max(1.0);

    let mut centroid = vec![0.0; s.d];
    for v in k {
        for (c, x) in centroid.iter_mut().zip(&v.0) {
            *c += x;
        }
    }
    rep.check_le(
        "centroid_at_origin",
        "vertex sum vanishes",
        norm(&centroid),
        tol * k.len() as f64,
    );

    let mut worst_norm: f64 = 0.0;
    let mut worst_gram: f64 = 0.0;
    let mut worst_dist: f64 = 0.0;
    let pair_dist = (2.0 * (d + 1.0) / d).sqrt() * s.r0;
    for i in 0..k.len() {
        worst_norm = worst_norm.max((k[i].norm() - s.r0).abs());
        for j in i + 1..k.len() {
            let dot: f64 = k[i].0.iter().zip(&k[j].0).map(|(a, b)| a * b).sum();
            worst_gram = worst_gram.max((dot + s.r0 * s.r0 / d).abs());
            worst_dist = worst_dist.max((k[i].dist(&k[j]) - pair_dist).abs());
        }
    }
    rep.check_le(
        "vertex_radius",
        "all vertices lie on the circumsphere",
        worst_norm,
        tol,
    );
    rep.check_le(
        "gram_off_diagonal",
        "pairwise inner products equal -r0^2/d",
        worst_gram,
        IDENT_TOL * s.r0 * s.r0.max(1.0),
    );
    rep.check_le(
        "vertex_spacing",
        "pairwise distances equal sqrt(2(d+1)/d) r0",
        worst_dist,
        tol,
    );

    // facet sphere centers: circumcenter of the d remaining vertices,
    // computed independently, must equal -k_i/d
    let mut worst_center: f64 = 0.0;
    for i in 0..k.len() {
        let facet: Vec<Point> = (0..k.len())
            .filter(|&j| j != i)
            .map(|j| k[j].clone())
            .collect();
        if let Ok((c, _)) = circumsphere(&facet) {
            let expect = Point(k[i].0.iter().map(|x| -x / d).collect());
            worst_center = worst_center.max(c.dist(&expect));
        } else {
            rep.check_bool("facet_circumsphere", "facet circumsphere exists", false);
        }
    }
    rep.check_le(
        "facet_center",
        "the sphere through a facet's vertices has center -k_i/d",
        worst_center,
        tol,
    );

    let mut worst_o: f64 = 0.0;
    let o_dist = 2.0 * s.r * (0.5 + 0.5 / d).sqrt();
    for i in 0..k.len() {
        for j in 0..k.len() {
            if i != j {
                worst_o = worst_o.max((s.facet_centers[j].dist(&k[i]) - s.r).abs());
                if j > i {
                    worst_o =
                        worst_o.max((s.facet_centers[i].dist(&s.facet_centers[j]) - o_dist).abs());
                }
            }
        }
    }
    rep.check_le(
        "facet_ball_geometry",
        "|o_j - k_i| = R for i != j and |o_i - o_j| = 2R sqrt(1/2 + 1/(2d))",
        worst_o,
        tol,
    );

    // covering bound: every point of the circumsphere is within spherical
    // distance r0*arccos(1/d) of a vertex
    let bound = s.r0 * (1.0 / d).acos();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_cover: f64 = 0.0;
    for _ in 0..samples {
        let u = sample_unit_vector(&mut rng, s.d);
        let best = k
            .iter()
            .map(|v| v.0.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>() / s.r0)
            .fold(f64::NEG_INFINITY, f64::max);
        worst_cover = worst_cover.max(s.r0 * best.clamp(-1.0, 1.0).acos());
    }
    rep.check_le(
        "spherical_covering",
        "spherical distance from any point of the circumsphere to the vertex set is at most r0 arccos(1/d)",
        worst_cover,
        bound * (1.0 + 1e-9),
    );
    rep.note_last(format!("{samples} samples, seed {seed}"));
    rep
}

/// Tests whether the origin is forced into the hulloid of the vertex set:
/// passes iff every sampled ball center z with |z| <= R - delta yields an
/// open radius-R ball that hits a vertex. Fails for d = 2 (where the
/// hulloid of the vertices is discrete) and passes for d > 2.
pub fn origin_membership_check(
    s: &SimplexConfig,
    samples: usize,
    delta: f64,
    seed: u64,
) -> VerificationReport {
    let mut rep = VerificationReport::new();
    let mut worst: f64 = 0.0;
    let eval = |z: &[f64], worst: &mut f64| {
        let nearest = s
            .vertices
            .iter()
            .map(|k| {
                k.0.iter()
                    .zip(z)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        *worst = worst.max(nearest);
    };
    // deterministic worst-case candidates: the origin and the points just
    // inside the critical radius along the vertex axes
    eval(&vec![0.0; s.d], &mut worst);
    for k in &s.vertices {
        let unit: Vec<f64> = k.0.iter().map(|x| x / s.r0).collect();
        let fwd: Vec<f64> = unit.iter().map(|x| x * (s.r - delta)).collect();
        let bwd: Vec<f64> = unit.iter().map(|x| -x * (s.r - delta)).collect();
        eval(&fwd, &mut worst);
        eval(&bwd, &mut worst);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let z = sample_in_ball(&mut rng, s.d, s.r - delta);
        eval(&z, &mut worst);
    }
    rep.check_le(
        "origin_ball_blocked",
        "every open radius-R ball containing the origin contains a vertex",
        worst,
        s.r * (1.0 - IDENT_TOL),
    );
    rep.note_last(format!("{samples} samples, delta {delta}, seed {seed}"));
    rep
}

fn sample_unit_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = norm(&v);
        if n > 1e-3 && n <= 1.0 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

fn sample_in_ball(rng: &mut ChaCha8Rng, d: usize, radius: f64) -> Vec<f64> {
    let u: f64 = rng.gen_range(0.0f64..1.0);
    let r = radius * u.powf(1.0 / d as f64);
    sample_unit_vector(rng, d).iter().map(|x| x * r).collect()
}

/// Exact symmetric Hausdorff distance between two finite point sets.
pub fn pointset_hausdorff(a: &[Point], b: &[Point]) -> f64 {
    let directed = |from: &[Point], to: &[Point]| {
        from.iter()
            .map(|p| to.iter().map(|q| p.dist(q)).fold(f64::INFINITY, f64::min))
            .fold(0.0f64, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

// ---------------------------------------------------------------------------
// named examples
// ---------------------------------------------------------------------------

/// Named example constructions, addressable from the CLI.
#[derive(Clone, Debug, PartialEq)]
pub enum ExampleSpec {
    /// Planar annular body whose hulloid gains a separate central
    /// component; requires r/sqrt(3) < r0 < r.
    Disc2d { r: f64, r0: f64 },
    /// Same body with a radial corridor cut out, making it simply
    /// connected while keeping the hulloid disconnected.
    Disc2dSimplyConnected { r: f64, r0: f64 },
    /// 3D ball of radius sqrt(2) R minus four facet balls and the origin
    /// cell; connected, hulloid disconnected.
    DiscNd { r: f64 },
    /// Vertex set W of the regular d-simplex at the critical radius
    /// R = d r0/2; for d > 2 the hulloid is W plus the origin.
    SimplexHulloid { d: usize, r0: f64 },
    /// n-th term of the 3D vertex sequence of R-bodies converging to the
    /// non-R-body W; eps0 is the initial radial offset.
    Nonclosure { n: u32, eps0: f64, r: f64 },
    /// Annulus plus a thin inner shell: not an R-body, yet every exterior
    /// point has a closed R-ball avoiding the interior. Requires
    /// r1 < r < outer.
    K2Gap {
        dim: usize,
        r: f64,
        outer: f64,
        r1: f64,
    },
}

impl ExampleSpec {
    /// Default-parameter construction by CLI name, scaled by `r`.
    pub fn by_name(name: &str, r: f64) -> Result<ExampleSpec> {
        if r <= 0.0 || !r.is_finite() {
            return Err(Error::InvalidParameters("radius must be positive".into()));
        }
        Ok(match name {
            "disc2d" => ExampleSpec::Disc2d { r, r0: 0.7 * r },
            "disc2d_simply_connected" => ExampleSpec::Disc2dSimplyConnected { r, r0: 0.7 * r },
            "disc_nd" => ExampleSpec::DiscNd { r },
            "simplex_hulloid" => ExampleSpec::SimplexHulloid {
                d: 3,
                r0: 2.0 * r / 3.0,
            },
            "nonclosure" => ExampleSpec::Nonclosure {
                n: 0,
                eps0: 0.05 * r,
                r,
            },
            "k2gap" => ExampleSpec::K2Gap {
                dim: 2,
                r,
                outer: 2.0 * r,
                r1: 0.5 * r,
            },
            other => {
                return Err(Error::InvalidParameters(format!(
                    "unknown example '{other}'"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExampleSpec::Disc2d { .. } => "disc2d",
            ExampleSpec::Disc2dSimplyConnected { .. } => "disc2d_simply_connected",
            ExampleSpec::DiscNd { .. } => "disc_nd",
            ExampleSpec::SimplexHulloid { .. } => "simplex_hulloid",
            ExampleSpec::Nonclosure { .. } => "nonclosure",
            ExampleSpec::K2Gap { .. } => "k2gap",
        }
    }
}

/// A constructed example ready for rasterization or rendering.
#[derive(Clone, Debug)]
pub struct BuiltExample {
    pub name: &'static str,
    pub dim: usize,
    pub radius: f64,
    pub spacing: f64,
    pub shape: ShapeExpr,
    pub window: Window,
}

/// Ball centers o_j for the planar disc construction: each passes through
/// the two vertices other than k_j, with k_j strictly outside.
fn disc2d_ball_centers(s: &SimplexConfig, r: f64) -> Vec<Point> {
    s.vertices
        .iter()
        .map(|k| {
            let depth = (r * r - 0.75 * s.r0 * s.r0).sqrt();
            let t = 0.5 + depth / s.r0;
            Point(k.0.iter().map(|x| -t * x).collect())
        })
        .collect()
}

fn disc2d_shapes(r: f64, r0: f64) -> Result<(ShapeExpr, ShapeExpr, SimplexConfig, Vec<Point>)> {
    if !(r / 3f64.sqrt() < r0 && r0 < r) {
        return Err(Error::InvalidParameters(
            "disc2d requires r/sqrt(3) < r0 < r".into(),
        ));
    }
    let s = regular_simplex(2, r0)?;
    let centers = disc2d_ball_centers(&s, r);
    let balls: Vec<ShapeExpr> = centers
        .iter()
        .map(|c| ShapeExpr::ball(&c.0, r, false))
        .collect();
    let mut carved = vec![ShapeExpr::ball(&[0.0, 0.0], r0, false)];
    carved.extend(balls.clone());
    let e = ShapeExpr::difference(
        ShapeExpr::ball(&[0.0, 0.0], 4.0 * r, true),
        ShapeExpr::union(carved),
    );
    // closed-form hulloid: same disc minus the three balls only; the
    // central curvilinear region reappears
    let expected = ShapeExpr::difference(
        ShapeExpr::ball(&[0.0, 0.0], 4.0 * r, true),
        ShapeExpr::union(balls),
    );
    Ok((e, expected, s, centers))
}

/// Radial corridor from the first carved ball out through the outer
/// boundary, used to cut the ring open.
fn disc2d_strip(s: &SimplexConfig, centers: &[Point], r: f64) -> ShapeExpr {
    let k1 = &s.vertices[0];
    let d_hat = [-k1.x() / s.r0, -k1.y() / s.r0];
    let t_hat = [-d_hat[1], d_hat[0]];
    let start = centers[0].norm();
    ShapeExpr::intersection(vec![
        ShapeExpr::Halfspace {
            normal: t_hat.to_vec(),
            offset: r / 20.0,
        },
        ShapeExpr::Halfspace {
            normal: vec![-t_hat[0], -t_hat[1]],
            offset: r / 20.0,
        },
        ShapeExpr::Halfspace {
            normal: vec![-d_hat[0], -d_hat[1]],
            offset: -start,
        },
    ])
}

fn disc_nd_shapes(r: f64) -> Result<(ShapeExpr, ShapeExpr, SimplexConfig)> {
    let s = regular_simplex(3, 2.0 * r / 3.0)?;
    let balls: Vec<ShapeExpr> = s
        .facet_centers
        .iter()
        .map(|o| ShapeExpr::ball(&o.0, r, false))
        .collect();
    let mut carved = balls.clone();
    carved.push(ShapeExpr::Points {
        points: vec![vec![0.0; 3]],
    });
    let outer = ShapeExpr::ball(&[0.0, 0.0, 0.0], 2f64.sqrt() * r, true);
    let e = ShapeExpr::difference(outer.clone(), ShapeExpr::union(carved));
    let expected = ShapeExpr::difference(outer, ShapeExpr::union(balls));
    Ok((e, expected, s))
}

fn k2gap_shape(dim: usize, r: f64, outer: f64, r1: f64, h: f64) -> Result<ShapeExpr> {
    if !(r1 < r && r < outer) {
        return Err(Error::InvalidParameters(
            "k2gap requires r1 < r < outer".into(),
        ));
    }
    if !(2..=3).contains(&dim) {
        return Err(Error::Unsupported(format!("k2gap dimension {dim}")));
    }
    let origin = vec![0.0; dim];
    Ok(ShapeExpr::union(vec![
        ShapeExpr::difference(
            ShapeExpr::ball(&origin, outer, true),
            ShapeExpr::ball(&origin, r, false),
        ),
        // the inner sphere is below grid resolution; keep the rasterized
        // band strictly thinner than one cell so no cell has occupied
        // neighbors on both radial sides, i.e. the shell stays
        // interior-free like the sphere it stands for
        ShapeExpr::SphereShell {
            center: origin,
            radius: r1,
            thickness: 0.9 * h,
        },
    ]))
}

/// Symmetric cube window with the half-width rounded up to (N + 1/2)
/// cells so the origin lands exactly on a cell center.  Constructions
/// whose central component is a single point need this alignment; for
/// everything else it is harmless.
fn cube_window(half: f64, dim: usize, h: f64) -> Window {
    let n = (half / h - 0.5).ceil().max(1.0);
    let snapped = (n + 0.5) * h;
    Window::new(vec![-snapped; dim], vec![snapped; dim]).expect("positive half-width")
}

/// Connected components counted at lattice scale: the occupied set is
/// dilated by `eps` first, so one-cell slivers that a rasterized cusp
/// pinches off rejoin their parent while genuinely separated pieces
/// (anything farther apart than `eps`) stay distinct.  The labels are
/// indexed like the input grid and valid on its occupied cells.
fn components_at_scale(g: &Grid, eps: f64) -> Result<(usize, Vec<u32>)> {
    let fat = offset(g, eps, OffsetMode::DilateOpen)?;
    Ok(components(&fat))
}

/// Nearest occupied cell to a world point, with its distance.
fn nearest_occupied(g: &Grid, p: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for lin in 0..g.len() {
        if g.get(lin) {
            let c = g.cell_center(lin);
            let d = c
                .iter()
                .zip(p)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if best.map_or(true, |b| d < b.1) {
                best = Some((lin, d));
            }
        }
    }
    best
}

/// Nonclosure vertex set W^(n): the simplex vertices pushed radially
/// outward by eps_n = eps0 / 2^n.
pub fn nonclosure_points(s: &SimplexConfig, eps: f64) -> Vec<Point> {
    s.vertices
        .iter()
        .map(|k| Point(k.0.iter().map(|x| x * (1.0 + eps / s.r0)).collect()))
        .collect()
}

/// Builds the shape, window and default spacing for a named example.
pub fn build_example(spec: &ExampleSpec) -> Result<BuiltExample> {
    let built = match spec {
        ExampleSpec::Disc2d { r, r0 } => {
            let (e, _, _, _) = disc2d_shapes(*r, *r0)?;
            let h = default_spacing(2, *r);
            BuiltExample {
                name: spec.name(),
                dim: 2,
                radius: *r,
                spacing: h,
                shape: e,
                window: cube_window(4.0 * r + 2.0 * r + 4.0 * h, 2, h),
            }
        }
        ExampleSpec::Disc2dSimplyConnected { r, r0 } => {
            let (e, _, s, centers) = disc2d_shapes(*r, *r0)?;
            let h = default_spacing(2, *r);
            let e_star = ShapeExpr::difference(e, disc2d_strip(&s, &centers, *r));
            BuiltExample {
                name: spec.name(),
                dim: 2,
                radius: *r,
                spacing: h,
                shape: e_star,
                window: cube_window(4.0 * r + 2.0 * r + 4.0 * h, 2, h),
            }
        }
        ExampleSpec::DiscNd { r } => {
            let (e, _, _) = disc_nd_shapes(*r)?;
            let h = default_spacing(3, *r);
            BuiltExample {
                name: spec.name(),
                dim: 3,
                radius: *r,
                spacing: h,
                shape: e,
                window: cube_window(2f64.sqrt() * r + 2.0 * r + 4.0 * h, 3, h),
            }
        }
        ExampleSpec::SimplexHulloid { d, r0 } => {
            let s = regular_simplex(*d, *r0)?;
            let h = default_spacing(*d, s.r);
            let pts: Vec<Vec<f64>> = s.vertices.iter().map(|k| k.0.clone()).collect();
            BuiltExample {
                name: spec.name(),
                dim: *d,
                radius: s.r,
                spacing: h,
                shape: ShapeExpr::Points { points: pts },
                window: cube_window(r0 + 2.0 * s.r + 5.0 * h, *d, h),
            }
        }
        ExampleSpec::Nonclosure { n, eps0, r } => {
            let s = regular_simplex(3, 2.0 * r / 3.0)?;
            let eps = eps0 / 2f64.powi(*n as i32);
            let h = default_spacing(3, *r);
            let pts: Vec<Vec<f64>> = nonclosure_points(&s, eps)
                .iter()
                .map(|p| p.0.clone())
                .collect();
            BuiltExample {
                name: spec.name(),
                dim: 3,
                radius: *r,
                spacing: h,
                shape: ShapeExpr::Points { points: pts },
                window: cube_window(s.r0 + eps + 2.0 * r + 5.0 * h, 3, h),
            }
        }
        ExampleSpec::K2Gap { dim, r, outer, r1 } => {
            let h = default_spacing(*dim, *r);
            BuiltExample {
                name: spec.name(),
                dim: *dim,
                radius: *r,
                spacing: h,
                shape: k2gap_shape(*dim, *r, *outer, *r1, h)?,
                window: cube_window(outer + 2.0 * r + 4.0 * h, *dim, h),
            }
        }
    };
    Ok(built)
}

/// Options shared by the certification routines.
#[derive(Clone, Debug)]
pub struct CertifyOptions {
    /// Grid spacing override; defaults to R/200 in 2D and R/60 in 3D.
    pub spacing: Option<f64>,
    /// Monte Carlo sample count for sampling-based checks.
    pub samples: usize,
    pub seed: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            spacing: None,
            samples: 100_000,
            seed: 7,
        }
    }
}

/// Distance from a world point to the occupied set of a precomputed field.
fn field_dist(df: &crate::grid::DistanceField, g: &Grid, p: &[f64]) -> f64 {
    match g.nearest_cell(p) {
        Some(lin) => df.world(lin),
        None => f64::INFINITY,
    }
}

/// Certifies a named example end to end; dispatches on the spec variant.
pub fn certify_example(spec: &ExampleSpec, opts: &CertifyOptions) -> Result<VerificationReport> {
    match spec {
        ExampleSpec::Disc2d { r, r0 } => certify_disc2d(*r, *r0, opts, false),
        ExampleSpec::Disc2dSimplyConnected { r, r0 } => certify_disc2d(*r, *r0, opts, true),
        ExampleSpec::DiscNd { r } => certify_disc_nd(*r, opts),
        ExampleSpec::SimplexHulloid { d, r0 } => certify_simplex_hulloid(*d, *r0, opts),
        ExampleSpec::Nonclosure { n, eps0, r } => Ok(nonclosure_sequence(*n, *eps0, *r, opts)?.2),
        ExampleSpec::K2Gap { dim, r, outer, r1 } => certify_k2gap(*dim, *r, *outer, *r1, opts),
    }
}

fn certify_disc2d(
    r: f64,
    r0: f64,
    opts: &CertifyOptions,
    simply_connected: bool,
) -> Result<VerificationReport> {
    let (e_shape, expected_shape, s, centers) = disc2d_shapes(r, r0)?;
    let h = opts.spacing.unwrap_or_else(|| default_spacing(2, r));
    let window = cube_window(4.0 * r + 2.0 * r + 4.0 * h, 2, h);
    let shape = if simply_connected {
        ShapeExpr::difference(e_shape, disc2d_strip(&s, &centers, r))
    } else {
        e_shape
    };
    let e = rasterize(&shape, &window, h)?;
    let tol = 2.0 * h * 2f64.sqrt();
    let mut rep = VerificationReport::new();

    rep.check_bool(
        "body_connected",
        "the body is connected",
        components_at_scale(&e, tol)?.0 == 1,
    );
    if simply_connected {
        // a simply connected planar set leaves its window complement in
        // one piece; the uncut ring traps a second piece
        rep.check_bool(
            "complement_connected",
            "cutting the corridor merges the complement into one component",
            components_at_scale(&e.invert(), tol)?.0 == 1,
        );
    }

    let co = hulloid_grid(&e, r)?.body()?;
    let (nco, labels) = components_at_scale(&co, tol)?;
    rep.check_bool(
        "hulloid_components",
        "the hulloid splits into two components",
        nco == 2,
    );

    let expected = rasterize(&expected_shape, &window, h)?;
    rep.check_le(
        "hulloid_no_missing",
        "every point of the disc minus the three balls is realized",
        directed_hausdorff(&expected, &co)?,
        tol,
    );
    // The balls meet the central circle tangentially, so a cusp-shaped
    // band of sub-resolution depth inside the balls survives the carve;
    // measured as Hausdorff distance that band stretches to O(sqrt(R h)).
    // The faithful lattice statement is that all extra material stays
    // within lattice depth of the carved sphere boundaries.
    let mut worst_depth: f64 = 0.0;
    for lin in 0..co.len() {
        if co.get(lin) && !expected.get(lin) {
            let c = Point(co.cell_center(lin));
            let d_balls = centers
                .iter()
                .map(|o| r - c.dist(o))
                .fold(f64::NEG_INFINITY, f64::max);
            let d_outer = c.norm() - 4.0 * r;
            worst_depth = worst_depth.max(d_balls.max(d_outer).max(0.0));
        }
    }
    rep.check_le(
        "hulloid_extra_grazes_spheres",
        "extra material only grazes the carved ball boundaries",
        worst_depth,
        tol,
    );

    let df_co = distance_field(&co);
    let mut worst_vertex: f64 = 0.0;
    for k in &s.vertices {
        worst_vertex = worst_vertex.max(field_dist(&df_co, &co, &k.0));
    }
    rep.check_le(
        "vertices_in_hulloid",
        "the triangle vertices belong to the hulloid",
        worst_vertex,
        tol,
    );

    // the central component is the one holding the cell nearest the origin
    let (origin_cell, d_origin) = nearest_occupied(&co, &[0.0, 0.0]).expect("hulloid non-empty");
    let (outer_cell, d_outer) = nearest_occupied(&co, &[3.5 * r, 0.0]).expect("hulloid non-empty");
    rep.check_bool(
        "central_component_separate",
        "the component containing the origin differs from the outer one",
        d_origin <= tol && d_outer <= tol && labels[origin_cell] != labels[outer_cell],
    );

    let (isbody, witness) = is_r_body(&e, r, tol)?;
    rep.check_bool(
        "body_not_r_body",
        "the body itself is not an R-body",
        !isbody,
    );
    if let Some(w) = witness {
        rep.check_le(
            "witness_in_core",
            "the violation witness lies in the central disc",
            w.norm(),
            r0,
        );
    }
    Ok(rep)
}

fn certify_disc_nd(r: f64, opts: &CertifyOptions) -> Result<VerificationReport> {
    let (e_shape, expected_shape, s) = disc_nd_shapes(r)?;
    let h = opts.spacing.unwrap_or_else(|| default_spacing(3, r));
    let window = cube_window(2f64.sqrt() * r + 2.0 * r + 4.0 * h, 3, h);
    let tol = 2.0 * h * 3f64.sqrt();
    let mut rep = VerificationReport::new();

    // intersection circles of facet-ball pairs: centered at (o_i+o_j)/2,
    // through the origin, with farthest point 2R sqrt(1/2 - 1/(2d)) < sqrt(2) R
    let mut worst_l: f64 = 0.0;
    let expect_radius = r * (0.5f64 - 0.5 / 3.0).sqrt();
    for i in 0..4 {
        for j in i + 1..4 {
            let mid = Point(
                s.facet_centers[i]
                    .0
                    .iter()
                    .zip(&s.facet_centers[j].0)
                    .map(|(a, b)| (a + b) / 2.0)
                    .collect(),
            );
            worst_l = worst_l.max((mid.norm() - expect_radius).abs());
        }
    }
    rep.check_le(
        "pair_circle_geometry",
        "facet-ball intersection circles pass through the origin and stay inside radius sqrt(2) R",
        worst_l,
        IDENT_TOL * r,
    );
    rep.check_bool(
        "pair_circle_inside",
        "2R sqrt(1/2 - 1/(2d)) < sqrt(2) R",
        2.0 * expect_radius < 2f64.sqrt() * r,
    );

    let e = rasterize(&e_shape, &window, h)?;
    rep.check_bool(
        "body_connected",
        "the body is connected",
        components_at_scale(&e, tol)?.0 == 1,
    );

    let df_e = distance_field(&e);
    let origin_gap = field_dist(&df_e, &e, &[0.0, 0.0, 0.0]);
    rep.check_bool(
        "origin_separated",
        "the origin keeps a positive distance from the body",
        origin_gap > 2.0 * tol,
    );
    rep.note_last(format!("distance {origin_gap:.6}"));

    let co = hulloid_grid(&e, r)?.body()?;
    let (nco, labels) = components_at_scale(&co, tol)?;
    rep.check_bool(
        "hulloid_components",
        "the hulloid splits into two components",
        nco == 2,
    );

    let expected = rasterize(&expected_shape, &window, h)?;
    rep.check_le(
        "hulloid_closed_form",
        "the hulloid equals the body plus the origin",
        hausdorff(&co, &expected)?,
        1.5 * tol,
    );

    // a probe point solidly inside the body: 1.3 R toward a vertex keeps
    // at least 0.9 R clearance from every facet ball
    let probe: Vec<f64> = s.vertices[0].0.iter().map(|x| 1.3 * r * x / s.r0).collect();
    let (origin_cell, d_origin) =
        nearest_occupied(&co, &[0.0, 0.0, 0.0]).expect("hulloid non-empty");
    let (outer_cell, d_outer) = nearest_occupied(&co, &probe).expect("hulloid non-empty");
    let isolated = d_origin <= tol && d_outer <= tol && labels[origin_cell] != labels[outer_cell];
    rep.check_bool(
        "origin_component_isolated",
        "the cell realizing the origin forms its own hulloid component",
        isolated,
    );
    if isolated {
        // every cell of the origin's component stays near the origin
        let lbl = labels[origin_cell];
        let mut worst: f64 = 0.0;
        for lin in 0..co.len() {
            if co.get(lin) && labels[lin] == lbl {
                worst = worst.max(norm(&co.cell_center(lin)));
            }
        }
        rep.check_le(
            "origin_component_tight",
            "the isolated component lies within lattice tolerance of the origin",
            worst,
            tol,
        );
    }

    let (isbody, witness) = is_r_body(&e, r, tol)?;
    rep.check_bool(
        "body_not_r_body",
        "the body itself is not an R-body",
        !isbody,
    );
    if let Some(w) = witness {
        rep.check_le(
            "witness_near_origin",
            "the violation witness lies at the origin",
            w.norm(),
            tol,
        );
    }
    Ok(rep)
}

fn certify_simplex_hulloid(d: usize, r0: f64, opts: &CertifyOptions) -> Result<VerificationReport> {
    let s = regular_simplex(d, r0)?;
    let mut rep = simplex_identities_check(&s, opts.samples, opts.seed);
    let origin = origin_membership_check(&s, opts.samples, 1e-3 * s.r, opts.seed);
    if d == 2 {
        // contrast case: at the critical radius the planar hulloid is the
        // bare vertex set, so no ball through the origin is blocked
        let blocked = origin.passed();
        rep.check_bool(
            "origin_free_d2",
            "for d = 2 some open radius-R ball contains the origin and avoids the vertices",
            !blocked,
        );
        return Ok(rep);
    }
    rep.merge(origin);
    if d > 3 {
        // grid certification is limited to d = 3 by memory; sampling
        // checks above still certify the defining property
        return Ok(rep);
    }

    let h = opts.spacing.unwrap_or_else(|| default_spacing(3, s.r));
    let tol = 2.0 * h * 3f64.sqrt();
    let w_cells = rasterize_points(&s.vertices, 2.0 * s.r + 5.0 * h, h)?;
    let co = hulloid_grid(&w_cells, s.r)?.body()?;

    // closed form: W plus the origin
    let mut w_plus = s.vertices.clone();
    w_plus.push(Point(vec![0.0; d]));
    let df_co = distance_field(&co);
    let mut worst_missing: f64 = 0.0;
    for p in &w_plus {
        worst_missing = worst_missing.max(field_dist(&df_co, &co, &p.0));
    }
    rep.check_le(
        "hulloid_contains_w_and_origin",
        "the hulloid contains the vertices and the origin",
        worst_missing,
        tol,
    );
    let mut worst_extra: f64 = 0.0;
    for lin in 0..co.len() {
        if co.get(lin) {
            let c = co.cell_center(lin);
            let d_min = w_plus
                .iter()
                .map(|p| {
                    p.0.iter()
                        .zip(&c)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(f64::INFINITY, f64::min);
            worst_extra = worst_extra.max(d_min);
        }
    }
    rep.check_le(
        "hulloid_no_extra_material",
        "every hulloid cell lies at a vertex or at the origin",
        worst_extra,
        tol,
    );

    // component structure: the vertex components plus exactly one more at
    // the origin, and none anywhere else
    let (n_w, _) = components(&w_cells);
    let (n_co, labels) = components(&co);
    let origin_cell = co
        .nearest_cell(&vec![0.0; d])
        .expect("origin inside window");
    rep.check_bool(
        "origin_adds_one_component",
        "the hulloid has exactly one component more than the vertex set, at the origin",
        n_co == n_w + 1 && co.get(origin_cell),
    );
    rep.note_last(format!(
        "vertex components {n_w}, hulloid components {n_co}"
    ));
    let lbl = labels[origin_cell];
    let mut origin_worst: f64 = 0.0;
    for lin in 0..co.len() {
        if co.get(lin) && labels[lin] == lbl {
            origin_worst = origin_worst.max(norm(&co.cell_center(lin)));
        }
    }
    rep.check_le(
        "origin_component_tight",
        "the extra component lies within lattice tolerance of the origin",
        origin_worst,
        tol,
    );

    let (isbody, witness) = is_r_body(&w_cells, s.r, tol)?;
    rep.check_bool("w_not_r_body", "the vertex set is not an R-body", !isbody);
    if let Some(w) = witness {
        rep.check_le(
            "witness_near_origin",
            "the violation witness lies at the origin",
            w.norm(),
            tol,
        );
    }
    let w_plus_cells = rasterize_points(&w_plus, 2.0 * s.r + 5.0 * h, h)?;
    let (plus_ok, _) = is_r_body(&w_plus_cells, s.r, tol)?;
    rep.check_bool(
        "w_plus_origin_r_body",
        "adding the origin yields an R-body",
        plus_ok,
    );
    Ok(rep)
}

/// Builds the n-th term of the non-closure sequence and certifies its
/// defining identities and grid verdicts. Returns the vertex set, the
/// enlarged ball radius R_n, and the report.
pub fn nonclosure_sequence(
    n: u32,
    eps0: f64,
    r: f64,
    opts: &CertifyOptions,
) -> Result<(PointSet, f64, VerificationReport)> {
    if eps0 <= 0.0 || r <= 0.0 {
        return Err(Error::InvalidParameters(
            "eps0 and r must be positive".into(),
        ));
    }
    let s = regular_simplex(3, 2.0 * r / 3.0)?;
    let eps = eps0 / 2f64.powi(n as i32);
    let w_n = nonclosure_points(&s, eps);
    let mut rep = VerificationReport::new();

    // closed form R_n^2 = R^2 + eps^2 + (2/3) R eps, cross-checked against
    // the direct distance |o_i - x_j|
    let r_n = (r * r + eps * eps + 2.0 / 3.0 * r * eps).sqrt();
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                worst = worst.max((s.facet_centers[i].dist(&w_n[j]) - r_n).abs());
            }
        }
    }
    rep.check_le(
        "enlarged_radius_formula",
        "|o_i - x_j| matches sqrt(R^2 + eps^2 + 2/3 R eps) for i != j",
        worst,
        IDENT_TOL * r,
    );
    rep.check_bool("radius_exceeds_r", "R_n > R", r_n > r);

    rep.check_le(
        "hausdorff_is_eps",
        "the vertex sets are exactly eps apart in Hausdorff distance",
        (pointset_hausdorff(&w_n, &s.vertices) - eps).abs(),
        IDENT_TOL * r,
    );

    let h = opts.spacing.unwrap_or_else(|| default_spacing(3, r));
    let tol = 2.0 * h * 3f64.sqrt();
    let (wn_ok, _) = pointset_is_r_body(&w_n, r, h)?;
    rep.check_bool(
        "term_is_r_body",
        "each term of the sequence is an R-body",
        wn_ok,
    );

    let (w_ok, witness) = pointset_is_r_body(&s.vertices, r, h)?;
    rep.check_bool(
        "limit_not_r_body",
        "the limit vertex set is not an R-body",
        !w_ok,
    );
    if let Some(w) = witness {
        rep.check_le(
            "witness_near_origin",
            "the violation witness lies at the origin",
            w.norm(),
            tol,
        );
    }
    Ok((PointSet::new(w_n)?, r_n, rep))
}

/// For each eps in the list, checks that the limit vertex set is an
/// (R - eps)-body on the grid.
pub fn run_r_eps_check(
    w: &PointSet,
    r: f64,
    eps_list: &[f64],
    opts: &CertifyOptions,
) -> Result<VerificationReport> {
    let mut rep = VerificationReport::new();
    let h = opts.spacing.unwrap_or_else(|| default_spacing(w.dim(), r));
    for &eps in eps_list {
        if !(0.0 < eps && eps < r) {
            return Err(Error::InvalidParameters("eps must lie in (0, R)".into()));
        }
        let (ok, _) = pointset_is_r_body(w.points(), r - eps, h)?;
        rep.check_bool(
            &format!("r_eps_body_eps_{eps:.4}"),
            "the Hausdorff limit of R-bodies is an (R - eps)-body",
            ok,
        );
    }
    Ok(rep)
}

fn certify_k2gap(
    dim: usize,
    r: f64,
    outer: f64,
    r1: f64,
    opts: &CertifyOptions,
) -> Result<VerificationReport> {
    let h = opts.spacing.unwrap_or_else(|| default_spacing(dim, r));
    let shape = k2gap_shape(dim, r, outer, r1, h)?;
    let window = cube_window(outer + 2.0 * r + 4.0 * h, dim, h);
    let e = rasterize(&shape, &window, h)?;
    let tol = 2.0 * h * (dim as f64).sqrt();
    let mut rep = VerificationReport::new();

    let (isbody, witness) = is_r_body(&e, r, tol)?;
    rep.check_bool(
        "not_r_body",
        "the annulus plus inner shell is not an R-body",
        !isbody,
    );
    if let Some(w) = witness {
        // extra hulloid material appears between the shell and the annulus
        rep.check_le(
            "witness_in_gap",
            "the violation witness lies inside the inner ball",
            w.norm(),
            r,
        );
    }
    let (k2_ok, k2_witness) = k2_membership(&e, r)?;
    rep.check_bool(
        "k2_member",
        "every exterior point lies in a closed radius-R ball avoiding the interior",
        k2_ok,
    );
    if let Some(w) = k2_witness {
        rep.note_last(format!("counterexample at {:?}", w.0));
    }
    Ok(rep)
}
