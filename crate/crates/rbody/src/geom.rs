//! Exact low-dimensional primitives: distances, circumspheres, triangle
//! classification, the two radius-R circles through a point pair, and the
//! two-disk lens.
//!
//! Everything here is pure double precision; degenerate inputs are rejected
//! via a scale-invariant Gram-determinant test rather than repaired.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative threshold below which a configuration counts as affinely dependent.
pub const DEGENERACY_EPS: f64 = 1e-12;

/// A point of Euclidean d-space, d in {2, 3, 4}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: &[f64]) -> Self {
        Point(coords.to_vec())
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Point(vec![x, y])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn sub(&self, other: &Point) -> Vec<f64> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn add_scaled(&self, dir: &[f64], t: f64) -> Point {
        Point(self.0.iter().zip(dir).map(|(a, d)| a + t * d).collect())
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// An open or closed ball of positive radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
    pub closed: bool,
}

impl Ball {
    pub fn open(center: Point, radius: f64) -> Self {
        Ball {
            center,
            radius,
            closed: false,
        }
    }

    pub fn closed(center: Point, radius: f64) -> Self {
        Ball {
            center,
            radius,
            closed: true,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        let d2 = self.center.dist_sq(p);
        if self.closed {
            d2 <= self.radius * self.radius
        } else {
            d2 < self.radius * self.radius
        }
    }
}

/// A finite set of points, deduplicated on construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::DegenerateInput("empty point set".into()));
        }
        let dim = points[0].dim();
        if points.iter().any(|p| p.dim() != dim) {
            return Err(Error::DegenerateInput(
                "mixed dimensions in point set".into(),
            ));
        }
        let mut dedup: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if !dedup.contains(&p) {
                dedup.push(p);
            }
        }
        Ok(PointSet { points: dedup })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                d = d.max(self.points[i].dist(&self.points[j]));
            }
        }
        d
    }
}

/// Solves the small SPD-ish system arising in circumsphere computation by
/// Gaussian elimination with partial pivoting. Returns None if the pivot
/// collapses relative to `scale`.
fn solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>, scale: f64) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let (piv, piv_val) = (col..n)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if piv_val <= DEGENERACY_EPS * scale {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = rhs[r];
        for c in r + 1..n {
            s -= m[r][c] * x[c];
        }
        x[r] = s / m[r][r];
    }
    Some(x)
}

/// Circumsphere of n+1 affinely independent points (n <= d): the unique
/// sphere through all of them with center in their affine hull.
pub fn circumsphere(points: &[Point]) -> Result<(Point, f64)> {
    if points.len() < 2 {
        return Err(Error::DegenerateInput("need at least two points".into()));
    }
    let dim = points[0].dim();
    if points.len() > dim + 1 {
        return Err(Error::DegenerateInput(format!(
            "{} points exceed dimension {} + 1",
            points.len(),
            dim
        )));
    }
    let p0 = &points[0];
    let u: Vec<Vec<f64>> = points[1..].iter().map(|p| p.sub(p0)).collect();
    let n = u.len();
    // Gram system: sum_j lambda_j <u_i,u_j> = |u_i|^2 / 2.
    let mut g = vec![vec![0.0; n]; n];
    let mut rhs = vec![0.0; n];
    let mut scale: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            g[i][j] = dot(&u[i], &u[j]);
        }
        rhs[i] = g[i][i] / 2.0;
        scale = scale.max(g[i][i]);
    }
    if scale == 0.0 {
        return Err(Error::DegenerateInput("coincident points".into()));
    }
    let lambda = solve(g, rhs, scale)
        .ok_or_else(|| Error::DegenerateInput("affinely dependent points".into()))?;
    let mut center = p0.clone();
    for (l, ui) in lambda.iter().zip(&u) {
        center = center.add_scaled(ui, *l);
    }
    let radius = center.dist(p0);
    Ok((center, radius))
}

/// Projection of `y` onto the affine locus of points equidistant to the
/// given (>= 2) points: solves the normal equations of the bisector
/// constraints. Returns None for affinely dependent configurations.
fn project_equidistant(y: &Point, pts: &[&Point]) -> Option<Point> {
    let a = pts[0];
    let rows: Vec<Vec<f64>> = pts[1..].iter().map(|b| b.sub(a)).collect();
    let k = rows.len();
    let mut gram = vec![vec![0.0; k]; k];
    let mut rhs = vec![0.0; k];
    let mut scale: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = dot(&rows[i], &rows[j]);
        }
        scale = scale.max(gram[i][i]);
        // constraint: rows[i] . c = (|b_i|^2 - |a|^2) / 2
        let b = pts[i + 1];
        let target = (dot(&b.0, &b.0) - dot(&a.0, &a.0)) / 2.0;
        rhs[i] = dot(&rows[i], &y.0) - target;
    }
    if scale == 0.0 {
        return None;
    }
    let lambda = solve(gram, rhs, scale)?;
    let mut out = y.clone();
    for (l, row) in lambda.iter().zip(&rows) {
        out = out.add_scaled(row, -*l);
    }
    Some(out)
}

/// Largest clearance achievable by a ball center confined to reach `x`:
/// max over centers c with |c - x| <= r of min_j |c - w_j|.
///
/// Some open radius-r ball contains x while avoiding every w_j exactly
/// when this value exceeds r strictly, so the value decides whether x can
/// be carved from the r-hulloid of the point set. The maximum is attained
/// either at an interior local maximum of the min-distance (a circumcenter
/// of an affinely independent subset) or on the sphere |c - x| = r at a
/// center equidistant to its nearest subset; both families are enumerated
/// in closed form.
pub fn max_clearance(x: &Point, r: f64, w: &[Point]) -> Result<f64> {
    use itertools::Itertools;
    if w.is_empty() {
        return Err(Error::DegenerateInput("empty point set".into()));
    }
    if r <= 0.0 || !r.is_finite() {
        return Err(Error::InvalidParameters("radius must be positive".into()));
    }
    let d = x.dim();
    if w.iter().any(|p| p.dim() != d) {
        return Err(Error::DegenerateInput("mixed dimensions".into()));
    }
    let clearance = |c: &Point| w.iter().map(|p| c.dist(p)).fold(f64::INFINITY, f64::min);
    let mut best = clearance(x);
    let consider = |c: Point, best: &mut f64| {
        if c.dist(x) <= r * (1.0 + 1e-12) {
            let v = clearance(&c);
            if v > *best {
                *best = v;
            }
        }
    };

    for k in 1..=d.min(w.len()) {
        for subset in (0..w.len()).combinations(k) {
            let pts: Vec<&Point> = subset.iter().map(|&i| &w[i]).collect();
            // q: point of the equidistant locus nearest x; p: nearest to w
            let (q, p) = if k == 1 {
                (x.clone(), pts[0].clone())
            } else {
                let Some(q) = project_equidistant(x, &pts) else {
                    continue;
                };
                let Some(p) = project_equidistant(pts[0], &pts) else {
                    continue;
                };
                (q, p)
            };
            let off = q.dist(x);
            if off > r {
                continue;
            }
            let rho = (r * r - off * off).max(0.0).sqrt();
            let u = q.sub(&p);
            let un = norm(&u);
            if un <= DEGENERACY_EPS * (1.0 + r) {
                continue;
            }
            let dir: Vec<f64> = u.iter().map(|v| v / un).collect();
            consider(q.add_scaled(&dir, rho), &mut best);
            consider(q.add_scaled(&dir, -rho), &mut best);
        }
    }

    // interior candidates: circumcenters of affinely independent subsets
    for k in 2..=(d + 1).min(w.len()) {
        for subset in (0..w.len()).combinations(k) {
            let pts: Vec<Point> = subset.iter().map(|&i| w[i].clone()).collect();
            if let Ok((c, _)) = circumsphere(&pts) {
                consider(c, &mut best);
            }
        }
    }
    Ok(best)
}

/// The centers of the two radius-R circles through a 2D point pair.
///
/// At |a-b| = 2R the two centers coincide at the midpoint.
pub fn pair_ball_centers(a: &Point, b: &Point, r: f64) -> Result<(Point, Point)> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::Unsupported("pair_ball_centers is 2D only".into()));
    }
    let d = a.dist(b);
    if d == 0.0 {
        return Err(Error::DegenerateInput("coincident endpoints".into()));
    }
    if d > 2.0 * r {
        return Err(Error::NoSuchBall(format!(
            "|a-b| = {d} exceeds diameter {}",
            2.0 * r
        )));
    }
    let mid = Point::xy((a.x() + b.x()) / 2.0, (a.y() + b.y()) / 2.0);
    // unit normal to b - a
    let nx = -(b.y() - a.y()) / d;
    let ny = (b.x() - a.x()) / d;
    let off = (r * r - d * d / 4.0).max(0.0).sqrt();
    Ok((
        Point::xy(mid.x() + off * nx, mid.y() + off * ny),
        Point::xy(mid.x() - off * nx, mid.y() - off * ny),
    ))
}

/// The lens h(a,b): intersection of all closed R-balls containing a and b.
/// In the plane this is the intersection of the two extreme closed disks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lens {
    pub a: Point,
    pub b: Point,
    pub radius: f64,
    pub center1: Point,
    pub center2: Point,
}

impl Lens {
    pub fn new(a: Point, b: Point, radius: f64) -> Result<Self> {
        let (center1, center2) = pair_ball_centers(&a, &b, radius)?;
        Ok(Lens {
            a,
            b,
            radius,
            center1,
            center2,
        })
    }
}

/// Membership in the lens: within both extreme closed disks.
pub fn lens_contains(lens: &Lens, p: &Point) -> bool {
    let r2 = lens.radius * lens.radius;
    lens.center1.dist_sq(p) <= r2 && lens.center2.dist_sq(p) <= r2
}

/// Triangle classification by its largest angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriangleClass {
    Acute,
    /// Right angle at the given vertex index.
    Right(usize),
    /// Obtuse angle at the given vertex index.
    Obtuse(usize),
}

/// Scale-invariant collinearity test for a 2D triple.
pub fn collinear(v: &[Point; 3]) -> bool {
    let u = v[1].sub(&v[0]);
    let w = v[2].sub(&v[0]);
    let cross = u[0] * w[1] - u[1] * w[0];
    let scale = norm(&u) * norm(&w);
    scale == 0.0 || cross.abs() <= DEGENERACY_EPS * scale
}

/// Classifies a non-collinear 2D triangle; for right/obtuse triangles the
/// returned index is the vertex of the major angle.
pub fn classify_triangle(v: &[Point; 3]) -> Result<TriangleClass> {
    if collinear(v) {
        return Err(Error::DegenerateInput("collinear triangle".into()));
    }
    // The largest angle sits opposite the longest side.
    let sides = [
        v[1].dist_sq(&v[2]),
        v[0].dist_sq(&v[2]),
        v[0].dist_sq(&v[1]),
    ];
    let apex = (0..3)
        .max_by(|&i, &j| sides[i].total_cmp(&sides[j]))
        .unwrap();
    let (p, q) = ((apex + 1) % 3, (apex + 2) % 3);
    let e1 = v[p].sub(&v[apex]);
    let e2 = v[q].sub(&v[apex]);
    let d = dot(&e1, &e2);
    let scale = norm(&e1) * norm(&e2);
    if d.abs() <= DEGENERACY_EPS * scale {
        Ok(TriangleClass::Right(apex))
    } else if d > 0.0 {
        Ok(TriangleClass::Acute)
    } else {
        Ok(TriangleClass::Obtuse(apex))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::xy(x, y)
    }

    #[test]
    fn circumsphere_equilateral() {
        let v = [p(0.0, 0.0), p(1.0, 0.0), p(0.5, 3f64.sqrt() / 2.0)];
        let (c, r) = circumsphere(&v).unwrap();
        assert!((r - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        let centroid = p(0.5, 3f64.sqrt() / 6.0);
        assert!(c.dist(&centroid) < 1e-12);
    }

    #[test]
    fn circumsphere_right_triangle() {
        let v = [p(0.0, 0.0), p(4.0, 0.0), p(0.0, 3.0)];
        let (c, r) = circumsphere(&v).unwrap();
        assert!((r - 2.5).abs() < 1e-12);
        assert!(c.dist(&p(2.0, 1.5)) < 1e-12);
    }

    #[test]
    fn circumsphere_regular_tetrahedron() {
        let s = 1.0 / 3f64.sqrt();
        let v = [
            Point::new(&[s, s, s]),
            Point::new(&[s, -s, -s]),
            Point::new(&[-s, s, -s]),
            Point::new(&[-s, -s, s]),
        ];
        let (c, r) = circumsphere(&v).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        assert!(c.norm() < 1e-12);
    }

    #[test]
    fn circumsphere_rejects_collinear() {
        let v = [p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)];
        assert!(matches!(circumsphere(&v), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn circumsphere_center_in_affine_hull() {
        // Two points in 3D: center must be the midpoint.
        let a = Point::new(&[1.0, 2.0, 3.0]);
        let b = Point::new(&[3.0, 0.0, 1.0]);
        let (c, r) = circumsphere(&[a.clone(), b.clone()]).unwrap();
        assert!(c.dist(&Point::new(&[2.0, 1.0, 2.0])) < 1e-12);
        assert!((r - a.dist(&b) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn pair_centers_symmetric_case() {
        let (c1, c2) = pair_ball_centers(&p(-1.0, 0.0), &p(1.0, 0.0), 2f64.sqrt()).unwrap();
        assert!(c1.dist(&p(0.0, 1.0)) < 1e-12);
        assert!(c2.dist(&p(0.0, -1.0)) < 1e-12);
    }

    #[test]
    fn pair_centers_diameter_case() {
        let r = 1.3;
        let (c1, c2) = pair_ball_centers(&p(0.0, 0.0), &p(2.0 * r, 0.0), r).unwrap();
        assert!(c1.dist(&c2) < 1e-9);
        assert!(c1.dist(&p(r, 0.0)) < 1e-9);
    }

    #[test]
    fn pair_centers_unit_case() {
        // Derived oracle: solve |x-a| = |x-b| = 1 for a=(0,0), b=(1,0).
        let (c1, c2) = pair_ball_centers(&p(0.0, 0.0), &p(1.0, 0.0), 1.0).unwrap();
        let expect = 3f64.sqrt() / 2.0;
        for c in [&c1, &c2] {
            assert!((c.x() - 0.5).abs() < 1e-12);
            assert!((c.y().abs() - expect).abs() < 1e-12);
            assert!((c.dist(&p(0.0, 0.0)) - 1.0).abs() < 1e-12);
            assert!((c.dist(&p(1.0, 0.0)) - 1.0).abs() < 1e-12);
        }
        assert!(c1.y() > 0.0 && c2.y() < 0.0);
    }

    #[test]
    fn pair_centers_errors() {
        assert!(matches!(
            pair_ball_centers(&p(0.0, 0.0), &p(3.0, 0.0), 1.0),
            Err(Error::NoSuchBall(_))
        ));
        assert!(matches!(
            pair_ball_centers(&p(1.0, 1.0), &p(1.0, 1.0), 1.0),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn lens_membership() {
        let lens = Lens::new(p(0.0, 0.0), p(1.0, 0.0), 1.0).unwrap();
        assert!(lens_contains(&lens, &p(0.5, 0.0)));
        assert!(!lens_contains(&lens, &p(1.5, 0.0)));
        // endpoints belong to the closed lens
        assert!(lens_contains(&lens, &p(0.0, 0.0)));
        assert!(lens_contains(&lens, &p(1.0, 0.0)));
    }

    #[test]
    fn lens_matches_sampled_ball_intersection() {
        // Independent oracle: membership in the intersection of many sampled
        // closed R-balls containing both endpoints.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let a = p(-0.4, 0.1);
        let b = p(0.5, 0.3);
        let r = 0.8;
        let lens = Lens::new(a.clone(), b.clone(), r).unwrap();
        // centers of admissible balls: within r of both a and b
        let mut centers = Vec::new();
        while centers.len() < 10_000 {
            let c = p(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            if c.dist(&a) <= r && c.dist(&b) <= r {
                centers.push(c);
            }
        }
        for _ in 0..500 {
            let q = p(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let in_all = centers.iter().all(|c| c.dist(&q) <= r);
            // The sampled intersection over-approximates the true lens, so
            // lens membership must imply sampled membership; the converse
            // holds away from the boundary.
            if lens_contains(&lens, &q) {
                assert!(in_all);
            } else if !in_all {
                assert!(!lens_contains(&lens, &q));
            }
        }
    }

    #[test]
    fn lens_monotone_under_endpoint_shrink() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let a = p(0.0, 0.0);
        let b = p(1.2, 0.0);
        let b_short = p(0.7, 0.0); // on segment(a, b)
        let r = 0.9;
        let big = Lens::new(a.clone(), b, r).unwrap();
        let small = Lens::new(a, b_short, r).unwrap();
        for _ in 0..10_000 {
            let q = p(rng.gen_range(-1.0..2.0), rng.gen_range(-1.5..1.5));
            if lens_contains(&small, &q) {
                assert!(lens_contains(&big, &q));
            }
        }
    }

    #[test]
    fn classify_345_right() {
        let v = [p(0.0, 0.0), p(4.0, 0.0), p(0.0, 3.0)];
        assert_eq!(classify_triangle(&v).unwrap(), TriangleClass::Right(0));
    }

    #[test]
    fn classify_equilateral_acute() {
        let v = [p(0.0, 0.0), p(1.0, 0.0), p(0.5, 3f64.sqrt() / 2.0)];
        assert_eq!(classify_triangle(&v).unwrap(), TriangleClass::Acute);
    }

    #[test]
    fn classify_flat_obtuse() {
        // Law of cosines: the angle at (1, 0.2) exceeds 90 degrees.
        let v = [p(0.0, 0.0), p(2.0, 0.0), p(1.0, 0.2)];
        assert_eq!(classify_triangle(&v).unwrap(), TriangleClass::Obtuse(2));
    }

    #[test]
    fn classify_rejects_collinear() {
        let v = [p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)];
        assert!(matches!(
            classify_triangle(&v),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn clearance_single_point() {
        // Best center is the antipode of w through x: clearance 3.
        let v = max_clearance(&p(0.0, 0.0), 1.0, &[p(2.0, 0.0)]).unwrap();
        assert!((v - 3.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn clearance_pair_2d() {
        // Derived oracle: dense sweep over centers on the reach disk.
        let x = p(0.1, -0.2);
        let w = [p(1.0, 0.3), p(-0.6, 0.9)];
        let r = 0.7;
        let exact = max_clearance(&x, r, &w).unwrap();
        let mut swept: f64 = 0.0;
        let n = 2000;
        for i in 0..n {
            let th = i as f64 / n as f64 * std::f64::consts::TAU;
            for rho in [r, 0.5 * r, 0.25 * r] {
                let c = p(x.x() + rho * th.cos(), x.y() + rho * th.sin());
                swept = swept.max(w.iter().map(|q| c.dist(q)).fold(f64::INFINITY, f64::min));
            }
        }
        // every evaluated candidate is feasible, so the exact value can
        // only exceed the sweep by what the sweep's granularity misses
        assert!(exact >= swept - 1e-6, "exact {exact} < swept {swept}");
        assert!(
            exact <= swept + 5e-2,
            "exact {exact} way above swept {swept}"
        );
    }

    #[test]
    fn clearance_tetrahedron_tangency() {
        // Vertices of a regular tetrahedron on the sphere of radius 2/3:
        // the best ball reaching the origin has clearance exactly 1.
        let s = 2.0 / 3.0 / 3f64.sqrt();
        let w: Vec<Point> = [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]]
            .iter()
            .map(|c| Point::new(c))
            .collect();
        let v = max_clearance(&Point::new(&[0.0, 0.0, 0.0]), 1.0, &w).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "{v}");
        // pushing the vertices radially out by eps raises the clearance
        // to sqrt(1 + eps^2 + 2 eps / 3) > 1
        let eps = 0.0125;
        let pushed: Vec<Point> = w
            .iter()
            .map(|q| Point(q.0.iter().map(|c| c * (1.0 + eps / (2.0 / 3.0))).collect()))
            .collect();
        let v2 = max_clearance(&Point::new(&[0.0, 0.0, 0.0]), 1.0, &pushed).unwrap();
        let expect = (1.0 + eps * eps + 2.0 * eps / 3.0).sqrt();
        assert!((v2 - expect).abs() < 1e-12, "{v2} vs {expect}");
    }

    #[test]
    fn pointset_dedups() {
        let s = PointSet::new(vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 0.0)]).unwrap();
        assert_eq!(s.len(), 2);
    }
}
