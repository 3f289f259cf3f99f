//! Exact planar R-hulloid of point triples via Johnson circle
//! configurations, and the triple-wise characterization test for planar
//! bodies.
//!
//! For a non-collinear triple V with circumradius r(V) < R the hulloid is
//! V together with the curvilinear triangle cut out of co(V) by the three
//! radius-R disks through vertex pairs; otherwise it is V itself.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{circumsphere, collinear, norm, pair_ball_centers, Ball, Point, PointSet};
use crate::report::VerificationReport;

const TAU: f64 = std::f64::consts::TAU;

/// A ccw circular arc, angles normalized to [0, tau).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub center: Point,
    pub radius: f64,
    pub start_angle: f64,
    pub end_angle: f64,
}

impl Arc {
    /// Angular width of the ccw sweep from start to end.
    pub fn span(&self) -> f64 {
        (self.end_angle - self.start_angle).rem_euclid(TAU)
    }

    pub fn point_at(&self, angle: f64) -> Point {
        Point::xy(
            self.center.x() + self.radius * angle.cos(),
            self.center.y() + self.radius * angle.sin(),
        )
    }

    pub fn midpoint(&self) -> Point {
        self.point_at(self.start_angle + self.span() / 2.0)
    }
}

/// The full part of a planar triple hulloid: the region of the triangle
/// outside the three radius-R disks through vertex pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvilinearTriangle {
    /// Corner points where the boundary arcs meet pairwise.
    pub vertices: [Point; 3],
    pub arcs: [Arc; 3],
    pub ball_centers: [Point; 3],
    pub radius: f64,
}

/// Exact planar R-hulloid of three points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleHulloid {
    pub vertices: [Point; 3],
    pub radius: f64,
    pub circumradius: Option<f64>,
    /// Present exactly when the hulloid is full (r(V) < R, non-collinear).
    pub triangle: Option<CurvilinearTriangle>,
}

impl TripleHulloid {
    pub fn is_full(&self) -> bool {
        self.triangle.is_some()
    }
}

fn angle_of(p: &Point, center: &Point) -> f64 {
    (p.y() - center.y())
        .atan2(p.x() - center.x())
        .rem_euclid(TAU)
}

/// Both intersection points of two circles of equal radius r; None when the
/// centers are farther than 2r apart.
fn circle_intersections(c1: &Point, c2: &Point, r: f64) -> Option<(Point, Point)> {
    let d = c1.dist(c2);
    if d == 0.0 || d > 2.0 * r {
        return None;
    }
    let mid = Point::xy((c1.x() + c2.x()) / 2.0, (c1.y() + c2.y()) / 2.0);
    let off = (r * r - d * d / 4.0).max(0.0).sqrt();
    let nx = -(c2.y() - c1.y()) / d;
    let ny = (c2.x() - c1.x()) / d;
    Some((
        Point::xy(mid.x() + off * nx, mid.y() + off * ny),
        Point::xy(mid.x() - off * nx, mid.y() - off * ny),
    ))
}

/// Signed distance of p to the interior of the triangle: the minimum over
/// edges of the inward signed distance (positive inside).
fn triangle_margin(v: &[Point; 3], p: &Point) -> f64 {
    // orient ccw
    let u = v[1].sub(&v[0]);
    let w = v[2].sub(&v[0]);
    let area2 = u[0] * w[1] - u[1] * w[0];
    let sign = if area2 >= 0.0 { 1.0 } else { -1.0 };
    let mut m = f64::INFINITY;
    for i in 0..3 {
        let a = &v[i];
        let b = &v[(i + 1) % 3];
        let e = b.sub(a);
        let q = p.sub(a);
        let cross = e[0] * q[1] - e[1] * q[0];
        m = m.min(sign * cross / norm(&e));
    }
    m
}

/// Orthocenter of a triangle (vector identity with the circumcenter).
pub fn orthocenter(v: &[Point; 3]) -> Result<Point> {
    let (c, _) = circumsphere(v)?;
    Ok(Point::xy(
        v[0].x() + v[1].x() + v[2].x() - 2.0 * c.x(),
        v[0].y() + v[1].y() + v[2].y() - 2.0 * c.y(),
    ))
}

/// The three radius-rho balls, ball i through the two vertices other than
/// v[i] and excluding v[i]. Requires rho >= r(V).
pub fn johnson_circles(v: &[Point; 3], rho: f64) -> Result<[Ball; 3]> {
    if collinear(v) {
        return Err(Error::DegenerateInput("collinear vertices".into()));
    }
    let (_, r) = circumsphere(v)?;
    if rho < r * (1.0 - 1e-12) {
        return Err(Error::NoSuchBall(format!(
            "rho = {rho} below circumradius {r}"
        )));
    }
    let mut balls = Vec::with_capacity(3);
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let (c1, c2) = pair_ball_centers(&v[j], &v[k], rho)?;
        // the admissible center is the one on the far side from v[i]
        let c = if c1.dist_sq(&v[i]) >= c2.dist_sq(&v[i]) {
            c1
        } else {
            c2
        };
        balls.push(Ball::open(c, rho));
    }
    Ok([balls[0].clone(), balls[1].clone(), balls[2].clone()])
}

/// Exact planar R-hulloid of a point triple.
///
/// Collinear triples and triples with circumradius >= R are discrete
/// (subsets of a line or of a large enough circle); otherwise the hulloid
/// is full and carries the curvilinear triangle.
pub fn triple_hulloid(v: &[Point; 3], r_ball: f64) -> Result<TripleHulloid> {
    if r_ball <= 0.0 {
        return Err(Error::InvalidParameters("radius must be positive".into()));
    }
    for i in 0..3 {
        for j in i + 1..3 {
            if v[i] == v[j] {
                return Err(Error::DegenerateInput("duplicate points".into()));
            }
        }
    }
    if collinear(v) {
        return Ok(TripleHulloid {
            vertices: v.clone(),
            radius: r_ball,
            circumradius: None,
            triangle: None,
        });
    }
    let (_, r) = circumsphere(v)?;
    if r >= r_ball {
        return Ok(TripleHulloid {
            vertices: v.clone(),
            radius: r_ball,
            circumradius: Some(r),
            triangle: None,
        });
    }
    let balls = johnson_circles(v, r_ball)?;
    let centers = [
        balls[0].center.clone(),
        balls[1].center.clone(),
        balls[2].center.clone(),
    ];
    let diam = v[0].dist(&v[1]).max(v[1].dist(&v[2])).max(v[0].dist(&v[2]));
    let in_tol = 1e-9 * diam;

    // Corner of the region for each pair of circles (i, j): the circles
    // share the opposite vertex v[k]; the corner is their second
    // intersection when it lies in the triangle, else v[k] itself.
    let mut corners: Vec<Point> = vec![Point::xy(0.0, 0.0); 3];
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        let corner = match circle_intersections(&centers[i], &centers[j], r_ball) {
            Some((p1, p2)) => {
                let w = if p1.dist_sq(&v[k]) >= p2.dist_sq(&v[k]) {
                    p1
                } else {
                    p2
                };
                if w.dist(&v[k]) <= in_tol {
                    v[k].clone() // tangency: right angle at v[k]
                } else if triangle_margin(v, &w) >= -in_tol {
                    w
                } else {
                    v[k].clone()
                }
            }
            None => v[k].clone(),
        };
        corners[k] = corner;
    }

    let mut arcs = Vec::with_capacity(3);
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        // arc on circle i runs between the corners for pairs (i,k) and (i,j)
        let a1 = angle_of(&corners[j], &centers[i]);
        let a2 = angle_of(&corners[k], &centers[i]);
        let score = |arc: &Arc| {
            let m = arc.midpoint();
            let mut s = triangle_margin(v, &m);
            for l in 0..3 {
                if l != i {
                    s = s.min(m.dist(&centers[l]) - r_ball);
                }
            }
            s
        };
        let cand1 = Arc {
            center: centers[i].clone(),
            radius: r_ball,
            start_angle: a1,
            end_angle: a2,
        };
        let cand2 = Arc {
            center: centers[i].clone(),
            radius: r_ball,
            start_angle: a2,
            end_angle: a1,
        };
        arcs.push(if score(&cand1) >= score(&cand2) {
            cand1
        } else {
            cand2
        });
    }

    Ok(TripleHulloid {
        vertices: v.clone(),
        radius: r_ball,
        circumradius: Some(r),
        triangle: Some(CurvilinearTriangle {
            vertices: [corners[0].clone(), corners[1].clone(), corners[2].clone()],
            arcs: [arcs[0].clone(), arcs[1].clone(), arcs[2].clone()],
            ball_centers: centers,
            radius: r_ball,
        }),
    })
}

/// Membership in the hulloid: within tol of a vertex, or (full case) inside
/// the triangle and outside every generating open disk, all up to tol.
pub fn hulloid_contains(h: &TripleHulloid, p: &Point, tol: f64) -> bool {
    if h.vertices.iter().any(|v| v.dist(p) <= tol) {
        return true;
    }
    let Some(tri) = &h.triangle else {
        return false;
    };
    if triangle_margin(&h.vertices, p) < -tol {
        return false;
    }
    tri.ball_centers.iter().all(|c| c.dist(p) >= h.radius - tol)
}

/// Deterministic triangular-lattice sample of the hulloid: the vertices, the
/// region corners, and every lattice point of the full region.
pub fn sample_hulloid(h: &TripleHulloid, spacing: f64) -> Vec<Point> {
    let mut out: Vec<Point> = h.vertices.to_vec();
    let Some(tri) = &h.triangle else {
        return out;
    };
    for c in &tri.vertices {
        if hulloid_contains(h, c, 1e-12) && !out.contains(c) {
            out.push(c.clone());
        }
    }
    let xs: Vec<f64> = h.vertices.iter().map(|p| p.x()).collect();
    let ys: Vec<f64> = h.vertices.iter().map(|p| p.y()).collect();
    let (x0, x1) = (
        xs.iter().cloned().fold(f64::INFINITY, f64::min),
        xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let (y0, y1) = (
        ys.iter().cloned().fold(f64::INFINITY, f64::min),
        ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    let dy = spacing * 3f64.sqrt() / 2.0;
    let ny = ((y1 - y0) / dy).ceil() as i64 + 1;
    let nx = ((x1 - x0) / spacing).ceil() as i64 + 1;
    for row in 0..=ny {
        let y = y0 + row as f64 * dy;
        let off = if row % 2 == 0 { 0.0 } else { spacing / 2.0 };
        for col in 0..=nx {
            let p = Point::xy(x0 + off + col as f64 * spacing, y);
            if hulloid_contains(h, &p, 0.0) {
                out.push(p);
            }
        }
    }
    out
}

/// Result of the triple-wise planar characterization test.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QrViolation {
    pub triple: [usize; 3],
    pub witness: Point,
    pub distance: f64,
}

/// Checks that every point triple of A has its R-hulloid inside A, up to
/// tol, sampling each full region on a triangular lattice of spacing tol/2.
///
/// Parallel over triples; the reported violation is the first in
/// lexicographic triple order.
pub fn qr_check(
    a: &PointSet,
    r_ball: f64,
    tol: f64,
) -> Result<(VerificationReport, Option<QrViolation>)> {
    if a.dim() != 2 {
        return Err(Error::Unsupported("qr_check is 2D only".into()));
    }
    if tol <= 0.0 {
        return Err(Error::InvalidParameters("tol must be positive".into()));
    }
    let pts = a.points();
    let triples: Vec<[usize; 3]> = (0..pts.len())
        .combinations(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect();
    let violations: Vec<Option<QrViolation>> = triples
        .par_iter()
        .map(|idx| {
            let v = [
                pts[idx[0]].clone(),
                pts[idx[1]].clone(),
                pts[idx[2]].clone(),
            ];
            let h = triple_hulloid(&v, r_ball).ok()?;
            if !h.is_full() {
                return None; // discrete hulloid: the vertices are in A
            }
            // report the worst sample of the region, not the first one
            // past tolerance, so the witness lands at the deepest gap
            let mut worst: Option<(f64, Point)> = None;
            for s in sample_hulloid(&h, tol / 2.0) {
                let d = pts.iter().map(|p| p.dist(&s)).fold(f64::INFINITY, f64::min);
                if worst.as_ref().map_or(true, |w| d > w.0) {
                    worst = Some((d, s));
                }
            }
            match worst {
                Some((d, s)) if d > tol => Some(QrViolation {
                    triple: *idx,
                    witness: s,
                    distance: d,
                }),
                _ => None,
            }
        })
        .collect();
    let first = violations.into_iter().flatten().next();
    let mut report = VerificationReport::new();
    match &first {
        Some(v) => {
            report.check_le(
                "qr_property",
                "every point triple of A has its R-hulloid inside A",
                v.distance,
                tol,
            );
            report.note_last(format!(
                "violating triple {:?}, witness ({:.6}, {:.6})",
                v.triple,
                v.witness.x(),
                v.witness.y()
            ));
        }
        None => report.check_le(
            "qr_property",
            "every point triple of A has its R-hulloid inside A",
            0.0,
            tol,
        ),
    }
    Ok((report, first))
}
