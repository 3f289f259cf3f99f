//! Declarative shape expressions over ball / halfspace / shell / point
//! primitives, rasterized onto occupancy grids by the grid oracle.
//!
//! JSON form is externally tagged, e.g.
//! `{"ball": {"center": [0,0], "radius": 1.0, "closed": true}}` or
//! `{"union": [ ... ]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn default_closed() -> bool {
    true
}

/// Relative slack applied to ball boundary comparisons.  Constructions
/// routinely place cell centers exactly on a sphere (tangency points);
/// without slack a few ulps of rounding in the center coordinates would
/// flip such cells between inside and outside.  Points deeper than a few
/// ulps on either side are unaffected.
const BOUNDARY_REL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeExpr {
    Ball {
        center: Vec<f64>,
        radius: f64,
        #[serde(default = "default_closed")]
        closed: bool,
    },
    /// Closed halfspace normal . x <= offset.
    Halfspace {
        normal: Vec<f64>,
        offset: f64,
    },
    /// Points at distance within thickness/2 of the sphere |x - c| = radius.
    SphereShell {
        center: Vec<f64>,
        radius: f64,
        thickness: f64,
    },
    Points {
        points: Vec<Vec<f64>>,
    },
    Union(Vec<ShapeExpr>),
    Intersection(Vec<ShapeExpr>),
    Complement(Box<ShapeExpr>),
    Difference {
        a: Box<ShapeExpr>,
        b: Box<ShapeExpr>,
    },
}

impl ShapeExpr {
    pub fn ball(center: &[f64], radius: f64, closed: bool) -> Self {
        ShapeExpr::Ball {
            center: center.to_vec(),
            radius,
            closed,
        }
    }

    pub fn points(pts: &[Vec<f64>]) -> Self {
        ShapeExpr::Points {
            points: pts.to_vec(),
        }
    }

    pub fn union(parts: Vec<ShapeExpr>) -> Self {
        ShapeExpr::Union(parts)
    }

    pub fn complement(self) -> Self {
        ShapeExpr::Complement(Box::new(self))
    }

    pub fn difference(a: ShapeExpr, b: ShapeExpr) -> Self {
        ShapeExpr::Difference {
            a: Box::new(a),
            b: Box::new(b),
        }
    }

    pub fn intersection(parts: Vec<ShapeExpr>) -> Self {
        ShapeExpr::Intersection(parts)
    }

    /// Dimension of the expression, validated across the whole tree.
    pub fn dim(&self) -> Result<usize> {
        let mut dims = Vec::new();
        self.collect_dims(&mut dims)?;
        let Some(&d) = dims.first() else {
            return Err(Error::InvalidParameters(
                "expression has no primitives".into(),
            ));
        };
        if dims.iter().any(|&x| x != d) {
            return Err(Error::InvalidParameters("mixed dimensions in shape".into()));
        }
        if !(2..=4).contains(&d) {
            return Err(Error::Unsupported(format!("dimension {d} outside 2..4")));
        }
        Ok(d)
    }

    fn collect_dims(&self, out: &mut Vec<usize>) -> Result<()> {
        match self {
            ShapeExpr::Ball { center, radius, .. } => {
                if *radius <= 0.0 || !radius.is_finite() {
                    return Err(Error::InvalidParameters(
                        "ball radius must be positive".into(),
                    ));
                }
                out.push(center.len());
            }
            ShapeExpr::Halfspace { normal, .. } => out.push(normal.len()),
            ShapeExpr::SphereShell {
                center,
                radius,
                thickness,
            } => {
                if *radius <= 0.0 || *thickness <= 0.0 {
                    return Err(Error::InvalidParameters(
                        "shell radius/thickness must be positive".into(),
                    ));
                }
                out.push(center.len());
            }
            ShapeExpr::Points { points } => {
                if points.is_empty() {
                    return Err(Error::InvalidParameters("empty points primitive".into()));
                }
                for p in points {
                    out.push(p.len());
                }
            }
            ShapeExpr::Union(parts) | ShapeExpr::Intersection(parts) => {
                for p in parts {
                    p.collect_dims(out)?;
                }
            }
            ShapeExpr::Complement(inner) => inner.collect_dims(out)?,
            ShapeExpr::Difference { a, b } => {
                a.collect_dims(out)?;
                b.collect_dims(out)?;
            }
        }
        Ok(())
    }

    /// Conservative bounding box of the occupied region, if the expression
    /// is bounded from above (halfspaces and complements are not).
    pub fn bbox(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            ShapeExpr::Ball { center, radius, .. } => Some((
                center.iter().map(|c| c - radius).collect(),
                center.iter().map(|c| c + radius).collect(),
            )),
            ShapeExpr::SphereShell {
                center,
                radius,
                thickness,
            } => {
                let r = radius + thickness / 2.0;
                Some((
                    center.iter().map(|c| c - r).collect(),
                    center.iter().map(|c| c + r).collect(),
                ))
            }
            ShapeExpr::Points { points } => {
                let d = points[0].len();
                let mut lo = vec![f64::INFINITY; d];
                let mut hi = vec![f64::NEG_INFINITY; d];
                for p in points {
                    for i in 0..d {
                        lo[i] = lo[i].min(p[i]);
                        hi[i] = hi[i].max(p[i]);
                    }
                }
                Some((lo, hi))
            }
            ShapeExpr::Halfspace { .. } | ShapeExpr::Complement(_) => None,
            ShapeExpr::Union(parts) => {
                let mut acc: Option<(Vec<f64>, Vec<f64>)> = None;
                for p in parts {
                    let b = p.bbox()?;
                    acc = Some(match acc {
                        None => b,
                        Some((mut lo, mut hi)) => {
                            for i in 0..lo.len() {
                                lo[i] = lo[i].min(b.0[i]);
                                hi[i] = hi[i].max(b.1[i]);
                            }
                            (lo, hi)
                        }
                    });
                }
                acc
            }
            ShapeExpr::Intersection(parts) => {
                // any bounded factor bounds the intersection
                let mut acc: Option<(Vec<f64>, Vec<f64>)> = None;
                for p in parts {
                    if let Some(b) = p.bbox() {
                        acc = Some(match acc {
                            None => b,
                            Some((mut lo, mut hi)) => {
                                for i in 0..lo.len() {
                                    lo[i] = lo[i].max(b.0[i]);
                                    hi[i] = hi[i].min(b.1[i]);
                                }
                                (lo, hi)
                            }
                        });
                    }
                }
                acc
            }
            ShapeExpr::Difference { a, .. } => a.bbox(),
        }
    }

    /// Pointwise evaluation at x; `cell` identifies the cell for the points
    /// primitive, which occupies exactly the cell nearest each listed point.
    pub(crate) fn eval(
        &self,
        x: &[f64],
        nearest_cell: &dyn Fn(&[f64]) -> Option<usize>,
        cell: usize,
    ) -> bool {
        match self {
            ShapeExpr::Ball {
                center,
                radius,
                closed,
            } => {
                let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                if *closed {
                    let r = radius * (1.0 + BOUNDARY_REL_TOL);
                    d2 <= r * r
                } else {
                    let r = radius * (1.0 - BOUNDARY_REL_TOL);
                    d2 < r * r
                }
            }
            ShapeExpr::Halfspace { normal, offset } => {
                x.iter().zip(normal).map(|(a, b)| a * b).sum::<f64>() <= *offset
            }
            ShapeExpr::SphereShell {
                center,
                radius,
                thickness,
            } => {
                let d: f64 = x
                    .iter()
                    .zip(center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                (d - radius).abs() <= thickness / 2.0
            }
            ShapeExpr::Points { points } => points.iter().any(|p| nearest_cell(p) == Some(cell)),
            ShapeExpr::Union(parts) => parts.iter().any(|p| p.eval(x, nearest_cell, cell)),
            ShapeExpr::Intersection(parts) => parts.iter().all(|p| p.eval(x, nearest_cell, cell)),
            ShapeExpr::Complement(inner) => !inner.eval(x, nearest_cell, cell),
            ShapeExpr::Difference { a, b } => {
                a.eval(x, nearest_cell, cell) && !b.eval(x, nearest_cell, cell)
            }
        }
    }
}
