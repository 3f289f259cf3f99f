//! Deterministic SVG 1.1 rendering of planar scenes: points, circles,
//! hulloid arcs, filled regions, and 2D occupancy grids (drawn as their
//! boundary cells). The world-to-viewport transform is recorded in the
//! document metadata so figures can be measured after the fact.

use std::fmt::Write as _;

use rbody::error::{Error, Result};
use rbody::geom::Point;
use rbody::grid::{boundary_of, Grid};
use rbody::hulloid2d::Arc;

const VIEW: f64 = 800.0;
const MARGIN: f64 = 40.0;

/// A 2D scene assembled by the subcommands; element order is the draw
/// order, which keeps output byte-stable for identical input.
#[derive(Default)]
pub struct Scene {
    pub points: Vec<Point>,
    /// Stroked circles (center, radius).
    pub circles: Vec<(Point, f64)>,
    pub arcs: Vec<Arc>,
    /// Filled polygons in world coordinates.
    pub regions: Vec<Vec<Point>>,
    /// Occupancy grids with a fill color; only boundary cells are drawn.
    pub grids: Vec<(Grid, String)>,
}

impl Scene {
    fn bbox(&self) -> Option<(f64, f64, f64, f64)> {
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut grow = |x: f64, y: f64| {
            lo.0 = lo.0.min(x);
            lo.1 = lo.1.min(y);
            hi.0 = hi.0.max(x);
            hi.1 = hi.1.max(y);
        };
        for p in &self.points {
            grow(p.x(), p.y());
        }
        for (c, r) in &self.circles {
            grow(c.x() - r, c.y() - r);
            grow(c.x() + r, c.y() + r);
        }
        for a in &self.arcs {
            grow(a.center.x() - a.radius, a.center.y() - a.radius);
            grow(a.center.x() + a.radius, a.center.y() + a.radius);
        }
        for poly in &self.regions {
            for p in poly {
                grow(p.x(), p.y());
            }
        }
        for (g, _) in &self.grids {
            let o = g.origin();
            let h = g.spacing();
            grow(o[0] - h / 2.0, o[1] - h / 2.0);
            grow(
                o[0] + (g.extents()[0] as f64 - 0.5) * h,
                o[1] + (g.extents()[1] as f64 - 0.5) * h,
            );
        }
        if lo.0.is_finite() {
            Some((lo.0, lo.1, hi.0, hi.1))
        } else {
            None
        }
    }
}

fn fmt(v: f64) -> String {
    // fixed precision keeps the output stable across platforms
    format!("{v:.4}")
}

/// Renders the scene to an SVG 1.1 document string. Grids must be 2D.
pub fn render_svg(scene: &Scene) -> Result<String> {
    for (g, _) in &scene.grids {
        if g.dim() != 2 {
            return Err(Error::Unsupported(format!(
                "svg rendering needs a 2D grid, got dimension {}",
                g.dim()
            )));
        }
    }
    for p in &scene.points {
        if p.dim() != 2 {
            return Err(Error::Unsupported("svg rendering needs 2D points".into()));
        }
    }

    // world-to-viewport: uniform scale, y flipped
    let (x0, y0, x1, y1) = scene.bbox().unwrap_or((-1.0, -1.0, 1.0, 1.0));
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let scale = (VIEW - 2.0 * MARGIN) / span;
    let cx = (x0 + x1) / 2.0;
    let cy = (y0 + y1) / 2.0;
    let tx = |x: f64| (x - cx) * scale + VIEW / 2.0;
    let ty = |y: f64| VIEW / 2.0 - (y - cy) * scale;

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{VIEW}" height="{VIEW}" viewBox="0 0 {VIEW} {VIEW}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<metadata>world-to-viewport: px = (x - {}) * {} + {}; py = {} - (y - {}) * {}</metadata>"#,
        fmt(cx),
        fmt(scale),
        fmt(VIEW / 2.0),
        fmt(VIEW / 2.0),
        fmt(cy),
        fmt(scale)
    )
    .unwrap();
    // axes frame
    writeln!(
        out,
        r##"<rect x="{m}" y="{m}" width="{w}" height="{w}" fill="none" stroke="#888" stroke-width="1"/>"##,
        m = fmt(MARGIN),
        w = fmt(VIEW - 2.0 * MARGIN)
    )
    .unwrap();

    for (g, color) in &scene.grids {
        let rim = boundary_of(g);
        let h = g.spacing() * scale;
        let mut d = String::new();
        for lin in 0..rim.len() {
            if rim.get(lin) {
                let c = rim.cell_center(lin);
                write!(
                    d,
                    "M{} {}h{}v{}h-{}z",
                    fmt(tx(c[0]) - h / 2.0),
                    fmt(ty(c[1]) - h / 2.0),
                    fmt(h),
                    fmt(h),
                    fmt(h)
                )
                .unwrap();
            }
        }
        writeln!(out, r#"<path d="{d}" fill="{color}" stroke="none"/>"#).unwrap();
    }
    for poly in &scene.regions {
        if poly.is_empty() {
            continue;
        }
        let mut d = String::new();
        for (i, p) in poly.iter().enumerate() {
            write!(
                d,
                "{}{} {}",
                if i == 0 { "M" } else { "L" },
                fmt(tx(p.x())),
                fmt(ty(p.y()))
            )
            .unwrap();
        }
        d.push('z');
        writeln!(out, r##"<path d="{d}" fill="#cce5ff" stroke="none"/>"##).unwrap();
    }
    for (c, r) in &scene.circles {
        writeln!(
            out,
            r##"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="#999" stroke-width="1" stroke-dasharray="4 3"/>"##,
            fmt(tx(c.x())),
            fmt(ty(c.y())),
            fmt(r * scale)
        )
        .unwrap();
    }
    for a in &scene.arcs {
        // ccw in world coordinates renders cw in the flipped viewport
        let s = a.point_at(a.start_angle);
        let e = a.point_at(a.end_angle);
        let large = if a.span() > std::f64::consts::PI {
            1
        } else {
            0
        };
        writeln!(
            out,
            r##"<path d="M{} {}A{} {} 0 {} 0 {} {}" fill="none" stroke="#003366" stroke-width="2"/>"##,
            fmt(tx(s.x())),
            fmt(ty(s.y())),
            fmt(a.radius * scale),
            fmt(a.radius * scale),
            large,
            fmt(tx(e.x())),
            fmt(ty(e.y()))
        )
        .unwrap();
    }
    for p in &scene.points {
        writeln!(
            out,
            r##"<circle cx="{}" cy="{}" r="4" fill="#cc0000" stroke="none"/>"##,
            fmt(tx(p.x())),
            fmt(ty(p.y()))
        )
        .unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_scene_is_frame_only() {
        let svg = render_svg(&Scene::default()).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains("<svg "));
        assert!(svg.contains("<rect "));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn deterministic_output() {
        let mut scene = Scene::default();
        scene.points.push(Point::xy(0.3, -0.2));
        scene.circles.push((Point::xy(0.0, 0.0), 1.0));
        let a = render_svg(&scene).unwrap();
        let b = render_svg(&scene).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_planar_grid_rejected() {
        let g = Grid::new(vec![0.0; 3], 0.1, vec![4, 4, 4]).unwrap();
        let mut scene = Scene::default();
        scene.grids.push((g, "#000".into()));
        assert!(matches!(render_svg(&scene), Err(Error::Unsupported(_))));
    }
}
