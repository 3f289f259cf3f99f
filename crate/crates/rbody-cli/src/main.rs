//! `rbody` — compute R-hulloids from user shapes, render planar figures
//! as SVG, run the named certification suites, and emit versioned JSON
//! reports.
//!
//! Exit codes: 0 when every requested check passes, 2 when a check
//! fails, 1 on usage or input errors.

mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::json;

use rbody::error::Error;
use rbody::examples::{build_example, certify_example, CertifyOptions, ExampleSpec};
use rbody::grid::{
    components, distance_field, hausdorff, hulloid_grid, rasterize, Grid, HulloidResult, Window,
};
use rbody::gridio::{read_grid, write_grid};
use rbody::hulloid2d::triple_hulloid;
use rbody::{Point, ShapeExpr, TripleHulloid, VerificationReport};

use svg::{render_svg, Scene};

#[derive(Parser)]
#[command(
    name = "rbody",
    version,
    about = "R-hulloids of bodies: exact planar engine, grid oracle, certification suites"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact planar R-hulloid of a three-point set
    Hulloid2d {
        /// Points file: {"dim":2,"points":[[x,y],...]}
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        radius: f64,
        /// Write the figure (vertices, arcs, generating circles) as SVG
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the JSON description of the hulloid
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Grid R-hulloid of a declarative shape
    Gridhulloid {
        /// Shape file: a JSON shape expression tree
        #[arg(long)]
        shape: PathBuf,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        spacing: f64,
        /// Window corner overrides (comma-separated coordinates); the
        /// default inflates the shape bounding box by 2R + 4h
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lo: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        hi: Option<Vec<f64>>,
        /// Write the hulloid occupancy grid as a binary dump
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Hausdorff distance between two binary grid dumps
    Hausdorff {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run a named certification suite and report each check
    Verify {
        /// One of: simplex, disc2d, disc2d_simply_connected, disc_nd,
        /// nonclosure, k2gap
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Dimension (simplex and k2gap suites)
        #[arg(long)]
        dim: Option<usize>,
        /// Sequence index (nonclosure suite)
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long)]
        spacing: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Render a named example or a three-point hulloid as SVG
    Render {
        /// Example name as in `verify --suite`
        #[arg(long, conflicts_with = "points")]
        example: Option<String>,
        /// Points file for a triple hulloid figure
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Grid spacing override for example scenes
        #[arg(long)]
        spacing: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Time the distance transform and the grid hulloid
    Bench {
        /// Side length of the square benchmark grid
        #[arg(long, default_value_t = 1000)]
        size: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Deserialize)]
struct PointsFile {
    dim: usize,
    points: Vec<Vec<f64>>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = init_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::WindowTooSmall(_) => {
                    eprintln!(
                        "hint: enlarge the window (--lo/--hi) to at least 2R + 4h beyond the body"
                    )
                }
                Error::ResourceLimit(_) => {
                    eprintln!("hint: coarsen --spacing or shrink the window to stay within the cell budget")
                }
                _ => {}
            }
            ExitCode::from(1)
        }
    }
}

/// Applies RBODY_THREADS (integer >= 1) to the global worker pool.
fn init_threads() -> Result<(), String> {
    let Ok(val) = std::env::var("RBODY_THREADS") else {
        return Ok(());
    };
    let n: usize = val
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| format!("RBODY_THREADS must be an integer >= 1, got '{val}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.cmd {
        Cmd::Hulloid2d {
            points,
            radius,
            out,
            report,
        } => {
            let pts = load_points(&points, Some(2))?;
            let v: [Point; 3] = pts
                .try_into()
                .map_err(|_| Error::InvalidParameters("hulloid2d needs exactly 3 points".into()))?;
            let h = triple_hulloid(&v, radius)?;
            let doc = json!({
                "report_version": 1,
                "command": "hulloid2d",
                "radius": radius,
                "full": h.is_full(),
                "circumradius": h.circumradius,
                "hulloid": h,
            });
            emit(&doc, report.as_deref())?;
            if let Some(path) = out {
                write_atomic(&path, render_svg(&triple_scene(&h))?.as_bytes())?;
            }
            Ok(true)
        }
        Cmd::Gridhulloid {
            shape,
            radius,
            spacing,
            lo,
            hi,
            out,
            report,
        } => {
            let expr: ShapeExpr = parse_json(&shape)?;
            let dim = expr.dim()?;
            let window = match (lo, hi) {
                (Some(lo), Some(hi)) => Window::new(lo, hi)?,
                (None, None) => {
                    let (lo, hi) = expr.bbox().ok_or_else(|| {
                        Error::InvalidParameters(
                            "shape is unbounded; pass an explicit window via --lo/--hi".into(),
                        )
                    })?;
                    let m = 2.0 * radius + 4.0 * spacing;
                    Window::new(
                        lo.iter().map(|v| v - m).collect(),
                        hi.iter().map(|v| v + m).collect(),
                    )?
                }
                _ => {
                    return Err(Error::InvalidParameters(
                        "--lo and --hi must be given together".into(),
                    ))
                }
            };
            let e = rasterize(&expr, &window, spacing)?;
            let result = hulloid_grid(&e, radius)?;
            let doc = match &result {
                HulloidResult::WholeSpace => json!({
                    "report_version": 1,
                    "command": "gridhulloid",
                    "radius": radius,
                    "spacing": spacing,
                    "dim": dim,
                    "verdict": "whole_space",
                }),
                HulloidResult::Body(co) => json!({
                    "report_version": 1,
                    "command": "gridhulloid",
                    "radius": radius,
                    "spacing": spacing,
                    "dim": dim,
                    "verdict": "body",
                    "cells": co.count_occupied(),
                    "components": components(co).0,
                    "diameter": co.diameter(),
                }),
            };
            emit(&doc, report.as_deref())?;
            if let Some(path) = out {
                let co = result.body()?;
                let mut buf = Vec::new();
                write_grid(&mut buf, &co)?;
                write_atomic(&path, &buf)?;
            }
            Ok(true)
        }
        Cmd::Hausdorff { a, b, report } => {
            let ga = read_grid(&mut fs::File::open(&a)?)?;
            let gb = read_grid(&mut fs::File::open(&b)?)?;
            let d = hausdorff(&ga, &gb)?;
            let doc = json!({
                "report_version": 1,
                "command": "hausdorff",
                "a": a.display().to_string(),
                "b": b.display().to_string(),
                "distance": d,
            });
            emit(&doc, report.as_deref())?;
            Ok(true)
        }
        Cmd::Verify {
            suite,
            radius,
            dim,
            n,
            spacing,
            samples,
            seed,
            report,
        } => {
            let spec = suite_spec(&suite, radius, dim, n)?;
            let opts = CertifyOptions {
                spacing,
                samples,
                seed,
            };
            let rep = certify_example(&spec, &opts)?;
            let doc = report_doc("verify", &suite, radius, seed, &rep);
            emit(&doc, report.as_deref())?;
            Ok(rep.passed())
        }
        Cmd::Render {
            example,
            points,
            radius,
            spacing,
            out,
        } => {
            let scene = if let Some(name) = example {
                example_scene(&name, radius, spacing)?
            } else if let Some(path) = points {
                let pts = load_points(&path, Some(2))?;
                let v: [Point; 3] = pts.try_into().map_err(|_| {
                    Error::InvalidParameters("render --points needs exactly 3 points".into())
                })?;
                triple_scene(&triple_hulloid(&v, radius)?)
            } else {
                return Err(Error::InvalidParameters(
                    "render needs --example or --points".into(),
                ));
            };
            write_atomic(&out, render_svg(&scene)?.as_bytes())?;
            Ok(true)
        }
        Cmd::Bench { size, report } => {
            let doc = bench(size)?;
            emit(&doc, report.as_deref())?;
            Ok(true)
        }
    }
}

/// Resolves a suite name (with the `simplex` convenience alias) to a
/// parameterized example spec.
fn suite_spec(suite: &str, radius: f64, dim: Option<usize>, n: u32) -> Result<ExampleSpec, Error> {
    Ok(match suite {
        "simplex" | "simplex_hulloid" => {
            let d = dim.unwrap_or(3);
            if d < 2 {
                return Err(Error::InvalidParameters("simplex needs --dim >= 2".into()));
            }
            // critical radius R = d R0 / 2
            ExampleSpec::SimplexHulloid {
                d,
                r0: 2.0 * radius / d as f64,
            }
        }
        "nonclosure" => ExampleSpec::Nonclosure {
            n,
            eps0: 0.05 * radius,
            r: radius,
        },
        "k2gap" => ExampleSpec::K2Gap {
            dim: dim.unwrap_or(2),
            r: radius,
            outer: 2.0 * radius,
            r1: 0.5 * radius,
        },
        other => ExampleSpec::by_name(other, radius)?,
    })
}

fn report_doc(
    command: &str,
    suite: &str,
    radius: f64,
    seed: u64,
    rep: &VerificationReport,
) -> serde_json::Value {
    json!({
        "report_version": 1,
        "command": command,
        "suite": suite,
        "radius": radius,
        "seed": seed,
        "passed": rep.passed(),
        "checks": rep.checks,
    })
}

fn triple_scene(h: &TripleHulloid) -> Scene {
    let mut scene = Scene::default();
    scene.points.extend(h.vertices.iter().cloned());
    if let Some(t) = &h.triangle {
        for c in &t.ball_centers {
            scene.circles.push((c.clone(), t.radius));
        }
        let mut poly = Vec::new();
        for a in &t.arcs {
            let steps = 64;
            for i in 0..=steps {
                let ang = a.start_angle + a.span() * i as f64 / steps as f64;
                poly.push(a.point_at(ang));
            }
        }
        scene.regions.push(poly);
        scene.arcs.extend(t.arcs.iter().cloned());
    }
    scene
}

fn example_scene(name: &str, radius: f64, spacing: Option<f64>) -> Result<Scene, Error> {
    let spec = ExampleSpec::by_name(name, radius)?;
    let built = build_example(&spec)?;
    if built.dim != 2 {
        return Err(Error::Unsupported(format!(
            "svg rendering needs a 2D example, '{name}' has dimension {}",
            built.dim
        )));
    }
    let h = spacing.unwrap_or(built.spacing);
    let e = rasterize(&built.shape, &built.window, h)?;
    let mut scene = Scene::default();
    if let HulloidResult::Body(co) = hulloid_grid(&e, built.radius)? {
        scene.grids.push((co, "#7fb2e5".into()));
    }
    scene.grids.push((e, "#555555".into()));
    Ok(scene)
}

fn bench(size: usize) -> Result<serde_json::Value, Error> {
    // deterministic sparse occupancy via a xorshift generator
    let mut g = Grid::new(vec![0.0, 0.0], 1.0, vec![size, size])?;
    let mut state: u64 = 0x9e3779b97f4a7c15;
    for _ in 0..size {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        g.set((state % (size * size) as u64) as usize, true);
    }
    let t0 = Instant::now();
    let df = distance_field(&g);
    let edt_seconds = t0.elapsed().as_secs_f64();
    // keep the field alive so the measurement cannot be optimized away
    let probe = df.lattice_sq(0);

    let disk = ShapeExpr::ball(&[0.0, 0.0], 1.0, true);
    let window = Window::new(vec![-3.1; 2], vec![3.1; 2])?;
    let e = rasterize(&ShapeExpr::complement(disk), &window, 0.01)?;
    let t1 = Instant::now();
    let _ = hulloid_grid(&e, 1.0)?;
    let hulloid_seconds = t1.elapsed().as_secs_f64();

    Ok(json!({
        "report_version": 1,
        "command": "bench",
        "edt": { "cells": size * size, "seconds": edt_seconds, "probe": probe },
        "gridhulloid": { "cells": e.len(), "seconds": hulloid_seconds },
    }))
}

fn load_points(path: &Path, expect_dim: Option<usize>) -> Result<Vec<Point>, Error> {
    let file: PointsFile = parse_json(path)?;
    if let Some(d) = expect_dim {
        if file.dim != d {
            return Err(Error::InvalidParameters(format!(
                "expected dimension {d}, points file has {}",
                file.dim
            )));
        }
    }
    if file.points.iter().any(|p| p.len() != file.dim) {
        return Err(Error::InvalidParameters(
            "point coordinate count does not match dim".into(),
        ));
    }
    Ok(file.points.into_iter().map(Point).collect())
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// Prints the document to stdout and optionally writes it to a file;
/// files are written atomically (temp file + rename).
fn emit(doc: &serde_json::Value, path: Option<&Path>) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(doc).map_err(|e| Error::Format(e.to_string()))?;
    println!("{text}");
    if let Some(path) = path {
        write_atomic(path, text.as_bytes())?;
    }
    Ok(())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}
