//! End-to-end tests of the `rbody` binary: exit-code contract, report
//! schema, binary grid round trips, and SVG determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rbody(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rbody"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("failed to spawn rbody")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is not valid JSON")
}

fn write_triangle(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("pts.json");
    fs::write(
        &path,
        r#"{"dim":2,"points":[[0.0,0.0],[1.2,0.0],[0.5,1.0]]}"#,
    )
    .unwrap();
    path
}

#[test]
fn help_and_version_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&rbody(&["--help"], dir.path())), 0);
    assert_eq!(code(&rbody(&["--version"], dir.path())), 0);
    assert_eq!(code(&rbody(&["hulloid2d", "--help"], dir.path())), 0);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // unknown flag
    assert_eq!(code(&rbody(&["hulloid2d", "--bogus"], dir.path())), 1);
    // missing input file
    assert_eq!(
        code(&rbody(
            &["hulloid2d", "--points", "absent.json", "--radius", "1.0"],
            dir.path()
        )),
        1
    );
    // malformed points file
    fs::write(dir.path().join("bad.json"), "{\"dim\":2}").unwrap();
    assert_eq!(
        code(&rbody(
            &["hulloid2d", "--points", "bad.json", "--radius", "1.0"],
            dir.path()
        )),
        1
    );
    // wrong point count
    fs::write(
        dir.path().join("two.json"),
        r#"{"dim":2,"points":[[0.0,0.0],[1.0,0.0]]}"#,
    )
    .unwrap();
    assert_eq!(
        code(&rbody(
            &["hulloid2d", "--points", "two.json", "--radius", "1.0"],
            dir.path()
        )),
        1
    );
}

#[test]
fn hulloid2d_reports_and_renders() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write_triangle(dir.path());
    let out = rbody(
        &[
            "hulloid2d",
            "--points",
            pts.to_str().unwrap(),
            "--radius",
            "1.5",
            "--out",
            "fig.svg",
            "--report",
            "rep.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["report_version"], 1);
    assert_eq!(doc["command"], "hulloid2d");
    assert_eq!(doc["full"], true);
    // the report file carries the same document
    let saved: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("rep.json")).unwrap()).unwrap();
    assert_eq!(saved, doc);
    // no stray temp file survives the atomic write
    assert!(!dir.path().join("rep.json.tmp").exists());
    let svg = fs::read_to_string(dir.path().join("fig.svg")).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("world-to-viewport"));
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write_triangle(dir.path());
    for name in ["a.svg", "b.svg"] {
        let out = rbody(
            &[
                "render",
                "--points",
                pts.to_str().unwrap(),
                "--radius",
                "1.5",
                "--out",
                name,
            ],
            dir.path(),
        );
        assert_eq!(code(&out), 0);
    }
    let a = fs::read(dir.path().join("a.svg")).unwrap();
    let b = fs::read(dir.path().join("b.svg")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn gridhulloid_roundtrips_through_hausdorff() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("shape.json"),
        r#"{"complement":{"ball":{"center":[0.0,0.0],"radius":1.0,"closed":true}}}"#,
    )
    .unwrap();
    let out = rbody(
        &[
            "gridhulloid",
            "--shape",
            "shape.json",
            "--radius",
            "1.0",
            "--spacing",
            "0.05",
            "--lo=-3.2,-3.2",
            "--hi=3.2,3.2",
            "--out",
            "co.rbgr",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let doc = stdout_json(&out);
    assert_eq!(doc["report_version"], 1);
    assert_eq!(doc["verdict"], "body");
    assert!(doc["cells"].as_u64().unwrap() > 0);

    // identical dumps are at Hausdorff distance zero
    let out = rbody(
        &["hausdorff", "--a", "co.rbgr", "--b", "co.rbgr"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["distance"], 0.0);

    // a rerun produces a byte-identical dump
    let first = fs::read(dir.path().join("co.rbgr")).unwrap();
    let out = rbody(
        &[
            "gridhulloid",
            "--shape",
            "shape.json",
            "--radius",
            "1.0",
            "--spacing",
            "0.05",
            "--lo=-3.2,-3.2",
            "--hi=3.2,3.2",
            "--out",
            "co2.rbgr",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    assert_eq!(first, fs::read(dir.path().join("co2.rbgr")).unwrap());
}

#[test]
fn gridhulloid_window_hint_on_small_window() {
    // a compact body well inside a window that lacks the 2R + 4h margin
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("shape.json"),
        r#"{"ball":{"center":[0.0,0.0],"radius":0.3,"closed":true}}"#,
    )
    .unwrap();
    let out = rbody(
        &[
            "gridhulloid",
            "--shape",
            "shape.json",
            "--radius",
            "1.0",
            "--spacing",
            "0.05",
            "--lo=-1.5,-1.5",
            "--hi=1.5,1.5",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("hint"), "stderr was: {err}");
}

#[test]
fn verify_passing_suite_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = rbody(
        &[
            "verify",
            "--suite",
            "disc2d",
            "--radius",
            "1.0",
            "--spacing",
            "0.04",
            "--report",
            "rep.json",
        ],
        dir.path(),
    );
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = stdout_json(&out);
    assert_eq!(doc["report_version"], 1);
    assert_eq!(doc["passed"], true);
    assert!(doc["checks"].as_array().unwrap().len() >= 5);
}

#[test]
fn verify_failing_suite_exits_two() {
    // far too coarse a lattice: the two hulloid components merge and the
    // certification correctly reports failure
    let dir = tempfile::tempdir().unwrap();
    let out = rbody(
        &[
            "verify",
            "--suite",
            "disc2d",
            "--radius",
            "1.0",
            "--spacing",
            "0.12",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    let doc = stdout_json(&out);
    assert_eq!(doc["passed"], false);
}

#[test]
fn verify_unknown_suite_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&rbody(&["verify", "--suite", "nope"], dir.path())), 1);
}

#[test]
fn thread_override_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let pts = write_triangle(dir.path());
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_rbody"))
            .args([
                "hulloid2d",
                "--points",
                pts.to_str().unwrap(),
                "--radius",
                "1.5",
            ])
            .env("RBODY_THREADS", threads)
            .current_dir(dir.path())
            .output()
            .unwrap()
    };
    assert_eq!(run("2").status.code(), Some(0));
    assert_eq!(run("0").status.code(), Some(1));
    assert_eq!(run("many").status.code(), Some(1));
}
