use std::fs;
use std::path::Path;

use geophase::cli::{main_with_args, RunSpec};
use geophase::export::import_trajectory;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("geophase").chain(args.iter().copied());
    let code = main_with_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn phases_reports_minus_pi_on_the_equator() {
    let (code, out, err) = run(&["phases", "--theta0", "1.5707963267948966"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["spec_version"], 1);
    assert!((v["geometric"].as_f64().unwrap() + std::f64::consts::PI).abs() < 1e-12);
    assert!((v["extracted"]["geometric"].as_f64().unwrap() + std::f64::consts::PI).abs() < 1e-6);
}

#[test]
fn sweep_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let (code, _, err) = run(&["sweep", "--gamma-max", "2", "--steps", "81", "--output", path_str(&path)]);
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 82);
    assert_eq!(lines[0], "gamma,re1,re2,re3,re4,im1,im2,im3,im4,classification");
    assert!(lines[41].ends_with(",AtEP"));
    assert!(lines[1].ends_with(",BelowEP") && lines[81].ends_with(",AboveEP"));
    assert!(!text.contains('\r'));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, ext) in [("evolve", "csv"), ("evolve", "json"), ("circuit", "json"), ("sweep", "csv")] {
        let a = dir.path().join(format!("a.{ext}"));
        let b = dir.path().join(format!("b.{ext}"));
        for p in [&a, &b] {
            let (code, _, err) = run(&[cmd, "--duration", "2", "--format", ext, "--output", path_str(p)]);
            assert_eq!(code, 0, "{cmd}: {err}");
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{cmd} {ext}");
    }
}

#[test]
fn evolve_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let args = ["evolve", "--model", "pt-dimer", "--s", "0.4", "--duration", "1", "--stride", "100"];
    let (code, _, err) = run(&[&args[..], &["--format", "json", "--output", path_str(&path)]].concat());
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"spec_version\": 1"));
    let t = import_trajectory(&path).unwrap();
    assert_eq!(t.len(), 11);
    assert_eq!(t.metadata.parameters["s"], 0.4);
    let again = dir.path().join("u.json");
    geophase::export::export_trajectory(&t, geophase::export::OutputFormat::Json, &again).unwrap();
    assert_eq!(fs::read(&path).unwrap(), fs::read(&again).unwrap());
}

#[test]
fn evolve_csv_line_count_and_header() {
    let (code, out, _) = run(&["evolve", "--duration", "1", "--step", "0.01", "--stride", "10"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "t,re1,im1,re2,im2");
    assert_eq!(lines.len(), 1 + 11);

    let (code, out, _) = run(&["evolve", "--model", "circuit", "--duration", "1", "--step", "0.002", "--stride", "250"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("t,v1,v2"));
    assert_eq!(out.lines().count(), 1 + 3);
}

#[test]
fn spec_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let spec_path = dir.path().join("run.json");
    let spec = r#"{
        "spec_version": 1,
        "command": "phases",
        "model": { "kind": "hermitian", "h": 0.1, "f": 0.3, "g": 0.4 },
        "initial_state": { "kind": "bloch", "theta0": 0.0, "phi0": 0.0 },
        "output": { "format": "json" }
    }"#;
    fs::write(&spec_path, spec).unwrap();
    let (code, out, err) = run(&["phases", "--spec", path_str(&spec_path), "--theta0", "3.141592653589793"]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["geometric"].as_f64().unwrap() + 2.0 * std::f64::consts::PI).abs() < 1e-12);
    let parsed = RunSpec::from_json(spec).unwrap();
    assert_eq!(RunSpec::from_json(&parsed.to_json()).unwrap(), parsed);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    // 2: malformed or inconsistent spec.
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ \"spec_version\": 1, \"command\": \"evolve\", \"modle\": {} }").unwrap();
    let (code, _, err) = run(&["evolve", "--spec", path_str(&bad)]);
    assert_eq!(code, 2);
    assert!(err.contains("modle") && err.contains("line 1"), "{err}");
    assert_eq!(run(&["evolve", "--model", "hermitian", "--s", "1"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);

    // 3: domain errors.
    assert_eq!(run(&["phases", "--model", "pt-dimer", "--s", "1.0"]).0, 3);
    assert_eq!(run(&["phases", "--model", "pt-dimer", "--s", "1.5"]).0, 3);
    assert_eq!(run(&["phases", "--f", "0", "--g", "0"]).0, 3);
    assert_eq!(run(&["evolve", "--step", "0.5", "--h", "3"]).0, 3);

    // 4: unwritable output or missing spec file.
    let nowhere = dir.path().join("missing").join("x.csv");
    assert_eq!(run(&["sweep", "--output", path_str(&nowhere)]).0, 4);
    assert_eq!(run(&["evolve", "--spec", path_str(&dir.path().join("none.json"))]).0, 4);

    assert_eq!(run(&["check"]).0, 0);
}
