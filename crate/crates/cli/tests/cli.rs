use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mandelstuff"))
        .args(args)
        .env("MANDELSTUFF_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn render2d_writes_pgm() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "m.pgm");
    let o = run(&[
        "render2d",
        "--ring",
        "complex",
        "--degree",
        "2",
        "--window",
        "-2,1,-1.5,1.5",
        "--res",
        "64x48",
        "--max-iter",
        "100",
        "--out",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let bytes = std::fs::read(&out).unwrap();
    assert!(bytes.starts_with(b"P5\n64 48\n255\n"));
    assert_eq!(bytes.len(), 13 + 64 * 48);
}

#[test]
fn render2d_ppm_and_slices() {
    let dir = tempfile::tempdir().unwrap();
    let ppm = path(dir.path(), "m.ppm");
    assert!(run(&["render2d", "--res", "8x8", "--out", &ppm]).status.success());
    assert!(std::fs::read(&ppm).unwrap().starts_with(b"P6\n8 8\n255\n"));
    let a = path(dir.path(), "a.pgm");
    let b = path(dir.path(), "b.pgm");
    assert!(run(&["render2d", "--res", "32x32", "--ring", "complex", "--out", &a]).status.success());
    assert!(run(&["render2d", "--res", "32x32", "--ring", "hopf", "--slice", "0,0", "--out", &b]).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn render3d_stl_framing() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "b.stl");
    assert!(run(&["render3d", "--res", "12x12x12", "--max-iter", "8", "--out", &out]).status.success());
    let bytes = std::fs::read(&out).unwrap();
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    assert!(count > 0);
    assert_eq!(bytes.len(), 84 + 50 * count);
}

#[test]
fn finite_frobenius_report() {
    let v = json(&["finite", "--ring", "zp2", "--p", "3", "--frobenius", "--escape", "1"]);
    assert_eq!(v["result"]["member_count"], 7);
    assert_eq!(v["result"]["matches_lemma"], true);
    assert_eq!(v["method"], "finite_enumeration");
    assert_eq!(v["config"]["subcommand"], "finite");
    assert!(v["tool_version"].is_string());
    let gf = json(&["finite", "--ring", "gfp2", "--p", "3", "--frobenius"]);
    assert_eq!(gf["result"]["member_count"], 3);
    assert_eq!(gf["result"]["matches_lemma"], false);
}

#[test]
fn embedded_config_reproduces_results() {
    let dir = tempfile::tempdir().unwrap();
    let first = json(&["area", "--method", "mc", "--samples", "20000", "--max-iter", "200", "--seed", "9"]);
    let cfg = path(dir.path(), "cfg.json");
    std::fs::write(&cfg, serde_json::to_vec(&first["config"]).unwrap()).unwrap();
    let second = json(&["area", "--config", &cfg]);
    assert_eq!(first["result"], second["result"]);
    assert_eq!(first["config"], second["config"]);
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "cfg.json");
    std::fs::write(&cfg, r#"{"p": 5, "frobenius": true}"#).unwrap();
    let v = json(&["finite", "--p", "3", "--config", &cfg]);
    assert_eq!(v["result"]["member_count"], 21);
}

#[test]
fn area_methods() {
    let a = json(&["area", "--method", "analytic"]);
    assert!((a["result"]["estimate"].as_f64().unwrap() - 7.0 * std::f64::consts::PI / 16.0).abs() < 1e-15);
    assert_eq!(a["result"]["certified"], true);
    let g = json(&["area", "--method", "grid", "--res", "128", "--max-iter", "16"]);
    assert_eq!(g["result"]["certified"], false);
    assert!(g["result"]["estimate"].as_f64().unwrap() <= 9.0);
}

#[test]
fn levelcurves_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let (svg, csv) = (path(dir.path(), "l.svg"), path(dir.path(), "l.csv"));
    assert!(run(&["levelcurves", "--levels", "0,1,2", "--res", "129", "--svg", &svg, "--csv", &csv]).status.success());
    let svg = std::fs::read_to_string(svg).unwrap();
    assert_eq!(svg.matches("<g id=").count(), 3);
    let csv = std::fs::read_to_string(csv).unwrap();
    assert!(csv.starts_with("curve_id,x,y\n"));
    let circle: Vec<f64> = csv
        .lines()
        .filter(|l| l.starts_with("n0_"))
        .map(|l| {
            let f: Vec<f64> = l.split(',').skip(1).map(|t| t.parse().unwrap()).collect();
            f[0].hypot(f[1])
        })
        .collect();
    assert!(!circle.is_empty());
    assert!(circle.iter().all(|r| (r - 2.0).abs() < 2.0 * 5.0 / 128.0));
    let stdout = run(&["levelcurves", "--levels", "0", "--res", "33"]);
    assert!(String::from_utf8_lossy(&stdout.stdout).starts_with("curve_id,x,y\n"));
}

#[test]
fn julia_modes() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "j.pgm");
    assert!(run(&["julia", "--c", "-0.12,0.75", "--res", "32x32", "--out", &out]).status.success());
    let v = json(&["julia", "--method", "cloud", "--c", "0,0", "--points", "20000"]);
    assert!(v["result"]["max_abs_modulus_minus_one"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["result"]["forward_invariant"], true);
}

#[test]
fn matrix_modes() {
    let v = json(&["matrix", "--c", "0,1,0,0", "--mode", "product"]);
    assert_eq!(v["result"]["bounded"], true);
    assert_eq!(v["result"]["nilpotent"], true);
    let s = json(&["matrix", "--method", "sweep", "--res", "31", "--max-iter", "300"]);
    assert_eq!(s["result"]["sweep"]["disagree_outside_band"], 0);
    assert_eq!(s["result"]["paper_interval_matches"], false);
    let lo = s["result"]["measured_scalar_interval"][0].as_f64().unwrap();
    let hi = s["result"]["measured_scalar_interval"][1].as_f64().unwrap();
    assert!((lo + 2.0).abs() < 1e-3 && (hi - 0.25).abs() < 1e-3, "[{lo}, {hi}]");
}

#[test]
fn components_census() {
    let v = json(&["components", "--ring", "complex", "--res", "96x96", "--max-iter", "200"]);
    assert_eq!(v["method"], "raster_census");
    assert_eq!(v["result"]["adjacency"], "four");
    let b = json(&["components", "--ring", "bulb-wn", "--degree", "8", "--res", "16x16x16", "--max-iter", "10"]);
    assert_eq!(b["result"]["adjacency"], "six");
    let f = json(&["components", "--ring", "zp2", "--p", "7", "--frobenius"]);
    assert_eq!(f["result"]["adjacency"], "torus4");
    assert_eq!(f["result"]["in_set_count"], 43);
}

#[test]
fn pollard_factors() {
    let v = json(&["pollard", "--n", "91", "--c", "1", "--x0", "2"]);
    let f = v["result"]["factor"].as_u64().unwrap();
    assert!(f == 7 || f == 13);
    let v = json(&["pollard", "--n", "4", "--c", "1", "--x0", "0"]);
    assert_eq!(v["result"]["factor"], 2);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["render2d", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["nosuchcommand"]).status.code(), Some(1));
    let bad_window = run(&["render2d", "--window", "1,0,0,1", "--out", "/tmp/never.pgm"]);
    assert_eq!(bad_window.status.code(), Some(1));
    assert!(!bad_window.stderr.is_empty());
    assert_eq!(run(&["render2d", "--res", "8x8"]).status.code(), Some(1));
    assert_eq!(run(&["finite", "--ring", "zp2", "--p", "4"]).status.code(), Some(1));
    assert_eq!(run(&["pollard", "--n", "3"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let unwritable = dir.path().join("missing").join("m.pgm");
    let o = run(&["render2d", "--res", "8x8", "--out", unwritable.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot write"));
}
