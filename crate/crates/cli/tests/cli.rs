use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn wrast(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wrast"))
        .current_dir(dir)
        .args(args)
        .env_remove("WRAST_THREADS")
        .output()
        .expect("run wrast")
}

fn ok_json(dir: &Path, args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = wrast(dir, &full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn diagnostics(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

#[test]
fn demos_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    for name in ["gauss2d", "bandlimited2d", "wavepacket1p1", "two-wavelet"] {
        ok_json(dir.path(), &["demo", name, "--seed", "7", "--out", "a.wrs"]);
        ok_json(dir.path(), &["demo", name, "--seed", "7", "--out", "b.wrs"]);
        let a = fs::read(dir.path().join("a.wrs")).unwrap();
        let b = fs::read(dir.path().join("b.wrs")).unwrap();
        assert!(a == b, "{name}");
    }
    ok_json(dir.path(), &["demo", "bandlimited2d", "--seed", "8", "--out", "c.wrs"]);
    assert_ne!(fs::read(dir.path().join("a.wrs")).unwrap(), fs::read(dir.path().join("c.wrs")).unwrap());
}

#[test]
fn usage_errors_exit_2_with_diagnostics() {
    let dir = TempDir::new().unwrap();
    let cases: &[&[&str]] = &[
        &["window", "info", "gaussian"],
        &["demo", "nope", "--out", "x.wrs"],
        &["check", "--name", "nope"],
        &["check", "--suite", "nope"],
        &["xray", "forward", "--signal", "missing.wrs", "--out", "f.wrs"],
        &["wave", "kernel", "--z1", "0", "--z2", "1,1"],
        &["window", "info", "ast", "--frobnicate"],
    ];
    for args in cases {
        let out = wrast(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let d = diagnostics(&out);
        assert_eq!(d["exit_code"], 2);
        assert!(d["error"].is_string() && d["message"].is_string(), "{d}");
    }
}

#[test]
fn missing_subcommand_exits_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(wrast(dir.path(), &[]).status.code(), Some(2));
    assert_eq!(wrast(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_wrast"))
        .current_dir(dir.path())
        .args(["window", "info", "ast"])
        .env("WRAST_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostics(&out)["error"], "env");
}

#[test]
fn numerical_failure_exits_1_with_details() {
    let dir = TempDir::new().unwrap();
    ok_json(dir.path(), &["demo", "bandlimited2d", "--out", "b.wrs"]);
    let out = wrast(dir.path(), &["xray", "check", "--signal", "b.wrs", "--radii", "4", "--angles", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let d = diagnostics(&out);
    assert_eq!(d["error"], "check_failed");
    assert_eq!(d["details"]["pass"], false);
}

#[test]
fn window_info_reports_admissibility() {
    let dir = TempDir::new().unwrap();
    let v = ok_json(dir.path(), &["window", "info", "gauss-deriv-1"]);
    assert_eq!(v["admissible"], true);
    assert!((v["c_h"].as_f64().unwrap() - 0.5 / std::f64::consts::PI).abs() < 1e-12);
    let v = ok_json(dir.path(), &["window", "info", "ast"]);
    assert_eq!(v["admissible"], false);
    assert_eq!(v["c_h_infinite"], true);
}

#[test]
fn config_fills_unset_options_and_flags_win() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("c.json"), r#"{"dim": 3}"#).unwrap();
    fs::write(dir.path().join("c.toml"), "command = \"window info\"\nwindow = \"gauss-d2\"\ndim = 2\n").unwrap();
    let v = ok_json(dir.path(), &["--config", "c.json", "window", "info", "gauss-deriv-1"]);
    assert_eq!(v["n"], 3);
    let v = ok_json(dir.path(), &["--config", "c.json", "window", "info", "gauss-deriv-1", "--dim", "2"]);
    assert_eq!(v["n"], 2);
    let v = ok_json(dir.path(), &["--config", "c.toml"]);
    assert_eq!(v["window"], "gauss-d2");
    assert_eq!(v["n"], 2);

    fs::write(dir.path().join("bad.json"), r#"{"frobnicate": 1}"#).unwrap();
    let out = wrast(dir.path(), &["--config", "bad.json", "window", "info", "ast"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(diagnostics(&out)["error"], "config");
}

#[test]
fn check_without_timing_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let args = ["check", "--name", "wave.n_s_closed_form", "--no-timing"];
    let a = wrast(dir.path(), &args);
    let b = wrast(dir.path(), &args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v[0]["name"], "wave.n_s_closed_form");
    assert_eq!(v[0]["runtime_ms"], 0.0);
    assert_eq!(v[0]["pass"], true);
}

#[test]
fn check_reports_inadmissible_window_sides() {
    let dir = TempDir::new().unwrap();
    let v = ok_json(dir.path(), &["check", "--name", "window.ast_inadmissible", "--no-timing"]);
    assert_eq!(v[0]["rhs"], "inf");
    assert_eq!(v[0]["pass"], true);
}

#[test]
fn xray_round_trip_recovers_bandlimited_signal() {
    let dir = TempDir::new().unwrap();
    ok_json(dir.path(), &["demo", "bandlimited2d", "--out", "b.wrs"]);
    let f = ok_json(dir.path(), &["xray", "forward", "--signal", "b.wrs", "--out", "f.wrs"]);
    assert_eq!(f["nodes"], 48 * 32);
    let r = ok_json(
        dir.path(),
        &["xray", "reconstruct", "--field", "f.wrs", "--reference", "b.wrs", "--out", "r.wrs"],
    );
    assert!(r["rel_error"].as_f64().unwrap() < 1e-3, "{r}");
    assert!(r["mean_floor"].as_f64().unwrap() < 1e-6, "{r}");
}

#[test]
fn xray_reconstruction_misses_only_the_mean() {
    let dir = TempDir::new().unwrap();
    ok_json(dir.path(), &["demo", "gauss2d", "--out", "g.wrs"]);
    ok_json(dir.path(), &["xray", "forward", "--signal", "g.wrs", "--out", "f.wrs"]);
    let r = ok_json(
        dir.path(),
        &["xray", "reconstruct", "--field", "f.wrs", "--reference", "g.wrs", "--out", "r.wrs"],
    );
    let err = r["rel_error"].as_f64().unwrap();
    let floor = r["mean_floor"].as_f64().unwrap();
    assert!((err - floor).abs() < 1e-3 * floor, "{r}");
}

#[test]
fn wavelet_norm_matches_its_report() {
    let dir = TempDir::new().unwrap();
    let w = ok_json(dir.path(), &["wave", "wavelet", "--z", "0.5,1", "--plus", "--out", "e.wrs"]);
    let n = ok_json(dir.path(), &["wave", "norm", "--solution", "e.wrs"]);
    let a = w["norm_sq"].as_f64().unwrap();
    let b = n["sobolev_norm_sq"].as_f64().unwrap();
    assert!((a - b).abs() <= 1e-12 * a, "{a} vs {b}");
    assert_eq!(n["negative_frequency_norm_sq"], 0.0);
    assert!(n["pseudo_local_norm"]["rel_error"].as_f64().unwrap() < 1e-2);
}

#[test]
fn kernel_is_hermitian() {
    let dir = TempDir::new().unwrap();
    let a = ok_json(dir.path(), &["wave", "kernel", "--z1", "0,1", "--z2", "1.5,0.5"]);
    let b = ok_json(dir.path(), &["wave", "kernel", "--z1", "1.5,0.5", "--z2", "0,1"]);
    let (ar, ai) = (a["kernel"]["re"].as_f64().unwrap(), a["kernel"]["im"].as_f64().unwrap());
    let (br, bi) = (b["kernel"]["re"].as_f64().unwrap(), b["kernel"]["im"].as_f64().unwrap());
    assert!((ar - br).abs() < 1e-12 && (ai + bi).abs() < 1e-12);
}

#[test]
fn wave_commands_on_demo_solutions() {
    let dir = TempDir::new().unwrap();
    ok_json(dir.path(), &["demo", "two-wavelet", "--out", "t.wrs"]);
    let v = ok_json(dir.path(), &["wave", "ast", "--solution", "t.wrs", "--points", "0,1;2,0.5", "--out", "a.csv"]);
    assert!(v.is_object());
    let csv = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);

    let r = ok_json(dir.path(), &["wave", "resolve", "--solution", "t.wrs"]);
    assert!(r["rel_error"].as_f64().unwrap() < 1e-2, "{r}");
    assert!(r["lhs"]["re"].as_f64().unwrap() > 0.0);

    let s = ok_json(dir.path(), &["wave", "sl2", "--solution", "t.wrs", "--sigma", "1,0.5,0,1"]);
    assert!(s["method"].as_str().unwrap().starts_with("atoms"), "{s}");

    ok_json(dir.path(), &["wave", "phase-space", "--solution", "t.wrs", "--x", "-1,1,3", "--nu", "0.1,1,2", "--out", "ps.csv"]);
    let csv = fs::read_to_string(dir.path().join("ps.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 2);
}
