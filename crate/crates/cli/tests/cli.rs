use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn blochop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blochop"))
        .args(args)
        .env_remove("BLOCHOP_CONFIG_DIR")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &tempfile::TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

fn report(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn norm_of_identity() {
    let cfg = configs().join("norm_z.json").display().to_string();
    let r = report(&blochop(&["norm", "--space", "bloch-mu", "--config", &cfg]));
    assert!((r["results"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(r["command"], "norm");
    assert_eq!(r["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn constant_norms() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "c.json",
        r#"{"function": {"poly": [[3, 4]]}, "weight": {"alpha": 1},
            "space": {"qk": {"p": 2, "q": 0, "kernel": {"power_s": 0.5}}}}"#,
    );
    for space in ["bloch-mu", "bloch-alpha", "hinf", "qk"] {
        let r = report(&blochop(&["norm", "--space", space, "--config", &cfg]));
        let want = if space == "bloch-alpha" { 0.0 } else { 5.0 };
        assert!(
            (r["results"]["value"].as_f64().unwrap() - want).abs() < 1e-12,
            "{space}: {r}"
        );
    }
}

#[test]
fn schema_errors_exit_2_with_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "bad.json",
        r#"{"function": {"poly": [0, 1]}, "weight": {"alpha": "one"}}"#,
    );
    let out = blochop(&["norm", "--space", "bloch-mu", "--config", &cfg]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("weight.alpha"));

    let cfg = write_config(
        &dir,
        "gamma.json",
        r#"{"function": {"poly": [0, 1]}, "space": {"qk": {"p": 2, "q": 0, "kernel": {"power_s": 1}, "gamma": 1}}}"#,
    );
    let out = blochop(&["norm", "--space", "qk", "--config", &cfg]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("space.qk.gamma"));

    let cfg = write_config(&dir, "missing.json", r#"{"weight": {"alpha": 1}}"#);
    let out = blochop(&["norm", "--space", "bloch-mu", "--config", &cfg]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("`function`"));
}

#[test]
fn math_domain_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "phi.json",
        r#"{"operator": {"kind": "Tmn", "m": 0, "n": 2}, "space": "hinf", "weight": {"alpha": 3},
            "symbols": {"psi1": {"poly": [1]}, "psi2": {"poly": [0]}, "phi": {"poly": [0.5, 0.7]}}}"#,
    );
    assert_eq!(code(&blochop(&["essnorm", "--config", &cfg])), 3);
    let cfg = write_config(
        &dir,
        "w.json",
        r#"{"function": {"poly": [0, 1]}, "weight": {"alpha": -1}}"#,
    );
    assert_eq!(code(&blochop(&["norm", "--space", "bloch-mu", "--config", &cfg])), 3);
}

#[test]
fn essnorm_verdicts() {
    let cfg = configs().join("compact_hinf.json").display().to_string();
    let r = report(&blochop(&["essnorm", "--config", &cfg]));
    assert_eq!(r["results"]["verdict"], "compact");
    for cfg in ["surviving_qk.json", "surviving_hinf.json"] {
        let cfg = configs().join(cfg).display().to_string();
        let r = report(&blochop(&["essnorm", "--config", &cfg]));
        assert_eq!(r["results"]["verdict"], "non_compact", "{cfg}");
    }
}

#[test]
fn incompatible_pairing_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "pair.json",
        r#"{"operator": {"kind": "Tn", "n": 1}, "space": "hinf", "weight": {"alpha": 3},
            "symbols": {"psi1": {"poly": [0]}, "psi2": {"poly": [1]}, "phi": {"poly": [0, 0.5]}}}"#,
    );
    for cmd in ["essnorm", "check-bounded", "dilation-sweep"] {
        assert_eq!(code(&blochop(&[cmd, "--config", &cfg])), 4, "{cmd}");
    }
}

#[test]
fn verify_paper_passes_and_detects_tampering() {
    let r = report(&blochop(&["verify-paper"]));
    assert_eq!(r["results"]["pass"], true);
    assert_eq!(r["results"]["certificates"]["failed"], 0);

    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("tampered.json");
    let out = blochop(&["verify-paper", "--tamper", "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(r["results"]["certificates"]["failed"], 12);
    let residual = r["results"]["certificates"]["failures"][0]["vanishing"]["residuals"][0]["relative"]
        .as_f64()
        .unwrap();
    assert!(residual > 1e-3, "{residual}");
}

#[test]
fn reports_are_deterministic() {
    let cfg = configs().join("surviving_hinf.json").display().to_string();
    let a = blochop(&["essnorm", "--config", &cfg, "--levels-J", "8"]);
    let b = blochop(&["essnorm", "--config", &cfg, "--levels-J", "8"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    // overrides enter the hash
    let c = blochop(&["essnorm", "--config", &cfg, "--levels-J", "6"]);
    let (ra, rc): (Value, Value) = (
        serde_json::from_slice(&a.stdout).unwrap(),
        serde_json::from_slice(&c.stdout).unwrap(),
    );
    assert_ne!(ra["config_hash"], rc["config_hash"]);
}

#[test]
fn csv_and_config_dir() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("levels.csv");
    let out = Command::new(env!("CARGO_BIN_EXE_blochop"))
        .args([
            "essnorm",
            "--config",
            "surviving_hinf.json",
            "--csv",
            csv.to_str().unwrap(),
        ])
        .env("BLOCHOP_CONFIG_DIR", configs())
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("order,level,eps,sup"));
    // unmerged T^(0,2): E_0 .. E_3 at 12 levels each
    assert_eq!(lines.count(), 48);

    let cfg = configs().join("norm_z.json").display().to_string();
    let out = blochop(&[
        "norm",
        "--space",
        "hinf",
        "--config",
        &cfg,
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn dilation_sweep_decreases_for_compact_config() {
    let cfg = configs().join("compact_hinf.json").display().to_string();
    let r = report(&blochop(&["dilation-sweep", "--config", &cfg, "--grid-M", "12"]));
    let v: Vec<f64> = r["results"]["sequence"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["value"].as_f64().unwrap())
        .collect();
    assert_eq!(v.len(), 5);
    assert!(v.windows(2).all(|p| p[1] < p[0]), "{v:?}");
    assert_eq!(v[4], 0.0);
}

#[test]
fn check_bounded_reports_suprema() {
    let cfg = configs().join("surviving_qk.json").display().to_string();
    let r = report(&blochop(&["check-bounded", "--config", &cfg]));
    assert_eq!(r["results"]["bounded"], true);
    let s = &r["results"]["suprema"]["suprema"];
    assert_eq!(s["1"].as_f64().unwrap(), 0.0);
    assert!(s["3"].as_f64().unwrap() > 0.0);
}
