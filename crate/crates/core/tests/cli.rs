use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn run(config: &str, dir: &Path) -> (i32, Value) {
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, config).unwrap();
    let out = dir.join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_pwlab")).arg("--config").arg(&cfg).arg("--out").arg(&out).output().unwrap();
    let report = std::fs::read_to_string(out.join("report.json")).map(|s| serde_json::from_str(&s).unwrap()).unwrap_or(Value::Null);
    (status.status.code().unwrap(), report)
}

#[test]
fn empty_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = run(r#"{"experiment": "suite", "entries": []}"#, dir.path());
    assert_eq!(code, 0);
    assert_eq!(report["schema"], 1);
    assert!(dir.path().join("out/timings.json").exists());
}

#[test]
fn tightened_tolerance_fails() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) =
        run(r#"{"experiment": "suite", "entries": ["young"], "tolerances": {"young.sqrt_closed_form": 0}}"#, dir.path());
    assert_eq!(code, 1);
    let failures = report["failures"].as_array().unwrap();
    assert!(failures.iter().any(|f| f["name"] == "young.sqrt_closed_form" && f["kind"] == "tolerance"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(r#"{"experiment": "suite", "bogus": true}"#, dir.path()).0, 2);
    assert_eq!(run(r#"{"experiment": "estimate", "function": "nowhere:[0,1]"}"#, dir.path()).0, 2);
    assert_eq!(run("not json", dir.path()).0, 2);
    let status = Command::new(env!("CARGO_BIN_EXE_pwlab")).args(["--config", "/no/such/config.json"]).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn guards_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let (code, report) = run(
        r#"{"experiment": "estimate", "function": "gaussian", "grid": {"dim": 1, "half_width": 2, "points": 256}, "method": "derivative"}"#,
        dir.path(),
    );
    assert_eq!(code, 3);
    assert_eq!(report["failures"][0]["kind"], "periodization");
}

#[test]
fn weights_check_and_estimate_succeed() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(r#"{"experiment": "weights-check", "weight": {"kind": "power", "a": 0.5}}"#, dir.path());
    assert_eq!(code, 0);
    let (code, report) = run(
        r#"{"experiment": "estimate", "function": "bandlimited:[-1,1]", "method": "derivative", "p": 1, "tolerance": {"ratio": 0.01, "root": 0.03}}"#,
        dir.path(),
    );
    assert_eq!(code, 0, "{report}");
    let est = &report["estimates"][0]["estimate"];
    assert!((est["ratio_limit"].as_f64().unwrap() - 0.96875).abs() < 0.01);
}

#[test]
fn reports_are_deterministic() {
    let cfg = r#"{"experiment": "suite", "entries": ["rem2", "th22AD", "young"], "seed": 3}"#;
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run(cfg, a.path());
    run(cfg, b.path());
    let ra = std::fs::read(a.path().join("out/report.json")).unwrap();
    let rb = std::fs::read(b.path().join("out/report.json")).unwrap();
    assert!(!ra.is_empty());
    assert_eq!(ra, rb);
}
