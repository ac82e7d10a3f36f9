use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn kappamu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kappamu")).args(args).output().expect("binary runs")
}

fn config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run_json(cfg: &Path, extra: &[&str]) -> (i32, Value) {
    let mut args = vec!["--config", cfg.to_str().unwrap(), "--format", "json"];
    args.extend_from_slice(extra);
    let out = kappamu(&args);
    let code = out.status.code().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (code, v)
}

const POWER: &str = r#"{"family":{"kind":"power","n":0.5},"sign":"plus"}"#;

#[test]
fn verify_passes_on_power_family() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "p.json", POWER);
    let (code, v) = run_json(&cfg, &["--command", "verify", "--points", "100", "--seed", "42"]);
    assert_eq!(code, 0, "{v:#}");
    assert_eq!(v["summary"]["flag_count"], 0);
    for row in v["rows"].as_array().unwrap() {
        assert!(row["residual"].as_f64().unwrap() < 1e-9, "{row}");
    }
}

#[test]
fn audit_flags_only_the_quarter_coefficient_forms() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "p.json", POWER);
    let (code, v) = run_json(&cfg, &["--command", "audit"]);
    assert_eq!(code, 2);
    let flags: Vec<&str> = v["summary"]["flags"].as_array().unwrap().iter().map(|f| f.as_str().unwrap()).collect();
    assert!(!flags.is_empty());
    assert!(flags.iter().all(|f| f.contains("quarter")), "{flags:?}");
    let flagged = v["rows"].as_array().unwrap().iter().filter(|r| r["status"] == "flagged").count();
    assert_eq!(flagged as u64, v["summary"]["flag_count"].as_u64().unwrap());
}

#[test]
fn square_root_family_has_no_surface_roots() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "s.json", r#"{"family":{"kind":"sqrt_linear","a":1.0,"b":0.0},"sign":"plus"}"#);
    let out_path = dir.path().join("roots.csv");
    let out = kappamu(&[
        "--config",
        cfg.to_str().unwrap(),
        "--command",
        "surface-roots",
        "--format",
        "csv",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(out_path).unwrap();
    assert_eq!(csv, "c,criterion_residual,lambda,lambda_prime,bitension_norm\n");
}

#[test]
fn curve_roots_csv_has_seventeen_digit_numbers() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "p.json", POWER);
    let out = kappamu(&["--config", cfg.to_str().unwrap(), "--command", "curve-roots", "--interval", "0.01:2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("c,criterion_residual,lambda,lambda_prime,bitension_norm"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 5);
    let mantissa = row[0].split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17, "{}", row[0]);
    assert!((row[0].parse::<f64>().unwrap() - 0.083_748_385_919_098_8).abs() < 1e-10);
    assert!(lines.next().is_none());
}

#[test]
fn foliate_writes_the_trajectory() {
    let out = kappamu(&["--command", "foliate", "--beta", "-20", "--format", "csv", "--sign", "minus"]);
    // `--sign` is not a flag: the sign comes from the config file.
    assert_eq!(out.status.code(), Some(1));

    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "f.json", r#"{"sign":"minus","foliation":{"beta":-20,"branch":"decreasing"}}"#);
    let (code, v) = run_json(&cfg, &["--command", "foliate"]);
    assert_eq!(code, 0, "{}", v["summary"]);
    let rows = v["rows"].as_array().unwrap();
    // The decreasing branch reaches its turning point before the span runs out.
    assert_eq!(v["summary"]["notes"]["termination"], "rhs_nonpositive");
    assert_eq!(v["summary"]["notes"]["samples"].as_u64().unwrap() as usize, rows.len());
    assert!(rows.len() > 500);
    assert!(rows.iter().all(|r| r["F_surf"].as_f64().unwrap().abs() < 1e-7 && r["lambda"].as_f64().unwrap() > 0.0));
}

#[test]
fn foliate_with_empty_trajectory_is_flagged() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "f.json", r#"{"sign":"plus","foliation":{"beta":0}}"#);
    let (code, v) = run_json(&cfg, &["--command", "foliate"]);
    assert_eq!(code, 2);
    assert!(v["rows"].as_array().unwrap().is_empty());
    assert!(v["summary"]["flags"].as_array().unwrap().iter().any(|f| f == "trajectory_nonempty"));
}

#[test]
fn leaf_report_on_a_root_is_consistent() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "p.json", POWER);
    let (code, v) = run_json(&cfg, &["--command", "leaf-report", "--which", "curve", "--c", "0.08374838591909881"]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"][0]["verdict"], "proper_biharmonic");
    let (code, v) = run_json(&cfg, &["--command", "leaf-report", "--which", "curve", "--c", "1.0"]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"][0]["verdict"], "not_biharmonic");
}

#[test]
fn config_errors_list_every_offending_key() {
    let dir = TempDir::new().unwrap();
    let cfg = config(
        &dir,
        "bad.json",
        r#"{"family":{"kind":"power","n":0.5,"extra":1},"sign":"sideways","colour":"red","grid":"many"}"#,
    );
    let out = kappamu(&["--config", cfg.to_str().unwrap(), "--command", "verify"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    for key in ["family.extra", "sign", "colour", "grid"] {
        assert!(err.contains(key), "{key} not named in: {err}");
    }
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(kappamu(&["--command", "explode"]).status.code(), Some(1));
    assert_eq!(kappamu(&["--command", "verify"]).status.code(), Some(1));
    assert_eq!(kappamu(&["--config", "/nonexistent/run.json", "--command", "verify"]).status.code(), Some(1));
    assert_eq!(kappamu(&["--help"]).status.code(), Some(0));
}

#[test]
fn reports_are_deterministic_apart_from_the_timestamp() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "p.json", POWER);
    let strip = |mut v: Value| {
        assert!(v["timestamp"].is_u64());
        v.as_object_mut().unwrap().remove("timestamp");
        serde_json::to_string(&v).unwrap()
    };
    for cmd in ["verify", "audit", "surface-roots"] {
        let (_, a) = run_json(&cfg, &["--command", cmd, "--seed", "7", "--points", "20"]);
        let (_, b) = run_json(&cfg, &["--command", cmd, "--seed", "7", "--points", "20"]);
        assert_eq!(strip(a), strip(b), "{cmd}");
    }
}

#[test]
fn envelope_carries_version_config_and_command() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, "p.json", POWER);
    let (_, v) = run_json(&cfg, &["--command", "verify", "--points", "5"]);
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["command"], "verify");
    assert_eq!(v["config"]["points"], 5);
    let pass = v["summary"]["pass_count"].as_u64().unwrap();
    let flag = v["summary"]["flag_count"].as_u64().unwrap();
    assert_eq!((pass + flag) as usize, v["rows"].as_array().unwrap().len());
}
