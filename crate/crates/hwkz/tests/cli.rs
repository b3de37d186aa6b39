use std::process::{Command, Output};

use serde_json::Value;

fn hwkz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hwkz")).args(args).env("HWKZ_WORKERS", "1").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn describe_reports_degrees() {
    let out = hwkz(&["describe", "--p", "13", "--q", "3", "--g", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["n"], 7);
    assert_eq!(v["d_phi"], 20);
    assert_eq!(v["d_M"], 17);
    assert_eq!(v["degrees"]["master_t_degree"], 28);
    assert_eq!(v["degrees"]["hasse_witt_entries"], serde_json::json!([[16, 3], [17, 4]]));
    assert_eq!(v["degrees"]["solution_columns"], serde_json::json!([15, 2]));
}

#[test]
fn verify_ghosts_passes() {
    let out = hwkz(&["verify", "ghosts", "--p", "7", "--q", "3", "--g", "1", "--l", "2", "--mode", "symbolic"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["mode"], "symbolic");
    assert!(String::from_utf8_lossy(&out.stderr).contains("ghost"));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "derivation", "--p", "7", "--q", "3", "--g", "1", "--mode", "evaluation", "--count", "4", "--seed", "11"];
    let a = hwkz(&args);
    let b = hwkz(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        &["verify", "ghosts", "--p", "4", "--q", "3", "--g", "1"][..],
        &["verify", "ghosts", "--p", "7", "--q", "4", "--g", "1"],
        &["converge", "--p", "13", "--q", "3", "--g", "2", "--m", "1"],
        &["verify", "nonsense", "--p", "7", "--q", "3", "--g", "1"],
    ] {
        let out = hwkz(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = hwkz(&["verify", "ghosts", "--p", "4", "--q", "3", "--g", "1"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("p not prime: 4"));
}

#[test]
fn exhausted_search_exits_with_three() {
    let out = hwkz(&["converge", "--p", "7", "--q", "3", "--g", "1", "--count", "10", "--attempts", "3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"p": 7, "q": 3, "g": 1, "seed": 3, "count": 2}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = hwkz(&["--config", cfg, "verify", "hasse-witt", "--mode", "evaluation"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["params"]["p"], 7);
    assert_eq!(v["seed"], 3);
    let out = hwkz(&["--config", cfg, "verify", "hasse-witt", "--mode", "evaluation", "--seed", "9"]);
    assert_eq!(json(&out)["seed"], 9);

    std::fs::write(dir.path().join("bad.json"), r#"{"p": 7, "bogus": 1}"#).unwrap();
    let out = hwkz(&["--config", dir.path().join("bad.json").to_str().unwrap(), "describe"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn converge_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("conv.json");
    let out = hwkz(&["converge", "--p", "7", "--q", "3", "--g", "1", "--count", "2", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
    let csv = std::fs::read_to_string(out_path.with_extension("csv")).unwrap();
    assert!(csv.lines().count() > 1);
    assert!(!out.stdout.is_empty());
}
