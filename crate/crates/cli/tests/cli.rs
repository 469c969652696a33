use std::path::Path;
use std::process::{Command, Output};

fn anisoflow(args: &[&str], output: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_anisoflow"));
    cmd.args(args);
    match output {
        Some(dir) => cmd.env("ANISOFLOW_OUTPUT", dir),
        None => cmd.env_remove("ANISOFLOW_OUTPUT"),
    };
    cmd.output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const WULFF: &str = r#"{
    "norm": {"family": "randers", "dim": 2, "b": [0.3, 0.0]},
    "initial": {"kind": "wulff", "radius": 1.0, "n_points": 64},
    "flow": {"t_end": 0.1}
}"#;

#[test]
fn simulate_writes_into_the_override_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.json", WULFF);
    let out = dir.path().join("results");
    let res = anisoflow(&["simulate", "--config", &cfg], Some(&out));
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    for name in ["diagnostics.csv", "snapshots.ndjson", "run_meta.json"] {
        assert!(out.join(name).is_file(), "{name}");
    }
    let summary: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(summary["halt_reason"], "t_end");
}

#[test]
fn bad_config_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.json", &WULFF.replace(r#""t_end": 0.1"#, r#""t_end": 0.1, "cfl": 0.9"#));
    let res = anisoflow(&["simulate", "--config", &cfg], Some(dir.path()));
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("flow.cfl"));
    let missing = dir.path().join("missing.json");
    let res = anisoflow(&["verify", "--suite", "area", "--config", missing.to_str().unwrap()], None);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn verify_prints_passing_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.json", WULFF);
    let res = anisoflow(&["verify", "--suite", "wulff", "--config", &cfg], None);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stdout));
    let results: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(results[0]["name"], "wulff_selfsimilar");
    assert_eq!(results[0]["pass"], true);
}

#[test]
fn verify_reports_unmet_preconditions_as_failures() {
    let dir = tempfile::tempdir().unwrap();
    let ellipse = WULFF.replace(r#""kind": "wulff", "radius": 1.0"#, r#""kind": "ellipse", "semi_axes": [2.0, 1.0]"#);
    let cfg = write(dir.path(), "run.json", &ellipse);
    let res = anisoflow(&["verify", "--suite", "wulff", "--config", &cfg], None);
    assert_eq!(res.status.code(), Some(1));
    let results: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert!(results[0]["error"].as_str().unwrap().contains("not a Wulff shape"));
}

#[test]
fn norms_validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", r#"{"family": "lp_smooth", "dim": 2, "p": 4, "epsilon": 0.1}"#);
    let res = anisoflow(&["norms", "validate", &good], None);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stdout));
    let report: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert_eq!(report["sample_count"], 1000);

    let bad = write(dir.path(), "bad.json", r#"{"family": "randers", "dim": 2, "b": [1.2, 0.0]}"#);
    let res = anisoflow(&["norms", "validate", &bad], None);
    assert_eq!(res.status.code(), Some(2));
    let report: serde_json::Value = serde_json::from_slice(&res.stdout).unwrap();
    assert!(report["params_error"].as_str().unwrap().contains("b"));
}
