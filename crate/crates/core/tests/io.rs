use std::path::Path;

use anisoflow::io::{
    build_initial, emit_outputs, parse_config, parse_config_str, run_suite, simulate, ConfigError, RunMeta, Suite,
    CSV_HEADER,
};
use anisoflow::schemes::{Scheme, StopReason};
use anisoflow::surface::RepKind;
use anisoflow::surface::Snapshot;

const CIRCLE: &str = r#"{
    "norm": {"family": "euclidean", "dim": 2},
    "initial": {"kind": "circle", "radius": 1.0},
    "flow": {"t_end": 0.1}
}"#;

fn schema_error(text: &str) -> (String, String) {
    match parse_config_str(text) {
        Err(ConfigError::SchemaViolation { key, reason }) => (key, reason),
        other => panic!("expected a schema violation, got {other:?}"),
    }
}

#[test]
fn minimal_config_gets_defaults() {
    let cfg = parse_config_str(CIRCLE).unwrap();
    assert_eq!(cfg.flow.cfl, 0.2);
    assert_eq!(cfg.flow.r_stop, 0.05);
    assert_eq!(cfg.flow.scheme, Scheme::RadialGraph);
    assert_eq!(cfg.initial.n_points, 256);
    assert_eq!(cfg.output_dir, Path::new("out"));
}

#[test]
fn cfl_out_of_range_names_the_key() {
    let text = CIRCLE.replace(r#""t_end": 0.1"#, r#""t_end": 0.1, "cfl": 0.9"#);
    assert_eq!(schema_error(&text), ("flow.cfl".into(), "must be in (0,0.5]".into()));
}

#[test]
fn randers_drift_must_be_short() {
    let text =
        CIRCLE.replace(r#"{"family": "euclidean", "dim": 2}"#, r#"{"family": "randers", "dim": 2, "b": [1.2, 0.0]}"#);
    assert_eq!(schema_error(&text), ("norm.b".into(), "Euclidean norm must be < 1".into()));
}

#[test]
fn unknown_and_missing_keys_are_reported_by_path() {
    let (key, reason) = schema_error(&CIRCLE.replace(r#""t_end": 0.1"#, r#""t_end": 0.1, "speed": 2"#));
    assert_eq!(key, "flow.speed");
    assert!(reason.contains("unknown field `speed`"), "{reason}");
    let (key, reason) = schema_error(&CIRCLE.replace(r#""t_end": 0.1"#, r#""cfl": 0.1"#));
    assert_eq!(key, "flow");
    assert!(reason.contains("t_end"), "{reason}");
    let (key, _) = schema_error(&CIRCLE.replace(r#""radius": 1.0"#, r#""radius": -1.0"#));
    assert_eq!(key, "initial.radius");
    let (key, _) = schema_error(&CIRCLE.replace(r#""kind": "circle", "radius": 1.0"#, r#""kind": "ellipse""#));
    assert_eq!(key, "initial.semi_axes");
}

#[test]
fn missing_file_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nope.json");
    assert!(matches!(parse_config(&path), Err(ConfigError::FileNotFound(p)) if p == path));
}

#[test]
fn initial_state_follows_the_scheme() {
    let mut cfg = parse_config_str(CIRCLE).unwrap();
    assert_eq!(build_initial(&cfg).unwrap().kind(), RepKind::RadialGraph);
    cfg.flow.scheme = Scheme::ParametricCurve;
    cfg.initial.n_points = 64;
    let s = build_initial(&cfg).unwrap();
    assert_eq!((s.kind(), s.len()), (RepKind::ParametricCurve, 64));
}

#[test]
fn emitted_files_match_the_record() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = parse_config_str(CIRCLE).unwrap();
    cfg.flow.snapshot_every = 100;
    let (rec, wall) = simulate(&cfg).unwrap();
    let files = emit_outputs(&rec, &cfg, dir.path(), wall).unwrap();

    let csv = std::fs::read_to_string(&files.diagnostics).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    let t: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(t.len() as u64, rec.steps() + 1);
    assert!(t.windows(2).all(|w| w[1] > w[0]));

    let nd = std::fs::read_to_string(&files.snapshots).unwrap();
    let snaps: Vec<Snapshot> = nd.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(snaps, rec.snapshots);
    assert_eq!(snaps.first().unwrap().step, 0);
    assert_eq!(snaps.last().unwrap().step, rec.steps());

    let meta: RunMeta = serde_json::from_str(&std::fs::read_to_string(&files.meta).unwrap()).unwrap();
    assert_eq!(meta.halt_reason, StopReason::TEnd);
    assert_eq!(meta.config, cfg);
}

#[test]
fn zero_duration_run_has_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = parse_config_str(&CIRCLE.replace("0.1", "0.0")).unwrap();
    let (rec, wall) = simulate(&cfg).unwrap();
    let files = emit_outputs(&rec, &cfg, dir.path(), wall).unwrap();
    assert_eq!(std::fs::read_to_string(&files.diagnostics).unwrap().lines().count(), 2);
}

#[test]
fn outputs_are_byte_stable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = parse_config_str(CIRCLE).unwrap();
    for dir in [a.path(), b.path()] {
        let (rec, wall) = simulate(&cfg).unwrap();
        emit_outputs(&rec, &cfg, dir, wall).unwrap();
    }
    for name in ["diagnostics.csv", "snapshots.ndjson"] {
        assert_eq!(std::fs::read(a.path().join(name)).unwrap(), std::fs::read(b.path().join(name)).unwrap());
    }
}

#[test]
fn unwritable_directory_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let cfg = parse_config_str(CIRCLE).unwrap();
    let (rec, wall) = simulate(&cfg).unwrap();
    let err = emit_outputs(&rec, &cfg, &blocker.join("out"), wall).unwrap_err();
    assert_eq!(err.path, blocker.join("out"));
}

#[test]
fn config_echo_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
        "norm": {"family": "randers", "dim": 2, "b": [0.3, 0.0]},
        "initial": {"kind": "ellipse", "semi_axes": [2.0, 1.0], "center": [0.5, -0.25], "n_points": 64},
        "flow": {"scheme": "parametric_curve", "t_end": 0.01, "fixed_dt": 1e-3},
        "volume": "busemann_hausdorff",
        "comparison": {"inner_radius": 0.5, "outer_radius": 3.0}
    }"#;
    let cfg = parse_config_str(text).unwrap();
    let (rec, wall) = simulate(&cfg).unwrap();
    let files = emit_outputs(&rec, &cfg, dir.path(), wall).unwrap();
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(files.meta).unwrap()).unwrap();
    let echo = dir.path().join("echo.json");
    std::fs::write(&echo, serde_json::to_string(&meta["config"]).unwrap()).unwrap();
    assert_eq!(parse_config(&echo).unwrap(), cfg);
}

#[test]
fn suite_on_a_randers_wulff_config() {
    let text = r#"{
        "norm": {"family": "randers", "dim": 2, "b": [0.3, 0.0]},
        "initial": {"kind": "wulff", "radius": 1.0, "n_points": 64},
        "flow": {"t_end": 0.2}
    }"#;
    let cfg = parse_config_str(text).unwrap();
    let out = run_suite(&cfg, Suite::All).unwrap();
    assert_eq!(out.len(), 6);
    assert!(out.iter().all(|o| o.pass()), "{out:#?}");
}
