//! Binary-level tests: exit codes, report formats, determinism, config and
//! environment handling.

use std::process::Command;

fn kenstat() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kenstat"))
}

#[test]
fn list_shows_catalog_entries() {
    let out = kenstat().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("example_3_4"));
    assert!(text.contains("hyperbolic_kenmotsu"));
    assert!(text.contains("c = -1"));
    assert!(text.contains("fiber_slice"));
    assert!(text.contains("xalpha_plane"));
    assert!(text.contains("tilted_plane"));
}

#[test]
fn axioms_run_exits_zero_and_emits_json() {
    let out = kenstat()
        .args([
            "run",
            "--suite",
            "axioms",
            "--manifold",
            "euclidean(3)",
            "--points",
            "10",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!report["checks"].as_array().unwrap().is_empty());
    assert_eq!(report["summary"]["failed"], 0);
    for c in report["checks"].as_array().unwrap() {
        for key in ["name", "anchor", "value", "tol", "pass"] {
            assert!(c.get(key).is_some(), "missing key {key}");
        }
    }
}

#[test]
fn identical_seeds_give_identical_reports_modulo_runtime() {
    let run = || -> serde_json::Value {
        let out = kenstat()
            .args([
                "run",
                "--suite",
                "curvature",
                "--manifold",
                "hyperbolic_kenmotsu(1)",
                "--points",
                "15",
                "--seed",
                "99",
                "--format",
                "json",
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        let mut v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v["runtime_ms"] = serde_json::json!(0);
        v
    };
    let a = run();
    let b = run();
    assert_eq!(
        serde_json::to_vec(&a).unwrap(),
        serde_json::to_vec(&b).unwrap()
    );
}

#[test]
fn unknown_catalog_entry_exits_with_error() {
    let out = kenstat()
        .args(["run", "--suite", "axioms", "--manifold", "mystery(3)"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("catalog"), "stderr: {err}");
}

#[test]
fn failing_tolerance_sets_exit_code_one() {
    let out = kenstat()
        .args([
            "run",
            "--suite",
            "axioms",
            "--manifold",
            "example_3_4(1,1)",
            "--points",
            "5",
            "--tol-tier",
            "fd1=1e-30",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL"));
}

#[test]
fn config_file_drives_a_custom_immersion() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    // The alpha = 0 slice of the c = -1 model, written as a custom map.
    std::fs::write(
        &cfg_path,
        r#"{
            "suite": "submanifold",
            "immersion": "custom",
            "points": 10,
            "seed": 5,
            "custom_immersion": {
                "ambient": "hyperbolic_kenmotsu(1)",
                "offset": [0.0, 0.0, 0.0],
                "linear": [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]],
                "sample_box": [[-1.0, 1.0], [-1.0, 1.0]]
            }
        }"#,
    )
    .unwrap();
    let out_path = dir.path().join("report.json");
    let out = kenstat()
        .args([
            "run",
            "--config",
            cfg_path.to_str().unwrap(),
            "--format",
            "json",
            "--out",
            out_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&out_path).unwrap()).unwrap();
    assert_eq!(report["summary"]["failed"], 0);
    assert!(report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"].as_str().unwrap().contains("custom")));
}

#[test]
fn malformed_config_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("bad.json");
    std::fs::write(&cfg_path, "{ \"suite\": \"axioms\", }").unwrap();
    let out = kenstat()
        .args(["run", "--config", cfg_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line"), "stderr: {err}");
}

#[test]
fn tolerance_env_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let tiers = dir.path().join("tiers.json");
    std::fs::write(&tiers, r#"{"fd1": 1e-30}"#).unwrap();
    let out = kenstat()
        .env("KENSTAT_TOL_TIERS", tiers.to_str().unwrap())
        .args([
            "run",
            "--suite",
            "axioms",
            "--manifold",
            "example_3_4(1,1)",
            "--points",
            "5",
        ])
        .output()
        .unwrap();
    // The impossible env default makes the duality check fail...
    assert_eq!(out.status.code(), Some(1));
    // ...unless a flag overrides it.
    let out = kenstat()
        .env("KENSTAT_TOL_TIERS", tiers.to_str().unwrap())
        .args([
            "run",
            "--suite",
            "axioms",
            "--manifold",
            "example_3_4(1,1)",
            "--points",
            "5",
            "--tol-tier",
            "fd1=1e-6",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
