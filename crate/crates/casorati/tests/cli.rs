//! End-to-end tests of the `casorati` binary: exit codes, output formats,
//! determinism, config handling.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_casorati"))
}

#[test]
fn verify_gauss_identity_exits_zero() {
    let out = bin()
        .args([
            "verify",
            "--space",
            "g2",
            "--m",
            "1",
            "--checks",
            "gauss-identity",
            "--samples",
            "200",
            "--seed",
            "42",
            "--format",
            "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["all_pass"], serde_json::json!(true));
    let worst = report["records"][0]["worst_violation"].as_f64().unwrap();
    assert!(worst <= 1e-9);
}

#[test]
fn verify_inequalities_noncompact_auto_grid() {
    let out = bin()
        .args([
            "verify", "--space", "su2m", "--m", "1", "--checks", "inequalities", "--r", "auto",
            "--samples", "200", "--seed", "7",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn equality_case_prints_matching_sides() {
    let out = bin()
        .args([
            "equality-case",
            "--space",
            "g2",
            "--m",
            "3",
            "--r",
            "30",
            "--a",
            "1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    // lhs = rhs = 109/33.
    let field = |key: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{key} = ")))
            .unwrap_or_else(|| panic!("missing {key} in {text}"))
            .parse()
            .unwrap()
    };
    assert!((field("lhs") - 109.0 / 33.0).abs() <= 1e-12, "{text}");
    assert!((field("rhs") - 109.0 / 33.0).abs() <= 1e-12, "{text}");
    assert!(field("gap").abs() <= 1e-12, "{text}");
    assert!(text.contains("equality_flagged = true"), "{text}");
}

#[test]
fn sweep_emits_csv_table() {
    let out = bin()
        .args([
            "sweep", "--space", "g2", "--m", "1", "--r", "3", "20", "--samples", "50", "--seed",
            "3", "--format", "csv",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,min_gap,mean_gap,equality_hits"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn hessian_subcommand_reports_spectrum() {
    let out = bin()
        .args(["hessian", "--m", "3", "--r", "30"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["max_deviation"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn oracle_subcommand_runs_agreement_only() {
    let out = bin()
        .args([
            "oracle", "--space", "g2", "--m", "1", "--samples", "5", "--seed", "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = report["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"oracle-inf-agreement"));
    assert!(!names.contains(&"gauss-identity"));
}

#[test]
fn malformed_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ \"space\": \"Compact\", \"samples\": }").unwrap();
    let out = bin()
        .args(["verify", "--config", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    // Diagnostic carries line/column.
    assert!(err.contains(":1:"), "{err}");
}

#[test]
fn out_of_range_r_exits_two() {
    let out = bin()
        .args([
            "verify", "--space", "g2", "--m", "1", "--r", "6", "--samples", "10",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{"space": "Compact", "m": 1, "samples": 50, "seed": 9,
            "checks": ["gauss-identity"], "r_values": [3.0]}"#,
    )
    .unwrap();
    // Flag overrides the space from the file.
    let out = bin()
        .args([
            "verify",
            "--config",
            path.to_str().unwrap(),
            "--space",
            "su2m",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        report["records"][0]["parameters"]["space"],
        serde_json::json!("Noncompact")
    );
}

#[test]
fn reports_byte_identical_apart_from_wall_time() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        r#"{"space": "Compact", "m": 1, "samples": 100, "seed": 4,
            "r_values": [3.0, 20.0]}"#,
    )
    .unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("report{i}.json"));
        let status = bin()
            .args([
                "verify",
                "--config",
                config.to_str().unwrap(),
                "--out",
                path.to_str().unwrap(),
            ])
            .env("CASORATI_THREADS", if i == 0 { "1" } else { "4" })
            .status()
            .unwrap();
        assert!(status.success());
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        v["wall_time_s"] = serde_json::json!(0);
        outputs.push(serde_json::to_string(&v).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn threads_env_var_is_respected() {
    let out = bin()
        .args([
            "verify", "--space", "g2", "--m", "1", "--checks", "inequalities", "--r", "3",
            "--samples", "100", "--seed", "1",
        ])
        .env("CASORATI_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
}
