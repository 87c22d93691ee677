//! End-to-end behavior of the binary: exit codes, error reporting,
//! output routing.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_huygens-channel"))
}

#[test]
fn malformed_config_exits_2_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "cosmology = matter\nbob.omega = banana\n").unwrap();
    let out = bin().arg("capacity").arg("--config").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
}

#[test]
fn unknown_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "alice.omegaa = 3\n").unwrap();
    let out = bin().arg("sweep").arg("--config").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_violation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    // emitter switched on before the Big Bang
    std::fs::write(&path, "alice.switch_on = -0.5\n").unwrap();
    let out = bin().arg("capacity").arg("--config").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn capacity_record_fields() {
    let out = bin().arg("capacity").output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for field in ["causal_class", "i_delta", "i_theta", "s2", "capacity", "method", "err_est", "warnings"] {
        assert!(!v[field].is_null(), "missing field {field}");
    }
    assert_eq!(v["causal_class"], "B5_StrictTimelike");
    assert_eq!(v["method"], "closed_form");
    assert!(v["capacity"].as_f64().unwrap() > 0.0);
}

#[test]
fn spacelike_capacity_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("far.cfg");
    std::fs::write(&path, "separation.value = 100\n").unwrap();
    let out = bin().arg("capacity").arg("--config").arg(&path).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["causal_class"], "B1_Spacelike");
    assert_eq!(v["capacity"].as_f64().unwrap(), 0.0);
    assert_eq!(v["method"], "quadrature");
}

#[test]
fn single_point_sweep_matches_capacity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.cfg");
    std::fs::write(&path, "sweep.points = 1\nsweep.min = 2\n").unwrap();

    let cap_out = bin().arg("capacity").arg("--config").arg(&path).output().unwrap();
    let cap: serde_json::Value = serde_json::from_slice(&cap_out.stdout).unwrap();

    let sweep_out = bin()
        .arg("sweep")
        .arg("--config")
        .arg(&path)
        .arg("--format")
        .arg("json")
        .output()
        .unwrap();
    let rows: serde_json::Value = serde_json::from_slice(&sweep_out.stdout).unwrap();
    let row = &rows[0];
    assert_eq!(row["sweep_value"].as_f64().unwrap(), 2.0);
    for field in ["i_delta", "i_theta", "s2", "capacity"] {
        assert_eq!(row[field], cap[field], "field {field} differs");
    }
}

#[test]
fn sweep_writes_to_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    std::fs::write(&cfg, "sweep.points = 3\nsweep.min = 1.5\nsweep.max = 2.5\n").unwrap();
    let out_path = dir.path().join("rows.csv");
    let status = bin()
        .arg("sweep")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out_path)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("# huygens-channel v"));
    assert_eq!(text.lines().count(), 2 + 3);
}

#[test]
fn proper_separation_sweep_carries_warnings_in_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("p.cfg");
    // receiver barely after the emitter: the constant-proper approximation
    // warning must surface
    std::fs::write(
        &cfg,
        "separation.mode = proper\nseparation.value = 0.1\nsweep.points = 1\nsweep.min = 0.7\n",
    )
    .unwrap();
    let out = bin()
        .arg("sweep")
        .arg("--config")
        .arg(&cfg)
        .arg("--format")
        .arg("json")
        .output()
        .unwrap();
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let warnings = rows[0]["warnings"].as_array().unwrap();
    assert!(!warnings.is_empty());
}

#[test]
fn verify_fast_skips_reconstruction_and_passes() {
    let out = bin().arg("verify").arg("--fast").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS closed_vs_quadrature_grid"));
    assert!(!stdout.contains("commutator_reconstruction"));
}

#[test]
fn timing_rejects_csv_format() {
    let out = bin().arg("timing").arg("--format").arg("csv").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
