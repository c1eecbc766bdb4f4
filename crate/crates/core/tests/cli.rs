use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ntnsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ntnsplit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn feasible_set(args: &[&str]) -> Vec<u64> {
    let mut full = vec!["feasibility"];
    full.extend_from_slice(args);
    let v = json(&ntnsplit(&full));
    v["feasible_set"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.json");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn feasibility_defaults() {
    assert_eq!(feasible_set(&[]), vec![1, 2, 3]);
}

#[test]
fn feasibility_zenith_relaxed() {
    assert_eq!(feasible_set(&["--fl-elevation", "90", "--relax-ntn"]), (1..=9).collect::<Vec<_>>());
}

#[test]
fn feasibility_zenith_strict() {
    assert_eq!(
        feasible_set(&["--altitude", "600", "--fl-elevation", "90", "--no-relax"]),
        (1..=6).collect::<Vec<_>>()
    );
}

#[test]
fn cho_gnb_onboard_anchor() {
    let v = json(&ntnsplit(&["cho", "--scenario", "A", "--split", "gnb", "--reference-delays"]));
    let buffer = v["phases"]["buffer_ms"].as_f64().unwrap();
    assert!((buffer - 38.36).abs() < 0.01, "{buffer}");
}

#[test]
fn cho_scenario_c_uses_inter_gnb() {
    let v = json(&ntnsplit(&["cho", "--scenario", "C", "--split", "lls"]));
    assert_eq!(v["procedure"], "inter-gnb-intra-amf");
}

#[test]
fn cho_trigger_offset_is_additive() {
    let v = json(&ntnsplit(&[
        "cho",
        "--scenario",
        "A",
        "--split",
        "lls",
        "--trigger-offset",
        "10",
        "--reference-delays",
    ]));
    let total = v["phases"]["total_ms"].as_f64().unwrap();
    assert!((total - 96.24).abs() < 0.01, "{total}");
}

#[test]
fn cho_rejects_unknown_cell() {
    for args in [
        ["cho", "--scenario", "D", "--split", "lls"],
        ["cho", "--scenario", "A", "--split", "7-2x"],
        ["cho", "--scenario", "B", "--split", "lls"],
    ] {
        let out = ntnsplit(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn grid_defaults_pass_all_checks() {
    let out = ntnsplit(&["grid"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["cells"].as_array().unwrap().len(), 12);
    let summary = String::from_utf8(out.stderr).unwrap();
    assert_eq!(summary.lines().filter(|l| l.starts_with("[pass]")).count(), 7);
    assert!(summary.contains("7/7 ordering checks passed"));
}

#[test]
fn grid_csv_has_header_and_twelve_rows() {
    let out = ntnsplit(&["grid", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 13);
    assert!(text.starts_with("scenario,variant,split,procedure,"));
}

#[test]
fn grid_scenario_b_has_six_cells() {
    let out = ntnsplit(&["grid", "--scenario", "B", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let variants: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(variants.len(), 6);
    assert!(variants.iter().all(|v| *v == "B1" || *v == "B2"));
}

#[test]
fn grid_trend_failure_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"timing": {"cn_api_total_ms": 0}}"#);
    let out = ntnsplit(&["grid", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("[fail]"));
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{
            "geometry": {"altitude_km": 800, "fl_elevation_deg": 25},
            "timing": {"trigger_offset_ms": 4},
            "scenario": "C",
            "split": "cu-du"
        }"#,
    );
    let from_file = ntnsplit(&["cho", "--config", &cfg]);
    let from_flags = ntnsplit(&[
        "cho",
        "--altitude",
        "800",
        "--fl-elevation",
        "25",
        "--trigger-offset",
        "4",
        "--scenario",
        "C",
        "--split",
        "cu-du",
    ]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, from_flags.stdout);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"geometry": {"fl_elevation_deg": 90}, "relax_ntn": false}"#);
    let mut full = vec!["--config", cfg.as_str()];
    assert_eq!(feasible_set(&full), (1..=6).collect::<Vec<_>>());
    full.push("--relax-ntn");
    assert_eq!(feasible_set(&full), (1..=9).collect::<Vec<_>>());
}

#[test]
fn unknown_config_key_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"altitude": 600}"#);
    let out = ntnsplit(&["grid", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_values_are_usage_errors() {
    for args in [
        vec!["feasibility", "--antennas", "3"],
        vec!["feasibility", "--altitude", "-1"],
        vec!["grid", "--format", "xml"],
        vec!["nonsense"],
    ] {
        assert_eq!(ntnsplit(&args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let out = ntnsplit(&["grid", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written.lines().count(), 13);
}

#[test]
fn catalog_and_topology_commands() {
    let v = json(&ntnsplit(&["catalog"]));
    assert_eq!(v["splits"].as_array().unwrap().len(), 10);
    let v = json(&ntnsplit(&["topology", "--scenario", "B2", "--split", "gnb"]));
    assert_eq!(v["deployment"]["scenario"], "B2");
}

#[test]
fn reruns_are_byte_identical() {
    let a = ntnsplit(&["grid"]);
    let b = ntnsplit(&["grid"]);
    assert_eq!(a.stdout, b.stdout);
}
