//! End-to-end CLI tests against the golden corpus in `tests/golden/`.

use std::path::PathBuf;
use std::process::{Command, Output};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(config: &str, command: &str, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wallcross"))
        .arg("--config")
        .arg(golden_dir().join(config))
        .arg("--command")
        .arg(command)
        .args(extra)
        .output()
        .expect("binary runs")
}

fn check_golden(config: &str, command: &str, format: &str, golden: &str) {
    let out = run(config, command, &["--format", format]);
    assert!(out.status.success(), "{command} failed: {}", String::from_utf8_lossy(&out.stderr));
    let expected = std::fs::read_to_string(golden_dir().join(golden)).expect("golden exists");
    assert_eq!(String::from_utf8_lossy(&out.stdout), expected, "{golden} mismatch");
}

#[test]
fn coeff_s_matches_golden() {
    check_golden("coeff.json", "coeff-s", "json", "coeff.expected.json");
    check_golden("coeff.json", "coeff-s", "csv", "coeff.expected.csv");
}

#[test]
fn coeff_u_on_a_single_class_prints_one() {
    check_golden("coeff_single.json", "coeff-u", "json", "coeff_single.expected.json");
    let out = run("coeff_single.json", "coeff-u", &[]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"value\": \"1\""));
}

#[test]
fn walls_match_golden() {
    check_golden("walls.json", "walls", "json", "walls.expected.json");
    check_golden("walls.json", "walls", "csv", "walls.expected.csv");
}

#[test]
fn decomp_matches_golden() {
    check_golden("decomp.json", "decomp", "json", "decomp.expected.json");
}

#[test]
fn hall_verify_matches_golden() {
    check_golden("hall.json", "hall-verify", "json", "hall.expected.json");
}

#[test]
fn transform_matches_golden() {
    check_golden("transform.json", "transform", "json", "transform.expected.json");
}

#[test]
fn series_matches_golden_in_both_modes() {
    check_golden("series.json", "series", "json", "series.expected.json");
    check_golden("series.json", "series", "csv", "series.expected.csv");
    check_golden("series_closed.json", "series", "json", "series_closed.expected.json");
}

#[test]
fn verify_matches_golden() {
    check_golden("verify.json", "verify", "json", "verify.expected.json");
}

#[test]
fn broken_tables_exit_one_with_a_pinpointed_report() {
    let out = run("verify_broken.json", "verify", &[]);
    assert_eq!(out.status.code(), Some(1));
    let expected =
        std::fs::read_to_string(golden_dir().join("verify_broken.expected.json")).unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), expected);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = run("walls.json", "walls", &[]);
    let b = run("walls.json", "walls", &[]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unknown_config_fields_exit_two() {
    let dir = std::env::temp_dir().join("wallcross-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{ "model": { "omega": [1] }, "krom": "1" }"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_wallcross"))
        .args(["--config", bad.to_str().unwrap(), "--command", "walls"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("krom"));
}

#[test]
fn missing_required_fields_exit_two_and_name_the_field() {
    // walls needs `beta`, absent from the coefficient config
    let out = run("coeff.json", "walls", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`beta`"));
}

#[test]
fn out_dir_receives_the_artifact() {
    let dir = std::env::temp_dir().join("wallcross-cli-out");
    let _ = std::fs::remove_dir_all(&dir);
    let out = run("walls.json", "walls", &["--out", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(dir.join("walls.json")).unwrap();
    let expected = std::fs::read_to_string(golden_dir().join("walls.expected.json")).unwrap();
    assert_eq!(written, expected);
}
