//! Process-level tests of the binary: exit codes, determinism, report
//! round trips.

use std::path::Path;
use std::process::{Command, Output};

fn poncelet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poncelet"))
        .args(args)
        .env_remove("PONCELET_TOL")
        .output()
        .expect("binary runs")
}

fn run_to_file(args: &[&str], path: &Path) -> Output {
    let path = path.to_str().unwrap();
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--out", path]);
    poncelet(&full)
}

#[test]
fn pyramid_run_succeeds_and_is_deterministic() {
    let a = poncelet(&["pyramid", "--n", "2", "--seed", "7", "--k", "0.1:1:5"]);
    assert_eq!(a.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&a.stderr));
    let b = poncelet(&["pyramid", "--n", "2", "--seed", "7", "--k", "0.1:1:5"]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("{\n  \"version\": \"poncelet/1\""));
    // stdout carries only the document
    assert!(text.trim_end().ends_with('}'));
}

#[test]
fn lateral_csv_has_the_documented_header() {
    let out = poncelet(&[
        "lateral", "--n", "2", "--seed", "1", "--starts", "-1:1:4", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "item_index,param_0_re,param_0_im,param_1_re,param_1_im,param_2_re,param_2_im,max_residual,verdict"
    );
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(poncelet(&["pyramid", "--n", "1", "--seed", "0"]).status.code(), Some(64));
    assert_eq!(poncelet(&["pyramid", "--seed", "0"]).status.code(), Some(64));
    assert_eq!(poncelet(&["pyramid", "--n", "2"]).status.code(), Some(64));
    assert_eq!(poncelet(&["pyramid", "--n", "2", "--seed", "0", "--unknown"]).status.code(), Some(64));
    assert_eq!(
        poncelet(&["pyramid", "--n", "2", "--seed", "0", "--k", "5:1:3"]).status.code(),
        Some(64)
    );
    // svg is reserved for plot, and plot only emits svg
    assert_eq!(
        poncelet(&["pyramid", "--n", "2", "--seed", "0", "--format", "svg"]).status.code(),
        Some(64)
    );
    assert_eq!(
        poncelet(&["plot", "--n", "2", "--seed", "0", "--format", "json"]).status.code(),
        Some(64)
    );
    assert_eq!(poncelet(&["verify"]).status.code(), Some(64));
}

#[test]
fn help_exits_zero() {
    assert_eq!(poncelet(&["--help"]).status.code(), Some(0));
}

#[test]
fn zero_family_parameter_gives_the_reference_pyramid() {
    let out = poncelet(&["pyramid", "--n", "2", "--seed", "9", "--k", "0:0:1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"ok\": 1"));
    // the roots are the configuration's own nodes
    assert!(text.contains("\"verdict\": true"));
}

#[test]
fn verify_round_trip_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("run.json");
    let out = run_to_file(
        &["pyramid", "--n", "3", "--seed", "11", "--k", "0.2:1.2:6"],
        &report,
    );
    assert_eq!(out.status.code(), Some(0));

    let verified = poncelet(&["verify", report.to_str().unwrap()]);
    assert_eq!(
        verified.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&verified.stderr)
    );
    let text = String::from_utf8(verified.stdout).unwrap();
    assert!(text.contains("\"failed\": 0"));

    // corrupt one stored root by 1e-3: verification must fail with exit 2
    let original = std::fs::read_to_string(&report).unwrap();
    let needle = "\"params\": [[";
    let pos = original.find(needle).unwrap() + needle.len();
    let end = pos + original[pos..].find(',').unwrap();
    let root: f64 = original[pos..end].parse().unwrap();
    let tampered = format!(
        "{}{:.16e}{}",
        &original[..pos],
        root + 1e-3,
        &original[end..]
    );
    let bad = dir.path().join("tampered.json");
    std::fs::write(&bad, tampered).unwrap();
    let rejected = poncelet(&["verify", bad.to_str().unwrap()]);
    assert_eq!(rejected.status.code(), Some(2));
    let text = String::from_utf8(rejected.stdout).unwrap();
    assert!(text.contains("stored parameters deviate"));
}

#[test]
fn verify_rejects_malformed_reports_with_65() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("lateral.json");
    let out = run_to_file(
        &["lateral", "--n", "2", "--seed", "3", "--starts", "-1:1:3"],
        &report,
    );
    assert_eq!(out.status.code(), Some(0));
    let broken = std::fs::read_to_string(&report)
        .unwrap()
        .replace("\"curve_degree\": 2,", "");
    let bad = dir.path().join("broken.json");
    std::fs::write(&bad, broken).unwrap();
    let rejected = poncelet(&["verify", bad.to_str().unwrap()]);
    assert_eq!(rejected.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&rejected.stderr).contains("curve_degree"));

    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(poncelet(&["verify", bad.to_str().unwrap()]).status.code(), Some(65));

    let missing = dir.path().join("absent.json");
    assert_eq!(
        poncelet(&["verify", missing.to_str().unwrap()]).status.code(),
        Some(3)
    );
}

#[test]
fn verify_lateral_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("lateral.json");
    let out = run_to_file(
        &["lateral", "--n", "3", "--seed", "5", "--starts", "-1.5:1.5:5"],
        &report,
    );
    assert_eq!(out.status.code(), Some(0));
    let verified = poncelet(&["verify", report.to_str().unwrap()]);
    assert_eq!(verified.status.code(), Some(0));
    let text = String::from_utf8(verified.stdout).unwrap();
    assert!(text.contains("\"failed\": 0"));
    assert!(text.contains("\"mode\": \"lateral\""));
}

#[test]
fn plot_is_deterministic_and_rejects_non_real_traces() {
    let dir = tempfile::tempdir().unwrap();
    let a_path = dir.path().join("a.svg");
    let b_path = dir.path().join("b.svg");
    // seed 1 traces stay real from start 0
    let a = run_to_file(&["plot", "--n", "2", "--seed", "1", "--starts", "0:0:1"], &a_path);
    assert_eq!(a.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&a.stderr));
    let b = run_to_file(&["plot", "--n", "2", "--seed", "1", "--starts", "0:0:1"], &b_path);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(std::fs::read(&a_path).unwrap(), std::fs::read(&b_path).unwrap());
    let svg = std::fs::read_to_string(&a_path).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert!(svg.contains("<polyline"));

    // seed 2 leaves the real locus from start 0: exit 4 naming the value
    let bad = poncelet(&["plot", "--n", "2", "--seed", "2", "--starts", "0:0:1", "--out", "-"]);
    assert_eq!(bad.status.code(), Some(4));
    let err = String::from_utf8_lossy(&bad.stderr);
    assert!(err.contains("non-real configuration"), "{err}");
    assert!(err.contains("closure trace from start"), "{err}");
}

#[test]
fn unwritable_output_path_exits_3() {
    let out = poncelet(&[
        "pyramid", "--n", "2", "--seed", "1", "--k", "0.5:0.5:1",
        "--out", "/nonexistent-dir/report.json",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_can_emit_csv() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("run.json");
    let out = run_to_file(&["pyramid", "--n", "2", "--seed", "4", "--k", "0.3:0.9:3"], &report);
    assert_eq!(out.status.code(), Some(0));
    let verified = poncelet(&["verify", report.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(verified.status.code(), Some(0));
    let text = String::from_utf8(verified.stdout).unwrap();
    assert!(text.starts_with("item_index,param_0_re"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn tolerance_env_override_applies() {
    // an impossible residual bound turns every item into a closure violation
    let out = Command::new(env!("CARGO_BIN_EXE_poncelet"))
        .args(["pyramid", "--n", "2", "--seed", "7", "--k", "0.5:0.5:1"])
        .env("PONCELET_TOL", "1e-18")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("closure violation"));
}
