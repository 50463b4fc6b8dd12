//! End-to-end tests of the `equiclass` binary: the documented example
//! invocations, error-path exit codes, file round trips, and byte-stable
//! `verify` output.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn equiclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equiclass"))
        .args(args)
        .env_remove("EQUICLASS_MAX_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("stdout is utf-8")
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn classify_example() {
    let out = equiclass(&["classify", "S3", "C3", "C3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), r#"{"classes": 3}"#);
}

#[test]
fn schur_example() {
    let out = equiclass(&["schur", "C2xC2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), r#"{"invariant_factors": [2]}"#);
}

#[test]
fn group_subgroups_example() {
    let out = equiclass(&["group", "C4", "--subgroups"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["order"], 4);
    assert_eq!(v["subgroups"].as_array().unwrap().len(), 3);
}

#[test]
fn bad_spec_is_a_machine_readable_usage_error() {
    let out = equiclass(&["group", "Z9"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["error"], "UnsupportedSpec");
    assert!(v["detail"].as_str().unwrap().contains("Z9"));
}

#[test]
fn bad_flag_is_a_usage_error() {
    let out = equiclass(&["--bogus", "group", "C2"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["error"], "Usage");
}

#[test]
fn max_order_env_mirrors_the_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_equiclass"))
        .args(["group", "S3"])
        .env("EQUICLASS_MAX_ORDER", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["error"], "OrderOverflow");
}

#[test]
fn cayley_table_file_specs_work() {
    let path = tmp("k4-table.txt");
    fs::write(&path, "4\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n").unwrap();
    let spec = format!("@{}", path.display());
    let out = equiclass(&["schur", &spec]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), r#"{"invariant_factors": [2]}"#);
}

#[test]
fn bundle_roundtrips_through_its_serialization() {
    let path = tmp("bundle.json");
    let out = equiclass(&["bundle", "C4", "C3", "--seed", "7"]);
    assert!(out.status.success());
    fs::write(&path, stdout(&out)).unwrap();
    let input = path.display().to_string();
    let out = equiclass(&["bundle", "--input", &input, "--check"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["valid"], true);
    assert_eq!(v["roundtrip"], true);
}

#[test]
fn corrupted_bundle_is_rejected() {
    let path = tmp("bad-bundle.json");
    let out = equiclass(&["bundle", "C2", "C2"]);
    let mut v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // Break equivariance of the projection.
    v["projection"][0] = serde_json::json!(1);
    fs::write(&path, v.to_string()).unwrap();
    let input = path.display().to_string();
    let out = equiclass(&["bundle", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conjugate_recovers_a_conjugator_from_files() {
    let a = tmp("rep-a.json");
    let b = tmp("rep-b.json");
    fs::write(&a, "[[[1,0],[0,0],[0,0],[1,0]], [[1,0],[0,0],[0,0],[-1,0]]]").unwrap();
    fs::write(&b, "[[[1,0],[0,0],[0,0],[1,0]], [[-1,0],[0,0],[0,0],[1,0]]]").unwrap();
    let (a, b) = (a.display().to_string(), b.display().to_string());
    let out = equiclass(&["conjugate", &a, &b, "--group", "C2"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["residual"].as_f64().unwrap() <= 1e-8);

    // The same pair under --separation is a validation error: they are
    // conjugate, so no separation bound applies.
    let out = equiclass(&["conjugate", &a, &b, "--group", "C2", "--separation", "10"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["error"], "Conjugate");
}

#[test]
fn twisted_lifts_extract_the_pauli_class() {
    let path = tmp("pauli.json");
    fs::write(
        &path,
        "[[[1,0],[0,0],[0,0],[1,0]], [[0,0],[1,0],[1,0],[0,0]], \
         [[0,0],[0,-1],[0,1],[0,0]], [[1,0],[0,0],[0,0],[-1,0]]]",
    )
    .unwrap();
    let lifts = path.display().to_string();
    let out = equiclass(&["twisted", "K4", "--lifts", &lifts]);
    assert!(out.status.success(), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dims"], serde_json::json!([2]));
    assert_eq!(v["trivial"], false);
}

#[test]
fn report_targets_parse() {
    let out = equiclass(&["report", "--target", "un:2", "--isotropy", "C2", "--degree", "4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["count"], 3);
    let out = equiclass(&["report", "--target", "nope", "--isotropy", "C2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_single_criterion_and_range_check() {
    let out = equiclass(&["verify", "--criterion", "9"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let out = equiclass(&["verify", "--criterion", "16"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_output_is_byte_identical_across_runs() {
    let first = equiclass(&["verify", "--seed", "0"]);
    assert!(first.status.success(), "{}", stdout(&first));
    let second = equiclass(&["verify", "--seed", "0"]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(stdout(&first).lines().count(), 16, "15 criteria plus a summary");
}
