use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn itlag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itlag")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("itlag-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn sphere_nerves_pass() {
    let out = itlag(&["verify", "sphere-nerves"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["suite"], "sphere-nerves");
    assert_eq!(r["cases"].as_array().unwrap().len(), 4);
    assert_eq!(r["cases"][2]["observed"], "reduced H_2 = Q^1");
}

#[test]
fn moebius_case_fails_with_degree_two_witness() {
    let out = itlag(&["verify", "lefschetz", "--case", "moebius"]);
    assert!(out.status.success(), "the negative control fails as expected");
    let r = json(&out);
    let m = r["cases"].as_array().unwrap().iter().find(|c| c["id"] == "moebius").unwrap().clone();
    assert_eq!(m["verdict"], "fail");
    assert!(m["witness"].as_str().unwrap().contains("degree 2"));
}

#[test]
fn reports_are_byte_identical() {
    let a = itlag(&["verify", "deloop", "--seed", "11"]);
    let b = itlag(&["verify", "deloop", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 11);
}

#[test]
fn out_file_and_text_format() {
    let dir = std::env::temp_dir().join(format!("itlag-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.txt");
    let out = itlag(&["verify", "coinitiality", "--format", "text", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("coinitiality PASS"));
}

#[test]
fn zero_complex_has_an_all_zero_table() {
    let f = scratch("zero.json", r#"{"degrees": {"0": 2, "1": 2}, "d": {"0": [["1", "0"], ["0", "1"]]}}"#);
    let out = itlag(&["homology", "--file", f.to_str().unwrap()]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["homology"], serde_json::json!({"0": 0, "1": 0}));
}

#[test]
fn malformed_input_reports_a_location() {
    let f = scratch("bad.json", "{\"degrees\": {\"0\": 2,\n");
    let out = itlag(&["homology", "--file", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.json:2:"), "{err}");
}

#[test]
fn semantic_errors_name_the_file() {
    let f = scratch("nonsquare.json", r#"{"degrees": {"0": 2, "1": 1}, "d": {"0": [["1", "0"], ["0", "1"]]}}"#);
    let out = itlag(&["homology", "--file", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("nonsquare.json"));
}

#[test]
fn failing_checks_exit_one() {
    let out = itlag(&["cobordism", "--name", "moebius"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["lefschetz"]["witness"], 2);
    assert!(itlag(&["cobordism", "--name", "cylinder"]).status.success());
}

#[test]
fn shapes_and_dot() {
    let out = itlag(&["tw", "sigma(1)"]);
    assert_eq!(json(&out)["elements"].as_array().unwrap().len(), 6);
    let dot = itlag(&["export-dot", "sp(1)", "--format", "text"]);
    assert!(String::from_utf8(dot.stdout).unwrap().starts_with("digraph"));
    assert_eq!(itlag(&["shape", "nonsense(1)"]).status.code(), Some(2));
}

#[test]
fn unknown_suite_and_case() {
    assert_eq!(itlag(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(itlag(&["verify", "spine", "--case", "nope"]).status.code(), Some(2));
    assert_eq!(itlag(&["verify", "all", "--case", "n1"]).status.code(), Some(2));
}
