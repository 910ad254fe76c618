use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracframes")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn validate_accepts_an_isometry() {
    let out = run(&["validate", &fixture("cantor4_complete.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["ok"], true);
    assert_eq!(v["family"]["isometry"], true);
}

#[test]
fn validate_reports_reasons_for_a_non_isometry() {
    let out = run(&["validate", &fixture("not_isometry.json")]);
    assert_eq!(out.status.code(), Some(1));
    let codes: Vec<String> =
        json(&out)["reasons"].as_array().unwrap().iter().map(|r| r["code"].as_str().unwrap().to_owned()).collect();
    assert!(codes.contains(&"not_isometry".to_owned()), "{codes:?}");
}

#[test]
fn verdicts() {
    let v = json(&run(&["verdict", &fixture("cantor4_complete.json")]));
    assert_eq!(v["status"], "Parseval");
    let out = run(&["verdict", &fixture("cantor4_incomplete.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "Incomplete");
    assert_eq!(v["witness"], "-1");
}

#[test]
fn verify_with_witness_and_csv() {
    let out = run(&["--level-k", "2", "verify", &fixture("cantor4_incomplete.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["witness"]["confirmed"], true);
    let out = run(&["--format", "csv", "--level-k", "2", "verify", &fixture("cantor4_complete.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("k,deviation"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn dilate_and_dot_output() {
    let out = run(&["dilate", &fixture("cantor4_complete.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["report"]["first_row_is_one"], true);
    let out = run(&["--format", "dot", "verdict", &fixture("two_cycle.json")]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("digraph"));
}

#[test]
fn out_file_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("atoms.csv");
    let out = run(&[
        "--format",
        "csv",
        "--level-k",
        "2",
        "--out",
        path.to_str().unwrap(),
        "atoms",
        &fixture("cantor4_complete.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("x0,mass"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["validate", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "dot", "validate", &fixture("cantor4_complete.json")]).status.code(), Some(2));
    assert_eq!(run(&["verdict", &fixture("planar.json")]).status.code(), Some(3));
    assert_eq!(run(&["--atom-budget", "3", "verify", &fixture("cantor4_complete.json")]).status.code(), Some(4));
    assert_eq!(run(&["verdict", &fixture("middle_third.json")]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"ifs\": ").unwrap();
    assert_eq!(run(&["validate", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, r#"{"ifs": {"R": 4, "B": [0, 2]}, "L": [3], "alpha": [1]}"#).unwrap();
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["ok"], false);
}
