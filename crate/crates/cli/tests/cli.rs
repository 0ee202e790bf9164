use std::process::{Command, Output};

use serde_json::Value;

fn charcycle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charcycle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_json(path: &std::path::Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn fermat_cubic_nearby_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = charcycle(&[
        "analyze",
        "--poly",
        "x^3+y^3+z^3",
        "--vars",
        "x,y,z",
        "--mode",
        "nearby",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let v = read_json(&path);
    assert_eq!(v["schema"], "charcycle/1");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["result"]["invariants"]["lagrange_count"], 12);
    assert_eq!(v["result"]["invariants"]["milnor"], 8);
    assert_eq!(v["result"]["invariants"]["section_milnor"], 4);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("[T*_Z_reg] + 12[T*_0]"));
}

#[test]
fn normal_crossings_vanishing_passes() {
    let out = charcycle(&[
        "analyze",
        "--poly",
        "x*y*z",
        "--vars",
        "x,y,z",
        "--mode",
        "vanishing",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        stdout.contains("cycle: -[T*_L1] - [T*_L2] - [T*_L3] + 2[T*_0]"),
        "{stdout}"
    );
}

#[test]
fn smooth_point_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = charcycle(&[
        "analyze",
        "--poly",
        "x",
        "--vars",
        "x",
        "--mode",
        "nearby",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(read_json(&path)["error"]["code"], "smooth-point");
}

#[test]
fn bad_arguments() {
    assert_eq!(
        charcycle(&["analyze", "--poly", "x^2", "--vars", "x", "--mode", "sideways"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(charcycle(&["--help"]).status.code(), Some(0));
    let out = charcycle(&[
        "analyze",
        "--poly",
        "x^2+q",
        "--vars",
        "x",
        "--mode",
        "vanishing",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("unknown-variable"));
}

#[test]
fn user_schedule_and_form() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = charcycle(&[
        "analyze",
        "--poly",
        "x^3-y^2",
        "--vars",
        "x,y",
        "--mode",
        "real-nearby",
        "--schedule",
        "0.1,1/100,1e-3",
        "--form=-1,0",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = read_json(&path);
    assert_eq!(
        v["result"]["schedule"],
        serde_json::json!(["1/10", "1/100", "1/1000"])
    );
    assert_eq!(v["result"]["invariants"]["signed_counts"]["+dphi"], -1);
    assert_eq!(v["result"]["invariants"]["signed_counts"]["-dphi"], 1);
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("r{k}.json"));
        let args = [
            "analyze",
            "--poly",
            "x^4+y^2",
            "--vars",
            "x,y",
            "--mode",
            "vanishing",
            "--seed",
            "5",
        ];
        let out = charcycle(&[&args[..], &["--json", path.to_str().unwrap()]].concat());
        assert_eq!(out.status.code(), Some(0));
        let mut v = read_json(&path);
        v["timing"] = Value::Null;
        texts.push(serde_json::to_string(&v).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn degree_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_charcycle"))
        .args([
            "analyze",
            "--poly",
            "x^30+y^2",
            "--vars",
            "x,y",
            "--mode",
            "vanishing",
        ])
        .env("CHARCYCLE_DEGREE_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("undecided"));
}

#[test]
fn suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("suite.json");
    let out = charcycle(&["suite", "--seed", "2", "--json", path.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let v = read_json(&path);
    assert_eq!(v["command"], "suite");
    let entries = v["entries"].as_array().unwrap();
    assert!(entries.len() >= 20);
    assert!(entries.iter().all(|e| e["status"] == "pass"));
}
