//! Black-box tests of the binary: schemas, exit codes, reproducibility.

use std::io::Write;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_periodic-dirichlet"))
}

fn write_sequence(name: &str, json: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("pd-cli-{name}-{}.json", std::process::id()));
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(json.as_bytes()).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn decompose_matches_schema() {
    let input = write_sequence("a120", r#"{"q":3,"values":[[1,0],[2,0],[0,0]]}"#);
    let out = run(&["decompose", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let comps = v["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[0]["conductor"], 1);
    assert_eq!(comps[0]["poly"]["1"][0].as_f64().unwrap(), 1.5);
    assert_eq!(comps[0]["poly"]["3"][0].as_f64().unwrap(), -1.5);
    assert_eq!(comps[1]["conductor"], 3);
    assert_eq!(comps[1]["poly"]["1"][0].as_f64().unwrap(), -0.5);
}

#[test]
fn eval_leibniz_point() {
    let input = write_sequence("chi4", r#"{"q":4,"values":[[1,0],[0,0],[-1,0],[0,0]]}"#);
    let out = run(&["eval", "--input", input.to_str().unwrap(), "--re", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let value = v["value"][0].as_f64().unwrap();
    assert!((value - std::f64::consts::FRAC_PI_4).abs() < 1e-10);
}

#[test]
fn count_reports_the_first_l4_zero() {
    let input = write_sequence("chi4b", r#"{"q":4,"values":[[1,0],[0,0],[-1,0],[0,0]]}"#);
    let out = run(&[
        "count",
        "--input",
        input.to_str().unwrap(),
        "--rect",
        "0.2,0.8,5,7",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["count"], 1);
    let loc = &v["distinct"][0]["location"];
    assert!((loc[0].as_f64().unwrap() - 0.5).abs() < 1e-5);
    assert!((loc[1].as_f64().unwrap() - 6.0209489).abs() < 1e-4);
}

#[test]
fn scan_csv_layout() {
    let input = write_sequence("a120b", r#"{"q":3,"values":[[1,0],[2,0],[0,0]]}"#);
    let out = run(&[
        "scan",
        "--input",
        input.to_str().unwrap(),
        "--sigma1",
        "0.55",
        "--sigma2",
        "0.95",
        "--T",
        "10,20",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "T,N,Nprime,N_over_T");
    assert_eq!(lines.count(), 2);
}

#[test]
fn moment_json_has_relative_gap() {
    let input = write_sequence("eta", r#"{"q":2,"values":[[1,0],[-1,0]]}"#);
    let out = run(&[
        "moment",
        "--input",
        input.to_str().unwrap(),
        "--sigma",
        "0.75",
        "--T",
        "20",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["relativeGap"].as_f64().unwrap() >= 0.0);
    assert!(v["integralValue"].as_f64().unwrap() > 0.0);
}

#[test]
fn parse_errors_exit_2() {
    let input = write_sequence("bad", r#"{"q":3,"values":[[1,0]]}"#);
    let out = run(&["decompose", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let missing = run(&["decompose", "--input", "/nonexistent/path.json"]);
    assert_eq!(missing.status.code(), Some(2));

    // clap usage errors share the parse-error code
    let usage = bin().arg("frobnicate").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn offzero_uncertified_exits_4_with_structured_report() {
    let out = run(&[
        "offzero",
        "--q",
        "4",
        "--sigma1",
        "1.02",
        "--sigma2",
        "1.2",
        "--budget",
        "50",
        "--pmax",
        "50000",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["certificates"].as_array().unwrap().is_empty());
    assert!(v["failure"]["stage"].is_string());
    assert!(v["failure"]["required"].as_f64().unwrap() > 0.0);
}

#[test]
fn infeasible_configuration_exits_3() {
    // q = 1 has a single character: below the two-character minimum
    let out = run(&[
        "offzero", "--q", "1", "--sigma1", "1.02", "--sigma2", "1.2", "--budget", "10",
        "--pmax", "1000",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn identical_configuration_reproduces_identical_bytes() {
    let input = write_sequence("rep", r#"{"q":3,"values":[[1,0],[2,0],[0,0]]}"#);
    let args = [
        "scan",
        "--input",
        input.to_str().unwrap(),
        "--sigma1",
        "0.55",
        "--sigma2",
        "0.95",
        "--T",
        "10,20",
        "--seed",
        "42",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn sequence_roundtrip_through_emitted_json() {
    // parse(emit(x)) = x for desk-scale coefficient values
    let text = r#"{"q":4,"values":[[1.5,0.0],[0.0,-2.25],[3.0,0.5],[0.0,0.0]]}"#;
    let a: periodic_dirichlet::PeriodicSequence = serde_json::from_str(text).unwrap();
    let emitted = serde_json::to_string(&a).unwrap();
    let b: periodic_dirichlet::PeriodicSequence = serde_json::from_str(&emitted).unwrap();
    assert_eq!(a, b);
}
