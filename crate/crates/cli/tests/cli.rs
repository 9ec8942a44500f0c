use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modcurv")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn derive_dimension_four() {
    let v = json(&["derive", "--dim", "4", "--operator", "laplacian"]);
    assert_eq!(v["K"], "-1/(2*s4^4)");
    assert_eq!(v["H"], "1/(s4^6*t4^4)");
    assert_eq!(v["scalar_coefficient"], "-1/12");
    let d = json(&["derive", "--dim", "4", "--operator", "dirac"]);
    assert_eq!(d["K"], "-1/(2*s4^3)");
}

#[test]
fn log_form_needs_dirac() {
    assert_eq!(run(&["derive", "--dim", "4", "--form", "log"]).status.code(), Some(2));
    let v = json(&["derive", "--dim", "6", "--operator", "dirac", "--form", "log"]);
    assert!(v["K"].as_str().unwrap().contains("f1"));
}

#[test]
fn table_lists_three_dimensions() {
    let v = json(&["table", "--dims", "4,6,8"]);
    let rows = v["table"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1]["K"], "(-2*s4^4 - s4^2 - 2)/(3*s4^8)");
    let text = String::from_utf8(run(&["table"]).stdout).unwrap();
    assert!(text.contains("m = 8"));
}

#[test]
fn eval_points_and_limits() {
    let v = json(&["eval", "--dim", "4", "--function", "K", "--at", "s=4"]);
    assert!((v["value"].as_f64().unwrap() + 0.125).abs() < 1e-15);
    let v = json(&["eval", "--dim", "4", "--function", "logK", "--at", "s=0"]);
    assert!((v["value"].as_f64().unwrap() + 0.5).abs() < 1e-9);
    let v = json(&["eval", "--dim", "4", "--function", "K_EH", "--at", "s=0"]);
    assert_eq!(v["limit"], true);
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert_eq!(run(&["eval", "--dim", "4", "--function", "H", "--at", "s=1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--dim", "4", "--function", "nope", "--at", "s=1"]).status.code(), Some(2));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "theta", "--rank", "2", "--radius", "4", "--seed", "7", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_pipeline_passes() {
    let v = json(&["verify", "--suite", "pipeline", "--seed", "7"]);
    assert_eq!(v["passed"], true);
    let checks = v["reports"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "F = reference" && c["status"] == "pass"));
}

#[test]
fn failing_checks_exit_one() {
    let out = run(&["verify", "--suite", "quadrature", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--dims", "5"]).status.code(), Some(2));
    assert_eq!(run(&["derive", "--dim", "3"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn out_writes_a_file() {
    let path = std::env::temp_dir().join(format!("modcurv-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = run(&["dump-b2", "--json", "--out", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["collected"], 38);
    std::fs::remove_file(&path).unwrap();
}
