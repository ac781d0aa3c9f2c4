use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_monotrend");

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn monotrend(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn lambda_row(report: &Value, lambda: f64) -> &Value {
    report["lambda_results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| (r["lambda"].as_f64().unwrap() - lambda).abs() < 1e-12)
        .unwrap()
}

#[test]
fn analyze_asbestosis_increasing() {
    let input = data("ed_asbestosis.csv");
    let out = monotrend(&["analyze", "--input", input.to_str().unwrap(), "--alternative", "increasing"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    let lr = lambda_row(&report, 0.0);
    assert!((lr["t"].as_f64().unwrap() - 6.7664).abs() < 5e-5);
    assert!((lr["p_one_sided"].as_f64().unwrap() - 0.0046).abs() < 5e-5);
    assert_eq!(report["lambda_results"].as_array().unwrap().len(), 7);
    assert_eq!(report["direction"], "increasing");
    assert_eq!(report["gof_flag"], false);
    assert!(report["ca"]["statistic"].is_number());
}

#[test]
fn analyze_json_input_and_text_output() {
    let input = data("cei_pleural_plaques.json");
    let out = monotrend(&["analyze", "--input", input.to_str().unwrap(), "--format", "text", "--lambdas", "0,2/3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("lambda"));
    assert!(text.contains("Cochran-Armitage"));
}

#[test]
fn successes_exceeding_trials_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(&dir, "bad.csv", "dose,n,successes\n0,10,2\n1,10,12\n2,10,4\n");
    let out = monotrend(&["analyze", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("row 2"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn homogeneous_two_group_table() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(&dir, "two_groups.csv", "dose,n,successes\n0,10,3\n1,10,3\n");
    let out = monotrend(&["analyze", "--input", input.to_str().unwrap(), "--lambdas", "0", "--alternative", "increasing"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    let row = lambda_row(&report, 0.0);
    assert!(row["t"].as_f64().unwrap().abs() < 1e-10);
    assert_eq!(row["p_one_sided"].as_f64().unwrap(), 1.0);
    assert!(row["p_gof"].is_null(), "saturated model has no goodness-of-fit test");
}

#[test]
fn fit_failure_writes_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(&dir, "separated.csv", "dose,n,successes\n0,10,0\n1,10,0\n2,10,10\n");
    let out_path = dir.path().join("report.json");
    let out = monotrend(&["analyze", "--input", input.to_str().unwrap(), "--output", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(report["ca"]["statistic"].is_number());
    assert!(!report["errors"].as_array().unwrap().is_empty());
}

#[test]
fn unsorted_rows_warn() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(&dir, "unsorted.csv", "dose,n,successes\n2,10,5\n0,10,2\n1,10,3\n");
    let out = monotrend(&["analyze", "--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stderr).unwrap().contains("reordered"));
}

#[test]
fn simulate_row_count() {
    let out = monotrend(&["simulate", "--scenario", "1", "--tests", "ca,pd:0.6667,pd:0", "--reps", "200", "--seed", "42", "--sided", "two"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "scenario,test,lambda,sidedness,p,beta,reps,rejections,rate,se,degenerate");
    assert_eq!(lines.count(), 29 * 3);
}

#[test]
fn simulate_is_reproducible() {
    let args = ["simulate", "--scenario", "2", "--tests", "ca,pd:0", "--reps", "300", "--seed", "9", "--grid-points", "5"];
    let a = monotrend(&args);
    let b = monotrend(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn simulate_rejects_invalid_input() {
    assert_eq!(monotrend(&["simulate", "--reps", "0"]).status.code(), Some(2));
    assert_eq!(monotrend(&["simulate", "--scenario", "7"]).status.code(), Some(2));
    assert_eq!(monotrend(&["simulate", "--tests", "wald"]).status.code(), Some(2));
    let out = Command::new(BIN)
        .args(["simulate", "--reps", "10"])
        .env("MONOTREND_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_from_config_file() {
    let config = data("scenario1_config.json");
    let out = monotrend(&["simulate", "--config", config.to_str().unwrap(), "--reps", "100", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let result = json(&out);
    assert_eq!(result["rows"].as_array().unwrap().len(), 5 * 3);
    assert_eq!(result["master_seed"], 20240917);
}
