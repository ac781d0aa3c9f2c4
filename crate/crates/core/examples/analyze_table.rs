//! Full trend analysis of a dose-response table read from CSV.
//!
//! Run with `cargo run --example analyze_table [path.csv]`.

use std::fs::File;

use monotrend::{analyze, parse_table, Alternative, AnalyzeOptions, InputFormat, Lambda};

pub const DEFAULT_TABLE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/ed_asbestosis.csv");

pub fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| DEFAULT_TABLE.to_string());
    analyze_file(&path);
}

pub fn analyze_file(path: &str) {
    let parsed = parse_table(File::open(path).expect("readable table"), InputFormat::Csv).expect("valid table");
    let report = analyze(
        &parsed.table,
        &Lambda::standard_set(),
        Alternative::Increasing,
        &AnalyzeOptions::default(),
    )
    .expect("analysis runs");
    print!("{}", report.to_text());

    let lr = report.lambda(0.0).expect("λ = 0 requested");
    println!(
        "likelihood ratio: T = {:.4}, one-sided p = {:.4}",
        lr.t.unwrap(),
        lr.p_one_sided.unwrap()
    );
}
