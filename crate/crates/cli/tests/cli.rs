use std::path::Path;
use std::process::{Command, Output};

use ergm_cluster::ensemble::EnsembleResult;
use ergm_cluster::expansion::KpVerdict;
use ergm_cluster::report::ExpansionReport;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ergm-cluster"))
        .args(args)
        .env_remove("ERGM_CLUSTER_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn num(v: &Value) -> f64 {
    match v {
        Value::Number(n) => n.as_f64().unwrap(),
        Value::String(s) => ergm_cluster::numfmt::parse_f64(s).unwrap(),
        other => panic!("not a number: {other}"),
    }
}

#[test]
fn density_of_four_vertex_example() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g4.json", r#"{"n": 4, "edges": [[0,1],[0,3],[1,2],[1,3]]}"#);
    let v = stdout_json(&run(&["density", "--motif", "two-star", "--n", "4", "--graph", &g]));
    assert_eq!(v["rows"][0]["density"], "18/64");
    assert_eq!(v["rows"][0]["hom_count"], 18);
}

#[test]
fn density_csv_and_weighted_sum() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g4.json", r#"{"n": 4, "edges": [[0,1],[0,3],[1,2],[1,3]]}"#);
    let v = stdout_json(&run(&["density", "--motif", "edge,two-star", "--beta", "1,1", "--graph", &g]));
    assert!((num(&v["weighted_density"]) - (0.5 + 18.0 / 64.0)).abs() < 1e-15);
    let out = run(&["density", "--motif", "two-star", "--graph", &g, "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("motif,hom_count,density,value\n"));
    assert!(text.contains("two-star,18,18/64,"));
}

#[test]
fn exact_uniform_measure() {
    let v = stdout_json(&run(&["exact", "--motifs", "edge", "--beta", "0", "--n", "4"]));
    let row: EnsembleResult = serde_json::from_value(v["rows"][0].clone()).unwrap();
    assert!((row.psi_n - 6.0 * std::f64::consts::LN_2 / 16.0).abs() < 1e-15);
    assert_eq!(row.log_w_normalized, 0.0);
}

#[test]
fn exact_accepts_negative_betas_and_ranges() {
    let out = run(&["exact", "--motif", "edge,triangle", "--beta", "-0.1,0.2", "--n", "3", "--n-max", "5", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().nth(1).unwrap().starts_with("3,-1.0000000000000001e-1,"));
}

#[test]
fn region_reports_optimal_m_and_budget() {
    let v = stdout_json(&run(&["region", "--p", "2", "--m", "3"]));
    let m = num(&v["M"]);
    assert!((m.ln() - (3f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
    assert!((num(&v["beta_budget"]) - 0.002_684_6).abs() < 1e-6);
}

#[test]
fn region_rejects_edge_only_family() {
    let out = run(&["region", "--motif", "edge"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "unsupported");
}

#[test]
fn expand_report_round_trips_and_converges() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&[
        "expand", "--motif", "two-star", "--beta", "0.0013", "--n", "4", "--output", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let report: ExpansionReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report.kp.verdict, KpVerdict::Pass);
    let gaps: Vec<f64> = report.orders.iter().map(|r| r.gap_to_exact.unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", text);
}

#[test]
fn divergent_tail_is_a_result_not_an_error() {
    let v = stdout_json(&run(&["expand", "--motif", "two-star", "--beta", "0.1", "--n", "4", "--order", "2"]));
    assert_eq!(v["kp"]["verdict"], "fail");
    assert_eq!(v["kp"]["max_site_sum"], "inf");
}

#[test]
fn coeffs_table() {
    let v = stdout_json(&run(&["coeffs", "--p", "2", "--n-max", "5"]));
    let gammas: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["gamma"].as_str().unwrap()).collect();
    assert_eq!(gammas, ["1", "2", "5", "14", "42"]);
    assert_eq!(v["generating_function_ok"], true);
    assert!((num(&v["tail_sum"]) - num(&v["M"]).ln()).abs() < 1e-12);
}

#[test]
fn represent_two_star() {
    let v = stdout_json(&run(&["represent", "--motif", "two-star", "--beta", "1", "--n", "4"]));
    let family = &v["motifs"][0];
    assert_eq!(family["entries"].as_array().unwrap().len(), 18);
    assert!(family["entries"].as_array().unwrap().iter().all(|e| e["density"] == "2/64"));
    assert_eq!(family["graphs_checked"], 64);
    assert_eq!(family["representation_holds"], true);
    assert_eq!(num(&v["banach_norm"]), 2.5);
}

#[test]
fn seeded_sweeps_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (path, threads) in [(&a, "1"), (&b, "3")] {
        let out = run(&[
            "exact", "--motif", "edge,two-star", "--n", "4", "--samples", "5", "--seed", "11", "--format", "csv",
            "--threads", threads, "--output", path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let left = std::fs::read(&a).unwrap();
    assert_eq!(left, std::fs::read(&b).unwrap());
    assert_eq!(String::from_utf8(left).unwrap().lines().count(), 6);
}

#[test]
fn config_file_fills_missing_flags_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.json", r#"{"n": 3, "motifs": ["edge"], "betas": [0.3]}"#);
    let v = stdout_json(&run(&["exact", "--config", &cfg]));
    assert_eq!(v["rows"][0]["n"], 3);
    assert_eq!(num(&v["rows"][0]["betas"][0]), 0.3);
    let v = stdout_json(&run(&["exact", "--config", &cfg, "--n", "4", "--beta", "0.1"]));
    assert_eq!(v["rows"][0]["n"], 4);
    assert_eq!(num(&v["rows"][0]["betas"][0]), 0.1);
}

#[test]
fn bad_config_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.json", r#"{"vertices": 3}"#);
    let out = run(&["exact", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "invalid_input");
}

#[test]
fn exit_codes() {
    let out = run(&["exact", "--motif", "edge,two-star", "--beta", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "invalid_input");

    let out = run(&["exact", "--motif", "edge", "--n", "9"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "guard_exceeded");

    let out = run(&["exact", "--motif", "nonesuch"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "invalid_input");
}

#[test]
fn motif_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "path3.json", r#"{"name": "path", "m": 4, "edges": [[0,1],[1,2],[2,3]]}"#);
    let v = stdout_json(&run(&["represent", "--motif", &path, "--n", "4"]));
    assert_eq!(v["motifs"][0]["motif"], "path");
    assert_eq!(v["motifs"][0]["representation_holds"], true);
}
