use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netextremes"))
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .env("NETEXTREMES_TEST_MODE", "1")
        .output()
        .expect("binary runs")
}

fn ok_json(dir: &Path, args: &[&str]) -> Value {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const STAR: &str = "# star with hub 0\n0 1\n0 2\n0 3\n0 4\n0 5\n";

#[test]
fn degrees_of_two_edge_path() {
    let tmp = TempDir::new().unwrap();
    let f = write(&tmp, "g.txt", "# toy\n1 2\n2 3\n");
    let v = ok_json(tmp.path(), &["degrees", &f]);
    assert_eq!(v["n"], 3);
    assert_eq!(v["max_degree"], 2);
    assert_eq!(v["edge_count"], 2);
    let text = std::fs::read_to_string(tmp.path().join("degrees.txt")).unwrap();
    assert_eq!(text, "1\n2\n1\n");
    assert!(tmp.path().join("degrees.manifest.json").exists());
}

#[test]
fn empty_input_is_a_parse_error() {
    let tmp = TempDir::new().unwrap();
    let f = write(&tmp, "e.txt", "# only comments\n\n");
    let out = run(tmp.path(), &["degrees", &f, "--format", "snap"]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.starts_with("error[parse]"), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1);
}

#[test]
fn malformed_line_reports_line_number() {
    let tmp = TempDir::new().unwrap();
    let f = write(&tmp, "bad.txt", "1 2\n3 x\n");
    let out = run(tmp.path(), &["degrees", &f]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains('2'));
}

#[test]
fn missing_file_is_io_error() {
    let tmp = TempDir::new().unwrap();
    let out = run(tmp.path(), &["degrees", "/nonexistent/graph.txt"]);
    assert!(stderr(&out).starts_with("error[io]"));
}

#[test]
fn hill_on_powers_of_two() {
    let tmp = TempDir::new().unwrap();
    let f = write(&tmp, "d.txt", "1\n2\n4\n8\n16\n");
    let v = ok_json(tmp.path(), &["tail", &f, "--k", "2", "--method", "hill"]);
    let g = v["estimates"][0]["gamma"].as_f64().unwrap();
    assert!((g - 1.0397207708399179).abs() < 1e-12);
    assert!(tmp.path().join("tail_curve.csv").exists());
}

#[test]
fn zero_k_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    let f = write(&tmp, "d.txt", "1\n2\n4\n8\n16\n");
    let out = run(tmp.path(), &["tail", &f, "--k", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error[usage]"));
}

#[test]
fn tail_needs_k_or_bootstrap() {
    let tmp = TempDir::new().unwrap();
    let f = write(&tmp, "d.txt", "1\n2\n4\n");
    let out = run(tmp.path(), &["tail", &f]);
    assert!(stderr(&out).starts_with("error[usage]"));
}

#[test]
fn bootstrap_requires_seed_in_test_mode() {
    let tmp = TempDir::new().unwrap();
    let body: String = (1..=200).map(|i| format!("{i}\n")).collect();
    let f = write(&tmp, "d.txt", &body);
    let out = run(tmp.path(), &["tail", &f, "--bootstrap", "20"]);
    assert!(stderr(&out).contains("--seed"));
}

#[test]
fn bootstrap_is_reproducible() {
    let tmp = TempDir::new().unwrap();
    let body: String = (1..=400u64)
        .map(|i| format!("{}\n", ((((i * 7919) % 400) as f64 + 0.5).powf(-0.7) * 1e4).round() as u64))
        .collect();
    let f = write(&tmp, "d.txt", &body);
    let args = ["tail", &f, "--bootstrap", "20", "--seed", "7", "--method", "hill"];
    let a = ok_json(tmp.path(), &args);
    let b = ok_json(tmp.path(), &args);
    assert_eq!(a["estimates"], b["estimates"]);
    assert_eq!(a["k"], b["k"]);
}

#[test]
fn rate_examples() {
    let tmp = TempDir::new().unwrap();
    let v = ok_json(tmp.path(), &["rate", "--alpha", "1.337", "--proposal", "heavy:0.01"]);
    assert!((v["v"].as_f64().unwrap() - 33.7).abs() < 1e-12);
    let v = ok_json(tmp.path(), &["rate", "--alpha", "1.028", "--proposal", "heavy:0.01"]);
    assert!((v["v"].as_f64().unwrap() - 2.8).abs() < 1e-12);
    let v = ok_json(tmp.path(), &["rate", "--r", "1", "--proposal", "finite"]);
    assert!((v["v"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn fht_model_with_given_theta() {
    let tmp = TempDir::new().unwrap();
    let body: String = (1..=100).map(|i| format!("{i}\n")).collect();
    let f = write(&tmp, "d.txt", &body);
    let v = ok_json(tmp.path(), &["fht", &f, "--rho", "0.05", "--theta", "0.3"]);
    assert!((v["rho_effective"].as_f64().unwrap() - 0.05).abs() < 1e-12);
    let m = v["mean_scaled"].as_f64().unwrap();
    assert!((m - 1.0 / (0.05 * 0.027)).abs() < 1e-6);
    assert!(tmp.path().join("fht_pmf.csv").exists());
}

#[test]
fn theta_default_grid_on_distinct_values() {
    let tmp = TempDir::new().unwrap();
    let body: String = (0..500u64).map(|i| format!("{}\n", (i * 7919) % 500 + 1)).collect();
    let f = write(&tmp, "d.txt", &body);
    let v = ok_json(tmp.path(), &["theta", &f]);
    let t = v["theta"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&t));
    assert_eq!(v["window_w"], 10);
}

#[test]
fn star_walk_hits_hub_within_two_steps() {
    let tmp = TempDir::new().unwrap();
    let f = write(&tmp, "star.txt", STAR);
    let v = ok_json(
        tmp.path(),
        &[
            "walk", &f, "--walker", "srw", "--threshold", "1", "--runs", "50", "--max-steps", "10",
            "--seed", "3",
        ],
    );
    assert_eq!(v["censored_count"], 0);
    let csv = std::fs::read_to_string(tmp.path().join("fht_runs.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let step: usize = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(step == 1 || step == 2, "{line}");
    }
}

#[test]
fn unreachable_threshold_is_censored() {
    let tmp = TempDir::new().unwrap();
    let f = write(&tmp, "star.txt", STAR);
    let v = ok_json(
        tmp.path(),
        &[
            "walk", &f, "--walker", "mhrw", "--threshold", "100", "--runs", "5", "--max-steps", "20",
            "--seed", "1",
        ],
    );
    assert_eq!(v["censored_count"], 5);
    assert_eq!(v["all_censored"], true);
}

#[test]
fn one_step_below_threshold_is_censored() {
    let tmp = TempDir::new().unwrap();
    let f = write(&tmp, "star.txt", STAR);
    let v = ok_json(
        tmp.path(),
        &[
            "walk", &f, "--walker", "srw", "--start", "1", "--threshold", "2", "--runs", "4",
            "--max-steps", "1", "--seed", "2",
        ],
    );
    assert_eq!(v["censored_count"], 4);
}

#[test]
fn constant_input_has_no_mean_excess_curve() {
    let tmp = TempDir::new().unwrap();
    let f = write(&tmp, "c.txt", "3\n3\n3\n3\n");
    let out = run(tmp.path(), &["mex", &f]);
    assert!(!out.status.success());
    assert!(stderr(&out).starts_with("error["));
}

#[test]
fn walk_is_reproducible_and_writes_trace() {
    let tmp = TempDir::new().unwrap();
    let f = write(&tmp, "star.txt", STAR);
    let trace = tmp.path().join("trace.txt");
    let trace = trace.to_str().unwrap();
    let args = [
        "walk", &f, "--walker", "mhrw", "--threshold-rho", "0.2", "--runs", "30", "--max-steps",
        "100", "--seed", "11", "--trace", trace,
    ];
    let a = ok_json(tmp.path(), &args);
    let csv_a = std::fs::read_to_string(tmp.path().join("fht_runs.csv")).unwrap();
    let b = ok_json(tmp.path(), &args);
    let csv_b = std::fs::read_to_string(tmp.path().join("fht_runs.csv")).unwrap();
    assert_eq!(a["mean"], b["mean"]);
    assert_eq!(csv_a, csv_b);
    assert_eq!(std::fs::read_to_string(trace).unwrap().lines().count(), 100);
}

#[test]
fn walk_start_must_exist() {
    let tmp = TempDir::new().unwrap();
    let f = write(&tmp, "star.txt", STAR);
    let out = run(
        tmp.path(),
        &["walk", &f, "--walker", "srw", "--start", "42", "--threshold", "1", "--seed", "1"],
    );
    assert!(stderr(&out).starts_with("error[usage]"));
}

#[test]
fn metropolis_walk_runs_without_input() {
    let tmp = TempDir::new().unwrap();
    let v = ok_json(
        tmp.path(),
        &[
            "walk", "--walker", "metropolis", "--target", "exp:1", "--proposal", "gauss:1",
            "--threshold-rho", "0.1", "--runs", "20", "--max-steps", "1000", "--seed", "5",
        ],
    );
    let acc = v["acceptance_rate"].as_f64().unwrap();
    assert!(acc > 0.0 && acc < 1.0);
}

#[test]
fn gzip_input_is_read() {
    use std::io::Write;
    let tmp = TempDir::new().unwrap();
    let p = tmp.path().join("g.txt.gz");
    let mut enc = flate2_writer(&p);
    enc.write_all(b"1 2\n2 3\n").unwrap();
    enc.finish().unwrap();
    let v = ok_json(tmp.path(), &["degrees", p.to_str().unwrap()]);
    assert_eq!(v["n"], 3);
}

fn flate2_writer(p: &Path) -> flate2::write::GzEncoder<std::fs::File> {
    flate2::write::GzEncoder::new(std::fs::File::create(p).unwrap(), flate2::Compression::default())
}
