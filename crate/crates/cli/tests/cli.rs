use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graph-dirac"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, name: &str, args: &[&str]) -> std::path::PathBuf {
    let path = dir.path().join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path_str(&path)]);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn square_distance_through_files() {
    let dir = TempDir::new().unwrap();
    let g = gen(&dir, "c4.txt", &["--family", "cycle", "--n", "4"]);
    let out = run(&["connes", "--graph", path_str(&g), "--from", "0", "--to", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let d = v["distance"].as_f64().unwrap();
    assert!((d - 2f64.sqrt()).abs() < 1e-6, "{d}");
    assert_eq!(v["certified"], true);
    assert!(v["kkt_residual"].as_f64().unwrap() <= 1e-7);
}

#[test]
fn json_graph_files_work_too() {
    let dir = TempDir::new().unwrap();
    let g = gen(&dir, "p5.json", &["--family", "path", "--n", "5"]);
    let text = std::fs::read_to_string(&g).unwrap();
    assert!(text.trim_start().starts_with('{'));
    let out = run(&["connes", "--graph", path_str(&g), "--from", "0", "--to", "4"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["distance"].as_f64().unwrap() - 8f64.sqrt()).abs() < 1e-5);
}

#[test]
fn check_prints_one_line_per_identity() {
    let dir = TempDir::new().unwrap();
    let g = gen(&dir, "r.txt", &["--family", "random", "--n", "12", "--p", "0.3", "--seed", "5"]);
    let out = run(&["check", "--graph", path_str(&g)]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "d*d = -2Δ: PASS"), "{text}");
    assert!(text.lines().all(|l| l.ends_with(": PASS")));
    assert!(text.lines().count() >= 10);
}

#[test]
fn spectral_on_tree_reports_degree_three() {
    let dir = TempDir::new().unwrap();
    let g = gen(&dir, "t.txt", &["--family", "tree", "--depth", "8"]);
    let out = run(&["spectral", "--graph", path_str(&g)]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["upper"].as_f64().unwrap(), 3.0);
    let est = v["estimate"].as_f64().unwrap();
    assert!(v["lower"].as_f64().unwrap() <= est && est <= 3.0);
}

#[test]
fn matrix_and_truncation_csv() {
    let dir = TempDir::new().unwrap();
    let g = gen(&dir, "p3.txt", &["--family", "path", "--n", "3"]);
    let csv = dir.path().join("m.csv");
    let out = run(&["connes-matrix", "--graph", path_str(&g), "--out", path_str(&csv)]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("from,to,distance,certified"));
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    assert_eq!(rows.len(), 9);
    let at = |a: &str, b: &str| -> f64 {
        rows.iter().find(|r| r[0] == a && r[1] == b).unwrap()[2].parse().unwrap()
    };
    assert!((at("0", "2") - 2f64.sqrt()).abs() < 1e-6);
    assert!((at("1", "2") - 1.0).abs() < 1e-6);

    let csv = dir.path().join("t.csv");
    let out = run(&["truncation", "--family", "tree", "--max-depth", "5", "--out", path_str(&csv)]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let norms: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(norms.len(), 5);
    assert!(norms.windows(2).all(|w| w[1] >= w[0]));
    assert!((norms[1] - 2.0).abs() < 1e-12);
}

#[test]
fn same_seed_same_output() {
    let a = run(&["gen", "--family", "random", "--n", "15", "--seed", "3"]);
    let b = run(&["gen", "--family", "random", "--n", "15", "--seed", "3"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn failures_exit_nonzero() {
    let dir = TempDir::new().unwrap();
    assert!(!run(&["frobnicate"]).status.success());
    assert!(!run(&["connes", "--bogus"]).status.success());
    let missing = dir.path().join("nope.txt");
    let out = run(&["spectral", "--graph", path_str(&missing)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.txt"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0 1\n1 1\n").unwrap();
    let out = run(&["check", "--graph", path_str(&bad)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let split = dir.path().join("split.txt");
    std::fs::write(&split, "0 1\n2 3\n").unwrap();
    let out = run(&["connes", "--graph", path_str(&split), "--from", "0", "--to", "3"]);
    assert!(!out.status.success());

    let g = gen(&dir, "c5.txt", &["--family", "cycle", "--n", "5"]);
    let out = run(&["connes", "--graph", path_str(&g), "--from", "0", "--to", "9"]);
    assert!(!out.status.success());
    let out = run(&["gen", "--family", "tree"]);
    assert!(!out.status.success());
}
