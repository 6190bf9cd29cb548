use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qrgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrgraph")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TRIANGLE: &str = "3\n0 1\n1 2\n0 2\n";
const TWO_BLOCK: &str = r#"{"weights":[0.5,0.5],"values":[[0.9,0.1],[0.1,0.9]]}"#;

#[test]
fn counts_paths_in_triangle() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3.txt", TRIANGLE);
    assert_eq!(stdout(&qrgraph(&["count", "--graph", s(&g), "--pattern", "P3"])).trim(), "6");
    assert_eq!(stdout(&qrgraph(&["count", "--graph", s(&g), "--pattern", "P3", "--induced"])).trim(), "0");
    assert_eq!(stdout(&qrgraph(&["count", "--graph", s(&g), "--pattern", "K2", "--subset", "0,1"])).trim(), "2");
}

#[test]
fn pattern_file_is_accepted() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3.txt", TRIANGLE);
    let f = write(&dir, "p3.txt", "3\n0 1\n1 2\n");
    assert_eq!(stdout(&qrgraph(&["count", "--graph", s(&g), "--pattern", s(&f)])).trim(), "6");
}

#[test]
fn per_vertex_sets_must_match_pattern() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "k3.txt", TRIANGLE);
    let out = qrgraph(&["count", "--graph", s(&g), "--pattern", "K2", "--set", "0", "--set", "1"]);
    assert_eq!(stdout(&out).trim(), "1");
    let out = qrgraph(&["count", "--graph", s(&g), "--pattern", "K2", "--set", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--set"));
}

#[test]
fn hf_reports_path_counterexample() {
    let out = stdout(&qrgraph(&["hf", "--pattern", "P3", "--p", "0.7"]));
    assert!(out.starts_with("counterexample"));
    assert!(out.contains("s = 0.57272727"), "{out}");

    let doc: Value = serde_json::from_str(&stdout(&qrgraph(&["hf", "--pattern", "K2", "--p", "0.4", "--json"]))).unwrap();
    assert_eq!(doc["schema"], "qrgraph.hf/1");
    assert_eq!(doc["result"]["status"], "certified-at-tolerance");
}

#[test]
fn twotype_finds_path_solution() {
    let out = stdout(&qrgraph(&["twotype", "--pattern", "P3", "--p", "0.7", "--induced", "--symmetrized"]));
    assert!(out.contains("s = 0.57272727"), "{out}");
}

#[test]
fn half_cut_carries_annotation() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    stdout(&qrgraph(&["generate", "--gnp", "30", "0.5", "--seed", "4", "--out", s(&g)]));
    let out = stdout(&qrgraph(&["qr", "--graph", s(&g), "--property", "cut", "--p", "0.5", "--gamma", "0.5", "--samples", "100", "--json"]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["schema"], "qrgraph.qr/1");
    assert_eq!(doc["result"]["property"], "cut-fixed-size");
    assert_eq!(doc["result"]["annotation"], "γ=1/2: not forcing without regularity");
    assert_eq!(doc["config"]["parameters"]["seed"], 0);
    assert_eq!(doc["result"]["witness"][0].as_array().unwrap().len(), 15);
}

#[test]
fn generate_round_trips() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.txt");
    let printed = stdout(&qrgraph(&["generate", "--gnp", "25", "0.3", "--seed", "9"]));
    stdout(&qrgraph(&["generate", "--gnp", "25", "0.3", "--seed", "9", "--out", s(&g)]));
    assert_eq!(fs::read_to_string(&g).unwrap(), printed);

    let parsed = qrgraph::graph::parse_graph(&printed).unwrap();
    assert_eq!(parsed.to_edge_list(), printed);
    assert_eq!(parsed, qrgraph::Graph::gnp(25, 0.3, 9));
    let edges = stdout(&qrgraph(&["count", "--graph", s(&g), "--pattern", "K2"]));
    assert_eq!(edges.trim().parse::<usize>().unwrap(), 2 * parsed.edge_count());
}

#[test]
fn json_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", &qrgraph::Graph::gnp(24, 0.5, 1).to_edge_list());
    let args = ["qr", "--graph", s(&g), "--property", "hereditary-single", "--p", "0.5", "--pattern", "K2", "--gamma", "0.5", "--json"];
    let first = qrgraph(&args).stdout;
    assert_eq!(first, qrgraph(&args).stdout);
    let cut = ["qr", "--graph", s(&g), "--property", "cut", "--p", "0.5", "--samples", "300", "--seed", "5", "--json"];
    assert_eq!(qrgraph(&cut).stdout, qrgraph(&cut).stdout);
}

#[test]
fn kernel_commands() {
    let dir = TempDir::new().unwrap();
    let w = write(&dir, "w.json", TWO_BLOCK);
    let c = write(&dir, "c.json", r#"{"weights":[0.5,0.5],"values":[[0.5,0.5],[0.5,0.5]]}"#);
    let norm: f64 = stdout(&qrgraph(&["cutnorm", "--kernel", s(&w), "--minus", s(&c)])).lines().next().unwrap().parse().unwrap();
    assert!((norm - 0.1).abs() < 1e-12, "{norm}");
    let t: f64 = stdout(&qrgraph(&["density", "--pattern", "K2", "--kernel", s(&w)])).trim().parse().unwrap();
    assert!((t - 0.5).abs() < 1e-12);
    let b = write(&dir, "b.json", "[[1,1],[1,1]]");
    let full: f64 = stdout(&qrgraph(&["boxint", "--pattern", "K2", "--kernel", s(&w), "--boxes", s(&b)])).trim().parse().unwrap();
    assert!((full - t).abs() < 1e-12);
}

#[test]
fn convergence_csv() {
    let out = stdout(&qrgraph(&["converge", "--gnp-sizes", "10,20", "--p", "0.5", "--pattern", "K2", "--csv"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,pattern,deviation");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("10,K2,"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["hf", "--pattern", "P3", "--p", "1.5"][..],
        &["hf", "--pattern", "nonsense", "--p", "0.5"],
        &["frobnicate"],
        &["qr", "--graph", "x", "--property", "cut"],
    ] {
        let out = qrgraph(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(err.trim().lines().count(), 1, "{err}");
    }
}

#[test]
fn disjoint_half_gamma_is_rejected() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.txt", &qrgraph::Graph::gnp(20, 0.5, 2).to_edge_list());
    let args = ["qr", "--graph", s(&g), "--property", "hereditary-disjoint", "--p", "0.5", "--pattern", "K2", "--gamma", "0.5"];
    let out = qrgraph(&args);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--gamma"));
    let mut allowed = args.to_vec();
    allowed.push("--allow-boundary-gamma");
    let doc: Value = serde_json::from_str(&stdout(&qrgraph(&[&allowed[..], &["--json"]].concat()))).unwrap();
    assert_eq!(doc["result"]["annotation"], "γ=1/f: boundary case, no verdict");
}

#[test]
fn runtime_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("missing.txt");
    let out = qrgraph(&["count", "--graph", s(&missing), "--pattern", "K2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--graph") && err.contains("missing.txt"), "{err}");

    let bad = write(&dir, "bad.txt", "3\n0 0\n");
    let out = qrgraph(&["count", "--graph", s(&bad), "--pattern", "K2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn help_exits_zero() {
    let out = qrgraph(&["--help"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("Usage"));
}
