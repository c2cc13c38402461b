use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_krylov-walk"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("krylov-walk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn generated(args: &[&str]) -> String {
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert!(o.status.success());
    stdout(&o)
}

#[test]
fn compute_from_files() {
    let cases = [
        ("path5.txt", generated(&["--family", "path", "--d", "5"]), 2.0, 5),
        ("star9.txt", generated(&["--family", "star", "--d", "9"]), 0.5, 2),
        ("glued2.txt", generated(&["--family", "glued-tree", "--n", "2"]), 2.0, 5),
    ];
    for (name, text, cbar, dk) in cases {
        let path = temp_file(name, &text);
        let v = json(&run(&["compute", "--graph", path.to_str().unwrap()]));
        assert!((v["cbar"].as_f64().unwrap() - cbar).abs() < 1e-9, "{name}");
        assert_eq!(v["d_K"].as_u64().unwrap(), dk);
        assert_eq!(v["seed"].as_u64().unwrap(), 0);
        let kappa: f64 = v["kappa"].as_array().unwrap().iter().map(|k| k.as_f64().unwrap()).sum();
        assert!((kappa - 1.0).abs() < 1e-9);
    }
}

#[test]
fn compute_json_file_and_family() {
    let path = temp_file("k4.json", "{\"dimension\":4,\"edges\":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}");
    let v = json(&run(&["compute", "--graph", path.to_str().unwrap()]));
    assert!((v["cbar"].as_f64().unwrap() - 0.375).abs() < 1e-12);
    assert_eq!(v["degenerate"], Value::Bool(true));
    let v = json(&run(&["compute", "--family", "hub-k-regular", "--d", "8", "--k", "4"]));
    assert!((v["cbar"].as_f64().unwrap() - 14.0 / 44.0).abs() < 1e-12);
}

#[test]
fn custom_weights_file() {
    let w = temp_file("weights.txt", "0 1 4 9 16\n");
    let v = json(&run(&["compute", "--family", "path", "--d", "3", "--weights", w.to_str().unwrap()]));
    // kappa = (3/8, 1/4, 3/8)
    assert!((v["cbar"].as_f64().unwrap() - (0.25 + 4.0 * 0.375)).abs() < 1e-12);
    let bad = temp_file("bad-weights.txt", "0 2 1\n");
    assert_eq!(run(&["compute", "--family", "path", "--d", "3", "--weights", bad.to_str().unwrap()]).status.code(), Some(64));
}

#[test]
fn disconnected_graph_warns() {
    let path = temp_file("split.txt", "4\n0 1\n2 3\n");
    let o = run(&["compute", "--graph", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["connected"], Value::Bool(false));
    assert!(v["warning"].is_string());
    assert!((v["cbar"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn parse_errors_exit_one() {
    for (name, text) in [("loop.txt", "2\n0 0\n"), ("dup.txt", "3\n0 1\n0 1\n"), ("range.txt", "2\n0 2\n"), ("junk.txt", "x\n")] {
        let path = temp_file(name, text);
        let o = run(&["compute", "--graph", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1), "{name}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(run(&["compute", "--graph", "/nonexistent/graph.txt"]).status.code(), Some(1));
}

#[test]
fn flag_errors_exit_64() {
    for args in [
        &["compute"][..],
        &["compute", "--family", "path"],
        &["frobnicate"],
        &[],
        &["compute", "--family", "path", "--d", "3", "--format", "xml"],
        &["optimize", "--d", "5", "--direction", "max", "--candidates", "21"],
        &["compute", "--family", "path", "--d", "3", "--seed-vertex", "3"],
    ] {
        assert_eq!(run(args).status.code(), Some(64), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn infeasible_parameters_exit_65() {
    for args in [
        &["generate", "--family", "hub-k-regular", "--d", "6", "--k", "3"][..],
        &["generate", "--family", "hub-k-regular", "--d", "5", "--k", "4"],
        &["generate", "--family", "star", "--d", "1"],
        &["generate", "--family", "glued-tree", "--n", "0"],
        &["brute-force", "--d", "8", "--direction", "min"],
        &["optimize", "--d", "1", "--direction", "min"],
    ] {
        assert_eq!(run(args).status.code(), Some(65), "{args:?}");
    }
}

#[test]
fn generate_glued_tree() {
    let text = generated(&["--family", "glued-tree", "--n", "4"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("46"));
    assert_eq!(lines.count(), 2 * (46 - 16));
    let dot = generated(&["--family", "path", "--d", "3", "--graph-format", "dot"]);
    assert!(dot.starts_with("graph G {") && dot.contains("1 -- 2;"));
    let js: Value = serde_json::from_str(&generated(&["--family", "complete", "--d", "3", "--graph-format", "json"])).unwrap();
    assert_eq!(js["dimension"], 3);
}

#[test]
fn limiting_glued_tree_exit() {
    let v = json(&run(&["limiting", "--family", "glued-tree", "--n", "4"]));
    assert!((v["chi_exit"].as_f64().unwrap() - 0.15).abs() < 1e-8);
    assert_eq!(v["exit_vertex"], 45);
    let chi: f64 = v["chi"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
    assert!((chi - 1.0).abs() < 1e-8);
}

#[test]
fn brute_force_k4() {
    let v = json(&run(&["brute-force", "--d", "4", "--direction", "min"]));
    assert!((v["best_cbar"].as_f64().unwrap() - 0.375).abs() < 1e-12);
    assert_eq!(v["best_graph"]["edges"].as_array().unwrap().len(), 6);
    let csv = stdout(&run(&["brute-force", "--d", "4", "--direction", "min", "--format", "csv"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("D,cbar,edges"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "4");
    assert!((row[1].parse::<f64>().unwrap() - 0.375).abs() < 1e-12);
    assert_eq!(row[2], "0-1;0-2;0-3;1-2;1-3;2-3");
}

#[test]
fn sweep_matches_brute_force() {
    let sweep = stdout(&run(&[
        "sweep", "--d-min", "3", "--d-max", "6", "--direction", "max", "--format", "csv", "--seed", "0",
    ]));
    let rows: Vec<&str> = sweep.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    for (d, row) in (3..=6).zip(rows) {
        let brute = stdout(&run(&["brute-force", "--d", &d.to_string(), "--direction", "max", "--format", "csv"]));
        let want: f64 = brute.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
        let got: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!((want - got).abs() < 1e-9, "D={d}: {got} vs {want}");
    }
}

#[test]
fn csv_output_is_reproducible() {
    let args = ["optimize", "--d", "7", "--direction", "max", "--restarts", "2", "--stale-rounds", "30", "--seed", "42", "--format", "csv"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["convergence", "--family", "path", "--d", "6", "--format", "csv"]);
    let d = run(&["convergence", "--family", "path", "--d", "6", "--format", "csv"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn convergence_rows() {
    let csv = stdout(&run(&["convergence", "--family", "path", "--d", "3", "--t", "1e6", "--format", "csv"]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("T,cbar_T,cbar_infinity"));
    let fields: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((fields[1] - 1.0).abs() < 1e-3);
    assert!((fields[2] - 1.0).abs() < 1e-12);
    let empty = stdout(&run(&["convergence", "--family", "path", "--d", "3", "--t", "--format", "csv"]));
    assert_eq!(empty, "T,cbar_T,cbar_infinity\n");
    let grid = stdout(&run(&["convergence", "--family", "star", "--d", "5", "--points", "5", "--format", "csv"]));
    assert_eq!(grid.lines().count(), 6);
    assert_eq!(run(&["convergence", "--family", "path", "--d", "3", "--t", "-1"]).status.code(), Some(64));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("krylov-walk-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let o = run(&["compute", "--family", "path", "--d", "5", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((v["cbar"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn in_process_run() {
    let out = krylov_walk::cli::run(["krylov-walk", "compute", "--family", "complete", "--d", "10"]).unwrap();
    let v: Value = serde_json::from_str(&out.output).unwrap();
    assert!((v["cbar"].as_f64().unwrap() - 0.18).abs() < 1e-12);
    let err = krylov_walk::cli::run(["krylov-walk", "generate", "--family", "m-ary-tree", "--m", "1", "--h", "3"]).unwrap_err();
    assert_eq!(err.code, 65);
}
