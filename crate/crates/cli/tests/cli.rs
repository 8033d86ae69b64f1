use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sharp-order"))
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: TempDir::new().unwrap(),
        }
    }

    fn file(&self, name: &str, v: &Value) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, v.to_string()).unwrap();
        path
    }

    fn raw(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, text).unwrap();
        path
    }
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

fn exact(rows: &[&[i64]]) -> Value {
    let entries: Vec<Value> = rows.iter().flat_map(|r| r.iter()).map(|v| json!([v.to_string(), "0"])).collect();
    json!({"mode": "exact", "rows": rows.len(), "cols": rows[0].len(), "entries": entries})
}

fn float(rows: &[&[f64]]) -> Value {
    let entries: Vec<Value> = rows.iter().flat_map(|r| r.iter()).map(|v| json!([v, 0.0])).collect();
    json!({"mode": "float", "rows": rows.len(), "cols": rows[0].len(), "entries": entries})
}

fn spec(pairs: &[(i64, &[usize])]) -> Value {
    json!({"eigenvalues": pairs.iter().map(|(l, s)| json!({"lambda": [l.to_string(), "0"], "sizes": s})).collect::<Vec<_>>()})
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn part(v: &Value) -> f64 {
    match v {
        Value::Number(n) => n.as_f64().unwrap(),
        Value::String(s) => match s.split_once('/') {
            Some((p, q)) => p.parse::<f64>().unwrap() / q.parse::<f64>().unwrap(),
            None => s.parse().unwrap(),
        },
        _ => panic!("bad part {v}"),
    }
}

/// Real parts, row-major.
fn real_entries(m: &Value) -> Vec<f64> {
    m["entries"].as_array().unwrap().iter().map(|z| part(&z[0])).collect()
}

#[test]
fn refute_conjecture_reports_counterexample() {
    let v = run_json(&["refute", "conjecture"]);
    assert_eq!(v["leq"], true);
    assert_eq!(v["diagonal_form"], false);
    assert_eq!(v["refutes"], true);
    assert_eq!(real_entries(&v["A"]), vec![0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
}

#[test]
fn classify_boolean_downset() {
    let ws = Workspace::new();
    let s = ws.file("s.json", &spec(&[(1, &[3]), (2, &[1])]));
    let v = run_json(&["downset", "classify", "--spec", path(&s)]);
    assert_eq!(v["is_boolean"], true);
    assert_eq!(v["count"], 4);
    let s = ws.file("t.json", &spec(&[(1, &[1, 1, 1])]));
    let v = run_json(&["downset", "classify", "--spec", path(&s)]);
    assert_eq!(v["is_lattice"], false);
    assert_eq!(v["count"], Value::Null);
}

#[test]
fn check_order_exit_codes() {
    let ws = Workspace::new();
    let o = ws.file("o.json", &exact(&[&[0, 0], &[0, 0]]));
    let b = ws.file("b.json", &exact(&[&[1, 2], &[3, 4]]));
    let out = run(&["check", "order", "--a", path(&o), "--b", path(&b)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(serde_json::from_slice::<Value>(&out.stdout).unwrap()["leq"], true);
    let out = run(&["check", "order", "--a", path(&b), "--b", path(&o)]);
    assert_eq!(out.status.code(), Some(1));
    let f = ws.file("f.json", &float(&[&[0.0, 0.0], &[0.0, 0.0]]));
    let out = run(&["check", "order", "--a", path(&f), "--b", path(&b)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn malformed_input_exits_two() {
    let ws = Workspace::new();
    let truncated = ws.raw("t.json", "{\"mode\":\"exact\",");
    let out = run(&["inverse", "mp", "--in", path(&truncated)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "parse");
    let wrong = ws.file("w.json", &json!({"mode": "exact", "rows": 2, "cols": 2, "entries": [["1", "0"]]}));
    let out = run(&["inverse", "mp", "--in", path(&wrong)]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["inverse", "mp", "--in", "/nonexistent/m.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "io");
    let bad_spec = ws.file("s.json", &spec(&[(0, &[1])]));
    let out = run(&["downset", "classify", "--spec", path(&bad_spec)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "invalid_spec");
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn precondition_failures_exit_three() {
    let ws = Workspace::new();
    let nilpotent = ws.file("n.json", &exact(&[&[0, 1], &[0, 0]]));
    let out = run(&["inverse", "group", "--in", path(&nilpotent)]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "index_too_large");
    let s = ws.file("s.json", &spec(&[(1, &[2, 1])]));
    let out = run(&["witness", "nonlattice", "--spec", path(&s)]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "no_eligible_eigenvalue");
    let full = ws.file("f.json", &exact(&[&[1, 2], &[3, 4]]));
    let out = run(&["equations", "count", "--b", path(&full)]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "precondition_violated");
}

#[test]
fn inverses() {
    let ws = Workspace::new();
    let a = ws.file("a.json", &exact(&[&[1, 1], &[0, 0]]));
    let g = run_json(&["inverse", "group", "--in", path(&a)]);
    assert_eq!(g["mode"], "exact");
    assert_eq!(real_entries(&g), vec![1.0, 1.0, 0.0, 0.0]);
    let mp = run_json(&["inverse", "mp", "--in", path(&a)]);
    assert_eq!(real_entries(&mp), vec![0.5, 0.0, 0.5, 0.0]);
    let f = ws.file("f.json", &float(&[&[2.0, 0.0], &[0.0, 4.0]]));
    let g = run_json(&["inverse", "group", "--in", path(&f)]);
    assert_eq!(g["mode"], "float");
    assert_eq!(real_entries(&g), vec![0.5, 0.0, 0.0, 0.25]);
}

#[test]
fn hs_decomposition_of_exact_input() {
    let ws = Workspace::new();
    let b = ws.file("b.json", &exact(&[&[1, 1], &[0, 0]]));
    let v = run_json(&["decompose", "hs", "--in", path(&b)]);
    assert_eq!(v["r"], 1);
    assert!((part(&v["sigma"][0]) - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["U"]["mode"], "float");
}

#[test]
fn equation_counts() {
    let ws = Workspace::new();
    let cases: [(&[&[i64]], u64); 3] = [
        (&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 0]], 8),
        (&[&[1, 0], &[0, 2]], 4),
        (&[&[5, 1], &[0, 5]], 2),
    ];
    for (i, (rows, want)) in cases.iter().enumerate() {
        let b = ws.file(&format!("b{i}.json"), &exact(rows));
        let v = run_json(&["equations", "count", "--b", path(&b)]);
        assert_eq!(v["count"], *want, "{rows:?}");
        let v = run_json(&["equations", "solve", "--b", path(&b)]);
        assert_eq!(v["count"], *want, "{rows:?}");
        assert_eq!(v["members"].as_array().unwrap().len() as u64, *want);
    }
    let b = ws.file("f.json", &float(&[&[1.0, 0.0], &[0.0, 2.0]]));
    let s = ws.file("s.json", &spec(&[(1, &[1]), (2, &[1])]));
    let v = run_json(&["equations", "count", "--b", path(&b), "--spec", path(&s)]);
    assert_eq!(v["count"], 4);
}

#[test]
fn solve_members_are_commuting_projectors() {
    let ws = Workspace::new();
    let b = ws.file("b.json", &exact(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 0]]));
    let v = run_json(&["equations", "solve", "--b", path(&b)]);
    assert_eq!(v["kind"], "EpCommuteIdempotent");
    for m in v["members"].as_array().unwrap() {
        let x = real_entries(m);
        // diag(1, 2, 0) commutes exactly with diagonal matrices.
        for (k, &val) in x.iter().enumerate() {
            if k % 4 != 0 {
                assert!(val.abs() < 1e-9, "{x:?}");
            } else {
                assert!(val.abs() < 1e-9 || (val - 1.0).abs() < 1e-9, "{x:?}");
            }
        }
    }
}

#[test]
fn infinite_family_lists_samples() {
    let ws = Workspace::new();
    let b = ws.file("b.json", &exact(&[&[3, 0], &[0, 3]]));
    let s = ws.file("s.json", &spec(&[(3, &[1, 1])]));
    let v = run_json(&["equations", "solve", "--b", path(&b), "--spec", path(&s), "--count", "4"]);
    assert_eq!(v["count"], Value::Null);
    assert_eq!(v["members"], Value::Null);
    assert_eq!(v["samples"].as_array().unwrap().len(), 4);
}

#[test]
fn meet2_exact_and_float() {
    let ws = Workspace::new();
    let b1 = ws.file("b1.json", &exact(&[&[1, 0], &[0, 2]]));
    let b2 = ws.file("b2.json", &exact(&[&[1, 1], &[0, 2]]));
    let v = run_json(&["meet2", "--b1", path(&b1), "--b2", path(&b2)]);
    assert_eq!(v["mode"], "exact");
    let glb = run_json(&["oracle", "glb", "--b1", path(&b1), "--b2", path(&b2), "--grid", "-1,0,1,2"]);
    assert_eq!(glb["verified"], true);
    assert_eq!(glb["meet"], v);
    let f = ws.file("f.json", &float(&[&[1.0, 0.0], &[0.0, 2.0]]));
    let out = run(&["meet2", "--b1", path(&f), "--b2", path(&b2)]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "not_supported");
}

#[test]
fn downset_boolean_and_chain() {
    let ws = Workspace::new();
    let b = ws.file("b.json", &exact(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 0]]));
    let s = ws.file("s.json", &spec(&[(1, &[1]), (2, &[1])]));
    let preds = run_json(&["downset", "boolean", "--b", path(&b), "--spec", path(&s)]);
    let preds = preds.as_array().unwrap();
    assert_eq!(preds.len(), 4);
    let ranks: Vec<usize> = preds
        .iter()
        .map(|m| real_entries(m).iter().filter(|v| v.abs() > 1e-9).count())
        .collect();
    assert_eq!(ranks, vec![0, 1, 1, 2]);
    for (i, p) in preds.iter().enumerate() {
        let a = ws.file(&format!("a{i}.json"), p);
        assert_eq!(run(&["check", "order", "--a", path(&a), "--b", path(&b)]).status.code(), Some(0));
    }
    let chain = run_json(&["downset", "chain", "--b", path(&b), "--spec", path(&s)]);
    let chain = chain.as_array().unwrap();
    assert_eq!(chain.len(), 3);
    for w in chain.windows(2) {
        let lo = ws.file("lo.json", &w[0]);
        let hi = ws.file("hi.json", &w[1]);
        assert_eq!(run(&["check", "order", "--a", path(&lo), "--b", path(&hi)]).status.code(), Some(0));
    }
}

#[test]
fn downset_sample_is_seeded() {
    let ws = Workspace::new();
    let s = ws.file("s.json", &spec(&[(2, &[2, 1])]));
    let args = ["downset", "sample", "--spec", path(&s), "--count", "5", "--seed", "9"];
    let first = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, run(&args).stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    for t in v["samples"].as_array().unwrap() {
        assert!([0, 1, 2, 3].contains(&t["rank"].as_u64().unwrap()));
    }
    let other = run(&["downset", "sample", "--spec", path(&s), "--count", "5", "--seed", "10"]);
    assert_ne!(first.stdout, other.stdout);
}

#[test]
fn nonlattice_witness_passes() {
    let ws = Workspace::new();
    for (i, sizes) in [[1, 1, 1], [2, 1, 1], [2, 2, 1]].iter().enumerate() {
        let s = ws.file(&format!("s{i}.json"), &spec(&[(1, sizes)]));
        let v = run_json(&["witness", "nonlattice", "--spec", path(&s), "--screen", "100"]);
        assert_eq!(v["verified"], true, "{sizes:?}");
        assert_eq!(v["screen"]["strict_intermediates_t2_t3"], 0);
        assert_eq!(v["T"].as_array().unwrap().len(), 4);
    }
}

fn dot_nodes(dot: &str) -> Vec<(String, String)> {
    dot.lines()
        .filter(|l| l.contains("[label="))
        .map(|l| {
            let id = l.split_whitespace().next().unwrap().to_string();
            let role = l.split("role=").nth(1).unwrap().split([',', ']']).next().unwrap().to_string();
            (id, role)
        })
        .collect()
}

fn dot_edges(dot: &str) -> Vec<(String, String)> {
    dot.lines()
        .filter(|l| l.contains("->"))
        .map(|l| {
            let mut it = l.trim().trim_end_matches(';').split(" -> ");
            let lo = it.next().unwrap().to_string();
            let hi = it.next().unwrap().split_whitespace().next().unwrap().trim_end_matches(';').to_string();
            (lo, hi)
        })
        .collect()
}

fn rank_of(dot: &str, id: &str) -> usize {
    let line = dot.lines().find(|l| l.trim_start().starts_with(&format!("{id} "))).unwrap();
    line.split("rank_value=").nth(1).unwrap().split(',').next().unwrap().parse().unwrap()
}

#[test]
fn hasse_dot_output() {
    let ws = Workspace::new();
    let s = ws.file("s.json", &spec(&[(2, &[2, 1]), (1, &[1])]));
    let out = ws.dir.path().join("h.dot");
    let status = run(&["hasse", "--spec", path(&s), "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    let dot = fs::read_to_string(&out).unwrap();
    assert!(dot.starts_with("digraph downset {"));
    let nodes = dot_nodes(&dot);
    assert!(nodes.len() <= 64);
    // Boolean centre of two eigenvalues, then two rank classes of 3 + ellipsis.
    assert_eq!(nodes.len(), 4 + 2 * 4);
    assert_eq!(nodes.iter().filter(|(_, r)| r == "ellipsis").count(), 2);
    assert_eq!(nodes.iter().filter(|(_, r)| r == "antichain").count(), 6);
    for (lo, hi) in dot_edges(&dot) {
        assert!(rank_of(&dot, &lo) <= rank_of(&dot, &hi), "{lo} -> {hi}");
    }
    let again = run(&["hasse", "--spec", path(&s)]);
    assert_eq!(again.stdout, dot.as_bytes());

    let few = run(&["hasse", "--spec", path(&s), "--antichain-samples", "1"]);
    let few = String::from_utf8(few.stdout).unwrap();
    assert_eq!(dot_nodes(&few).len(), 4 + 2 * 2);

    let big = ws.file("big.json", &spec(&(1..=7).map(|l| (l, &[1usize][..])).collect::<Vec<_>>()));
    let out = run(&["hasse", "--spec", path(&big)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn hasse_boolean_cube_edges() {
    let ws = Workspace::new();
    let s = ws.file("s.json", &spec(&[(1, &[1]), (2, &[1]), (3, &[2])]));
    let dot = String::from_utf8(run(&["hasse", "--spec", path(&s)]).stdout).unwrap();
    assert_eq!(dot_nodes(&dot).len(), 8);
    assert_eq!(dot_edges(&dot).len(), 12);
}

#[test]
fn oracle_enumeration() {
    let v = run_json(&["oracle", "enumerate", "--n", "1", "--grid", "0,1", "--list"]);
    assert_eq!(v["count"], 2);
    assert_eq!(v["matrices"].as_array().unwrap().len(), 2);
    let one = run_json(&["oracle", "enumerate", "--n", "2", "--grid", "-1,0,1"]);
    let four = run_json(&["oracle", "enumerate", "--n", "2", "--grid", "-1,0,1", "--jobs", "4"]);
    assert_eq!(one, four);
    let out = run(&["oracle", "enumerate", "--n", "4", "--grid", "-1,0,1,2"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"], "budget_exceeded");
}

#[test]
fn tolerance_flag_validated() {
    let out = run(&["refute", "conjecture", "--tol", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"], "invalid_tolerance");
    let out = run(&["refute", "conjecture", "--rank-tol", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(run(&["refute", "conjecture", "--tol", "1e-6"]).status.success());
}
