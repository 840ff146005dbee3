use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kneser-topo"))
        .args(args)
        .env_remove("KNESER_TOPO_CAPS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: bad json ({e}); stderr: {}", String::from_utf8_lossy(&out.stderr))
    });
    (doc, out.status.code().unwrap())
}

fn statuses(doc: &Value) -> Vec<(String, String)> {
    doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["name"].as_str().unwrap().to_string(), c["status"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn enumerate_small() {
    let (doc, code) = json(&["enumerate", "--n", "4", "--k", "2", "--s", "2,1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["count"], 3);
}

#[test]
fn graph_counts_on_stderr() {
    let out = run(&["graph", "--n", "5", "--k", "2", "--s", "2,2"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("5 vertices, 5 edges"));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["num_edges"], 5);
}

#[test]
fn homology_of_pentagon() {
    let (doc, code) = json(&["homology", "--n", "5", "--k", "2", "--s", "2,2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["homology"]["sphere_dim"], 1);
}

#[test]
fn sphere_checks_pass() {
    for (n, k, s) in [("5", "2", "2,2"), ("6", "2", "3,1"), ("7", "3", "2,2,1")] {
        let (doc, code) = json(&["verify-theorem2", "--n", n, "--k", k, "--s", s]);
        assert_eq!(code, 0, "{n} {k} {s}");
        assert_eq!(doc["pass"], true);
    }
}

#[test]
fn chromatic_numbers() {
    for (n, s, chi) in [("6", "2,2", 4), ("5", "2,1", 3), ("4", "2,1", 2)] {
        let (doc, code) = json(&["verify-theorem3", "--n", n, "--k", "2", "--s", s]);
        assert_eq!(code, 0);
        assert_eq!(doc["checks"][0]["report"]["chi"], chi);
        assert!(statuses(&doc).iter().all(|(_, st)| st == "pass"));
    }
}

#[test]
fn proofs_pass_with_default_rules() {
    for n in ["4", "5", "6"] {
        let (doc, code) = json(&["verify-proofs", "--n", n, "--k", "2", "--s", "2,1"]);
        assert_eq!(code, 0, "n = {n}: {doc}");
        let names: Vec<String> = statuses(&doc).into_iter().map(|(name, _)| name).collect();
        assert!(names.contains(&"theorem8".to_string()));
    }
}

#[test]
fn literal_rules_fail_the_second_stage() {
    let (doc, code) = json(&["verify-proofs", "--n", "5", "--k", "2", "--s", "2,1", "--rules", "as-written"]);
    assert_eq!(code, 1);
    let t8 = doc["checks"].as_array().unwrap().iter().find(|c| c["name"] == "theorem8").unwrap();
    assert_eq!(t8["status"], "fail");
    let stages = t8["report"]["stages"].as_array().unwrap();
    assert_eq!(stages.last().unwrap()["stage"], "mu2");
}

#[test]
fn s_star_is_validated() {
    let ok = run(&["verify-proofs", "--n", "5", "--k", "2", "--s", "2,1", "--s-star", "2,2"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = run(&["verify-proofs", "--n", "5", "--k", "2", "--s", "2,1", "--s-star", "3,2"]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["enumerate", "--n", "5", "--k", "3", "--s", "2,1"]).status.code(), Some(3));
    assert_eq!(run(&["verify-theorem2", "--n", "4", "--k", "2", "--s", "3,3"]).status.code(), Some(3));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let capped = run(&["homology", "--n", "6", "--k", "2", "--s", "2,1", "--target", "pair-poset", "--max-elements", "1"]);
    assert_eq!(capped.status.code(), Some(2));
    let capped = run(&["verify-theorem2", "--n", "6", "--k", "2", "--s", "2,1", "--max-simplices", "3"]);
    assert_eq!(capped.status.code(), Some(2));
}

#[test]
fn caps_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_kneser-topo"))
        .args(["homology", "--n", "6", "--k", "2", "--s", "2,1", "--target", "pair-poset"])
        .env("KNESER_TOPO_CAPS", "max_elements=1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn grid_csv() {
    let out = run(&["grid", "--n", "4..6", "--k", "2", "--s-max", "2", "--format", "csv", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,k,s,num_vertices,num_edges,chi_exact,chi_formula,chi_match,sphere_dim_expected,sphere_verified,lemma5,thm7,thm8"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 12);
    assert!(rows.contains(&"6,2,\"2,1\",10,21,4,4,true,2,pass,pass,pass,pass"));
    assert!(rows.iter().any(|r| r.contains("no formula asserted")));
}

#[test]
fn grid_empty_range_and_bad_s() {
    let out = run(&["grid", "--n", "6..5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
    assert_eq!(run(&["grid", "--n", "5", "--k", "2", "--s", "2,2,1"]).status.code(), Some(3));
}

#[test]
fn output_is_deterministic() {
    let args = ["grid", "--n", "4..6", "--k", "2", "--s", "2,1", "--s", "2,2", "--jobs", "3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let p = ["pair-poset", "--n", "6", "--k", "2", "--s", "2,1"];
    assert_eq!(run(&p).stdout, run(&p).stdout);
}

#[test]
fn writes_to_file() {
    let dir = std::env::temp_dir().join(format!("kneser-topo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sets.csv");
    let out = run(&["enumerate", "--n", "5", "--k", "2", "--s", "2,2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 6);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn corollary_small() {
    let (doc, code) = json(&["corollary10", "--n", "6", "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["pass"], true);
}
