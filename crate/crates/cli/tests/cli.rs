use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const K3: &str = "3 3\n0: 1 2\n1: 2 0\n2: 0 1\n";
const K4: &str = "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
// A 6-cycle with a pendant edge at vertex 0.
const C6_TAIL: &str = "7 7\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n0 6\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forestpart")).args(args).env_remove("FP_JOBS").output().unwrap()
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_reports_class_membership() {
    let dir = TempDir::new().unwrap();
    let k3 = file(&dir, "k3.rg", K3);
    let k4 = file(&dir, "k4.rg", K4);
    assert_eq!(run(&["verify", s(&k3)]).status.code(), Some(0));
    let out = run(&["verify", s(&k4), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["class"]["has_4_cycle"], true);
}

#[test]
fn verify_checks_a_given_partition() {
    let dir = TempDir::new().unwrap();
    let k3 = file(&dir, "k3.rg", K3);
    let good = file(&dir, "good.txt", "001\n");
    let bad = file(&dir, "bad.json", r#"{"part0":[0,1,2],"part1":[]}"#);
    assert_eq!(run(&["verify", s(&k3), "--partition", s(&good)]).status.code(), Some(0));
    let out = run(&["verify", s(&k3), "--partition", s(&bad), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["check"]["status"], "violation");
    // all three vertices in one forest part is fine for D2
    let out = run(&["verify", s(&k3), "--partition", s(&bad), "--specs", "D2,D2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn solve_emits_line_and_json() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.rg", C6_TAIL);
    let out = run(&["solve", s(&g)]);
    assert!(out.status.success());
    let line = String::from_utf8(out.stdout).unwrap();
    assert_eq!(line.trim().len(), 7);
    assert!(line.trim().chars().all(|c| c == '0' || c == '1'));

    let out = run(&["solve", s(&g), "--specs", "D4,D4", "--json"]);
    let v = json(&out);
    assert_eq!(v["status"], "feasible");
    let n = v["partition"]["part0"].as_array().unwrap().len() + v["partition"]["part1"].as_array().unwrap().len();
    assert_eq!(n, 7);
}

#[test]
fn solve_reports_infeasible() {
    let dir = TempDir::new().unwrap();
    let k3 = file(&dir, "k3.rg", K3);
    let out = run(&["solve", s(&k3), "--specs", "I,I"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "infeasible");
}

#[test]
fn partition_writes_trace() {
    let dir = TempDir::new().unwrap();
    let g = file(&dir, "g.rg", C6_TAIL);
    let trace = dir.path().join("trace.json");
    let out = run(&["partition", s(&g), "--trace", s(&trace), "--base-case", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(!v["trace"]["steps"].as_array().unwrap().is_empty());
    assert_eq!(v["line"].as_str().unwrap(), String::from_utf8(out.stdout).unwrap().trim());

    let out = run(&["partition", s(&g), "--base-case", "1", "--fallback", "abort"]);
    assert!(out.status.success());
}

#[test]
fn partition_rejects_out_of_class() {
    let dir = TempDir::new().unwrap();
    let k4 = file(&dir, "k4.rg", K4);
    assert_eq!(run(&["partition", s(&k4)]).status.code(), Some(1));
}

#[test]
fn audit_exit_codes_and_json() {
    let dir = TempDir::new().unwrap();
    let k3 = file(&dir, "k3.rg", K3);
    let k4 = file(&dir, "k4.rg", K4);
    let out = run(&["audit", s(&k3), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["totals"]["initial"], -12);
    assert_eq!(v["totals"]["final"], -12);
    assert_eq!(v["initial"]["vertices"].as_array().unwrap().len(), 3);
    assert!(v["transfers"].is_array());

    assert_eq!(run(&["audit", s(&k4)]).status.code(), Some(1));
    assert_eq!(run(&["audit", s(&k3), "--pendent-mode", "per-face"]).status.code(), Some(0));
    assert_ne!(run(&["audit", s(&k3), "--pendent-mode", "sideways"]).status.code(), Some(0));
}

#[test]
fn detect_lists_witnesses_by_kind() {
    let dir = TempDir::new().unwrap();
    let p3 = file(&dir, "p3.rg", "3 2\n0 1\n1 2\n");
    let out = run(&["detect", s(&p3), "--kinds", "C2,C3", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["witnesses"]["C2"].as_array().unwrap().len(), 2);
    let c3 = v["witnesses"]["C3"].as_array().unwrap();
    assert_eq!(c3.len(), 1);
    assert_eq!(c3[0]["delete_vertex"], 1);
    assert!(v["classification"]["w2"].is_array());
    assert!(v["witnesses"].get("C4").is_none());
}

#[test]
fn enumerate_counts_small_members() {
    let out = run(&["enumerate", "--n", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let headers = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.contains(':') && l.split_whitespace().count() == 2)
        .count();
    // connected graphs on at most 4 vertices without 4-cycles, counted by hand:
    // n=1: 1, n=2: 1, n=3: P3 and K3, n=4: P4, K1,3 and the paw
    assert_eq!(headers, 7);
}

#[test]
fn generate_is_reproducible_and_roundtrips() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.plc");
    let b = dir.path().join("b.rg");
    assert!(run(&["generate", "--count", "5", "--seed", "11", "--format", "planar-code", "-o", s(&a)]).status.success());
    assert!(run(&["generate", "--count", "5", "--seed", "11", "-o", s(&b)]).status.success());
    assert!(fs::read(&a).unwrap().starts_with(b">>planar_code<<"));

    let from_plc = run(&["ingest", s(&a)]);
    assert!(from_plc.status.success());
    let from_rg = run(&["ingest", s(&b)]);
    assert_eq!(from_plc.stdout, from_rg.stdout);

    let other = run(&["generate", "--count", "5", "--seed", "12"]);
    assert_ne!(other.stdout, from_rg.stdout);
}

#[test]
fn generate_requires_seed() {
    assert!(!run(&["generate", "--count", "3"]).status.success());
}

#[test]
fn batch_report_is_deterministic_across_jobs() {
    let dir = TempDir::new().unwrap();
    let corpus = dir.path().join("c.rg");
    assert!(run(&["generate", "--count", "20", "--seed", "4", "-o", s(&corpus)]).status.success());
    let r1 = dir.path().join("r1.json");
    let r4 = dir.path().join("r4.json");
    let tasks = "classify,detect,audit,solve:F3,F4,solve:D4,D4,partition";
    let o1 = run(&["batch", s(&corpus), "--tasks", tasks, "--jobs", "1", "--no-timings", "--json", s(&r1)]);
    assert_eq!(o1.status.code(), Some(0), "{}", String::from_utf8_lossy(&o1.stderr));
    let o4 = Command::new(env!("CARGO_BIN_EXE_forestpart"))
        .args(["batch", s(&corpus), "--tasks", tasks, "--no-timings", "--json", s(&r4)])
        .env("FP_JOBS", "4")
        .output()
        .unwrap();
    assert_eq!(o4.status.code(), Some(0));
    assert_eq!(fs::read(&r1).unwrap(), fs::read(&r4).unwrap());

    let v: Value = serde_json::from_slice(&fs::read(&r1).unwrap()).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 20);
    assert_eq!(v["aggregate"]["graphs"], 20);
    assert_eq!(v["tasks"].as_array().unwrap().len(), 6);
}

#[test]
fn batch_input_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let two = file(&dir, "two.rg", &format!("{K3}{K4}"));
    let out = run(&["batch", s(&two), "--tasks", "audit"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["aggregate"]["errors"], 1);
    assert_eq!(v["aggregate"]["audit_pass"], 1);
}

#[test]
fn batch_rejects_bad_fp_jobs() {
    let dir = TempDir::new().unwrap();
    let k3 = file(&dir, "k3.rg", K3);
    let out = Command::new(env!("CARGO_BIN_EXE_forestpart"))
        .args(["batch", s(&k3), "--tasks", "audit", "--jobs", "2"])
        .env("FP_JOBS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn batch_rejects_unknown_task() {
    let dir = TempDir::new().unwrap();
    let k3 = file(&dir, "k3.rg", K3);
    assert_eq!(run(&["batch", s(&k3), "--tasks", "paint"]).status.code(), Some(1));
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let junk = file(&dir, "junk.rg", "3 3\n0: 1 x\n");
    let out = run(&["audit", s(&junk)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}
