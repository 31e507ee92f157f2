//! End-to-end runs of the `bdcodes` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bdcodes"))
        .args(args)
        .env("BDCODES_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn count_reports_both_routes() {
    let out = run(&["count", "--b", "4", "--a", "3", "--d", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["nu"], v["closed_form_nu"]);
    assert_eq!(v["matches"], true);
    let total = v["on_diag"].as_u64().unwrap() + v["off_diag"].as_u64().unwrap();
    assert_eq!(v["nu"].as_u64().unwrap(), total);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["count", "--b", "2", "--a", "1", "--d", "4"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--b", "2", "--a", "3", "--d", "3"]).status.code(), Some(2));
    assert_eq!(run(&["search", "--b", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["atlas", "--bmax", "2", "--dmax", "15"]).status.code(), Some(2));
}

#[test]
fn search_is_byte_identical_for_a_seed() {
    let args = ["search", "--b", "3", "--a", "2", "--d", "5", "--seed", "11"];
    let x = run(&args);
    let y = run(&args);
    assert_eq!(x.status.code(), Some(0));
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn emitted_codes_reverify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("code.json");
    let out = run(&["search", "--b", "2", "--a", "1", "--d", "3", "-o", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0));
    for mode in ["spin", "dense", "symmetric"] {
        let v = run(&["verify", "--input", path_str(&file), "--d", "3", "--mode", mode]);
        assert_eq!(v.status.code(), Some(0), "{mode}: {}", String::from_utf8_lossy(&v.stderr));
        assert_eq!(json(&v)["pass"], true);
    }
    let too_far = run(&["verify", "--input", path_str(&file), "--d", "5", "--mode", "symmetric"]);
    assert_eq!(too_far.status.code(), Some(4));
}

#[test]
fn family_codes_and_gates() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f1.json");
    let out = run(&["family", "--family", "1", "--b", "4", "-o", path_str(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let code: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(code["n"], 11);
    assert_eq!(code["labeling"], "mirrored");
    let gates = run(&["gates", "--input", path_str(&file), "--all-generators"]);
    assert_eq!(gates.status.code(), Some(0), "{}", String::from_utf8_lossy(&gates.stderr));
    let text = String::from_utf8_lossy(&gates.stdout);
    assert!(text.contains("matches_irrep"));
    assert!(!text.contains("\"matches_irrep\": false"));
}

#[test]
fn hopeless_search_exits_not_found() {
    // Two restarts with one iteration cannot converge.
    let out = run(&[
        "search", "--b", "1", "--a", "1", "--d", "7", "--restarts", "2", "--max-iterations", "1", "--escalate", "0",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn atlas_formats() {
    let csv = run(&["atlas", "--bmax", "3", "--dmax", "7", "--format", "csv"]);
    assert_eq!(csv.status.code(), Some(0));
    let text = String::from_utf8(csv.stdout).unwrap();
    // header plus one row per (b, a, d)
    assert_eq!(text.lines().count(), 1 + 6 * 4);
    let md = run(&["atlas", "--bmax", "3", "--dmax", "7", "--format", "md"]);
    assert!(String::from_utf8(md.stdout).unwrap().contains('|'));
    let js = run(&["atlas", "--bmax", "3", "--dmax", "17", "--format", "json", "--include-conjectured"]);
    assert_eq!(js.status.code(), Some(0));
    let v = json(&js);
    let cells = v.as_array().unwrap();
    assert!(cells.iter().any(|c| c["conjectured"] == true));
}

#[test]
fn missing_input_file_fails() {
    let out = run(&["verify", "--input", "/nonexistent/code.json", "--d", "3"]);
    assert_eq!(out.status.code(), Some(1));
}
