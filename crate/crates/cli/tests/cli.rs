use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dualbent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dualbent")).args(args).output().expect("binary runs")
}

fn construct(id: &str, dir: &Path) -> String {
    let path = dir.join(format!("{id}.tbl"));
    let out = dualbent(&["construct", "--id", id, "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path.to_str().unwrap().to_string()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn construct_then_check_vdb() {
    let dir = tempfile::tempdir().unwrap();
    let f = construct("example4", dir.path());
    let out = dualbent(&["check", "vdb", "--function", &f]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out);
    assert_eq!(v["schema"], "1");
    assert_eq!(v["passed"], true);
    assert_eq!(v["inputs"].as_array().unwrap().len(), 1);
}

#[test]
fn zero_function_is_not_bent() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(construct("example4", dir.path())).unwrap();
    let zero: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(i, l)| if i < 3 { l.to_string() } else { "00".to_string() })
        .collect();
    let path = dir.path().join("zero.tbl");
    std::fs::write(&path, zero.join("\n") + "\n").unwrap();
    let out = dualbent(&["check", "bent", "--function", path.to_str().unwrap(), "--component", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["passed"], false);
}

#[test]
fn malformed_input_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tbl");
    std::fs::write(&path, "p=3 n=2 m=1\nnot a header\n").unwrap();
    let out = dualbent(&["check", "vdb", "--function", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn corrupted_table_fails_reproduction_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct("example4", dir.path());
    let mut lines: Vec<String> = std::fs::read_to_string(&path).unwrap().lines().map(String::from).collect();
    lines[10] = "9x".into();
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    let out = dualbent(&["reproduce", "example4", "--from", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = report(&out);
    let load = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "example4/load").unwrap();
    assert_eq!(load["passed"], false);
    assert!(load["detail"]["error"].is_string());
}

#[test]
fn changed_entry_breaks_the_fiber_condition() {
    let dir = tempfile::tempdir().unwrap();
    let path = construct("example4", dir.path());
    let mut lines: Vec<String> = std::fs::read_to_string(&path).unwrap().lines().map(String::from).collect();
    lines[10] = if lines[10] == "11" { "22".into() } else { "11".into() };
    std::fs::write(&path, lines.join("\n") + "\n").unwrap();
    let out = dualbent(&["reproduce", "example4", "--from", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["passed"], false);
}

#[test]
fn reports_are_deterministic() {
    let a = dualbent(&["reproduce", "example4", "--seed", "7"]);
    let b = dualbent(&["reproduce", "example4", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["seed"], "7");
}

#[test]
fn materializing_large_matrices_hits_the_guard() {
    let dir = tempfile::tempdir().unwrap();
    let f = construct("example4", dir.path());
    let m = dir.path().join("h.txt");
    let out = dualbent(&["hadamard", "verify", "--function", &f, "--pair", "1,2", "--materialize", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn selftest_passes() {
    let out = dualbent(&["selftest", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(report(&out)["passed"], true);
}
