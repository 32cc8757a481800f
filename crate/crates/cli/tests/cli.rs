use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nakamura-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn build_classify_and_nakamura() {
    let dir = tempfile::tempdir().unwrap();
    let game = path(dir.path(), "p.json");
    let out = lab(&["build", "--name", "partition_type3", "--sizes", "2,1,1,1", "-o", &game]);
    assert!(out.status.success());
    let c = json_of(&lab(&["classify", "--game", &game]));
    assert_eq!(c["type_index"], 3);
    assert_eq!(c["pattern"], "++-+");
    let n = json_of(&lab(&["nakamura", "--game", &game]));
    assert_eq!(n["nu"], 4);
    assert_eq!(n["witness"].as_array().unwrap().len(), 4);
}

#[test]
fn weak_game_reports_infinity() {
    let dir = tempfile::tempdir().unwrap();
    let game = path(dir.path(), "d.json");
    std::fs::write(&game, r#"{"kind":"finite","universe":2,"winning":[[0],[0,1]]}"#).unwrap();
    let n = json_of(&lab(&["nakamura", "--game", &game]));
    assert_eq!(n["nu"], "infinity");
    let out = lab(&["core-check", "--game", &game, "--alternatives", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn core_check_both_sides() {
    let dir = tempfile::tempdir().unwrap();
    let game = path(dir.path(), "m.json");
    assert!(lab(&["build", "--name", "majority", "--n", "3", "--expand", "-o", &game]).status.success());
    let v = json_of(&lab(&["core-check", "--game", &game, "--alternatives", "2"]));
    assert_eq!(v["holds"], true);
    assert_eq!(v["profiles_checked"], 27);
    let v = json_of(&lab(&["core-check", "--game", &game, "--alternatives", "3"]));
    assert_eq!(v["holds"], true);
    assert!(v["counterexample"].is_array());
    let v = json_of(&lab(&[
        "core-check", "--game", &game, "--alternatives", "2", "--mode", "sampled", "--seed", "7", "--samples", "50",
    ]));
    assert_eq!(v["profiles_checked"], 50);
}

#[test]
fn product_with_appendix_a() {
    let dir = tempfile::tempdir().unwrap();
    let left = path(dir.path(), "l.json");
    let right = path(dir.path(), "r.json");
    let prod = path(dir.path(), "lr.json");
    assert!(lab(&["build", "--name", "partition_type3", "--sizes", "2,1,1", "-o", &left]).status.success());
    assert!(lab(&["build", "--name", "appendixA", "--oracle", "alternating", "-o", &right]).status.success());
    let out = lab(&["product", "--left", &left, "--right", &right, "--pairing", "shift", "--shift-k", "4", "-o", &prod]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let n = json_of(&lab(&["nakamura", "--game", &prod, "--depth", "12"]));
    assert_eq!(n["nu_at_most"], 3);
    let out = lab(&["product", "--left", &left, "--right", &right, "--pairing", "shift", "--shift-k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(lab(&["classify", "--game", &prod]).status.code(), Some(2));
}

#[test]
fn effectivity_from_file_and_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let form = path(dir.path(), "f.json");
    let table = (0..8)
        .map(|i: u32| {
            let key = format!("{},{},{}", i & 1, i >> 1 & 1, i >> 2 & 1);
            let out = if i.count_ones() >= 2 { "1" } else { "0" };
            format!("\"{key}\":\"{out}\"")
        })
        .collect::<Vec<_>>()
        .join(",");
    std::fs::write(
        &form,
        format!(r#"{{"players":3,"strategies":[2,2,2],"outcomes":["0","1"],"table":{{{table}}}}}"#),
    )
    .unwrap();
    let from_file = json_of(&lab(&["effectivity", "--form", &form, "--notion", "exact"]));
    let builtin = json_of(&lab(&["effectivity", "--veto-free", "3", "--notion", "exact"]));
    assert_eq!(from_file, builtin);
    assert_eq!(builtin["winning"], serde_json::json!([[0, 1], [0, 2], [1, 2]]));
    let alpha = json_of(&lab(&["effectivity", "--veto-free", "4"]));
    assert_eq!(alpha["winning"].as_array().unwrap().len(), 5);
}

#[test]
fn appendix_a_audit_and_tables() {
    let v = json_of(&lab(&["appendixA", "--oracle", "seeded", "--seed", "3", "--max-len", "10", "--dump-tables"]));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["failed"] == 0));
    assert!(v["tables"]["l"].is_array());
}

#[test]
fn table_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let json = path(dir.path(), "t.json");
    let md = path(dir.path(), "t.md");
    let out = lab(&["table", "--max-k", "5", "--depth", "12", "--out", &json, "--md", &md]);
    assert!(out.status.success());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let text = std::fs::read_to_string(&md).unwrap();
    let entries = report["entries"].as_array().unwrap();
    assert!(entries.iter().all(|e| e["status"] != "fail"));
    assert_eq!(text.lines().filter(|l| l.starts_with("| type ")).count(), entries.len());
    assert_eq!(lab(&["table", "--max-k", "4"]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(lab(&["classify", "--game", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(lab(&["build", "--name", "nope"]).status.code(), Some(2));
    assert_eq!(lab(&["build", "--name", "majority", "--n", "4"]).status.code(), Some(2));
    assert_eq!(lab(&["frobnicate"]).status.code(), Some(2));
}
