use std::path::Path;
use std::process::{Command, Output};

use frs_listrec::{FrsCode, ListRecoveryInstance, Rational};
use serde_json::Value;

fn listrec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_listrec")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn encode_constant_message_repeats_the_constant() {
    let dir = tempfile::tempdir().unwrap();
    let msg = dir.path().join("m.json");
    std::fs::write(&msg, "[5, 0, 0, 0]").unwrap();
    let out = listrec(&["encode", "--message", path(&msg)]);
    assert!(out.status.success());
    let word: Vec<Vec<u32>> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(word, vec![vec![5; 4]; 8]);
}

#[test]
fn encode_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let msg = dir.path().join("m.json");
    let dest = dir.path().join("c.json");
    std::fs::write(&msg, "[3, 1, 4, 1, 5]").unwrap();
    let out = listrec(&[
        "encode", "--q", "13", "--n", "6", "--k", "5", "--s", "2", "--message", path(&msg), "--out", path(&dest),
    ]);
    assert!(out.status.success());
    let word: Vec<Vec<u32>> = serde_json::from_slice(&std::fs::read(&dest).unwrap()).unwrap();
    let code = FrsCode::new(13, 6, 5, 2).unwrap();
    assert_eq!(word, code.encode(&[3, 1, 4, 1, 5]).unwrap().symbols);
}

#[test]
fn composite_field_size_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let msg = dir.path().join("m.json");
    std::fs::write(&msg, "[1, 0, 0, 0]").unwrap();
    let out = listrec(&["encode", "--q", "36", "--message", path(&msg)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conflicting_recover_flags_are_rejected() {
    let out = listrec(&["recover", "--planted", "1", "--epsilon", "1/4", "--eta", "1/8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn design_check_passes_on_lines() {
    let out = listrec(&["verify", "design", "--q", "13", "--n", "6", "--k", "5", "--s", "2", "--r", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rep["violation_count"], 0);
}

#[test]
fn design_check_fails_under_a_shrunken_bound() {
    let out = listrec(&[
        "verify", "design", "--q", "13", "--n", "6", "--k", "5", "--s", "2", "--r", "1", "--tau-scale", "1/2",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bounds_table_runs() {
    let out = listrec(&["verify", "bounds", "--instances", "3", "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("bcz"));
}

#[test]
fn oracle_hull_over_budget_exits_three() {
    let out = Command::new(env!("CARGO_BIN_EXE_listrec"))
        .args(["recover", "--planted", "1", "--noise", "1/8", "--mode", "oracle-hull"])
        .env("LISTREC_ENUM_LIMIT", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("LISTREC_ENUM_LIMIT"));
}

#[test]
fn recover_from_instance_file_finds_the_codeword() {
    let code = FrsCode::new(13, 6, 3, 2).unwrap();
    let word = code.encode(&[2, 7, 11]).unwrap().flatten();
    let inst = ListRecoveryInstance::from_word(2, &word, Rational::zero()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("inst.json");
    std::fs::write(&file, serde_json::to_vec(&inst).unwrap()).unwrap();
    let out = listrec(&[
        "recover", "--q", "13", "--n", "6", "--k", "3", "--s", "2", "--instance", path(&file), "--exact-filter",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rep: Value = serde_json::from_slice(&out.stdout).unwrap();
    let filtered: Vec<Vec<u32>> = serde_json::from_value(rep["filtered"].clone()).unwrap();
    assert_eq!(filtered, vec![word]);
}

#[test]
fn selftest_lists_ten_criteria() {
    let out = listrec(&["selftest", "--list"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 10);
    assert!(text.lines().last().unwrap().starts_with("C10"));
}
