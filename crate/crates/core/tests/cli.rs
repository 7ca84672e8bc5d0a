//! The installed binary: output streams and exit codes.

use std::process::{Command, Output};

fn eigenperm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eigenperm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sequence_and_count() {
    let o = eigenperm(&["seq", "eigen", "--n", "7"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1 1 2 6 23 104 531\n");
    assert!(o.stderr.is_empty());

    let o = eigenperm(&["count", "--pattern", "3(5)241", "--n", "4"]);
    assert_eq!(stdout(&o), "23\n");
}

#[test]
fn bfile_is_one_indexed() {
    let o = eigenperm(&["seq", "eigen", "--n", "3", "--bfile"]);
    assert_eq!(stdout(&o), "1 1\n2 1\n3 2\n");
}

#[test]
fn exit_codes() {
    assert_eq!(
        eigenperm(&["seq", "nothing", "--n", "3"]).status.code(),
        Some(2)
    );
    let o = eigenperm(&["biject", "forward", "--input", "3 2 1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
    let o = eigenperm(&["count", "--pattern", "3(5)241", "--n", "11"]);
    assert_eq!(o.status.code(), Some(4));
    let o = eigenperm(&[
        "count",
        "--pattern",
        "3(5)241",
        "--n",
        "21",
        "--limit",
        "30",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn classify_table() {
    let o = eigenperm(&["classify4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let first = out.lines().next().unwrap();
    assert_eq!(
        first.split_whitespace().collect::<Vec<_>>(),
        ["32(4)1", "31(4)2", "(1)342", "(1)324", "321(4)"]
    );
    assert!(out.contains("bell"));
    assert!(out.contains("trivial: 64 patterns in 11 classes"));
    assert!(!out.contains("mismatch"));
}

#[test]
fn classify_json() {
    let o = eigenperm(&["classify4", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let records = v.as_array().unwrap();
    assert_eq!(records.len(), 16);
    let members: usize = records
        .iter()
        .map(|r| r["members"].as_array().unwrap().len())
        .sum();
    assert_eq!(members, 96);
}

#[test]
fn verify_suite() {
    let o = eigenperm(&["verify", "--suite", "all", "--max-n", "6"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
