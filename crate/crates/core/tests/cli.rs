use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const TRUE_QBF: &str = "p cnf 3 2\ne 3 0\na 2 0\ne 1 0\n1 2 3 0\n-1 -2 3 0\n";
const FALSE_QBF: &str = "c x1 and not x1\np cnf 3 2\ne 3 0\na 2 0\ne 1 0\n1 1 1 0\n-1 -1 -1 0\n";

fn nckt(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nckt")).current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn setup() -> TempDir {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("true.qdimacs"), TRUE_QBF).unwrap();
    std::fs::write(dir.path().join("false.qdimacs"), FALSE_QBF).unwrap();
    dir
}

#[test]
fn solve_answers_and_exit_codes() {
    let dir = setup();
    for via in ["circuit", "bruteforce"] {
        let yes = nckt(dir.path(), &["solve", "true.qdimacs", "--via", via]);
        assert_eq!(yes.status.code(), Some(0));
        assert_eq!(stdout(&yes).trim(), "YES");
        let no = nckt(dir.path(), &["solve", "false.qdimacs", "--via", via]);
        assert_eq!(no.status.code(), Some(1));
        assert_eq!(stdout(&no).trim(), "NO");
    }
}

#[test]
fn verify_counter_range() {
    let dir = setup();
    let o = nckt(dir.path(), &["verify", "counter", "-n", "2..6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn usage_and_io_errors_exit_2() {
    let dir = setup();
    assert_eq!(nckt(dir.path(), &["sim", "missing.nckt"]).status.code(), Some(2));
    assert_eq!(nckt(dir.path(), &["frobnicate"]).status.code(), Some(2));
    assert_eq!(nckt(dir.path(), &["sim", "x", "--no-such-flag"]).status.code(), Some(2));
    std::fs::write(dir.path().join("bad.qdimacs"), "p cnf 2 1\n1 5 0\n").unwrap();
    let o = nckt(dir.path(), &["solve", "bad.qdimacs"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn compile_then_simulate() {
    let dir = setup();
    let o = nckt(dir.path(), &["compile", "true.qdimacs", "-o", "t.nckt", "--report", "t.json"]);
    assert_eq!(o.status.code(), Some(0));
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("t.json")).unwrap()).unwrap();
    assert_eq!(meta["neurons"], 44);
    assert_eq!(meta["t_max"], 21);

    let o = nckt(dir.path(), &["--json", "sim", "t.nckt", "--until-output"]);
    let out: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(out["output_fired"], true);
    assert!(out["first_output_time"].as_u64().unwrap() <= 21);

    let o = nckt(dir.path(), &["sim", "t.nckt", "--steps", "25", "--watch", "s_1_0,O", "--trace", "trace.csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t,s_1_0,O"));
    assert_eq!(csv.lines().count(), 27);

    // silencing the last stage kills the output
    let o = nckt(dir.path(), &["--json", "sim", "t.nckt", "--silence", "s_3_0"]);
    let out: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(out["output_fired"], false);
}

#[test]
fn verification_subcommands() {
    let dir = setup();
    assert_eq!(nckt(dir.path(), &["verify", "reduction", "true.qdimacs"]).status.code(), Some(0));
    assert_eq!(nckt(dir.path(), &["verify", "reduction", "false.qdimacs"]).status.code(), Some(0));
    assert_eq!(nckt(dir.path(), &["verify", "lemma39", "true.qdimacs", "--blockwise"]).status.code(), Some(0));
    // the per-step statements fail on this instance
    let o = nckt(dir.path(), &["--json", "verify", "lemma39", "true.qdimacs"]);
    assert_eq!(o.status.code(), Some(3));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r["failure_count"].as_u64().unwrap() > 0);
}

#[test]
fn analysis_subcommands() {
    let dir = setup();
    assert_eq!(nckt(dir.path(), &["gen-counter", "-n", "3", "-o", "c3.nckt"]).status.code(), Some(0));
    std::fs::write(
        dir.path().join("chain.nckt"),
        "nckt 1\nn I 1\nn A 1\nn O 1\ne I A 1\ne A O 1\nI I\nO O\n",
    )
    .unwrap();
    let o = nckt(dir.path(), &["analyze", "degenerate", "chain.nckt", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["degenerate_sets"], serde_json::json!([["I", "A", "O"]]));
    let o = nckt(dir.path(), &["analyze", "degenerate", "chain.nckt", "--size", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = nckt(dir.path(), &["analyze", "vital", "chain.nckt", "--one"]);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["one_vital_neurons"], serde_json::json!(["A"]));
    // too many free neurons for enumeration
    assert_eq!(nckt(dir.path(), &["analyze", "degenerate", "c3.nckt"]).status.code(), Some(4));
    // the decision still works through the certificate
    nckt(dir.path(), &["compile", "true.qdimacs", "-o", "t.nckt"]);
    assert_eq!(nckt(dir.path(), &["analyze", "vital", "t.nckt", "--one"]).status.code(), Some(0));
    assert_eq!(nckt(dir.path(), &["--threads", "2", "analyze", "degenerate", "t.nckt", "--size", "2"]).status.code(), Some(1));
}
