//! End-to-end checks of the binary: exit codes, report shapes, witness
//! round-trips, and survey determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sdepth"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("sdepth_cli_{}_{name}", std::process::id()));
    p
}

#[test]
fn sdepth_triangle_and_roundtrip_verify() {
    let witness = tmp("triangle.json");
    let out = run(&[
        "sdepth",
        "-i",
        "n=3; x1*x2, x2*x3, x1*x3",
        "--out",
        witness.to_str().unwrap(),
        "--json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["n"], 3);
    assert_eq!(report["m"], 3);
    assert_eq!(report["sdepth"], 2);

    let verify = run(&[
        "verify",
        "--witness",
        witness.to_str().unwrap(),
        "-i",
        "n=3; x1*x2, x2*x3, x1*x3",
        "--json",
    ]);
    assert!(verify.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout(&verify).trim()).unwrap();
    assert_eq!(report["ok"], true);
    assert_eq!(report["sdepth"], 2);
    std::fs::remove_file(witness).ok();
}

#[test]
fn verify_reports_gap_with_exit_one() {
    let witness = tmp("gap.json");
    std::fs::write(
        &witness,
        r#"{"n":3,"g":[1,1,1],"intervals":[
            {"lo":[1,1,0],"hi":[1,1,1]},
            {"lo":[1,0,1],"hi":[1,0,1]}
        ]}"#,
    )
    .unwrap();
    let out = run(&[
        "verify",
        "--witness",
        witness.to_str().unwrap(),
        "-i",
        "n=3; x1*x2, x2*x3, x1*x3",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["kind"], "gap");
    assert_eq!(report["witness"], serde_json::json!([0, 1, 1]));
    std::fs::remove_file(witness).ok();
}

#[test]
fn refined_witness_is_upper_discrete() {
    let witness = tmp("refined.json");
    let construct = run(&[
        "construct",
        "refine",
        "-i",
        "n=3; x1*x2, x2*x3, x1*x3",
        "--k",
        "2",
        "--out",
        witness.to_str().unwrap(),
    ]);
    assert!(construct.status.success());
    let verify = run(&[
        "verify",
        "--witness",
        witness.to_str().unwrap(),
        "-i",
        "n=3; x1*x2, x2*x3, x1*x3",
        "--k",
        "2",
    ]);
    assert!(verify.status.success());
    assert!(stdout(&verify).contains("upper-discrete of degree 2"));
    std::fs::remove_file(witness).ok();
}

#[test]
fn usage_errors_exit_two() {
    let out = run(&["sdepth", "-i", "n=3; y1"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["kind"], "usage");

    let out = run(&["construct", "boolean-ud", "--n", "2", "--k", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn budget_exhaustion_exits_three() {
    let out = run(&[
        "sdepth",
        "-i",
        "n=6; x1, x2, x3, x4, x5, x6",
        "--budget",
        "2",
        "--out",
        tmp("never.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["kind"], "budget");
}

#[test]
fn survey_rows_and_determinism() {
    let args = [
        "survey", "--n", "6", "--m", "4", "--count", "6", "--seed", "1", "--json",
    ];
    let first = run(&args);
    assert!(first.status.success());
    let second = run(&args);
    assert_eq!(stdout(&first), stdout(&second));

    for (idx, line) in stdout(&first).trim().lines().enumerate() {
        let row: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(row["idx"], idx as u64);
        assert_eq!(row["n"], 6);
        assert_eq!(row["m"], 4);
        assert_eq!(row["bound"], 4);
        assert!(row["slack"].as_i64().unwrap() >= 0, "counterexample row {line}");
    }
}

#[test]
fn witness_command_prints_json() {
    let out = run(&["witness", "-i", "n=2; x1, x2"]);
    assert!(out.status.success());
    let file: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(file["n"], 2);
    assert_eq!(file["g"], serde_json::json!([1, 1]));
}

#[test]
fn construct_three_gen_reports_depth() {
    let out = run(&[
        "construct",
        "three-gen",
        "-i",
        "n=5; x1*x2*x3, x3*x4, x1*x4*x5",
        "--json",
        "--out",
        tmp("tg.json").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(report["sdepth"].as_u64().unwrap() >= 4);
    std::fs::remove_file(tmp("tg.json")).ok();
}

#[test]
fn selftest_single_criterion() {
    let out = run(&["selftest", "--only", "3", "--json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["criterion"], 3);
    assert_eq!(report["passed"], true);
}
