mod common;

use std::process::{Command, Output};

use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riesz-dstat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn spec(name: &str) -> String {
    common::spec_dir().join(name).to_string_lossy().into_owned()
}

#[test]
fn density_of_cubes_is_exactly_zero() {
    let out = cli(&["density", "--set", "POW(3)"]);
    assert!(out.status.success());
    let r = &json(&out)["tasks"][0]["result"];
    assert_eq!((r["kind"].as_str(), r["value"].as_str()), (Some("exact"), Some("0/1")));
}

#[test]
fn cesaro_of_the_identity() {
    let out = cli(&["cesaro", "--seq", "(n)", "--n", "9"]);
    assert_eq!(json(&out)["tasks"][0]["result"]["value"], "5/1");
    let out = cli(&["cesaro", "--seq", "(n)", "--n", "2", "--p", "n", "--q", "2n+1"]);
    // window (2, 5]: (3 + 4 + 5) / 3
    assert_eq!(json(&out)["tasks"][0]["result"]["value"], "4/1");
}

#[test]
fn validate_rejects_the_printed_pair() {
    let out = cli(&["validate", "--p", "4n", "--q", "2n"]);
    assert_eq!(out.status.code(), Some(1));
    let t = &json(&out)["tasks"][0];
    assert_eq!(t["status"], "refuted");
    assert!(t["result"]["reason"].as_str().unwrap().contains("p_n < q_n fails at n = 1"));
    assert!(cli(&["validate", &spec("theorems.spec")]).status.success());
}

#[test]
fn check_exit_codes() {
    let out = cli(&["check", &spec("cube.spec"), "--cert", "guarded", "--prefix-n", "1000"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["tasks"][0]["status"], "verified");
    let out = cli(&["check", &spec("cube.spec"), "--cert", "unguarded", "--prefix-n", "1000"]);
    assert_eq!(out.status.code(), Some(1));
    let w = &json(&out)["tasks"][0]["result"]["witness"];
    assert_eq!((w["k"].as_u64(), w["next"].as_u64()), (Some(7), Some(8)));
}

#[test]
fn member_lists_admissible_limits() {
    let out = cli(&[
        "member",
        &spec("theorems.spec"),
        "--seq",
        "x",
        "--cert",
        "dec",
        "--candidate",
        "(0, 0)",
        "--candidate",
        "(1, 0)",
        "--prefix-n",
        "1000",
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["tasks"][0]["result"]["verified_limits"], serde_json::json!(["(0/1, 0/1)"]));
}

#[test]
fn builtin_falsifier_flags_the_alternating_example() {
    let out = cli(&["falsify", "--prefix-n", "500"]);
    assert!(out.status.success());
    let r = &json(&out)["tasks"][0]["result"];
    assert_eq!(r["unverifiable_as_printed"], true);
    assert_eq!(r["falsifier"]["entries"].as_array().unwrap().len(), 30);
}

#[test]
fn theorem_smoke_run() {
    let out = cli(&["theorems", "--trials", "1", "--seed", "3", "--prefix-n", "300"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(json(&out)["tasks"][0]["result"]["all_passed"], true);
}

#[test]
fn report_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("riesz-dstat-{}.json", std::process::id()));
    let path_s = path.to_string_lossy().into_owned();
    let to_file = cli(&["run", &spec("densities.spec"), "--prefix-n", "2000", "--report", &path_s]);
    assert!(to_file.status.success());
    let written = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let to_stdout = cli(&["run", &spec("densities.spec"), "--prefix-n", "2000", "--jobs", "2"]);
    assert_eq!(written, to_stdout.stdout);
    assert!(String::from_utf8_lossy(&to_file.stdout).contains("half: computed"));
}

#[test]
fn parse_errors_exit_2_with_position() {
    let path = std::env::temp_dir().join(format!("riesz-dstat-bad-{}.spec", std::process::id()));
    std::fs::write(&path, "PAIR p: 0 q: n\nSEQ x = (1/(n-3))\n").unwrap();
    let out = cli(&["run", &path.to_string_lossy()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2, column 10") && err.contains("n = 3"), "{err}");
}
