use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rootval"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

#[test]
fn malformed_json_is_an_input_error() {
    let o = run(&["hn", "newton"], "{\"T\": [[1, 2]");
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("malformed JSON"));
}

#[test]
fn bad_field_is_named() {
    let o = run(&["hn", "newton"], r#"{"T": [["e", "1 +"], [0, 1]]}"#);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("T[0][1]"));

    let o = run(&["rvl", "big"], r#"{"type": "A", "rank": 2, "r": {"[1,1,0]": 1}}"#);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("r.[1,1,0]"));
}

#[test]
fn non_rvf_is_rejected() {
    // R_1 = {±a, ±b} is not Q-closed
    let o = run(
        &["rvl", "check"],
        r#"{"type": "A", "rank": 2,
            "r": {"[1,-1,0]": 1, "[0,1,-1]": 1, "[1,0,-1]": 0},
            "lambda": {"[1,-1,0]": 0, "[0,1,-1]": 0, "[1,0,-1]": 1}}"#,
    );
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn k1_fault_fails_the_big_lattice_suite() {
    let o = run(&["verify", "big-lattice", "--inject-fault", "k1"], "");
    assert_eq!(code(&o), 1);
    let r = report(&o);
    assert_eq!(r["failed"][0], "big-lattice");
    let first = r["criteria"][0]["first_failure"].as_str().unwrap();
    assert!(first.contains("condition"), "{}", first);
}

#[test]
fn verify_all_passes() {
    let o = run(&["verify", "all", "--seed", "7"], "");
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = report(&o);
    assert_eq!(r["seed"], 7);
    assert_eq!(r["criteria"].as_array().unwrap().len(), 12);
}

#[test]
fn reports_are_deterministic() {
    let input = r#"{"n": 2, "r": {"[1,-1]": 1}}"#;
    let a = run(&["spr", "fibers", "--seed", "11", "--trials", "10"], input);
    let b = run(&["spr", "fibers", "--seed", "11", "--trials", "10"], input);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["seed"], 11);
}

#[test]
fn mazur_and_hodge() {
    let input = r#"{"T": [["e", 1], [0, "e^2"]], "lattice": [[1, 0], ["e^-1", 1]]}"#;
    let o = run(&["hn", "mazur"], input);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["newton"], serde_json::json!(["1", "2"]));
    assert_eq!(r["hodge"], serde_json::json!(["-2", "5"]));

    let o = run(&["hn", "hodge"], r#"{"T": [[[[0, "1/2"], [1, "3"]], 0], [0, 0]]}"#);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["hodge_snf"], serde_json::json!(["0", "inf"]));
}

#[test]
fn decompose_reports_hypotheses() {
    let input = r#"{"T": [["e", 0], [0, "e^3"]], "U": [[1, 0]], "W": [[0, 1]]}"#;
    let o = run(&["hn", "decompose"], input);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["hypotheses_hold"], true);
    assert_eq!(r["splits"], true);
}

#[test]
fn group_invariants() {
    let o = run(&["grp", "cartan"], r#"{"g": [["e", 1], [0, "e^-1"]]}"#);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["cartan"], serde_json::json!([-1, 1]));

    let o = run(&["grp", "fiber"], r#"{"gamma": [["e", 0], [0, "e^2"]], "mu": [1, 2]}"#);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["window"], 2);

    let o = run(
        &["grp", "verify-hn", "--window", "1"],
        r#"{"gamma": [["e", 0], [0, "e^2"]], "mu": [1, 2], "blocks": [1, 1]}"#,
    );
    assert_eq!(code(&o), 0);
}

#[test]
fn rm_of_constant_function() {
    let o = run(&["rvf", "rm", "--type", "B", "--rank", "2"], r#"{"r": {"[1,0]": 2, "[0,1]": 2, "[1,1]": 2, "[1,-1]": 2}}"#);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert!(r["r_m"].as_object().unwrap().values().all(|v| v == 2));
}

#[test]
fn gmo_orbit_family() {
    // A1 with M = G: every positive set comes from M
    let o = run(
        &["gmo", "check"],
        r#"{"type": "A", "rank": 1, "levi": [[1, -1]],
            "points": {"": ["-1/2", "1/2"], "1": ["1/2", "-1/2"]}}"#,
    );
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["conditions"], serde_json::json!([true, true, true, true, true]));
}
