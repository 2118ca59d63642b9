use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hnquiver")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn moduli_poly_of_kronecker() {
    let o = run(&["moduli-poly", &data("k2_11.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "q + 1\n");

    let o = run(&["moduli-poly", &data("k3_11.txt"), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"], "moduli-poly");
    assert_eq!(v["moduli"], serde_json::json!([1, 1, 1]));
    assert_eq!(v["dims"], serde_json::json!([1, 1]));
}

#[test]
fn parse_errors_exit_2_with_line() {
    let o = run(&["moduli-poly", &data("bad_arrow.txt")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn missing_file_is_an_io_error() {
    let o = run(&["moduli-poly", &data("no_such_file.txt")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn budget_exceeded_exits_3() {
    let o = run(&["stratify", "--q", "2", &data("k2_23_small_budget.txt")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn bad_field_size_is_an_input_error() {
    let o = run(&["stratify", "--q", "6", &data("k2_11.txt")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a prime power"));
}

#[test]
fn count_reps_with_brute_force() {
    let o = run(&["count-reps", "--brute", "3", &data("k2_11.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "rep-space-dim 2\ncount q^2\nbrute F_3 9 ok\n");
}

#[test]
fn hn_of_single_representations() {
    let o = run(&["hn", &data("k2_11.txt"), "--rep", &data("k2_11_stable.rep"), "--q", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("type 1,1\n"), "{out}");
    assert!(out.contains("semistable true\n"));

    let o = run(&["hn", &data("k2_11.txt"), "--rep", &data("k2_11_zero.rep"), "--q", "3", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["type"], serde_json::json!([[1, 0], [0, 1]]));
    assert_eq!(v["slopes"], serde_json::json!(["1", "0"]));
    assert_eq!(v["semistable"], false);
    assert_eq!(v["steps"][0]["dims"], serde_json::json!([1, 0]));
}

#[test]
fn rep_entries_must_lie_in_the_field() {
    let o = run(&["hn", &data("k2_11.txt"), "--rep", &data("k2_11_stable.rep"), "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["hn", &data("k2_11.txt"), "--rep", &data("torus.samples"), "--q", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stratify_prints_table_formulas_and_partition() {
    let o = run(&["stratify", "--q", "2", &data("k2_23.txt")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("partition ok 4096 = 2^12\n"));
    assert!(out.contains("stratum 2,3 count 1008 formula 1008 ok\n"));
    assert!(out.contains("stratum 2,0;0,3 count 1 formula 1 ok\n"));
    assert!(out.contains("formulas\n"));

    let o = run(&["stratify", "--q", "2", &data("k2_23.txt"), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["partition"]["ok"], true);
    let total: u64 = v["strata"].as_array().unwrap().iter().map(|s| s["count"].as_u64().unwrap()).sum();
    assert_eq!(total, 4096);
}

#[test]
fn verify_skips_torsor_checks_when_not_coprime() {
    let o = run(&["verify", "--qmax", "2", &data("k2_22.txt")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("coprime false"));
    assert!(!out.contains("torsor"));
    assert!(out.ends_with("result ok\n"));
}

#[test]
fn verify_on_a2() {
    let o = run(&["--threads", "1", "verify", "--qmax", "3", &data("a2_11.txt")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("moduli 1\n"));
    assert!(out.contains("torsor ok stable 2 pg 2 orbits 1 moduli 1\n"));
}

#[test]
fn purity_fit_on_torus_samples() {
    let o = run(&["purity-fit", "--samples", &data("torus.samples"), "--period", "2", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("verdict: inconclusive\n"), "{out}");
    assert!(out.contains("verdict: periodic-polynomial period 2\n  P_0(t) = t - 1\n  P_1(t) = t + 1\n"), "{out}");

    let o = run(&["purity-fit", "--samples", &data("torus.samples"), "--period", "2", "--degree", "1", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["periodic"]["verdict"], "periodic-polynomial");
    assert_eq!(v["periodic"]["polys"], serde_json::json!([[-1, 1], [1, 1]]));
    assert_eq!(v["strong"]["verdict"], "inconclusive");
}

#[test]
fn purity_fit_needs_enough_samples() {
    let o = run(&["purity-fit", "--samples", &data("torus.samples"), "--period", "3", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(2));
}
