use std::process::{Command, Output};

use genbell::stirling::triangle;
use genbell::Params;
use num_bigint::BigInt;
use serde_json::Value;

fn genbell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genbell"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = genbell(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn bell_sequences_in_oeis_format() {
    assert_eq!(
        stdout(&["bell", "1", "1", "5", "--format", "oeis"]),
        "1, 1, 2, 5, 15, 52\n"
    );
    assert_eq!(
        stdout(&["bell", "2", "1", "3", "--format", "oeis"]),
        "1, 1, 3, 13\n"
    );
    assert_eq!(
        stdout(&["bell", "2", "2", "2", "--format", "oeis"]),
        "1, 1, 7\n"
    );
}

#[test]
fn triangle_formats() {
    let plain = stdout(&["triangle", "1", "1", "3"]);
    let rows: Vec<&str> = plain.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["1", "1 1", "1 3 1"]);
    assert_eq!(
        stdout(&["triangle", "2", "1", "2", "--format", "csv"]),
        "1,1,1\n2,1,2\n2,2,1\n"
    );
    assert_eq!(
        stdout(&["triangle", "1", "1", "1", "--format", "oeis"]),
        "1\n"
    );
}

#[test]
fn normal_forms() {
    assert_eq!(stdout(&["normalize", "aA"]), "(0,0):1 (1,1):1\n");
    assert_eq!(stdout(&["normalize", "AaAa"]), "(1,1):1 (2,2):1\n");
    assert_eq!(stdout(&["normalize", "AAaa"]), "(2,2):1\n");
    let bad = genbell(&["normalize", "aAb"]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("'b'"));
}

#[test]
fn json_round_trip_is_exact() {
    let text = stdout(&["triangle", "3", "1", "9", "--json"]);
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["r"], 3);
    assert_eq!(doc["s"], 1);
    let tri = triangle(Params::new(3, 1).unwrap(), 9).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    for row in rows {
        let n = row["n"].as_u64().unwrap() as u32;
        for (k, v) in row["entries"].as_object().unwrap() {
            let k: u32 = k.parse().unwrap();
            let v: BigInt = v.as_str().unwrap().parse().unwrap();
            assert_eq!(v, tri.get(n, k), "n={n} k={k}");
        }
    }
}

#[test]
fn invalid_parameters_are_usage_errors() {
    assert!(!genbell(&["triangle", "0", "1", "3"]).status.success());
    assert!(!genbell(&["bell", "1", "1"]).status.success());
    assert!(!genbell(&["verify", "nonsense"]).status.success());
    assert!(!genbell(&["--perturb", "1,1,2,5", "bell", "1", "1", "3"])
        .status
        .success());
}

#[test]
fn verify_exit_codes() {
    let ok = genbell(&["verify", "laguerre", "--nmax", "20"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = genbell(&["--perturb", "2,1,7,3", "verify", "laguerre", "--nmax", "20"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("counterexample"));
    let json: Value =
        serde_json::from_slice(&genbell(&["verify", "oracle", "--nmax", "2", "--json"]).stdout)
            .unwrap();
    assert_eq!(json["suite"], "oracle");
    assert_eq!(json["passed"], true);
}

#[test]
fn polynomial_and_series_values() {
    assert_eq!(stdout(&["poly", "1", "1", "2", "1/4"]), "5/16\n");
    let out = stdout(&["series", "dobinski", "2", "1", "3", "--prec", "128"]);
    assert!(out
        .lines()
        .any(|l| l.starts_with("exact") && l.ends_with(" 13")));
    assert!(out.lines().any(|l| l == "contains   yes"));
    let kummer = stdout(&["series", "kummer", "4", "2", "2", "--json"]);
    let doc: Value = serde_json::from_str(&kummer).unwrap();
    assert_eq!(doc["exact"], "21");
    assert_eq!(doc["contains_exact"], true);
}
