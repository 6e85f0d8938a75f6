use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn qde(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qde"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = qde(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn strip_timing(text: &[u8]) -> String {
    String::from_utf8_lossy(text)
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"wall_time_ms\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn quarter_turn_phase() {
    let r = report(&["--mode", "qde", "--gen", "diag-phase:2:1:2", "--t", "2", "--shots", "100"]);
    assert_eq!(r["result"]["k_prime"], 1);
    assert_eq!(r["result"]["histogram"]["1"], 100);
    assert_eq!(r["result"]["frequencies"]["1"].as_f64(), Some(1.0));
    assert_eq!(r["counters"]["controlled_slot_applications"], 4);
    assert_eq!(r["disagreement"], false);
    let phase = r["oracle"]["phase"].as_f64().unwrap();
    assert!((phase - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
}

#[test]
fn orthogonal_sign_matches_oracle() {
    let r = report(&["--mode", "sign", "--gen", "haar-orthogonal:4", "--seed", "3", "--shots", "50"]);
    assert_eq!(r["result"]["unanimous"], true);
    let oracle = r["oracle"]["value"][0].as_f64().unwrap();
    assert_eq!(r["result"]["sign"].as_i64().unwrap(), oracle.signum() as i64);
    assert_eq!(r["config"]["t"], 1);
}

#[test]
fn verify_suite_covers_all_families() {
    let r = report(&["--mode", "verify", "--n", "3"]);
    let families: Vec<&str> = r["result"]["families"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["family"].as_str().unwrap())
        .collect();
    assert_eq!(families, ["unitary", "orthogonal", "contraction", "complex"]);
    assert!(r["result"]["max_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn contraction_report() {
    let r = report(&[
        "--mode", "contract", "--gen", "scaled-identity:2:0.9:0", "--t", "2", "--shots", "10000",
    ]);
    let exact = r["result"]["exact_acceptance"].as_f64().unwrap();
    assert!((exact - 0.81f64.powi(6)).abs() <= 1e-9);
    assert_eq!(r["result"]["circuit"], "split");
    assert_eq!(r["result"]["phase"]["k_prime"], 0);
}

#[test]
fn matrix_file_round_trip() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, r#"{{"n":2,"rows":[[[0,0],[0,1]],[[0,1],[0,0]]]}}"#).unwrap();
    let path = file.path().to_str().unwrap();
    let r = report(&["--mode", "oracle", "--matrix", path]);
    // det [[0,i],[i,0]] = 1
    assert!((r["oracle"]["value"][0].as_f64().unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(r["result"]["kind"], "oracle");
}

#[test]
fn writes_report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let status = qde(&["--mode", "oracle", "--gen", "haar-unitary:2", "--out", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0));
    assert!(status.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(r["config"]["mode"], "oracle");
}

#[test]
fn exit_codes() {
    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, r#"{{"n":2,"rows":[[[1,0],[0,0]],[[0,0]]]}}"#).unwrap();
    let cases: [(&[&str], i32, &str); 6] = [
        (&["--mode", "qde", "--matrix", bad.path().to_str().unwrap()], 2, "parse"),
        (&["--mode", "qde", "--gen", "scaled-identity:2:0.9:0"], 2, "not-unitary"),
        (&["--mode", "qde", "--gen", "bogus:2"], 2, "usage"),
        (&["--mode", "qde", "--gen", "haar-unitary:4", "--t", "20"], 4, "state-too-large"),
        (&["--mode", "qde", "--gen", "haar-unitary:3"], 2, "encoding"),
        (&["--mode", "sign", "--gen", "haar-unitary:2"], 2, "not-orthogonal"),
    ];
    for (args, code, tag) in cases {
        let out = qde(args);
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(code), "{args:?}: {stderr}");
        assert!(stderr.starts_with(&format!("error[{tag}]")), "{args:?}: {stderr}");
        assert_eq!(stderr.lines().count(), 1);
    }
    assert_eq!(qde(&["--mode", "qde", "--gen", "x", "--matrix", "y"]).status.code(), Some(2));
}

#[test]
fn reports_are_reproducible() {
    let args = ["--mode", "qde", "--gen", "haar-unitary:2", "--t", "4", "--shots", "3000", "--seed", "9"];
    let a = qde(&args);
    let b = qde(&args);
    assert_eq!(strip_timing(&a.stdout), strip_timing(&b.stdout));
    let c = qde(&["--mode", "qde", "--gen", "haar-unitary:2", "--t", "4", "--shots", "3000", "--seed", "10"]);
    assert_ne!(strip_timing(&a.stdout), strip_timing(&c.stdout));
}
