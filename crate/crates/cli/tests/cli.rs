use std::process::Command;

use serde_json::Value;

fn torusdyn(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_torusdyn")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = torusdyn(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn envelope_fields() {
    let v = json(&["degrees", "-m", "0 1; 1 1", "-n", "4"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "degrees");
    assert_eq!(v["inputs"]["iterations"], 4);
    assert!(v["precision"]["bits"].is_u64());
    assert!(v.get("timing").is_none());
    assert!(json(&["--timing", "degrees", "-m", "2"]).get("timing").is_some());
}

#[test]
fn identity_degrees() {
    let v = json(&["degrees", "-m", "1 0 0; 0 1 0; 0 0 1", "-n", "5"]);
    assert_eq!(v["results"]["degree_sequence"], serde_json::json!([1, 1, 1, 1, 1]));
}

#[test]
fn analyze_fibonacci() {
    let r = &json(&["analyze", "-m", "0 1; 1 1"])["results"];
    assert_eq!(r["charpoly"], "T^2 - T - 1");
    assert_eq!(r["ell"], 0);
    assert_eq!(r["dim_G"], 0);
    assert!(r["delta"]["decimal"].as_str().unwrap().starts_with("1.6180339887498948482"));
    let seq: Vec<u64> = r["degree_sequence"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect();
    assert_eq!(&seq[..6], [2, 3, 5, 8, 13, 21]);
}

#[test]
fn tsv_output() {
    let (code, out, _) = torusdyn(&["--tsv", "degrees", "-m", "0 1; 1 1", "-n", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n\tdeg\tdeg^(1/n)");
    assert_eq!(lines[3].split('\t').nth(1), Some("5"));
}

#[test]
fn exit_codes() {
    assert_eq!(torusdyn(&["nonsense"]).0, 1);
    assert_eq!(torusdyn(&["degrees", "-m", "1 2; 3"]).0, 1);
    assert_eq!(torusdyn(&["degrees", "-m", "1 2"]).0, 1);
    assert_eq!(torusdyn(&["orbit", "-m", "2 0; 0 3", "-p", "1"]).0, 1);
    assert_eq!(torusdyn(&["orbit", "-m", "-2 0; 0 -3", "-p", "-1,2", "-n", "2"]).0, 0);
    assert_eq!(torusdyn(&["degrees", "-m", "1 2; 2 4"]).0, 2);
    assert_eq!(torusdyn(&["orbit", "-m", "2 0; 0 3", "-p", "0,1"]).0, 2);
    assert_eq!(torusdyn(&["survey", "--bound", "0"]).0, 2);
    assert_eq!(torusdyn(&["generic-orbit", "--map", "x*x", "-p", "3", "-n", "40", "--budget-bits", "64"]).0, 3);
    let (code, out, _) = torusdyn(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("Usage"));
}

#[test]
fn repro_jordan_block_passes() {
    let v = json(&["repro", "example-5.3"]);
    assert_eq!(v["passed"], true);
    let (code, out, _) = torusdyn(&["--tsv", "repro", "jordan-block-height"]);
    assert_eq!(code, 0);
    assert!(out.lines().skip(1).all(|l| l.split('\t').nth(2) == Some("PASS")), "{out}");
}

#[test]
fn repro_lists_cases() {
    let v = json(&["repro", "--list"]);
    let ids: Vec<&str> = v["results"]["cases"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"fibonacci-degrees") && ids.contains(&"henon"));
    assert_eq!(torusdyn(&["repro", "no-such-case"]).0, 1);
}

#[test]
fn survey_is_deterministic_across_modes() {
    let args = ["survey", "--count", "12", "--dim", "3", "--seed", "5"];
    let par = json(&args);
    let mut seq_args = vec!["--sequential"];
    seq_args.extend(args);
    let seq = json(&seq_args);
    assert_eq!(par["results"], seq["results"]);
    assert_eq!(par["results"]["all_passed"], true);
    assert_eq!(par["execution"], "Parallel");
    assert_eq!(seq["execution"], "Sequential");
}

#[test]
fn certify_and_alpha() {
    let r = &json(&["certify", "-m", "2 0; 0 3", "-p", "2,3"])["results"];
    assert_eq!(r["decision"], "decided-positive");
    let a = &json(&["alpha", "-m", "2 0; 0 3", "-p", "7,1"])["results"];
    assert!((a["numeric_estimate"]["value"].as_f64().unwrap() - 2.0).abs() < 0.05);
}

#[test]
fn preperiodic_points() {
    let r = &json(&["preper", "-m", "0 1; 1 1", "-p", "-1,1"])["results"];
    assert_eq!(r["preperiodic"], true);
    let r = &json(&["preper", "-m", "0 1; 1 1", "-p", "2,1"])["results"];
    assert_eq!(r["preperiodic"], false);
}

#[test]
fn library_entry_point_matches_binary() {
    let out = torusdyn_cli::run(["torusdyn", "degrees", "-m", "2"]);
    assert_eq!(out.code, 0);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["results"]["degree_sequence"][2], 8);
}
