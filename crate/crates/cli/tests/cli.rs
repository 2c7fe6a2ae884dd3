//! End-to-end tests of the ncdist binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn ncdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncdist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ncdist_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ncdist"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

const TRIANGLE: &str =
    r#"{"n":3,"edges":[{"u":1,"v":2,"w":1.0},{"u":2,"v":3,"w":1.0},{"u":1,"v":3,"w":1.0}]}"#;

#[test]
fn chain_json_lambda() {
    let out = ncdist(&["chain", "1-2-1", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let lambda = v["lambda"].as_f64().unwrap();
    assert!((lambda - 2.5).abs() < 1e-9);
}

#[test]
fn distance_on_unit_triangle() {
    let out = ncdist_stdin(&["distance", "1", "3"], TRIANGLE);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0.816497"), "unexpected output: {text}");
}

#[test]
fn distance_all_pairs_json() {
    let out = ncdist_stdin(
        &["distance", "--all-pairs", "--format", "json"],
        r#"{"n":2,"edges":[{"u":1,"v":2,"w":3.0}]}"#,
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["distances"][0][1].as_f64().unwrap() - 3.0).abs() < 1e-7);
    assert_eq!(v["distances"][0][0].as_f64().unwrap(), 0.0);
}

#[test]
fn validate_rejects_non_hermitian() {
    let doc = r#"{"n":2,"edges":[{"u":1,"v":2}],"dirac":[[0,0],[0.5,0],[0.6,0],[0,0]]}"#;
    let out = ncdist_stdin(&["validate"], doc);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("Hermitian"), "diagnostic: {err}");
}

#[test]
fn validate_accepts_infinite_weight() {
    let doc = r#"{"n":2,"edges":[{"u":1,"v":2,"w":"inf"}]}"#;
    let out = ncdist_stdin(&["validate", "--format", "json"], doc);
    assert!(out.status.success());
}

#[test]
fn usage_error_exits_2() {
    let out = ncdist(&["distance", "--bogus-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_is_deterministic() {
    let a = ncdist(&["gen", "--n", "6", "--seed", "11", "--density", "0.4"]);
    let b = ncdist(&["gen", "--n", "6", "--seed", "11", "--density", "0.4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    // and the emitted document parses back through validate
    let out = ncdist_stdin(&["validate"], &String::from_utf8(a.stdout).unwrap());
    assert!(out.status.success());
}

#[test]
fn bounds_interval_contains_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let gen = ncdist(&["gen", "--n", "7", "--seed", "3", "--density", "0.35"]);
    std::fs::write(&path, &gen.stdout).unwrap();
    let out = ncdist(&[
        "bounds",
        "1",
        "7",
        "--exact",
        "--format",
        "json",
        "--input",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let lower = v["lower"].as_f64().unwrap();
    let upper = v["upper"].as_f64().unwrap();
    let exact = v["exact"].as_f64().unwrap();
    assert!(lower - 1e-6 <= exact && exact <= upper + 1e-6);
    assert!(!v["provenance"].as_array().unwrap().is_empty());
}

#[test]
fn bounds_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let gen = ncdist(&["gen", "--n", "6", "--seed", "5"]);
    std::fs::write(&path, &gen.stdout).unwrap();
    let args = [
        "bounds",
        "1",
        "6",
        "--exact",
        "--format",
        "json",
        "--input",
        path.to_str().unwrap(),
    ];
    let a = ncdist(&args);
    let b = ncdist(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn decompose_reports_blob_chain() {
    let doc = r#"{"n":5,"edges":[
        {"u":1,"v":2,"w":1.0},{"u":2,"v":3,"w":1.0},{"u":1,"v":3,"w":1.0},
        {"u":3,"v":4,"w":2.0},{"u":4,"v":5,"w":1.5}]}"#;
    let out = ncdist_stdin(&["decompose", "1", "5", "--format", "json"], doc);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cutpoints"], serde_json::json!([3, 4]));
    assert_eq!(v["pruning"], serde_json::json!([1, 2, 3, 4, 5]));
    let chains = v["chains"].as_array().unwrap();
    assert_eq!(chains.len(), 1);
    assert_eq!(chains[0]["weights"], serde_json::json!([2.0, 1.5]));
}

#[test]
fn report_flags_only_known_mismatches() {
    let out = ncdist(&["report", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 20);
    let bad: Vec<(String, String)> = cells
        .iter()
        .filter(|c| !c["ok"].as_bool().unwrap())
        .map(|c| {
            (
                c["row"].as_str().unwrap().to_string(),
                c["bound"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    // the two published cells that disagree with recomputation
    assert_eq!(
        bad,
        vec![
            ("1-2-1-2-1".to_string(), "lambda".to_string()),
            ("1-2-1-2-1".to_string(), "L1".to_string()),
        ]
    );
}

#[test]
fn inf_rendered_in_table_output() {
    let doc = r#"{"n":4,"edges":[{"u":1,"v":2,"w":1.0},{"u":3,"v":4,"w":1.0}]}"#;
    let out = ncdist_stdin(&["distance", "1", "3"], doc);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("inf"), "missing inf: {text}");
}
