use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

const TREFOIL: &str = "X 1,5,2,4; X 3,1,4,6; X 5,3,6,2";

fn qathin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qathin"))
        .args(args)
        .env("QATHIN_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect()
}

#[test]
fn invariants_of_trefoil_and_unknot() {
    let out = qathin(&["invariants", "--pd", TREFOIL, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let row = &json_lines(&out)[0];
    assert_eq!(row["det"], 3);
    assert_eq!(row["sigma"], -2);
    assert_eq!(row["writhe"], 3);
    assert_eq!(row["components"], 1);

    let out = qathin(&["invariants", "--pd", "", "--json"]);
    let row = &json_lines(&out)[0];
    assert_eq!(
        (row["det"].as_i64(), row["sigma"].as_i64()),
        (Some(1), Some(0))
    );
}

#[test]
fn parse_failure_exits_with_two() {
    let out = qathin(&["invariants", "--pd", "X 1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = qathin(&["invariants", "--pd", "X 1,4,2,3; X 3,6,4,5; X 5,2,6,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn batch_csv_gives_one_row_per_knot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("batch.csv");
    let corpus = fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../corpus/knots.csv"
    ))
    .unwrap();
    let ten: Vec<&str> = corpus.lines().take(11).collect();
    fs::write(&path, ten.join("\n") + "\n").unwrap();
    let out = qathin(&["invariants", "--pd", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json_lines(&out);
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[0]["name"], "0_1");
}

#[test]
fn pd_file_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trefoil.pd");
    fs::write(&path, TREFOIL).unwrap();
    let out = qathin(&["kh", "--pd", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let t = &json_lines(&out)[0];
    assert_eq!(t["schema"], 1);
    assert_eq!(t["name"], "trefoil");
    assert_eq!(t["thin"], true);
    assert_eq!(t["total"], 3);
}

#[test]
fn kh_over_integers_and_unknot() {
    let out = qathin(&["kh", "--pd", "4_1", "--ring", "z", "--json"]);
    let t = &json_lines(&out)[0];
    assert_eq!(t["ring"], "z");
    assert_eq!(t["total"], 5);
    assert!(t.get("torsion").is_none());

    let out = qathin(&["kh", "--pd", "", "--json"]);
    let t = &json_lines(&out)[0];
    assert_eq!(t["entries"].as_array().unwrap().len(), 1);
    assert_eq!(t["entries"][0]["rank"], 1);
}

#[test]
fn kh_flags_non_thin_knot() {
    let out = qathin(&["kh", "--pd", "8_19", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_lines(&out)[0]["thin"], false);
}

#[test]
fn hfk_inline_grid() {
    let out = qathin(&["hfk", "--grid", "4,3,2,1,0 | 1,0,4,3,2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let t = &json_lines(&out)[0];
    assert_eq!(t["total"], 3);
    assert_eq!(t["sigma"], -2);
    assert_eq!(t["alexander"], "t^-1 - 1 + t");
}

#[test]
fn qa_writes_and_verifies_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("trefoil.json");
    let out = qathin(&["qa", "--pd", TREFOIL, "--out", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&cert).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["root"]["det"], 3);

    let out = qathin(&["qa", "--verify", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let tampered = text.replacen("\"det\": 3", "\"det\": 4", 1);
    fs::write(&cert, tampered).unwrap();
    let out = qathin(&["qa", "--verify", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn qa_unknown_exits_with_one() {
    let out = qathin(&["qa", "--pd", "8_19", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_lines(&out)[0]["status"], "unknown");

    let out = qathin(&["qa", "--pd", "9_4", "--budget", "1", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_lines(&out)[0]["reason"], "budget_exhausted");
}

#[test]
fn verify_thin_flags_exactly_the_exceptions() {
    let dir = tempfile::tempdir().unwrap();
    let knots = fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../corpus/knots.csv"
    ))
    .unwrap();
    let keep: Vec<&str> = knots
        .lines()
        .filter(|l| l.starts_with("name,") || l.starts_with("8_") || l.starts_with("9_42"))
        .collect();
    fs::write(dir.path().join("knots.csv"), keep.join("\n") + "\n").unwrap();
    let out = qathin(&[
        "verify-thin",
        "--corpus",
        dir.path().to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let s = &json_lines(&out)[0];
    assert_eq!(s["schema"], 1);
    assert_eq!(
        s["counts"]["not_kh_thin"],
        serde_json::json!(["8_19", "9_42"])
    );
    assert!(s["counts"]["alternating_failures"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn verify_thin_on_empty_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let out = qathin(&[
        "verify-thin",
        "--corpus",
        dir.path().to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_lines(&out)[0]["counts"]["entries"], 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify-thin", "--limit-crossings", "6", "--json"];
    let a = qathin(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_qathin"))
        .args(args)
        .env("QATHIN_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn check_lemmas_has_no_violations() {
    let out = qathin(&["check-lemmas", "--limit-crossings", "6", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let s = &json_lines(&out)[0];
    assert!(s["signatures"]["violations"].as_array().unwrap().is_empty());
    assert!(s["skein"]["violations"].as_array().unwrap().is_empty());
    assert!(s["signatures"]["checked"].as_u64().unwrap() > 0);
}

#[test]
fn missing_corpus_is_an_input_error() {
    let out = qathin(&["verify-thin", "--corpus", "/nonexistent/knots.csv"]);
    assert_eq!(out.status.code(), Some(2));
}
