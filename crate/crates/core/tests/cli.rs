use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn klr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klr")).args(args).output().expect("spawn klr")
}

fn klr_in(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klr")).args(args).env("KLR_CACHE_DIR", cache).output().expect("spawn klr")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn dim_golden() {
    for (n, d) in [(2, "2"), (3, "6"), (4, "20"), (5, "70")] {
        let o = klr(&["dim", &n.to_string()]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), d);
    }
}

#[test]
fn idempotents_json() {
    let v = json_of(&klr(&["--json", "idempotents", "5"]));
    let seqs = v.as_array().unwrap();
    assert_eq!(seqs.len(), 8);
    assert_eq!(seqs[0], json!([0, 1, 2, 3, 4]));
    assert!(seqs.contains(&json!([0, 4, 3, 2, 1])));
}

#[test]
fn mult_golden() {
    let o = klr(&["--json", "mult", "3", "p2*e(0,1,2)", "p2*e(0,2,1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o), json!({"n": 3, "terms": [{"coeff": "-1/1", "word": ["e(0,2,1)", "y3"]}]}));
}

#[test]
fn rewrite_text_golden() {
    let o = klr(&["rewrite", "3", "y3*e(0,1,2)"]);
    assert_eq!(stdout(&o), "e(0,1,2)*y3\n");
    let o = klr(&["rewrite", "3", "e(1,0,2)"]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn parse_error_reports_offset() {
    let o = klr(&["rewrite", "3", "e(0,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("offset 6"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(klr(&["dim", "1"]).status.code(), Some(2));
    assert_eq!(klr(&["verify", "3", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(klr(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(klr(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_is_deterministic() {
    for args in
        [&["--json", "--seed", "7", "verify", "4"][..], &["--json", "basis", "3"][..], &["--json", "quiver", "4"][..]]
    {
        let a = klr(args);
        let b = klr(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn verify_json_shape() {
    let v = json_of(&klr(&["--json", "verify", "3", "--suite", "engine"]));
    assert_eq!(v["n"], 3);
    assert_eq!(v["suite"], "engine");
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["suite"] == "engine" && c["pass"] == true));
}

#[test]
fn cache_round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let w = klr_in(dir.path(), &["cache", "3", "--write"]);
    assert_eq!(w.status.code(), Some(0), "{}", stderr(&w));
    let file = dir.path().join("structure-constants-n3.json");
    assert!(file.exists());

    let r = klr_in(dir.path(), &["--json", "cache", "3", "--read"]);
    assert_eq!(r.status.code(), Some(0), "{}", stderr(&r));
    let v = json_of(&r);
    assert_eq!(v["dim"], 6);

    let explicit = dir.path().join("nested").join("n4.json");
    let explicit = explicit.to_str().unwrap();
    assert_eq!(klr(&["cache", "4", "--write", explicit]).status.code(), Some(0));
    assert_eq!(klr(&["cache", "4", "--read", explicit]).status.code(), Some(0));
    assert_eq!(klr(&["cache", "3", "--read", explicit]).status.code(), Some(1));

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let row = &mut doc["products"][0][2][0][1];
    *row = json!(row.as_i64().unwrap() + 1);
    std::fs::write(&file, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let t = klr_in(dir.path(), &["cache", "3", "--read"]);
    assert_eq!(t.status.code(), Some(1));
    assert!(stderr(&t).contains("rejected"), "{}", stderr(&t));
}

#[test]
fn missing_cache_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = klr_in(dir.path(), &["cache", "3", "--read"]);
    assert_eq!(o.status.code(), Some(2));
}
