use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn qratio(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qratio"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qratio"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is one JSON object"))
        .collect()
}

fn one_json(args: &[&str]) -> Value {
    let out = qratio(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut lines = json_lines(&out);
    assert_eq!(lines.len(), 1);
    lines.remove(0)
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn ratio_of_cycle_is_one() {
    let v = one_json(&[
        "ratio",
        "--builtin",
        "cycle",
        "--n",
        "7",
        "--output",
        "json",
    ]);
    assert!((f(&v["gamma"]) - 1.0).abs() < 1e-9);
}

#[test]
fn ratio_of_k4_from_graph6() {
    let v = one_json(&["ratio", "--graph6", "C~", "--output", "json"]);
    assert!((f(&v["gamma"]) - 1.0).abs() < 1e-9);
    assert!((f(&v["q1"]) - 6.0).abs() < 1e-10);
}

#[test]
fn ratio_of_paw() {
    let v = one_json(&[
        "ratio",
        "--builtin",
        "kite",
        "--n",
        "4",
        "--k",
        "2",
        "--output",
        "json",
    ]);
    assert!((f(&v["gamma"]) - (3.0 + 17f64.sqrt()) / 2.0).abs() < 1e-8);
    assert_eq!(v["path"], serde_json::json!([0, 1]));
}

#[test]
fn kite_formula_matches_direct_ratio() {
    let a = one_json(&["kite", "--n", "12", "--k", "6", "--output", "json"]);
    let b = one_json(&[
        "ratio",
        "--builtin",
        "kite",
        "--n",
        "12",
        "--k",
        "6",
        "--output",
        "json",
    ]);
    let (x, y) = (f(&a["gamma"]), f(&b["gamma"]));
    assert!((x - y).abs() <= 1e-8 * y);
}

#[test]
fn long_kites_default_to_log_mode() {
    let v = one_json(&["kite", "--n", "300", "--k", "250", "--output", "json"]);
    assert!(v.get("gamma").is_none());
    assert!(f(&v["log_gamma"]).is_finite());
    let explicit = one_json(&[
        "kite", "--n", "300", "--k", "250", "--mode", "log", "--output", "json",
    ]);
    assert_eq!(v, explicit);
}

#[test]
fn best_kite_of_four() {
    let v = one_json(&["best-kite", "--n", "4", "--output", "json"]);
    assert_eq!(v["k_star"], 2);
}

#[test]
fn search_order_four() {
    let v = one_json(&["search", "--n", "4", "--output", "json"]);
    assert_eq!(v["is_kite"], true);
    assert_eq!(v["kite_k"], 2);
    assert_eq!(v["class_count"], 6);
    assert_eq!(v["ranking"].as_array().unwrap().len(), 6);
    assert!((f(&v["gamma_max"]) - 3.5615528128).abs() < 1e-8);
}

#[test]
fn search_chunks_cover_the_corpus() {
    let mut labeled = 0;
    for i in 0..3 {
        let chunk = format!("{i}/3");
        let v = one_json(&["search", "--n", "5", "--chunk", &chunk, "--output", "json"]);
        labeled += v["labeled_count"].as_u64().unwrap();
    }
    assert_eq!(labeled, 728);
}

#[test]
fn universal_check_up_to_six() {
    let out = qratio(&[
        "check",
        "--suite",
        "universal",
        "--n-max",
        "6",
        "--output",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 5, "one summary per order, no violations");
    for l in &lines {
        assert_eq!(l["violations"], 0);
    }
    assert_eq!(lines[4]["graphs"], 26704);
}

#[test]
fn universal_check_csv_summary() {
    let out = qratio(&[
        "check",
        "--suite",
        "universal",
        "--n",
        "4",
        "--output",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("corpus,lemma_id,holds,violated,not_applicable,min_rel_margin")
    );
    assert_eq!(lines.count(), 3);
}

#[test]
fn maximizer_check_on_kite() {
    let out = qratio(&[
        "check",
        "--suite",
        "maximizer",
        "--builtin",
        "kite",
        "--n",
        "30",
        "--k",
        "24",
        "--output",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    assert_eq!(lines[0]["k"], 24);
    let hub = lines
        .iter()
        .find(|l| l["lemma_id"] == "hub_degree")
        .unwrap();
    assert_eq!(hub["status"], "diagnostic");
    assert_eq!(f(&hub["margin"]), 0.0);
}

#[test]
fn scan_three_rows() {
    let out = qratio(&["scan", "--n", "50,100,200", "--output", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json_lines(&out);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2]["n"], 200);
}

#[test]
fn exit_codes() {
    assert_eq!(qratio(&["ratio", "--graph6", "C~~"]).status.code(), Some(2));
    assert_eq!(qratio(&["ratio", "--graph6", "C?"]).status.code(), Some(3));
    assert_eq!(
        qratio(&["kite", "--n", "300", "--k", "250", "--mode", "linear"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        qratio(&["ratio", "--graph6", "C~", "--tol", "0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(qratio(&["search", "--n", "9"]).status.code(), Some(2));
}

#[test]
fn stdin_stream_lenient_and_strict() {
    let input = "C~\nC?\nnot graph6\nCh\n";
    let lenient = with_stdin(&["ratio", "--input", "-", "--output", "json"], input);
    assert_eq!(lenient.status.code(), Some(0));
    assert_eq!(json_lines(&lenient).len(), 2);

    let strict = with_stdin(&["ratio", "--input", "-", "--strict"], input);
    assert_eq!(strict.status.code(), Some(3));
    let bad_first = with_stdin(&["ratio", "--input", "-", "--strict"], "bad\nC~\n");
    assert_eq!(bad_first.status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        &["search", "--n", "5", "--output", "json"][..],
        &[
            "check",
            "--suite",
            "universal",
            "--n",
            "5",
            "--all",
            "--output",
            "json",
        ],
        &["scan", "--n", "20,30", "--output", "csv"],
    ] {
        let a = qratio(args);
        let b = qratio(args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
