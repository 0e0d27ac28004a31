use std::process::{Command, Output};

use serde_json::Value;

fn stackwords(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stackwords"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = stackwords(&full);
    assert!(out.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn sort_reports_image_and_minimal_passes() {
    let v = json(&["sort", "231", "-t", "2"]);
    assert_eq!(v["image"], "123");
    assert_eq!(v["sortable"], true);
    assert_eq!(v["min_t"], 2);

    let v = json(&["sort", "123", "-t", "1"]);
    assert_eq!(v["image"], "123");
    assert_eq!(v["min_t"], 0);

    let v = json(&["sort", "2341", "-t", "2"]);
    assert_eq!(v["image"], "2134");
    assert_eq!(v["sortable"], false);
}

#[test]
fn bad_permutation_exits_2() {
    let out = stackwords(&["sort", "2,2,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate value 2"));
}

#[test]
fn encode_reports_projection_and_violations() {
    let v = json(&["word", "encode", "21", "-t", "3"]);
    assert_eq!(v["word"], "AABCBDCD");
    assert_eq!(v["v"], "BCBDCD");
    assert_eq!(v["AA"], 1);
    assert_eq!(v["BB"], 0);
    assert_eq!(v["violations"], Value::Array(vec![]));
}

#[test]
fn encode_trace_lists_every_move() {
    let v = json(&["word", "encode", "21", "-t", "3", "--trace"]);
    let steps = v["trace"].as_array().unwrap();
    assert_eq!(steps.len(), 8);
    assert_eq!(steps[0]["letter"], "A");
    assert_eq!(steps[0]["value"], 2);
    assert_eq!(steps[7]["output"], serde_json::json!([1, 2]));
}

#[test]
fn projection_flag_needs_three_stacks() {
    let out = stackwords(&["word", "encode", "21", "-t", "2", "--project"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn decode_roundtrips() {
    let v = json(&["word", "decode", "ABCD", "-t", "3"]);
    assert_eq!(v["permutation"], "1");
    assert_eq!(v["roundtrip"], true);

    let out = stackwords(&["word", "decode", "ABBA", "-t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 3"));
}

#[test]
fn count_agrees_and_labels_bounds() {
    let v = json(&["count", "4", "-t", "2", "--mode", "both"]);
    assert_eq!(v["formula"], "22");
    assert_eq!(v["brute"], "22");
    assert_eq!(v["verdict"], "AGREE");

    let out = stackwords(&["--format", "json", "count", "3", "-t", "3", "--mode", "both"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("upper bound"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["bound"], "10");
    assert_eq!(v["formula_kind"], "upper bound (Lemma)");
    assert_eq!(v["brute"], "6");
    assert_eq!(v["verdict"], "consistent");
    assert!(v.get("formula").is_none());
}

#[test]
fn count_respects_enumeration_limit() {
    let out = stackwords(&["count", "11", "-t", "1", "--mode", "brute"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("enumeration limit"));

    let out = stackwords(&["--limit", "13", "count", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn count_cache_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("counts.csv");
    let cache_arg = cache.to_str().unwrap();
    let out = stackwords(&["--cache", cache_arg, "count", "5", "-t", "2", "--mode", "brute"]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), "n,t,count\n5,2,91\n");
    // A second run reads the cached row.
    std::fs::write(&cache, "n,t,count\n5,2,91\n6,1,132\n").unwrap();
    let v = json(&["--cache", cache_arg, "count", "6", "-t", "1", "--mode", "both"]);
    assert_eq!(v["verdict"], "AGREE");
}

#[test]
fn bound_lists_summands() {
    let v = json(&["bound", "3"]);
    assert_eq!(v["bound"], "10");
    assert_eq!(v["kind"], "upper bound (Lemma)");
    let s = v["summands"].as_array().unwrap();
    assert_eq!(s.len(), 2);
    assert_eq!(s[0]["summand"], "6");
    assert_eq!(s[1]["summand"], "4");
}

#[test]
fn asymptote_reports_maximum_and_table() {
    let v = json(&["asymptote"]);
    let x = v["x_star"].as_f64().unwrap();
    let closed = v["closed_form_x_star"].as_f64().unwrap();
    assert!((x - closed).abs() < 1e-7);
    assert!((v["g_star"].as_f64().unwrap() - 12.53296).abs() < 5e-5);
    assert_eq!(v["method"], "golden_section");
    assert!(v["iterations"].as_u64().unwrap() > 0);
    assert_eq!(v["tolerance"].as_f64().unwrap(), 1e-10);
    let rows = v["convergence"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let last = rows[4]["bound_nth_root"].as_f64().unwrap();
    assert!((11.5..=12.6).contains(&last));

    let out = stackwords(&["asymptote"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("0.2883919"), "{text}");
    assert!(text.contains("12.53295"), "{text}");

    let out = stackwords(&["--format", "csv", "asymptote"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("n,bound_nth_root\n10,"));
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        &["--format", "json", "verify", "quick"][..],
        &["--format", "json", "asymptote"][..],
        &["--format", "json", "count", "6", "-t", "3"][..],
    ] {
        let a = stackwords(args);
        let b = stackwords(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn quick_verify_passes() {
    let out = stackwords(&["verify", "quick"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("0 failed"));
    assert!(!text.contains("[FAIL]"));
}

#[test]
fn bad_tolerance_is_a_usage_error() {
    let out = stackwords(&["--tolerance", "0", "asymptote"]);
    assert_eq!(out.status.code(), Some(2));
}
