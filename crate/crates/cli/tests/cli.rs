use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn negbeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_negbeta"))
        .args(args)
        .env_remove("NEGBETA_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = negbeta(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", stdout(&out)));
    (v, out.status.code().expect("exit code"))
}

#[test]
fn analyze_text_shows_polynomial_and_value() {
    let out = negbeta(&["analyze", "4321", "--format", "text"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let line = text.lines().find(|l| l.starts_with("polynomial")).expect("polynomial line");
    assert!(line.contains("x^3 - 2x^2 - x + 1"), "{line}");
    let line = text.lines().find(|l| l.starts_with("B-")).expect("value line");
    assert!(line.contains("2.247"), "{line}");
}

#[test]
fn invert_two_gives_1243() {
    let (v, code) = json(&["invert", "(2)"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "negbeta/1");
    assert_eq!(v["command"], "invert");
    assert_eq!(v["inputs"]["word"], "(2)");
    assert_eq!(v["result"]["pi"], "1243");
    assert_eq!(v["result"]["verified"], true);
    assert_eq!(v["result"]["b_minus"]["exact"], "2");
    for key in ["c", "rho", "y"] {
        assert!(v["result"].get(key).is_some(), "missing {key}");
    }
    assert!(v.get("timing_ms").is_none());
}

#[test]
fn count_b1_lists_counts() {
    let out = negbeta(&["count-b1", "6", "--format", "text"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "2 5 12 19 34\n");
}

#[test]
fn spectrum_csv_has_one_row_per_permutation() {
    let out = negbeta(&["spectrum", "4", "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("value,exact,polynomial,n,pi"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 24);
    assert!(rows.contains(&"2.246979603717,,x^3 - 2x^2 - x + 1,4,4321"));
    assert!(rows.contains(&"2.000000000000,2,x - 2,4,1243"));
}

#[test]
fn domain_errors_exit_two_with_reason() {
    let (v, code) = json(&["analyze", "1223"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["reason"], "malformed-permutation");
    assert_eq!(v["error"]["exit_code"], 2);
    let (v, code) = json(&["invert", "(10)"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["reason"], "malformed-word");
    let (v, code) = json(&["expansion", "--beta", "1/2"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["reason"], "malformed-beta");
}

#[test]
fn low_precision_is_undecidable() {
    let (v, code) = json(&["expansion", "--beta", "poly:1,0,-1,-5:1", "--digits", "300", "--precision", "32"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["reason"], "undecidable-at-precision");
}

#[test]
fn tight_search_bounds_are_inconclusive() {
    let (v, code) = json(&["realize", "4321", "--max-alphabet", "2"]);
    assert_eq!(code, 4);
    assert_eq!(v["error"]["reason"], "search-inconclusive");
}

#[test]
fn precision_flag_beats_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_negbeta"));
        cmd.args(["pat", "(100)", "3"]).env_remove("NEGBETA_PRECISION");
        if let Some(e) = env {
            cmd.env("NEGBETA_PRECISION", e);
        }
        if let Some(f) = flag {
            cmd.args(["--precision", f]);
        }
        let v: Value = serde_json::from_slice(&cmd.output().unwrap().stdout).unwrap();
        v["precision"]["max_bits"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 4096);
    assert_eq!(run(Some("256"), None), 256);
    assert_eq!(run(Some("256"), Some("512")), 512);
}

#[test]
fn output_is_identical_across_job_counts() {
    for args in [&["spectrum", "6"][..], &["check", "--cases", "60", "--seed", "11"][..], &["extremal", "6"][..]] {
        let base = stdout(&negbeta(args));
        for jobs in ["1", "3"] {
            let mut with_jobs = args.to_vec();
            with_jobs.extend(["--jobs", jobs]);
            assert_eq!(stdout(&negbeta(&with_jobs)), base, "{args:?} --jobs {jobs}");
        }
    }
}

#[test]
fn seed_changes_sampled_cases_only() {
    let (a, code) = json(&["check", "--cases", "40", "--seed", "1"]);
    assert_eq!(code, 0);
    let (b, _) = json(&["check", "--cases", "40", "--seed", "2"]);
    assert_eq!(a["result"]["all_passed"], true);
    assert_eq!(b["result"]["all_passed"], true);
    assert_eq!(a["inputs"]["seed"], 1);
}

#[test]
fn timing_only_when_requested() {
    let (v, _) = json(&["pat", "(100)", "3", "--timing"]);
    assert!(v["timing_ms"].is_u64());
}

#[test]
fn membership_and_patterns() {
    let (v, _) = json(&["member", "(2)", "--beta", "2"]);
    assert_eq!(v["result"]["member"], true);
    let (v, _) = json(&["member", "(10)", "--beta", "2"]);
    assert_eq!(v["result"]["member"], false);
    let (v, _) = json(&["pat", "(100)", "3"]);
    assert_eq!(v["result"]["pi"], "321");
    let (v, _) = json(&["expansion", "--beta", "poly:1,-1,-1:1"]);
    assert_eq!(v["result"]["expansion"], "1(0)");
    assert_eq!(v["result"]["backend"], "quadratic");
}

#[test]
fn verify_reports_a_consistent_sandwich() {
    let (v, code) = json(&["verify", "1243", "--margin", "0.05"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["consistent"], true);
    assert_eq!(v["inputs"]["margin"], "1/20");
}

fn pinned() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts/worked_examples.expected")
}

/// Replays every `$ negbeta …` block of the pinned transcript.
#[test]
fn worked_examples_match_pinned_output() {
    let transcript = std::fs::read_to_string(pinned()).expect("pinned transcript");
    let mut blocks = 0;
    for block in transcript.split("$ negbeta ").filter(|b| !b.is_empty()) {
        let (cmd, expected) = block.split_once('\n').expect("command line");
        let args: Vec<&str> = cmd.split_whitespace().collect();
        let actual = stdout(&negbeta(&args));
        assert_eq!(format!("{actual}\n"), expected, "negbeta {cmd}");
        blocks += 1;
    }
    assert_eq!(blocks, 11);
}
