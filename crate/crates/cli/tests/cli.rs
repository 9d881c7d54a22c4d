//! End-to-end behavior of the `verify` binary: exit codes, formats, bounds
//! guard, filters, cache handling, and byte-level determinism.

use std::process::{Command, Output};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn verify_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

fn parsed(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("valid json certificate")
}

#[test]
fn verified_suite_exits_zero_with_schema_in_declared_order() {
    let out = verify(&["sigma", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let cert = parsed(&out);
    let position = |key: &str| {
        text.find(&format!("\"{key}\""))
            .unwrap_or_else(|| panic!("field {key} missing"))
    };
    for pair in ["version", "suite", "params", "checks", "environment"].windows(2) {
        assert!(
            position(pair[0]) < position(pair[1]),
            "field {} must precede {}",
            pair[0],
            pair[1]
        );
    }
    for pair in ["id", "anchor", "status", "detail", "millis"].windows(2) {
        assert!(
            position(pair[0]) < position(pair[1]),
            "check field {} must precede {}",
            pair[0],
            pair[1]
        );
    }
    assert!(cert["checks"]
        .as_array()
        .expect("array")
        .iter()
        .all(|c| c["status"] == "verified"));
}

#[test]
fn corrected_suite_exits_one() {
    let out = verify(&["eta", "--m", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let cert = parsed(&out);
    let statuses: Vec<&str> = cert["checks"]
        .as_array()
        .expect("array")
        .iter()
        .map(|c| c["status"].as_str().expect("status string"))
        .collect();
    assert!(statuses.contains(&"corrected"));
    assert!(!statuses.contains(&"failed"));
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(verify(&["no-such-suite"]).status.code(), Some(3));
    assert_eq!(verify(&[]).status.code(), Some(3));
    assert_eq!(verify(&["sigma", "--format", "yaml"]).status.code(), Some(3));
}

#[test]
fn bounds_guard_demands_the_override_token() {
    let refused = verify(&["sigma", "--m", "9"]);
    assert_eq!(refused.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("--override-limit"));

    let wrong_token = verify(&["sigma", "--m", "9", "--override-limit", "yes"]);
    assert_eq!(wrong_token.status.code(), Some(3));

    let accepted = verify(&["sigma", "--m", "9", "--override-limit", "accept-blowup"]);
    assert_eq!(accepted.status.code(), Some(0));

    let within_default = verify(&["sigma"]);
    assert_eq!(within_default.status.code(), Some(0));
}

#[test]
fn index_filters_keep_matching_segments_only() {
    let out = verify(&["orders", "--m", "3", "--j", "2"]);
    let cert = parsed(&out);
    let checks = cert["checks"].as_array().expect("array");
    assert!(!checks.is_empty());
    for check in checks {
        let id = check["id"].as_str().expect("id");
        assert!(
            id.split('/').any(|seg| seg == "j=2"),
            "unexpected id {id} under --j 2"
        );
    }
    let narrowed = verify(&["scrolls", "--n", "3", "--j", "1", "--k", "2"]);
    let cert = parsed(&narrowed);
    let checks = cert["checks"].as_array().expect("array");
    assert!(!checks.is_empty());
    for check in checks {
        let id = check["id"].as_str().expect("id");
        assert!(id.split('/').any(|seg| seg == "j=1"));
        assert!(id.split('/').any(|seg| seg == "k=2"));
    }
}

#[test]
fn check_ids_are_unique_and_sorted() {
    let out = verify(&["strata", "--m", "3", "--n", "2"]);
    let cert = parsed(&out);
    let ids: Vec<&str> = cert["checks"]
        .as_array()
        .expect("array")
        .iter()
        .map(|c| c["id"].as_str().expect("id"))
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(ids, sorted);
}

#[test]
fn text_format_prints_one_glyph_line_per_check() {
    let json = parsed(&verify(&["z", "--m", "3"]));
    let text_out = verify(&["z", "--m", "3", "--format", "text"]);
    let text = stdout(&text_out);
    let check_lines: Vec<&str> = text.lines().filter(|l| l.starts_with('[')).collect();
    assert_eq!(
        check_lines.len(),
        json["checks"].as_array().expect("array").len()
    );
    for line in &check_lines {
        assert!(
            line.starts_with("[+]")
                || line.starts_with("[~]")
                || line.starts_with("[x]")
                || line.starts_with("[-]"),
            "line lacks a status glyph: {line}"
        );
    }
    assert!(text.lines().last().expect("summary").starts_with("summary:"));
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("cert.json");
    let to_file = verify(&["sigma", "--m", "1", "--out", path.to_str().expect("utf8 path")]);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let on_disk = std::fs::read(&path).expect("file written");
    let direct = verify(&["sigma", "--m", "1"]);
    assert_eq!(on_disk, direct.stdout);
}

#[test]
fn json_output_is_byte_identical_across_runs_and_worker_counts() {
    let a = verify(&["g", "--m", "3", "--jobs", "1"]);
    let b = verify(&["g", "--m", "3", "--jobs", "7"]);
    let c = verify(&["g", "--m", "3", "--jobs", "1"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn timings_flag_fills_the_volatile_fields() {
    let quiet = parsed(&verify(&["charts", "--m", "2"]));
    assert_eq!(quiet["environment"]["threads"], 0);
    assert_eq!(quiet["environment"]["cache_hits"], 0);
    assert!(quiet["checks"]
        .as_array()
        .expect("array")
        .iter()
        .all(|c| c["millis"] == 0));

    let timed = parsed(&verify(&["charts", "--m", "2", "--jobs", "2", "--timings"]));
    assert_eq!(timed["environment"]["threads"], 2);
}

#[test]
fn cache_round_trips_and_never_changes_statuses() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cache_dir = dir.path().join("gb");
    let cache_str = cache_dir.to_str().expect("utf8 path");

    let cold = verify(&["elimination", "--cache", cache_str]);
    assert_eq!(cold.status.code(), Some(0));
    let entries = std::fs::read_dir(&cache_dir).expect("cache dir").count();
    assert!(entries > 0, "cold run populates the cache");

    let warm = verify(&["elimination", "--cache", cache_str]);
    assert_eq!(warm.stdout, cold.stdout);

    let hits = parsed(&verify(&[
        "elimination",
        "--cache",
        cache_str,
        "--timings",
    ]));
    assert!(hits["environment"]["cache_hits"].as_u64().expect("count") > 0);

    let uncached = verify(&["elimination"]);
    assert_eq!(uncached.stdout, cold.stdout);
}

#[test]
fn cache_env_var_is_used_and_flag_takes_precedence() {
    let dir = tempfile::tempdir().expect("tempdir");
    let env_dir = dir.path().join("from-env");
    let flag_dir = dir.path().join("from-flag");

    let via_env = verify_env(
        &["z", "--m", "2"],
        "VERIFY_CACHE_DIR",
        env_dir.to_str().expect("utf8 path"),
    );
    assert_eq!(via_env.status.code(), Some(0));
    assert!(env_dir.is_dir(), "env var directs the cache");

    let via_flag = verify_env(
        &["z", "--m", "3", "--cache", flag_dir.to_str().expect("utf8 path")],
        "VERIFY_CACHE_DIR",
        dir.path().join("ignored").to_str().expect("utf8 path"),
    );
    assert_eq!(via_flag.status.code(), Some(0));
    assert!(flag_dir.is_dir(), "flag wins over the env var");
    assert!(!dir.path().join("ignored").exists());
}

#[test]
fn global_timeout_reports_skipped_checks_not_failures() {
    let out = verify(&["charts", "--m", "4", "--timeout", "0"]);
    assert_eq!(out.status.code(), Some(0), "timeouts never fail a run");
    let cert = parsed(&out);
    let checks = cert["checks"].as_array().expect("array");
    assert!(checks
        .iter()
        .any(|c| c["status"] == "skipped"
            && c["detail"]["reason"]
                .as_str()
                .expect("reason")
                .contains("time budget exhausted")));
    assert!(checks.iter().all(|c| c["status"] != "failed"));
}

#[test]
fn json_round_trips_through_the_parser() {
    let out = verify(&["orders", "--m", "4"]);
    let text = stdout(&out);
    let value: serde_json::Value = serde_json::from_str(&text).expect("parses");
    let re_rendered = serde_json::to_string_pretty(&value).expect("renders");
    let re_parsed: serde_json::Value = serde_json::from_str(&re_rendered).expect("re-parses");
    assert_eq!(value, re_parsed, "round trip preserves the certificate");
    for check in value["checks"].as_array().expect("array") {
        assert!(check["anchor"]["location"].is_string());
        assert!(check["anchor"]["quote"].is_string());
        assert!(check["millis"].is_number());
    }
}

#[test]
fn help_is_available_without_a_usage_failure() {
    let out = verify(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}
