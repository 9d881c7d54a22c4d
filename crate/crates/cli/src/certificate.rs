//! Certificate model and deterministic emission.
//!
//! The JSON layout is fixed: field order follows the struct declarations,
//! detail maps are key-sorted, and checks are pre-sorted by id, so identical
//! inputs serialize to identical bytes regardless of worker count. Integers
//! that fit 64 bits serialize as JSON numbers; wider values arrive from the
//! engine already rendered as decimal strings and stay strings.

use cyclemap_core::report::{CheckRecord, Detail, Status};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: String,
    pub suite: String,
    pub params: Params,
    pub checks: Vec<Check>,
    pub environment: Environment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub j: Option<usize>,
    pub k: Option<usize>,
    pub slow: bool,
    pub timeout: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub anchor: AnchorOut,
    pub status: String,
    pub detail: BTreeMap<String, serde_json::Value>,
    pub millis: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorOut {
    pub location: String,
    pub quote: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub threads: usize,
    pub cache_hits: u64,
}

fn detail_value(d: &Detail) -> serde_json::Value {
    match d {
        Detail::Num(n) => serde_json::Value::from(*n),
        Detail::Big(s) => serde_json::Value::String(s.clone()),
        Detail::Text(s) => serde_json::Value::String(s.clone()),
        Detail::Bool(b) => serde_json::Value::Bool(*b),
    }
}

pub fn check_from_record(record: &CheckRecord, millis: u64) -> Check {
    Check {
        id: record.id.clone(),
        anchor: AnchorOut {
            location: record.anchor.location.to_string(),
            quote: record.anchor.quote.to_string(),
        },
        status: record.status.as_str().to_string(),
        detail: record
            .detail
            .iter()
            .map(|(k, v)| (k.clone(), detail_value(v)))
            .collect(),
        millis,
    }
}

pub fn to_json(cert: &Certificate) -> String {
    let mut s = serde_json::to_string_pretty(cert).expect("certificate model always serializes");
    s.push('\n');
    s
}

fn glyph(status: &str) -> &'static str {
    match status {
        "verified" => "+",
        "corrected" => "~",
        "failed" => "x",
        _ => "-",
    }
}

/// One line per check: glyph, id, status, then the detail pairs.
pub fn to_text(cert: &Certificate) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "suite {} (engine {}), {} checks\n",
        cert.suite,
        cert.version,
        cert.checks.len()
    ));
    let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
    for check in &cert.checks {
        *tally.entry(check.status.as_str()).or_insert(0) += 1;
        out.push_str(&format!(
            "[{}] {} {}",
            glyph(&check.status),
            check.id,
            check.status
        ));
        for (key, value) in &check.detail {
            let rendered = match value {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!(" {key}={rendered}"));
        }
        if check.millis > 0 {
            out.push_str(&format!(" ({} ms)", check.millis));
        }
        out.push('\n');
    }
    let summary: Vec<String> = tally
        .iter()
        .map(|(status, count)| format!("{count} {status}"))
        .collect();
    out.push_str(&format!("summary: {}\n", summary.join(", ")));
    out
}

/// Exit code from the emitted checks: failures dominate, then corrections;
/// skipped checks never fail a run.
pub fn exit_code(records: &[(CheckRecord, u64)]) -> i32 {
    let mut code = 0;
    for (record, _) in records {
        match record.status {
            Status::Failed => return 2,
            Status::Corrected => code = code.max(1),
            Status::Verified | Status::Skipped => {}
        }
    }
    code
}
