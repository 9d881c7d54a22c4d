//! Black-box runs of every public check suite at small parameters,
//! asserting the statuses the engine is designed to produce — including
//! the formula corrections it exists to detect.

use std::collections::BTreeSet;

use cyclemap_core::charts::chart_suite;
use cyclemap_core::elim::{elimination_check, z_suite};
use cyclemap_core::fibres::{interpolation_suite, punctual_suite, strata_suite};
use cyclemap_core::groebner::GbConfig;
use cyclemap_core::report::{worst_status, CheckReport, Detail, Status};
use cyclemap_core::scroll::scroll_suite;
use cyclemap_core::symfun::verify_sigma_relations;
use cyclemap_core::vdm::{
    eta_suite, g_suite, localization_suite, restriction_suite, theta_suite, theta_valuation,
};

fn cfg() -> GbConfig {
    GbConfig::default()
}

#[test]
fn identity_suites_verify_at_small_parameters() {
    let mut suites: Vec<(String, CheckReport)> = Vec::new();
    for m in 1..=4 {
        suites.push((format!("sigma m={m}"), verify_sigma_relations(m).unwrap()));
    }
    for m in 1..=3 {
        suites.push((format!("g m={m}"), g_suite(m).unwrap()));
        suites.push((format!("loc m={m}"), localization_suite(m).unwrap()));
        suites.push((format!("z m={m}"), z_suite(m, 3, cfg()).unwrap()));
        suites.push((format!("strata m={m}"), strata_suite(m, cfg()).unwrap()));
        suites.push((format!("punctual m={m}"), punctual_suite(m, cfg()).unwrap()));
        suites.push((
            format!("interp n={m}"),
            interpolation_suite(m, cfg()).unwrap(),
        ));
        suites.push((format!("restrict m={m}"), restriction_suite(m).unwrap()));
    }
    for m in 1..=2 {
        suites.push((format!("charts m={m}"), chart_suite(m, cfg()).unwrap()));
    }
    suites.push(("scrolls".into(), scroll_suite(4, 5).unwrap()));
    for (name, report) in &suites {
        assert!(!report.is_empty(), "{name} produced no records");
        assert_eq!(worst_status(report), Status::Verified, "{name}");
    }
}

#[test]
fn eta_suite_reports_the_known_exponent_correction() {
    let report = eta_suite(2).unwrap();
    assert_eq!(worst_status(&report), Status::Corrected);
    let rec = report
        .iter()
        .find(|r| r.id == "eta/m=2/i=2/j=1")
        .expect("the (2,1) cell is present");
    assert_eq!(rec.status, Status::Corrected);
    assert_eq!(rec.detail.get("exponent"), Some(&Detail::Num(1)));
    assert_eq!(rec.detail.get("printed"), Some(&Detail::Num(0)));
}

#[test]
fn theta_suite_corrects_cells_without_failing_any() {
    let report = theta_suite(3).unwrap();
    assert_eq!(worst_status(&report), Status::Corrected);
    assert!(report
        .iter()
        .all(|r| matches!(r.status, Status::Verified | Status::Corrected)));
    // Hand-computed anchor: m = 3, j = 1, a single marked component.
    let mut singleton = BTreeSet::new();
    singleton.insert(1usize);
    assert_eq!(theta_valuation(3, 1, &singleton).unwrap(), 1);
}

#[test]
fn contraction_needs_one_extra_generator_from_three_points_on() {
    for m in 1..=2 {
        let rec = elimination_check(m, cfg());
        assert_eq!(rec.status, Status::Verified, "m={m}");
    }
    let rec = elimination_check(3, cfg());
    assert_eq!(rec.status, Status::Corrected);
    assert_eq!(rec.detail.get("missing_from_stated"), Some(&Detail::Num(1)));
    assert_eq!(
        rec.detail.get("missing_0"),
        Some(&Detail::text("sx1*sy1*t - sx2*sy2"))
    );
}

#[test]
fn records_have_unique_ids_and_nonempty_anchors() {
    let mut report = verify_sigma_relations(3).unwrap();
    report.extend(g_suite(2).unwrap());
    report.extend(theta_suite(2).unwrap());
    report.extend(chart_suite(1, cfg()).unwrap());
    let ids: Vec<&str> = report.iter().map(|r| r.id.as_str()).collect();
    let unique: BTreeSet<&str> = ids.iter().copied().collect();
    assert_eq!(ids.len(), unique.len(), "duplicate record id");
    for rec in &report {
        assert!(!rec.anchor.location.is_empty(), "{}", rec.id);
        assert!(!rec.anchor.quote.is_empty(), "{}", rec.id);
    }
}
