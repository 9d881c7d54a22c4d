//! Acceptance gate: every exit criterion for the engine and driver, run in
//! order, one printed pass/fail line per criterion. Failures are collected
//! so every criterion reports before the test verdict.

use cyclemap_core::ring::contexts;
use cyclemap_core::ring::QPoly;
use cyclemap_core::symfun::{sigma_express, symmetrize, SigmaExpr};
use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::{Command, Output};
use std::time::Instant;

fn verify(args: &[&str]) -> (Output, f64) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .output()
        .expect("binary runs");
    (out, start.elapsed().as_secs_f64())
}

fn cert(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid json certificate")
}

struct Checks(Vec<serde_json::Value>);

impl Checks {
    fn from(out: &Output) -> Checks {
        Checks(cert(out)["checks"].as_array().expect("checks array").clone())
    }

    fn by_id(&self, id: &str) -> &serde_json::Value {
        self.0
            .iter()
            .find(|c| c["id"] == id)
            .unwrap_or_else(|| panic!("no check with id {id}"))
    }

    fn with_prefix(&self, prefix: &str) -> Vec<&serde_json::Value> {
        self.0
            .iter()
            .filter(|c| c["id"].as_str().expect("id").starts_with(prefix))
            .collect()
    }

    fn all_verified(&self) -> bool {
        self.0.iter().all(|c| c["status"] == "verified")
    }

    fn statuses(&self) -> Vec<&str> {
        self.0
            .iter()
            .map(|c| c["status"].as_str().expect("status"))
            .collect()
    }
}

fn criterion_1() -> Result<String, String> {
    let (out, secs) = verify(&["sigma"]);
    let checks = Checks::from(&out);
    if out.status.code() != Some(0) {
        return Err("sigma suite did not exit 0".into());
    }
    if !checks.all_verified() {
        return Err("a symmetric-function relation did not verify".into());
    }
    for m in 1..=6 {
        if checks.with_prefix(&format!("sigma/m={m}/")).is_empty() {
            return Err(format!("no relation instances at m={m}"));
        }
    }
    if secs >= 10.0 {
        return Err(format!("suite took {secs:.1}s, budget is 10s"));
    }
    Ok(format!(
        "all relation instances verified for m in [1,6] in {secs:.1}s"
    ))
}

fn random_invariant(rng: &mut ChaCha8Rng, m: usize) -> QPoly {
    let ctx = contexts::point_ring(m, &[]);
    loop {
        let mut p = QPoly::zero(&ctx);
        for _ in 0..rng.gen_range(1..=4) {
            let mut term = QPoly::constant(
                &ctx,
                BigRational::from_integer(BigInt::from(rng.gen_range(-9i64..=9))),
            );
            let mut budget = 6usize;
            for i in 1..=m {
                for name in [format!("x{i}"), format!("y{i}")] {
                    let e = rng.gen_range(0..=budget.min(3));
                    budget -= e;
                    if e > 0 {
                        let v = QPoly::named(&ctx, &name).expect("point variable");
                        term = term
                            .mul(&v.pow(e as u32).expect("power"))
                            .expect("product");
                    }
                }
            }
            p = p.add(&term).expect("sum");
        }
        let inv = symmetrize(&p).expect("averaging");
        if !inv.is_zero() {
            return inv;
        }
    }
}

fn criterion_2() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5ee_d);
    for trial in 0..100 {
        let m = 1 + (trial % 4);
        let inv = random_invariant(&mut rng, m);
        let expr = sigma_express(&inv)
            .map_err(|e| format!("trial {trial}: expression failed: {e}"))?;
        let back = SigmaExpr { m, expr: expr.expr }
            .evaluate(inv.ctx())
            .map_err(|e| format!("trial {trial}: evaluation failed: {e}"))?;
        if back != inv {
            return Err(format!("trial {trial}: round trip disagrees at m={m}"));
        }
    }
    Ok("100 random invariants (m <= 4, degree <= 6) round-trip exactly".into())
}

fn criterion_3() -> Result<String, String> {
    let (out, secs) = verify(&["g"]);
    let checks = Checks::from(&out);
    if out.status.code() != Some(0) {
        return Err("g suite did not exit 0".into());
    }
    if !checks.all_verified() {
        return Err("a determinant identity did not verify".into());
    }
    for m in 1..=6usize {
        for j in 1..=m {
            checks.by_id(&format!("g/m={m}/def/j={j}"));
        }
        if m >= 2 {
            checks.by_id(&format!("g/m={m}/recurrence/i=1"));
            checks.by_id(&format!("g/m={m}/syzygy/i=1"));
        }
        checks.by_id(&format!("g/m={m}/discriminant"));
    }
    let quadrics = checks
        .0
        .iter()
        .filter(|c| c["id"].as_str().expect("id").contains("/quadric/"))
        .count();
    if quadrics == 0 {
        return Err("no quadratic relation instances".into());
    }
    if secs >= 60.0 {
        return Err(format!("suite took {secs:.1}s, budget is 60s"));
    }
    Ok(format!(
        "determinant, recurrence, syzygy, and quadric identities verified for m in [1,6] in {secs:.1}s"
    ))
}

fn criterion_4() -> Result<String, String> {
    let (out, _) = verify(&["orders"]);
    let checks = Checks::from(&out);
    if out.status.code() != Some(1) {
        return Err("orders suite must exit 1 (printed-formula corrections)".into());
    }
    for m in 2..=6usize {
        for j in 1..=m {
            let mut zero_sizes: Vec<i64> = Vec::new();
            for k in 0..=m {
                let cell = checks.by_id(&format!("orders/m={m}/j={j}/size={k}"));
                let value = cell["detail"]["value"].as_i64().expect("order value");
                if value < 0 {
                    return Err(format!("negative order at m={m} j={j} size={k}"));
                }
                if value == 0 {
                    zero_sizes.push(k as i64);
                }
                if cell["detail"]["constant_on_size"] != true {
                    return Err(format!("order not constant on size class m={m} j={j} k={k}"));
                }
                let printed = cell["detail"]["printed"].as_i64().expect("printed value");
                let derived = cell["detail"]["derived"].as_i64().expect("derived value");
                if (cell["detail"]["matches_printed"] == true) != (value == printed) {
                    return Err(format!("printed-match flag wrong at m={m} j={j} k={k}"));
                }
                if (cell["detail"]["matches_derived"] == true) != (value == derived) {
                    return Err(format!("derived-match flag wrong at m={m} j={j} k={k}"));
                }
            }
            if zero_sizes.len() != 2 || zero_sizes[1] - zero_sizes[0] != 1 {
                return Err(format!(
                    "zero set at m={m} j={j} is {zero_sizes:?}, expected two adjacent sizes"
                ));
            }
            checks.by_id(&format!("orders/m={m}/j={j}/zero-sizes"));
        }
    }
    let anchor = checks.by_id("orders/m=3/j=1/size=1");
    if anchor["detail"]["value"] != 1 {
        return Err("hand-verified anchor (3,1,{1}) must have order 1".into());
    }
    Ok("order table nonnegative, constant per size, zero on two adjacent sizes; anchor (3,1,{1}) = 1".into())
}

fn criterion_5() -> Result<String, String> {
    let (out, _) = verify(&["eta"]);
    let checks = Checks::from(&out);
    if out.status.code() != Some(1) {
        return Err("eta suite must exit 1 (corrected exponent)".into());
    }
    for m in 1..=5usize {
        for i in 1..=m {
            for j in 1..=i {
                let cell = checks.by_id(&format!("eta/m={m}/i={i}/j={j}"));
                if cell["status"] == "failed" {
                    return Err(format!("no exact quotient exponent at m={m} i={i} j={j}"));
                }
                cell["detail"]["exponent"].as_i64().expect("exponent");
            }
        }
    }
    let anchor = checks.by_id("eta/m=2/i=2/j=1");
    if anchor["detail"]["exponent"] != 1 || anchor["status"] != "corrected" {
        return Err("(2,1) at m=2 must have exponent 1 reported as corrected".into());
    }
    Ok("unique t-exponents found for all m <= 5; (2,1) exponent 1 recorded as corrected".into())
}

fn criterion_6() -> Result<String, String> {
    let (out, secs) = verify(&["charts"]);
    let checks = Checks::from(&out);
    if out.status.code() != Some(0) {
        return Err("charts suite did not exit 0".into());
    }
    if !checks.all_verified() {
        return Err("a chart check did not verify".into());
    }
    for m in 1..=4usize {
        for i in 1..=m {
            checks.by_id(&format!("charts/m={m}/i={i}/closure"));
            checks.by_id(&format!("charts/m={m}/i={i}/product-xy"));
            checks.by_id(&format!("charts/m={m}/i={i}/product-yx"));
            checks.by_id(&format!("charts/m={m}/i={i}/charpoly-x"));
            checks.by_id(&format!("charts/m={m}/i={i}/charpoly-y"));
        }
        if checks.with_prefix(&format!("charts/m={m}/frel/")).is_empty() {
            return Err(format!("no generator relations checked at m={m}"));
        }
    }
    if secs >= 120.0 {
        return Err(format!("suite took {secs:.1}s, budget is 120s"));
    }
    Ok(format!(
        "multiplication matrices, characteristic polynomials, and generator relations verified for m in [1,4] in {secs:.1}s"
    ))
}

fn criterion_7() -> Result<String, String> {
    let (out, _) = verify(&["z"]);
    let checks = Checks::from(&out);
    if out.status.code() != Some(0) {
        return Err("z suite did not exit 0".into());
    }
    if !checks.all_verified() {
        return Err("a section-monomial relation did not verify".into());
    }
    if checks.with_prefix("z/m=6/rewrite/").is_empty() {
        return Err("monomial rewriting missing at m=6".into());
    }
    if checks.with_prefix("z/m=5/glink/").is_empty()
        || checks.with_prefix("z/m=5/gquad/").is_empty()
    {
        return Err("determinant substitution missing at m=5".into());
    }
    Ok("monomial rewriting verified for m <= 6; determinant substitution for m <= 5".into())
}

fn criterion_8() -> Result<String, String> {
    let (out, secs) = verify(&["elimination"]);
    let checks = Checks::from(&out);
    if out.status.code() != Some(0) {
        return Err("elimination suite did not exit 0".into());
    }
    for m in 1..=2 {
        let rec = checks.by_id(&format!("elim/m={m}"));
        if rec["status"] != "verified" {
            return Err(format!("double inclusion failed at m={m}"));
        }
    }
    if secs >= 60.0 {
        return Err(format!("m in [1,2] took {secs:.1}s, budget is 60s"));
    }
    let (slow_out, _) = verify(&["elimination", "--slow", "--timeout", "60"]);
    let slow_checks = Checks::from(&slow_out);
    let m3 = slow_checks.by_id("elim/m=3");
    match m3["status"].as_str().expect("status") {
        // From m = 3 the contraction strictly exceeds the ideal generated
        // by the stated product relations: the interior diagonal-step
        // relation sx1*sy1*t - sx2*sy2 is a true relation on the image
        // (certified by the sigma suite) that the stated generators do not
        // produce.  The check reports exact agreement with the completed
        // relation set as corrected, which is the honest outcome here.
        "corrected" => {
            for key in ["completed_forward", "completed_backward"] {
                if m3["detail"][key] != serde_json::Value::Bool(true) {
                    return Err(format!("m=3 corrected record lacks {key}=true"));
                }
            }
            if m3["detail"]["missing_from_stated"] != serde_json::json!(1) {
                return Err("m=3 should report exactly one missing relation".into());
            }
            Ok(format!(
                "double inclusion verified at m=1,2 in {secs:.1}s; m=3 corrected under --slow: \
                 contraction equals the stated relations plus one interior diagonal-step relation"
            ))
        }
        "skipped" => {
            let reason = m3["detail"]["reason"].as_str().unwrap_or("");
            if !reason.contains("time budget exhausted") {
                return Err("skipped m=3 run must report its timeout".into());
            }
            Ok(format!(
                "double inclusion verified at m=1,2 in {secs:.1}s; m=3 skipped on timeout and reported"
            ))
        }
        other => Err(format!("m=3 under --slow ended {other}")),
    }
}

fn criterion_9() -> Result<String, String> {
    let (out, _) = verify(&["strata"]);
    let checks = Checks::from(&out);
    if out.status.code() != Some(0) {
        return Err("strata suite did not exit 0".into());
    }
    if !checks.all_verified() {
        return Err("a stratum or punctual check did not verify".into());
    }
    for m in 1..=6usize {
        for a in 0..m {
            for b in 0..m {
                if a + b <= m - 1 {
                    checks.by_id(&format!("strata/m={m}/a={a}/b={b}"));
                }
            }
        }
        let principals = checks.with_prefix(&format!("fibre/punctual/m={m}/principal/"));
        if principals.is_empty() {
            return Err(format!("no punctual ideals checked at m={m}"));
        }
        for rec in principals {
            if rec["detail"]["length"] != m as i64 {
                return Err(format!("punctual length differs from {m}"));
            }
        }
    }
    if checks.with_prefix("fibre/interp/n=5/").is_empty() {
        return Err("interpolating sections missing at n=5".into());
    }
    Ok("fibre components, punctual lengths (= m), and interpolating sections verified".into())
}

fn criterion_10() -> Result<String, String> {
    let (out, _) = verify(&["scrolls"]);
    let checks = Checks::from(&out);
    if out.status.code() != Some(0) {
        return Err("scrolls suite did not exit 0".into());
    }
    if !checks.all_verified() {
        return Err("a divisor-class identity did not verify".into());
    }
    if checks.with_prefix("scrolls/dclass/n=8/").is_empty() {
        return Err("class symmetry missing at n=8".into());
    }
    if checks.with_prefix("scrolls/poly/m=12/").is_empty() {
        return Err("telescoping missing at m=12".into());
    }
    if checks.with_prefix("scrolls/node/").is_empty() {
        return Err("local/global scroll consistency missing".into());
    }
    let restrictions = checks.with_prefix("restriction/m=5/");
    if restrictions.is_empty() {
        return Err("restriction factorization missing at m=5".into());
    }
    for rec in restrictions {
        let detail = rec["detail"].as_object().expect("detail map");
        if !detail.keys().any(|k| k.ends_with("_multiplicity") || k == "free_point_order") {
            return Err("restriction record lacks factor counts".into());
        }
    }
    Ok("divisor classes, telescoping, and nonzero restrictions with factor counts verified".into())
}

fn criterion_11() -> Result<String, String> {
    let (first, _) = verify(&["all", "--jobs", "1"]);
    let (second, _) = verify(&["all", "--jobs", "3"]);
    if first.stdout != second.stdout {
        return Err("full-suite certificates differ across runs/worker counts".into());
    }
    if first.status.code() != Some(1) || second.status.code() != Some(1) {
        return Err(format!(
            "full default suite must exit 1, got {:?} and {:?}",
            first.status.code(),
            second.status.code()
        ));
    }
    let statuses = Checks::from(&first);
    if !statuses.statuses().contains(&"corrected") {
        return Err("full suite must carry corrected checks".into());
    }
    if statuses.statuses().contains(&"failed") {
        return Err("full suite must not carry failures".into());
    }
    Ok("byte-identical certificates across runs and worker counts; exit code 1".into())
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Result<String, String>)> = vec![
        ("symmetric-function relations", criterion_1),
        ("sigma-expression soundness", criterion_2),
        ("determinant identities", criterion_3),
        ("boundary-order table", criterion_4),
        ("quotient exponents", criterion_5),
        ("charts and flatness", criterion_6),
        ("section-monomial relations", criterion_7),
        ("elimination", criterion_8),
        ("strata and punctual schemes", criterion_9),
        ("scroll calculus", criterion_10),
        ("determinism and exit code", criterion_11),
    ];
    let mut failures = Vec::new();
    for (index, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(note) => println!("criterion {:2} PASS {name}: {note}", index + 1),
            Err(why) => {
                println!("criterion {:2} FAIL {name}: {why}", index + 1);
                failures.push(format!("{}: {why}", index + 1));
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
