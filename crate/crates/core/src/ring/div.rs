//! Exact division in the quotient ring.
//!
//! Leading-term division directly on canonical forms is incomplete: the
//! canonical monomials do not form a multiplicative monoid (a product can
//! collapse into t). Instead, each node pair is relabeled into a genuine
//! Laurent model: the branch variable x_i becomes t * y_i^{-1} (roles swap
//! when x_i is localized), which is a faithful monomial relabeling of the
//! canonical basis into Q[t, others][kept^{+-1}]. There, single-divisor
//! multivariate division is complete for exact divisibility, and membership
//! of the quotient in the unlocalized subring is a per-term exponent check.

use super::poly::merge_term;
use super::{Ctx, Monomial, QPoly, RingError, Var};
use num::{BigRational, Zero};
use std::collections::BTreeMap;

/// Exact quotient p / q: the unique r with r * q = p, or NotDivisible.
///
/// Panics if the context has node pairs but no smoothing parameter t (the
/// t-less pair ring has zero divisors and no well-defined exact division);
/// no engine operation divides there.
pub fn exact_div(p: &QPoly, q: &QPoly) -> Result<QPoly, RingError> {
    if p.ctx() != q.ctx() {
        return Err(RingError::ContextMismatch);
    }
    let ctx = p.ctx();
    if q.is_zero() {
        return Err(RingError::ZeroPolynomial);
    }
    if p.is_zero() {
        return Ok(QPoly::zero(ctx));
    }
    assert!(
        ctx.pairs().is_empty() || ctx.t_var().is_some(),
        "exact division is undefined over node pairs without t"
    );

    let units = unit_vars(ctx);
    let (pm, p_shift) = strip_units(to_model(p), &units);
    let (qm, q_shift) = strip_units(to_model(q), &units);

    let quo = divide_poly(&pm, &qm)?;

    let mut out = QPoly::zero(ctx);
    let width = ctx.registry().len();
    for (m, c) in quo {
        let mut e = m;
        for v in &units {
            e.exps[v.index()] += p_shift.exp(*v) - q_shift.exp(*v);
        }
        let back = from_model(ctx, e, width)?;
        out.add_term(back, c);
    }
    Ok(out)
}

/// Count the exact multiplicity of q in p: the largest k with q^k | p.
pub fn divisibility_multiplicity(p: &QPoly, q: &QPoly) -> Result<u32, RingError> {
    let mut k = 0;
    let mut cur = p.clone();
    loop {
        match exact_div(&cur, q) {
            Ok(next) => {
                cur = next;
                k += 1;
                if cur.is_zero() {
                    return Ok(k);
                }
            }
            Err(RingError::NotDivisible(_)) => return Ok(k),
            Err(e) => return Err(e),
        }
    }
}

/// Variables invertible in the Laurent model: kept pair variables and
/// localized non-pair variables.
fn unit_vars(ctx: &Ctx) -> Vec<Var> {
    let mut units: Vec<Var> = Vec::new();
    for pair in ctx.pairs() {
        if ctx.is_localized(pair.x) {
            units.push(pair.x);
        } else {
            units.push(pair.y);
        }
    }
    for v in ctx.localized() {
        if ctx.partner(*v).is_none() {
            units.push(*v);
        }
    }
    units
}

/// Relabel canonical monomials into the Laurent model.
fn to_model(p: &QPoly) -> BTreeMap<Monomial, BigRational> {
    let ctx = p.ctx();
    let mut out = BTreeMap::new();
    for (m, c) in p.terms.iter() {
        let mut e = m.clone();
        for pair in ctx.pairs() {
            if ctx.is_localized(pair.x) {
                // Canonical form never contains y here.
                debug_assert_eq!(e.exps[pair.y.index()], 0);
            } else {
                let ex = e.exps[pair.x.index()];
                if ex != 0 {
                    let t = ctx.t_var().expect("pairs require t");
                    e.exps[t.index()] += ex;
                    e.exps[pair.y.index()] -= ex;
                    e.exps[pair.x.index()] = 0;
                }
            }
        }
        merge_term(&mut out, e, c.clone());
    }
    out
}

/// Map one model monomial back to a canonical-ring monomial; errors when the
/// element lies only in the localized cover.
fn from_model(ctx: &Ctx, mut e: Monomial, _width: usize) -> Result<Monomial, RingError> {
    for pair in ctx.pairs() {
        if ctx.is_localized(pair.x) || ctx.is_localized(pair.y) {
            continue;
        }
        let ey = e.exps[pair.y.index()];
        if ey < 0 {
            let t = ctx.t_var().expect("pairs require t");
            e.exps[pair.x.index()] += -ey;
            e.exps[pair.y.index()] = 0;
            e.exps[t.index()] -= -ey;
        }
    }
    if let Some(t) = ctx.t_var() {
        if e.exps[t.index()] < 0 {
            return Err(RingError::NotDivisible(
                "quotient lies outside the ring (negative t power)".to_string(),
            ));
        }
    }
    for (v, exp) in e.support() {
        if exp < 0 && !ctx.is_localized(v) {
            return Err(RingError::NotDivisible(format!(
                "quotient lies outside the ring (negative power of {})",
                ctx.registry().name(v)
            )));
        }
    }
    Ok(e)
}

/// Shift unit-variable exponents so each has minimum zero; returns the shift
/// applied (as the monomial of subtracted minima).
fn strip_units(
    poly: BTreeMap<Monomial, BigRational>,
    units: &[Var],
) -> (BTreeMap<Monomial, BigRational>, Monomial) {
    let width = poly
        .keys()
        .next()
        .map(|m| m.exps.len())
        .unwrap_or(0);
    let mut shift = Monomial::one(width);
    for v in units {
        let mn = poly.keys().map(|m| m.exp(*v)).min().unwrap_or(0);
        shift.exps[v.index()] = mn;
    }
    let shifted = poly
        .into_iter()
        .map(|(mut m, c)| {
            for v in units {
                m.exps[v.index()] -= shift.exp(*v);
            }
            (m, c)
        })
        .collect();
    (shifted, shift)
}

/// Single-divisor multivariate division in an honest polynomial ring (all
/// exponents nonnegative). Complete for exact divisibility.
fn divide_poly(
    p: &BTreeMap<Monomial, BigRational>,
    q: &BTreeMap<Monomial, BigRational>,
) -> Result<BTreeMap<Monomial, BigRational>, RingError> {
    let (qlm, qlc) = q.iter().next_back().expect("nonzero divisor");
    let mut rem = p.clone();
    let mut quo: BTreeMap<Monomial, BigRational> = BTreeMap::new();
    while let Some((rlm, rlc)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
        let mut qm = rlm.clone();
        let mut ok = true;
        for (i, (re, qe)) in rlm.exps.iter().zip(qlm.exps.iter()).enumerate() {
            let d = re - qe;
            if d < 0 {
                ok = false;
                break;
            }
            qm.exps[i] = d;
        }
        if !ok {
            return Err(RingError::NotDivisible(format!(
                "{} stuck terms in model division",
                rem.len()
            )));
        }
        let qc = &rlc / qlc;
        for (m, c) in q.iter() {
            let prod = qm.mul(m);
            merge_term(&mut rem, prod, -(&qc * c));
        }
        debug_assert!(!rem.contains_key(&rlm) || rem[&rlm].is_zero());
        merge_term(&mut quo, qm, qc);
    }
    Ok(quo)
}
