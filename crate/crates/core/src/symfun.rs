//! Elementary symmetric functions of the branch coordinates, the
//! symmetrization operator, and exact expression of diagonal invariants in
//! the elementary symmetric values.
//!
//! Expression works with monomial orbit sums (coefficient-one sums over a
//! relabeling orbit). For disjoint supports the product of two pure orbit
//! sums contains each mixed orbit monomial with coefficient exactly one, so
//! orbitsum(x-part, y-part) = orbitsum(x-part) * orbitsum(y-part) minus an
//! overlap divisible by t of strictly smaller total degree; the loop
//! strictly decreases the leading monomial and terminates.

use crate::report::{anchors, CheckRecord, CheckReport, Detail, Status};
use crate::ring::{contexts, Ctx, Monomial, QPoly, RingError, Var, VarKind};
use itertools::Itertools;
use num::{BigInt, BigRational, One};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("symmetric index {0} out of range for {1} points")]
    IndexOutOfRange(usize, usize),
    #[error("polynomial involves non-point variables: {0}")]
    ForeignVariables(String),
    #[error("polynomial is not a diagonal invariant: moved by transposition ({0} {1})")]
    NotInvariant(usize, usize),
    #[error("expression loop exceeded its iteration guard")]
    RecursionDepthExceeded,
}

/// Which branch coordinate family an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    fn coord_name(self, i: usize) -> String {
        match self {
            Axis::X => format!("x{i}"),
            Axis::Y => format!("y{i}"),
        }
    }

    pub fn symbol_name(self, j: usize) -> String {
        match self {
            Axis::X => format!("sx{j}"),
            Axis::Y => format!("sy{j}"),
        }
    }
}

/// Number of node pairs in a point-ring context.
pub fn point_count(ctx: &Ctx) -> usize {
    ctx.pairs().len()
}

/// Elementary symmetric polynomial of degree j in the m coordinates of one
/// branch; j = 0 gives 1.
pub fn elem_sym(ctx: &Ctx, axis: Axis, j: usize) -> Result<QPoly, SymError> {
    let m = point_count(ctx);
    if j > m {
        return Err(SymError::IndexOutOfRange(j, m));
    }
    let vars: Vec<Var> = (1..=m)
        .map(|i| ctx.var(&axis.coord_name(i)))
        .collect::<Result<_, _>>()?;
    let mut out = QPoly::zero(ctx);
    for subset in vars.iter().combinations(j) {
        let mut m0 = Monomial::one(ctx.registry().len());
        for v in subset {
            m0.exps[v.index()] += 1;
        }
        out.add_term(m0, BigRational::one());
    }
    Ok(out)
}

fn ensure_point_poly(p: &QPoly) -> Result<(), SymError> {
    let reg = p.ctx().registry();
    for (m, _) in p.terms() {
        for (v, _) in m.support() {
            match reg.info(v).kind {
                VarKind::X(_) | VarKind::Y(_) | VarKind::T => {}
                _ => {
                    return Err(SymError::ForeignVariables(reg.name(v).to_string()));
                }
            }
        }
    }
    Ok(())
}

/// Averaging operator: (1/m!) sum over all simultaneous relabelings of the
/// node pairs.
pub fn symmetrize(p: &QPoly) -> Result<QPoly, SymError> {
    ensure_point_poly(p)?;
    let m = point_count(p.ctx());
    let mut acc = QPoly::zero(p.ctx());
    let mut count: u64 = 0;
    for perm in (1..=m).permutations(m) {
        acc = acc.add(&p.permute_points(&perm)?)?;
        count += 1;
    }
    if count == 0 {
        return Ok(p.clone());
    }
    let inv = BigRational::new(BigInt::one(), BigInt::from(count));
    Ok(acc.scale(&inv))
}

/// Invariance test by adjacent transpositions (they generate the full
/// relabeling group).
pub fn is_invariant(p: &QPoly) -> Result<bool, SymError> {
    ensure_point_poly(p)?;
    let m = point_count(p.ctx());
    for i in 1..m {
        let mut perm: Vec<usize> = (1..=m).collect();
        perm.swap(i - 1, i);
        if &p.permute_points(&perm)? != p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A polynomial in the elementary symmetric symbols sx_j, sy_j, t, together
/// with the point count it refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaExpr {
    pub m: usize,
    pub expr: QPoly,
}

impl SigmaExpr {
    /// Substitute each symbol by its elementary symmetric polynomial.
    pub fn evaluate(&self, point_ctx: &Ctx) -> Result<QPoly, SymError> {
        debug_assert_eq!(point_count(point_ctx), self.m);
        let mut bases: BTreeMap<Var, QPoly> = BTreeMap::new();
        for (mono, _) in self.expr.terms() {
            for (v, _) in mono.support() {
                if bases.contains_key(&v) {
                    continue;
                }
                let base = match self.expr.ctx().registry().info(v).kind {
                    VarKind::SigmaX(j) => elem_sym(point_ctx, Axis::X, j)?,
                    VarKind::SigmaY(j) => elem_sym(point_ctx, Axis::Y, j)?,
                    VarKind::T => QPoly::named(point_ctx, "t")?,
                    _ => unreachable!("sigma ring has only symbol variables"),
                };
                bases.insert(v, base);
            }
        }
        horner_substitute(&self.expr, point_ctx, &bases)
    }
}

/// Substitute symbols by nested Horner steps: split off one symbol at a time,
/// recurse on the cofactors, and recombine with repeated multiplications by
/// the symbol's expansion. The symbol whose expansion has the fewest terms is
/// consumed at the outermost level, so the largest accumulated polynomials
/// only ever multiply the smallest expansions.
fn horner_substitute(
    expr: &QPoly,
    point_ctx: &Ctx,
    bases: &BTreeMap<Var, QPoly>,
) -> Result<QPoly, SymError> {
    let mut pick: Option<(usize, Var)> = None;
    for (mono, _) in expr.terms() {
        for (v, _) in mono.support() {
            let size = bases[&v].num_terms();
            if pick.map_or(true, |(s, pv)| (size, v.index()) < (s, pv.index())) {
                pick = Some((size, v));
            }
        }
    }
    let Some((_, v)) = pick else {
        let mut out = QPoly::zero(point_ctx);
        for (_, c) in expr.terms() {
            out = out.add(&QPoly::constant(point_ctx, c.clone()))?;
        }
        return Ok(out);
    };
    let mut groups: BTreeMap<i32, QPoly> = BTreeMap::new();
    for (mono, c) in expr.terms() {
        let e = mono.exp(v);
        debug_assert!(e >= 0);
        let mut stripped = mono.clone();
        stripped.exps[v.index()] = 0;
        groups
            .entry(e)
            .or_insert_with(|| QPoly::zero(expr.ctx()))
            .add_term(stripped, c.clone());
    }
    let base = &bases[&v];
    let mut acc: Option<QPoly> = None;
    let mut prev_e = 0;
    for (&e, sub) in groups.iter().rev() {
        let part = horner_substitute(sub, point_ctx, bases)?;
        acc = Some(match acc {
            None => part,
            Some(mut a) => {
                for _ in 0..(prev_e - e) {
                    a = a.mul(base)?;
                }
                a.add(&part)?
            }
        });
        prev_e = e;
    }
    let mut a = acc.expect("grouping of a nonzero expression is nonempty");
    for _ in 0..prev_e {
        a = a.mul(base)?;
    }
    Ok(a)
}

/// Orbit sum: each distinct monomial of the simultaneous relabeling orbit of
/// the given exponent vectors, with coefficient one.
fn orbit_sum(ctx: &Ctx, xexp: &[i32], yexp: &[i32]) -> Result<QPoly, SymError> {
    let m = point_count(ctx);
    let width = ctx.registry().len();
    let mut seen: BTreeMap<Monomial, ()> = BTreeMap::new();
    for perm in (1..=m).permutations(m) {
        let mut mono = Monomial::one(width);
        for i in 1..=m {
            let j = perm[i - 1];
            if xexp[i - 1] != 0 {
                let v = ctx.var(&format!("x{j}"))?;
                mono.exps[v.index()] += xexp[i - 1];
            }
            if yexp[i - 1] != 0 {
                let v = ctx.var(&format!("y{j}"))?;
                mono.exps[v.index()] += yexp[i - 1];
            }
        }
        seen.insert(mono, ());
    }
    let mut out = QPoly::zero(ctx);
    for (mono, _) in seen {
        out.add_term(mono, BigRational::one());
    }
    Ok(out)
}

/// Express the orbit sum of a pure (single-branch) exponent pattern in the
/// elementary symmetric symbols, by the classical leading-partition descent.
fn express_pure(
    ctx: &Ctx,
    sctx: &Ctx,
    axis: Axis,
    pattern: &[i32],
    memo: &mut BTreeMap<(bool, Vec<i32>), (QPoly, QPoly)>,
) -> Result<(QPoly, QPoly), SymError> {
    let mut sorted: Vec<i32> = pattern.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let key = (matches!(axis, Axis::X), sorted.clone());
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let m = point_count(ctx);
    let zeros = vec![0i32; m];
    let target = match axis {
        Axis::X => orbit_sum(ctx, &sorted, &zeros)?,
        Axis::Y => orbit_sum(ctx, &zeros, &sorted)?,
    };
    let mut residual = target.clone();
    let mut expr = QPoly::zero(sctx);
    let mut guard = 0usize;
    while !residual.is_zero() {
        guard += 1;
        if guard > 100_000 {
            return Err(SymError::RecursionDepthExceeded);
        }
        let (lead, c) = {
            let (mono, c) = residual.leading().expect("nonzero");
            (mono.clone(), c.clone())
        };
        // Leading exponents, sorted by coordinate position, form the
        // dominant partition of the class.
        let mut lambda = vec![0i32; m + 1];
        for (v, e) in lead.support() {
            match ctx.registry().info(v).kind {
                VarKind::X(i) if matches!(axis, Axis::X) => lambda[i - 1] = e,
                VarKind::Y(i) if matches!(axis, Axis::Y) => lambda[i - 1] = e,
                _ => unreachable!("pure orbit residual stays on one branch"),
            }
        }
        let mut sym_term = QPoly::constant(sctx, c.clone());
        let mut eval_term = QPoly::constant(ctx, c.clone());
        for k in 1..=m {
            let e = lambda[k - 1] - lambda[k];
            debug_assert!(e >= 0, "leading class must be dominance-sorted");
            if e > 0 {
                let sym = QPoly::named(sctx, &axis.symbol_name(k))?.pow(e as u32)?;
                sym_term = sym_term.mul(&sym)?;
                eval_term = eval_term.mul(&elem_sym(ctx, axis, k)?.pow(e as u32)?)?;
            }
        }
        expr = expr.add(&sym_term)?;
        residual = residual.sub(&eval_term)?;
    }
    let result = (expr, target);
    memo.insert(key, result.clone());
    Ok(result)
}

/// Express a diagonal invariant exactly as a polynomial in the elementary
/// symmetric symbols of both branches and t. Postcondition: evaluating the
/// result reproduces the input (checked here).
pub fn sigma_express(p: &QPoly) -> Result<SigmaExpr, SymError> {
    ensure_point_poly(p)?;
    let m = point_count(p.ctx());
    for i in 1..m {
        let mut perm: Vec<usize> = (1..=m).collect();
        perm.swap(i - 1, i);
        if &p.permute_points(&perm)? != p {
            return Err(SymError::NotInvariant(i, i + 1));
        }
    }
    let ctx = p.ctx();
    let sctx = contexts::sigma_ring(m);
    let st = QPoly::named(&sctx, "t")?;
    let pt = QPoly::named(ctx, "t").ok();
    let mut residual = p.clone();
    let mut expr = QPoly::zero(&sctx);
    let mut memo = BTreeMap::new();
    let mut guard = 0usize;
    while !residual.is_zero() {
        guard += 1;
        if guard > 100_000 {
            return Err(SymError::RecursionDepthExceeded);
        }
        let (lead, c) = {
            let (mono, c) = residual.leading().expect("nonzero");
            (mono.clone(), c.clone())
        };
        let mut xexp = vec![0i32; m];
        let mut yexp = vec![0i32; m];
        let mut tpow = 0i32;
        for (v, e) in lead.support() {
            match ctx.registry().info(v).kind {
                VarKind::X(i) => xexp[i - 1] = e,
                VarKind::Y(i) => yexp[i - 1] = e,
                VarKind::T => tpow = e,
                _ => unreachable!("checked point poly"),
            }
        }
        let t_sym = st.pow(tpow as u32)?;
        let t_pt = match &pt {
            Some(t) => t.pow(tpow as u32)?,
            None => QPoly::one(ctx),
        };
        let pure_x = yexp.iter().all(|&e| e == 0);
        let pure_y = xexp.iter().all(|&e| e == 0);
        if pure_x && pure_y {
            expr = expr.add(&t_sym.scale(&c))?;
            residual = residual.sub(&t_pt.scale(&c))?;
        } else if pure_x {
            let (sx, ex) = express_pure(ctx, &sctx, Axis::X, &xexp, &mut memo)?;
            expr = expr.add(&sx.mul(&t_sym)?.scale(&c))?;
            residual = residual.sub(&ex.mul(&t_pt)?.scale(&c))?;
        } else if pure_y {
            let (sy, ey) = express_pure(ctx, &sctx, Axis::Y, &yexp, &mut memo)?;
            expr = expr.add(&sy.mul(&t_sym)?.scale(&c))?;
            residual = residual.sub(&ey.mul(&t_pt)?.scale(&c))?;
        } else {
            let (sx, ex) = express_pure(ctx, &sctx, Axis::X, &xexp, &mut memo)?;
            let (sy, ey) = express_pure(ctx, &sctx, Axis::Y, &yexp, &mut memo)?;
            expr = expr.add(&sx.mul(&sy)?.mul(&t_sym)?.scale(&c))?;
            residual = residual.sub(&ex.mul(&ey)?.mul(&t_pt)?.scale(&c))?;
        }
    }
    let out = SigmaExpr { m, expr };
    debug_assert_eq!(&out.evaluate(ctx)?, p, "expression must evaluate back");
    Ok(out)
}

/// Check the multiplicative relations between opposite-branch elementary
/// symmetric polynomials, including the t-weighted consequence family.
pub fn verify_sigma_relations(m: usize) -> Result<CheckReport, SymError> {
    let ctx = contexts::point_ring(m, &[]);
    let t = QPoly::named(&ctx, "t")?;
    let mut report = CheckReport::new();
    let sig = |axis: Axis, j: usize| elem_sym(&ctx, axis, j);
    for j in 1..=m {
        for (tag, major, minor) in [(("y"), Axis::Y, Axis::X), ("x", Axis::X, Axis::Y)] {
            // full-product relation: (major full) * (minor_j) = t^j * (major_{m-j})
            let lhs = sig(major, m)?.mul(&sig(minor, j)?)?;
            let rhs = t.pow(j as u32)?.mul(&sig(major, m - j)?)?;
            let ok = lhs == rhs;
            let mut rec = CheckRecord::new(
                format!("sigma/m={m}/rel/{tag}/j={j}"),
                anchors::SIGMA_RELATIONS,
                if ok { Status::Verified } else { Status::Failed },
            );
            rec.put(
                "statement",
                Detail::text(format!(
                    "s{maj}{m} * s{min}{j} = t^{j} * s{maj}{rest}",
                    maj = tag,
                    min = if tag == "y" { "x" } else { "y" },
                    rest = m - j
                )),
            );
            if !ok {
                rec.put("lhs", Detail::text(lhs.to_string()));
                rec.put("rhs", Detail::text(rhs.to_string()));
            }
            report.push(rec);
        }
    }
    for j in 1..=m {
        for i in 0..=m - j {
            for (tag, major, minor) in [("y", Axis::Y, Axis::X), ("x", Axis::X, Axis::Y)] {
                // t-weighted family: t^(m-i) * major_{m-j} = t^(m-i-j) * minor_j * major_m
                let lhs = t.pow((m - i) as u32)?.mul(&sig(major, m - j)?)?;
                let rhs = t
                    .pow((m - i - j) as u32)?
                    .mul(&sig(minor, j)?)?
                    .mul(&sig(major, m)?)?;
                let ok = lhs == rhs;
                let mut rec = CheckRecord::new(
                    format!("sigma/m={m}/rel2/{tag}/i={i}/j={j}"),
                    anchors::SIGMA_RELATIONS,
                    if ok { Status::Verified } else { Status::Failed },
                );
                rec.put(
                    "statement",
                    Detail::text(format!(
                        "t^{p} * s{maj}{rest} = t^{q} * s{min}{j} * s{maj}{m}",
                        p = m - i,
                        q = m - i - j,
                        maj = tag,
                        min = if tag == "y" { "x" } else { "y" },
                        rest = m - j
                    )),
                );
                if !ok {
                    rec.put("lhs", Detail::text(lhs.to_string()));
                    rec.put("rhs", Detail::text(rhs.to_string()));
                }
                report.push(rec);
            }
        }
    }
    // Mixed diagonal-step family: sx_i * sy_j * t^k = sx_{i+k} * sy_{j+k}
    // whenever i + j + k = m.  The i = 0 and j = 0 cases are the
    // full-product relations above; the interior cases (i, j >= 1) first
    // appear at m = 3 and are genuinely new ideal elements — the image
    // contraction check depends on them.
    for i in 1..m {
        for j in 1..(m - i) {
            let k = m - i - j;
            let lhs = sig(Axis::X, i)?
                .mul(&sig(Axis::Y, j)?)?
                .mul(&t.pow(k as u32)?)?;
            let rhs = sig(Axis::X, i + k)?.mul(&sig(Axis::Y, j + k)?)?;
            let ok = lhs == rhs;
            let mut rec = CheckRecord::new(
                format!("sigma/m={m}/rel3/i={i}/j={j}"),
                anchors::SIGMA_RELATIONS,
                if ok { Status::Verified } else { Status::Failed },
            );
            rec.put(
                "statement",
                Detail::text(format!(
                    "sx{i} * sy{j} * t^{k} = sx{a} * sy{b}",
                    a = i + k,
                    b = j + k
                )),
            );
            if !ok {
                rec.put("lhs", Detail::text(lhs.to_string()));
                rec.put("rhs", Detail::text(rhs.to_string()));
            }
            report.push(rec);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{worst_status, Status};
    use crate::ring::contexts::{point_ring, sigma_ring};
    use crate::ring::parse_poly;

    fn p(ctx: &Ctx, s: &str) -> QPoly {
        parse_poly(ctx, s).unwrap()
    }

    #[test]
    fn elementary_symmetric_values() {
        let ctx = point_ring(3, &[]);
        assert_eq!(elem_sym(&ctx, Axis::X, 1).unwrap(), p(&ctx, "x1 + x2 + x3"));
        assert_eq!(
            elem_sym(&ctx, Axis::X, 2).unwrap(),
            p(&ctx, "x1*x2 + x1*x3 + x2*x3")
        );
        assert_eq!(elem_sym(&ctx, Axis::Y, 3).unwrap(), p(&ctx, "y1*y2*y3"));
    }

    #[test]
    fn invariance_detection() {
        let ctx = point_ring(2, &[]);
        assert!(is_invariant(&p(&ctx, "x1 + x2")).unwrap());
        assert!(!is_invariant(&p(&ctx, "x1")).unwrap());
        assert!(is_invariant(&p(&ctx, "x1*y2 + x2*y1")).unwrap());
    }

    #[test]
    fn symmetrization_is_idempotent() {
        let ctx = point_ring(2, &[]);
        let s = symmetrize(&p(&ctx, "x1^2*y2")).unwrap();
        assert_eq!(symmetrize(&s).unwrap(), s);
        assert!(is_invariant(&s).unwrap());
    }

    #[test]
    fn mixed_orbit_expression_is_product_minus_trace() {
        let ctx = point_ring(2, &[]);
        let q = p(&ctx, "x1*y2 + x2*y1");
        let e = sigma_express(&q).unwrap();
        let sctx = sigma_ring(2);
        assert_eq!(e.expr, p(&sctx, "sx1*sy1 - 2*t"));
        assert_eq!(e.evaluate(&ctx).unwrap(), q);
    }

    #[test]
    fn power_sum_in_the_elementary_basis() {
        let ctx = point_ring(2, &[]);
        let q = p(&ctx, "x1^2 + x2^2");
        let e = sigma_express(&q).unwrap();
        let sctx = sigma_ring(2);
        assert_eq!(e.expr, p(&sctx, "sx1^2 - 2*sx2"));
    }

    #[test]
    fn expression_round_trips_on_symmetrized_shapes() {
        let ctx = point_ring(3, &[]);
        for shape in ["x1^2*y2*t", "x1*x2*y3^2", "x1^3 + y1*y2"] {
            let q = symmetrize(&p(&ctx, shape)).unwrap();
            let scaled = q.scale(&num::BigRational::from_integer(6.into()));
            let e = sigma_express(&scaled).unwrap();
            assert_eq!(e.evaluate(&ctx).unwrap(), scaled);
        }
    }

    #[test]
    fn non_invariant_input_is_rejected() {
        let ctx = point_ring(2, &[]);
        assert!(matches!(
            sigma_express(&p(&ctx, "x1")),
            Err(SymError::NotInvariant(_, _))
        ));
    }

    #[test]
    fn product_relations_verify_through_m_3() {
        for m in 1..=3 {
            let report = verify_sigma_relations(m).unwrap();
            assert!(!report.is_empty());
            assert_eq!(worst_status(&report), Status::Verified, "m={m}");
        }
    }

    #[test]
    fn diagonal_step_family_counts() {
        // Interior instances (i, j >= 1, i + j < m) number C(m-1, 2).
        for (m, expected) in [(1, 0), (2, 0), (3, 1), (4, 3), (5, 6)] {
            let report = verify_sigma_relations(m).unwrap();
            let interior = report
                .iter()
                .filter(|r| r.id.contains("/rel3/"))
                .collect::<Vec<_>>();
            assert_eq!(interior.len(), expected, "m={m}");
            assert!(interior.iter().all(|r| r.status == Status::Verified));
        }
    }
}
