//! Deterministic Buchberger engine over free (pairless) polynomial
//! contexts, with graded reverse-lexicographic and block elimination
//! orders, reduced monic bases, ideal membership, elimination, saturation
//! and intersection, plus staircase enumeration for zero-dimensional
//! quotients.
//!
//! Quotient relations are always passed as explicit generators here; the
//! engine refuses contexts that rewrite monomials behind its back, since
//! leading terms would stop being multiplicative.

use crate::ring::{Ctx, Monomial, QPoly, Var};
use num::{BigRational, One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GbError {
    #[error("time budget exhausted during basis computation")]
    Timeout,
    #[error("basis computation requires a pair-free context")]
    QuotientContext,
    #[error("staircase is not finite")]
    InfiniteStaircase,
}

/// Term order used by the engine. `Block` puts the listed variables in a
/// leading elimination block; both blocks are compared by graded reverse
/// lexicographic order internally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonomialOrder {
    Grevlex,
    Block(BTreeSet<Var>),
}

fn grevlex_on(idx: &[usize], a: &Monomial, b: &Monomial) -> Ordering {
    let da: i64 = idx.iter().map(|&i| a.exps[i] as i64).sum();
    let db: i64 = idx.iter().map(|&i| b.exps[i] as i64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        other => return other,
    }
    for &i in idx.iter().rev() {
        match a.exps[i].cmp(&b.exps[i]) {
            Ordering::Equal => {}
            // smaller exponent on the latest differing variable wins
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    fn index_blocks(&self, width: usize) -> (Vec<usize>, Vec<usize>) {
        match self {
            MonomialOrder::Grevlex => ((0..width).collect(), Vec::new()),
            MonomialOrder::Block(elim) => {
                let mut first = Vec::new();
                let mut rest = Vec::new();
                for i in 0..width {
                    if elim.contains(&Var(i as u32)) {
                        first.push(i);
                    } else {
                        rest.push(i);
                    }
                }
                (first, rest)
            }
        }
    }

    pub fn describe(&self, ctx: &Ctx) -> String {
        match self {
            MonomialOrder::Grevlex => "grevlex".to_string(),
            MonomialOrder::Block(elim) => {
                let names: Vec<&str> =
                    elim.iter().map(|v| ctx.registry().name(*v)).collect();
                format!("block[{}]", names.join(","))
            }
        }
    }
}

/// Pluggable basis cache; the key is full key material (the caller may hash
/// it), the value a parseable rendering of the basis.
pub trait GbCache: Send + Sync {
    fn get(&self, key: &str) -> Option<String>;
    fn put(&self, key: &str, value: &str);
}

#[derive(Clone, Copy, Default)]
pub struct GbConfig<'a> {
    pub deadline: Option<Instant>,
    pub cache: Option<&'a dyn GbCache>,
}

struct Comparator {
    first: Vec<usize>,
    rest: Vec<usize>,
}

impl Comparator {
    fn new(order: &MonomialOrder, width: usize) -> Self {
        let (first, rest) = order.index_blocks(width);
        Comparator { first, rest }
    }

    fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        grevlex_on(&self.first, a, b).then_with(|| grevlex_on(&self.rest, a, b))
    }
}

type Terms = Vec<(Monomial, BigRational)>;

fn to_sorted(p: &QPoly, cmp: &Comparator) -> Terms {
    let mut terms: Terms = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    terms.sort_by(|a, b| cmp.cmp(&b.0, &a.0));
    terms
}

fn from_sorted(ctx: &Ctx, terms: &Terms) -> QPoly {
    let raw = terms
        .iter()
        .map(|(m, c)| {
            (
                c.clone(),
                m.support().collect::<Vec<_>>(),
            )
        })
        .collect();
    QPoly::from_raw_terms(ctx, raw).expect("engine terms are always valid")
}

fn divides(a: &Monomial, b: &Monomial) -> bool {
    a.exps.iter().zip(b.exps.iter()).all(|(x, y)| x <= y)
}

fn mono_div(a: &Monomial, b: &Monomial) -> Monomial {
    let exps: Vec<i32> = a.exps.iter().zip(b.exps.iter()).map(|(x, y)| x - y).collect();
    Monomial {
        exps: exps.into_boxed_slice(),
    }
}

fn mono_lcm(a: &Monomial, b: &Monomial) -> Monomial {
    let exps: Vec<i32> = a
        .exps
        .iter()
        .zip(b.exps.iter())
        .map(|(x, y)| *x.max(y))
        .collect();
    Monomial {
        exps: exps.into_boxed_slice(),
    }
}

fn coprime(a: &Monomial, b: &Monomial) -> bool {
    a.exps.iter().zip(b.exps.iter()).all(|(x, y)| *x == 0 || *y == 0)
}

/// f - coef * x^shift * g, both inputs sorted descending under cmp.
fn sub_scaled(
    f: &Terms,
    g: &Terms,
    shift: &Monomial,
    coef: &BigRational,
    cmp: &Comparator,
) -> Terms {
    let mut out = Terms::with_capacity(f.len() + g.len());
    let mut i = 0;
    let mut j = 0;
    while i < f.len() || j < g.len() {
        if j >= g.len() {
            out.push(f[i].clone());
            i += 1;
            continue;
        }
        let gm = g[j].0.mul(shift);
        if i >= f.len() {
            out.push((gm, -(coef * &g[j].1)));
            j += 1;
            continue;
        }
        match cmp.cmp(&f[i].0, &gm) {
            Ordering::Greater => {
                out.push(f[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push((gm, -(coef * &g[j].1)));
                j += 1;
            }
            Ordering::Equal => {
                let c = &f[i].1 - coef * &g[j].1;
                if !c.is_zero() {
                    out.push((gm, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn expired(deadline: Option<Instant>) -> bool {
    matches!(deadline, Some(d) if Instant::now() >= d)
}

/// Full normal form of `f` against `basis`: no remainder term is divisible
/// by any basis leading monomial. Deterministic: the first dividing basis
/// element (in vector order) is used at each step.
fn reduce_terms(
    f: Terms,
    basis: &[Terms],
    cmp: &Comparator,
    deadline: Option<Instant>,
) -> Result<Terms, GbError> {
    let mut rest = f;
    let mut remainder: Terms = Vec::new();
    let mut steps = 0u32;
    'outer: while let Some((lm, lc)) = rest.first().cloned() {
        steps += 1;
        if steps % 64 == 0 && expired(deadline) {
            return Err(GbError::Timeout);
        }
        for g in basis {
            let (gm, gc) = &g[0];
            if divides(gm, &lm) {
                let shift = mono_div(&lm, gm);
                let coef = &lc / gc;
                rest = sub_scaled(&rest, g, &shift, &coef, cmp);
                continue 'outer;
            }
        }
        remainder.push(rest.remove(0));
    }
    Ok(remainder)
}

fn spoly(f: &Terms, g: &Terms, cmp: &Comparator) -> Terms {
    let (fm, fc) = &f[0];
    let (gm, gc) = &g[0];
    let l = mono_lcm(fm, gm);
    let a = sub_scaled(
        &Vec::new(),
        f,
        &mono_div(&l, fm),
        &(-BigRational::one() / fc),
        cmp,
    );
    sub_scaled(&a, g, &mono_div(&l, gm), &(BigRational::one() / gc), cmp)
}

fn make_monic(t: &mut Terms) {
    if let Some((_, lc)) = t.first().cloned() {
        if !lc.is_one() {
            for (_, c) in t.iter_mut() {
                *c = &*c / &lc;
            }
        }
    }
}

fn buchberger(
    gens: Vec<Terms>,
    cmp: &Comparator,
    deadline: Option<Instant>,
) -> Result<Vec<Terms>, GbError> {
    let mut basis: Vec<Terms> = Vec::new();
    for mut g in gens {
        if !g.is_empty() {
            make_monic(&mut g);
            basis.push(g);
        }
    }
    let mut pairs: BTreeSet<(i64, Monomial, usize, usize)> = BTreeSet::new();
    for i in 0..basis.len() {
        for j in 0..i {
            let l = mono_lcm(&basis[i][0].0, &basis[j][0].0);
            pairs.insert((l.degree(), l, j, i));
        }
    }
    while let Some(entry) = pairs.iter().next().cloned() {
        pairs.remove(&entry);
        if expired(deadline) {
            return Err(GbError::Timeout);
        }
        let (_, _, i, j) = entry;
        if coprime(&basis[i][0].0, &basis[j][0].0) {
            continue;
        }
        let s = spoly(&basis[i], &basis[j], cmp);
        let r = reduce_terms(s, &basis, cmp, deadline)?;
        if r.is_empty() {
            continue;
        }
        let mut r = r;
        make_monic(&mut r);
        let k = basis.len();
        for (idx, g) in basis.iter().enumerate() {
            let l = mono_lcm(&g[0].0, &r[0].0);
            pairs.insert((l.degree(), l, idx, k));
        }
        basis.push(r);
    }
    // Interreduce to the unique reduced monic basis. Changes are applied to
    // the working basis one at a time: reducing against a stale snapshot can
    // drop two elements with equal leading monomials simultaneously, which
    // shrinks the ideal.
    'reduce: loop {
        for i in 0..basis.len() {
            let others: Vec<Terms> = basis
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            if others.is_empty() {
                continue;
            }
            let r = reduce_terms(basis[i].clone(), &others, cmp, deadline)?;
            if r != basis[i] {
                if r.is_empty() {
                    basis.remove(i);
                } else {
                    let mut r = r;
                    make_monic(&mut r);
                    basis[i] = r;
                }
                continue 'reduce;
            }
        }
        break;
    }
    basis.sort_by(|a, b| cmp.cmp(&a[0].0, &b[0].0));
    basis.dedup();
    Ok(basis)
}

fn check_free(ctx: &Ctx) -> Result<(), GbError> {
    if ctx.pairs().is_empty() && ctx.localized().is_empty() {
        Ok(())
    } else {
        Err(GbError::QuotientContext)
    }
}

fn cache_key(ctx: &Ctx, gens: &[QPoly], order: &MonomialOrder) -> String {
    let mut names: Vec<&str> = Vec::new();
    for v in ctx.registry().vars() {
        names.push(ctx.registry().name(v));
    }
    let mut rendered: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
    rendered.sort();
    format!(
        "engine={}\nring={}\norder={}\ngenerators={}\n",
        crate::ENGINE_VERSION,
        names.join(","),
        order.describe(ctx),
        rendered.join(";")
    )
}

/// Reduced monic basis of the ideal generated by `gens` under `order`.
/// The result is unique for a given ideal and order, hence stable across
/// runs and safe to cache and compare.
pub fn groebner_basis(
    ctx: &Ctx,
    gens: &[QPoly],
    order: &MonomialOrder,
    cfg: GbConfig,
) -> Result<Vec<QPoly>, GbError> {
    check_free(ctx)?;
    let key = cfg.cache.map(|c| (c, cache_key(ctx, gens, order)));
    if let Some((cache, key)) = &key {
        if let Some(value) = cache.get(key) {
            let mut parsed = Vec::new();
            let mut ok = true;
            for line in value.lines().filter(|l| !l.trim().is_empty()) {
                match crate::ring::parse_poly(ctx, line) {
                    Ok(p) => parsed.push(p),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(parsed);
            }
        }
    }
    let cmp = Comparator::new(order, ctx.registry().len());
    let gens_t: Vec<Terms> = gens.iter().map(|g| to_sorted(g, &cmp)).collect();
    let basis = buchberger(gens_t, &cmp, cfg.deadline)?;
    let out: Vec<QPoly> = basis.iter().map(|g| from_sorted(ctx, g)).collect();
    if let Some((cache, key)) = &key {
        let value: Vec<String> = out.iter().map(|p| p.to_string()).collect();
        cache.put(key, &value.join("\n"));
    }
    Ok(out)
}

/// Normal form of `p` modulo an already-computed basis.
pub fn normal_form(
    p: &QPoly,
    gb: &[QPoly],
    order: &MonomialOrder,
    deadline: Option<Instant>,
) -> Result<QPoly, GbError> {
    let ctx = p.ctx();
    check_free(ctx)?;
    let cmp = Comparator::new(order, ctx.registry().len());
    let basis: Vec<Terms> = gb
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| to_sorted(g, &cmp))
        .collect();
    let r = reduce_terms(to_sorted(p, &cmp), &basis, &cmp, deadline)?;
    Ok(from_sorted(ctx, &r))
}

pub fn in_ideal(
    p: &QPoly,
    gb: &[QPoly],
    order: &MonomialOrder,
    deadline: Option<Instant>,
) -> Result<bool, GbError> {
    Ok(normal_form(p, gb, order, deadline)?.is_zero())
}

/// Mutual containment of two ideals given by arbitrary generating sets.
/// Each side is completed to a reduced basis before membership is tested,
/// so neither input needs to be a basis already.
pub fn ideals_equal(
    a: &[QPoly],
    b: &[QPoly],
    order: &MonomialOrder,
    cfg: GbConfig,
) -> Result<(bool, bool), GbError> {
    let ctx = a
        .iter()
        .chain(b.iter())
        .next()
        .map(|p| p.ctx().clone());
    let Some(ctx) = ctx else {
        return Ok((true, true));
    };
    let gb_a = groebner_basis(&ctx, a, order, cfg)?;
    let gb_b = groebner_basis(&ctx, b, order, cfg)?;
    let mut fwd = true;
    for g in a {
        if !in_ideal(g, &gb_b, order, cfg.deadline)? {
            fwd = false;
            break;
        }
    }
    let mut bwd = true;
    for g in b {
        if !in_ideal(g, &gb_a, order, cfg.deadline)? {
            bwd = false;
            break;
        }
    }
    Ok((fwd, bwd))
}

/// Generators of the elimination ideal: members of the ideal not involving
/// any of `elim`.
pub fn eliminate(
    ctx: &Ctx,
    gens: &[QPoly],
    elim: &[Var],
    cfg: GbConfig,
) -> Result<Vec<QPoly>, GbError> {
    let order = MonomialOrder::Block(elim.iter().copied().collect());
    let gb = groebner_basis(ctx, gens, &order, cfg)?;
    let elim_set: BTreeSet<Var> = elim.iter().copied().collect();
    Ok(gb
        .into_iter()
        .filter(|g| {
            g.terms()
                .all(|(m, _)| m.support().all(|(v, _)| !elim_set.contains(&v)))
        })
        .collect())
}

/// Saturation (I : f^inf) computed with a fresh inverse marker w already
/// present in the ring: eliminate w from I + (w*f - 1).
pub fn saturate(
    ctx: &Ctx,
    gens: &[QPoly],
    f: &QPoly,
    w: Var,
    cfg: GbConfig,
) -> Result<Vec<QPoly>, GbError> {
    let mut all = gens.to_vec();
    let wf = QPoly::var(ctx, w).mul(f).map_err(|_| GbError::QuotientContext)?;
    let marker = wf.sub(&QPoly::one(ctx)).expect("same context");
    all.push(marker);
    eliminate(ctx, &all, &[w], cfg)
}

/// Ideal intersection via the auxiliary-variable trick: eliminate w from
/// w*A + (1-w)*B.
pub fn intersect(
    ctx: &Ctx,
    a: &[QPoly],
    b: &[QPoly],
    w: Var,
    cfg: GbConfig,
) -> Result<Vec<QPoly>, GbError> {
    let wp = QPoly::var(ctx, w);
    let onew = QPoly::one(ctx).sub(&wp).expect("same context");
    let mut gens = Vec::new();
    for g in a {
        gens.push(wp.mul(g).map_err(|_| GbError::QuotientContext)?);
    }
    for g in b {
        gens.push(onew.mul(g).map_err(|_| GbError::QuotientContext)?);
    }
    eliminate(ctx, &gens, &[w], cfg)
}

/// Monomials outside the leading-term staircase of a basis, sorted; errors
/// when the count exceeds `limit` (treated as an infinite staircase).
pub fn standard_monomials(
    ctx: &Ctx,
    gb: &[QPoly],
    order: &MonomialOrder,
    limit: usize,
) -> Result<Vec<Monomial>, GbError> {
    check_free(ctx)?;
    let cmp = Comparator::new(order, ctx.registry().len());
    let leads: Vec<Monomial> = gb
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| to_sorted(g, &cmp)[0].0.clone())
        .collect();
    let width = ctx.registry().len();
    let blocked = |m: &Monomial| leads.iter().any(|l| divides(l, m));
    let mut found: BTreeSet<Monomial> = BTreeSet::new();
    let mut queue: Vec<Monomial> = vec![Monomial::one(width)];
    while let Some(m) = queue.pop() {
        if blocked(&m) || found.contains(&m) {
            continue;
        }
        if found.len() >= limit {
            return Err(GbError::InfiniteStaircase);
        }
        found.insert(m.clone());
        for v in ctx.registry().vars() {
            queue.push(m.mul(&Monomial::var_pow(width, v, 1)));
        }
    }
    Ok(found.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, QuotientContext, RegistryBuilder, VarKind};
    use std::time::Instant;

    fn free_ring(names: &[&str]) -> Ctx {
        let mut b = RegistryBuilder::new();
        for n in names {
            b.add(n, VarKind::Param).unwrap();
        }
        QuotientContext::new(b.build(), Vec::new(), None)
    }

    fn p(ctx: &Ctx, s: &str) -> QPoly {
        parse_poly(ctx, s).unwrap()
    }

    fn cfg() -> GbConfig<'static> {
        GbConfig::default()
    }

    #[test]
    fn reduced_basis_of_a_plane_pair() {
        let ctx = free_ring(&["x", "y"]);
        let gens = vec![p(&ctx, "x^2 - y"), p(&ctx, "y^2 - x")];
        let gb = groebner_basis(&ctx, &gens, &MonomialOrder::Grevlex, cfg()).unwrap();
        let shown: Vec<String> = gb.iter().map(|g| g.to_string()).collect();
        assert_eq!(gb.len(), 2, "{shown:?}");
        assert!(gb.contains(&p(&ctx, "x^2 - y")));
        assert!(gb.contains(&p(&ctx, "y^2 - x")));
    }

    #[test]
    fn normal_form_reduces_against_the_basis() {
        let ctx = free_ring(&["x", "y"]);
        let gens = vec![p(&ctx, "x^2 - y"), p(&ctx, "y^2 - x")];
        let gb = groebner_basis(&ctx, &gens, &MonomialOrder::Grevlex, cfg()).unwrap();
        let nf = normal_form(&p(&ctx, "x^3"), &gb, &MonomialOrder::Grevlex, None).unwrap();
        assert_eq!(nf, p(&ctx, "x*y"));
    }

    #[test]
    fn elimination_projects_a_parametrized_curve() {
        let ctx = free_ring(&["x", "y", "z"]);
        let gens = vec![p(&ctx, "x - y^2"), p(&ctx, "y - z")];
        let yv = ctx.var("y").unwrap();
        let out = eliminate(&ctx, &gens, &[yv], cfg()).unwrap();
        assert_eq!(out, vec![p(&ctx, "z^2 - x")]);
    }

    #[test]
    fn saturation_removes_a_coordinate_component() {
        let ctx = free_ring(&["x", "y", "w"]);
        let gens = vec![p(&ctx, "x*y")];
        let w = ctx.var("w").unwrap();
        let out = saturate(&ctx, &gens, &p(&ctx, "x"), w, cfg()).unwrap();
        assert_eq!(out, vec![p(&ctx, "y")]);
    }

    #[test]
    fn intersection_of_coordinate_ideals() {
        let ctx = free_ring(&["x", "y", "w"]);
        let a = vec![p(&ctx, "x")];
        let b = vec![p(&ctx, "y")];
        let w = ctx.var("w").unwrap();
        let out = intersect(&ctx, &a, &b, w, cfg()).unwrap();
        assert_eq!(out, vec![p(&ctx, "x*y")]);
    }

    #[test]
    fn ideal_equality_is_two_sided() {
        let ctx = free_ring(&["x", "y"]);
        let a = vec![p(&ctx, "x + y"), p(&ctx, "x - y")];
        let b = vec![p(&ctx, "x"), p(&ctx, "y")];
        let (f, g) = ideals_equal(&a, &b, &MonomialOrder::Grevlex, cfg()).unwrap();
        assert!(f && g);
        let c = vec![p(&ctx, "x")];
        let (f2, g2) = ideals_equal(&c, &b, &MonomialOrder::Grevlex, cfg()).unwrap();
        assert!(f2 && !g2);
    }

    #[test]
    fn staircase_of_a_square_complete_intersection() {
        let ctx = free_ring(&["x", "y"]);
        let gens = vec![p(&ctx, "x^2"), p(&ctx, "x*y"), p(&ctx, "y^2")];
        let gb = groebner_basis(&ctx, &gens, &MonomialOrder::Grevlex, cfg()).unwrap();
        let sm = standard_monomials(&ctx, &gb, &MonomialOrder::Grevlex, 20).unwrap();
        assert_eq!(sm.len(), 3);
    }

    #[test]
    fn infinite_staircases_are_detected() {
        let ctx = free_ring(&["x", "y"]);
        let gens = vec![p(&ctx, "x^2")];
        let gb = groebner_basis(&ctx, &gens, &MonomialOrder::Grevlex, cfg()).unwrap();
        assert!(matches!(
            standard_monomials(&ctx, &gb, &MonomialOrder::Grevlex, 10),
            Err(GbError::InfiniteStaircase)
        ));
    }

    #[test]
    fn an_expired_deadline_aborts() {
        let ctx = free_ring(&["x", "y"]);
        let gens = vec![p(&ctx, "x^2 - y"), p(&ctx, "y^2 - x")];
        let cfg = GbConfig {
            deadline: Some(Instant::now()),
            cache: None,
        };
        assert!(matches!(
            groebner_basis(&ctx, &gens, &MonomialOrder::Grevlex, cfg),
            Err(GbError::Timeout)
        ));
    }

    #[test]
    fn block_order_eliminates_the_leading_block() {
        let ctx = free_ring(&["x", "y"]);
        let xv = ctx.var("x").unwrap();
        let order = MonomialOrder::Block([xv].into_iter().collect());
        let gens = vec![p(&ctx, "x - y^3")];
        let gb = groebner_basis(&ctx, &gens, &order, cfg()).unwrap();
        let nf = normal_form(&p(&ctx, "x"), &gb, &order, None).unwrap();
        assert_eq!(nf, p(&ctx, "y^3"));
    }

    #[test]
    fn quotient_contexts_are_refused() {
        let ctx = crate::ring::contexts::point_ring(1, &[]);
        let gens = vec![p(&ctx, "x1")];
        assert!(matches!(
            groebner_basis(&ctx, &gens, &MonomialOrder::Grevlex, cfg()),
            Err(GbError::QuotientContext)
        ));
    }
}
