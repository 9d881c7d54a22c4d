//! Exact arithmetic in the coordinate ring of an m-fold fibre product of a
//! plane-node smoothing, presented as a quotient of a polynomial ring by the
//! pair relations x_i*y_i = t, with optional localization at coordinate
//! variables.
//!
//! Canonical form invariant: every stored monomial has, for each node pair,
//! either both exponents with min zero (no localization on that pair), or a
//! zero exponent on the partner of a localized variable (the partner is
//! rewritten into t and an inverse power). Negative exponents occur only on
//! localized variables.

mod det;
mod display;
mod div;
mod poly;

pub use det::det_fraction_free;
pub use display::parse_poly;
pub use div::{divisibility_multiplicity, exact_div};
pub use poly::QPoly;

use num::BigRational;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use thiserror::Error;

/// Interned variable handle: an index into its registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub(crate) u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Structural role of a variable; drives pair rewriting and domain checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    /// x-branch coordinate of point i (1-based).
    X(usize),
    /// y-branch coordinate of point i (1-based).
    Y(usize),
    /// Smoothing parameter shared by all pairs.
    T,
    /// Chain chart coordinate u_i.
    ChartU(usize),
    /// Chain chart coordinate v_i.
    ChartV(usize),
    /// Universal-polynomial coefficient a_i.
    CoeffA(usize),
    /// Universal-polynomial coefficient d_i.
    CoeffD(usize),
    /// Projective chain coordinate Z_i.
    Proj(usize),
    /// Elementary symmetric symbol in the x coordinates, degree j.
    SigmaX(usize),
    /// Elementary symmetric symbol in the y coordinates, degree j.
    SigmaY(usize),
    /// Free parameter (interpolation, substitution targets, auxiliaries).
    Param,
}

#[derive(Debug, Clone)]
pub struct VarInfo {
    pub name: String,
    pub kind: VarKind,
}

/// Frozen, ordered list of variables. The registry order fixes the graded
/// lexicographic monomial order used everywhere.
#[derive(Debug)]
pub struct VariableRegistry {
    vars: Vec<VarInfo>,
    by_name: BTreeMap<String, Var>,
}

impl VariableRegistry {
    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn info(&self, v: Var) -> &VarInfo {
        &self.vars[v.index()]
    }

    pub fn name(&self, v: Var) -> &str {
        &self.vars[v.index()].name
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.by_name.get(name).copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.vars.len() as u32).map(Var)
    }

    fn same_names(&self, other: &VariableRegistry) -> bool {
        self.vars.len() == other.vars.len()
            && self
                .vars
                .iter()
                .zip(other.vars.iter())
                .all(|(a, b)| a.name == b.name && a.kind == b.kind)
    }
}

/// Builder for a registry; errors on duplicate names, frozen on build.
#[derive(Debug, Default)]
pub struct RegistryBuilder {
    vars: Vec<VarInfo>,
    by_name: BTreeMap<String, Var>,
}

impl RegistryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: &str, kind: VarKind) -> Result<Var, RingError> {
        if self.by_name.contains_key(name) {
            return Err(RingError::DuplicateVariable(name.to_string()));
        }
        let v = Var(self.vars.len() as u32);
        self.vars.push(VarInfo {
            name: name.to_string(),
            kind,
        });
        self.by_name.insert(name.to_string(), v);
        Ok(v)
    }

    pub fn build(self) -> Arc<VariableRegistry> {
        Arc::new(VariableRegistry {
            vars: self.vars,
            by_name: self.by_name,
        })
    }
}

/// A node pair (x_i, y_i) subject to x_i * y_i = t (or = 0 without t).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodePair {
    pub x: Var,
    pub y: Var,
}

/// Raw, not-yet-normalized polynomial data: used to seed contexts with extra
/// relations without a circular polynomial-to-context reference.
pub type RawTerm = (BigRational, Vec<(Var, i32)>);

/// The ambient quotient ring: registry, pair relations, optional shared t,
/// localized (inverted) variables, and an optional extra relation ideal
/// carried for normal-form work.
#[derive(Debug)]
pub struct QuotientContext {
    pub(crate) registry: Arc<VariableRegistry>,
    pub(crate) pairs: Vec<NodePair>,
    pub(crate) t: Option<Var>,
    pub(crate) localized: BTreeSet<Var>,
    pub(crate) relations: Vec<Vec<RawTerm>>,
}

pub type Ctx = Arc<QuotientContext>;

impl PartialEq for QuotientContext {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.registry, &other.registry)
            || self.registry.same_names(&other.registry))
            && self.pairs == other.pairs
            && self.t == other.t
            && self.localized == other.localized
            && self.relations == other.relations
    }
}

impl Eq for QuotientContext {}

impl QuotientContext {
    pub fn new(
        registry: Arc<VariableRegistry>,
        pairs: Vec<NodePair>,
        t: Option<Var>,
    ) -> Ctx {
        Arc::new(QuotientContext {
            registry,
            pairs,
            t,
            localized: BTreeSet::new(),
            relations: Vec::new(),
        })
    }

    pub fn registry(&self) -> &Arc<VariableRegistry> {
        &self.registry
    }

    pub fn pairs(&self) -> &[NodePair] {
        &self.pairs
    }

    pub fn t_var(&self) -> Option<Var> {
        self.t
    }

    pub fn localized(&self) -> &BTreeSet<Var> {
        &self.localized
    }

    pub fn is_localized(&self, v: Var) -> bool {
        self.localized.contains(&v)
    }

    pub fn var(&self, name: &str) -> Result<Var, RingError> {
        self.registry
            .lookup(name)
            .ok_or_else(|| RingError::UnknownVariable(name.to_string()))
    }

    /// The pair containing v, if any, together with its partner.
    pub fn partner(&self, v: Var) -> Option<Var> {
        self.pairs.iter().find_map(|p| {
            if p.x == v {
                Some(p.y)
            } else if p.y == v {
                Some(p.x)
            } else {
                None
            }
        })
    }

    /// Derive a context with additional inverted variables. At most one end
    /// of each node pair may be localized; violating that is a programming
    /// error (the t-rewrite direction would be ambiguous) and panics.
    pub fn localize(self: &Ctx, names: &[&str]) -> Result<Ctx, RingError> {
        let mut localized = self.localized.clone();
        for name in names {
            let v = self.var(name)?;
            localized.insert(v);
        }
        for p in &self.pairs {
            assert!(
                !(localized.contains(&p.x) && localized.contains(&p.y)),
                "cannot localize both ends of a node pair"
            );
        }
        Ok(Arc::new(QuotientContext {
            registry: self.registry.clone(),
            pairs: self.pairs.clone(),
            t: self.t,
            localized,
            relations: self.relations.clone(),
        }))
    }

    /// Derive a context carrying extra relations (stored raw; materialize
    /// with `extra_relations`).
    pub fn with_relations(self: &Ctx, relations: Vec<Vec<RawTerm>>) -> Ctx {
        Arc::new(QuotientContext {
            registry: self.registry.clone(),
            pairs: self.pairs.clone(),
            t: self.t,
            localized: self.localized.clone(),
            relations,
        })
    }

    pub fn extra_relations(self: &Ctx) -> Result<Vec<QPoly>, RingError> {
        self.relations
            .clone()
            .into_iter()
            .map(|terms| QPoly::from_raw_terms(self, terms))
            .collect()
    }

    /// All variables of a given kind predicate, in registry order.
    pub fn vars_where(&self, pred: impl Fn(&VarKind) -> bool) -> Vec<Var> {
        self.registry
            .vars()
            .filter(|v| pred(&self.registry.info(*v).kind))
            .collect()
    }
}

/// Exponent vector over a fixed registry. Ordered by total degree, then
/// lexicographically by registry position (larger exponent first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub(crate) exps: Box<[i32]>,
}

impl Monomial {
    pub fn one(width: usize) -> Self {
        Monomial {
            exps: vec![0; width].into_boxed_slice(),
        }
    }

    pub fn var_pow(width: usize, v: Var, e: i32) -> Self {
        let mut m = Monomial::one(width);
        m.exps[v.index()] = e;
        m
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.exps[v.index()]
    }

    pub fn degree(&self) -> i64 {
        self.exps.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| a + b)
            .collect::<Vec<_>>();
        Monomial {
            exps: exps.into_boxed_slice(),
        }
    }

    pub fn support(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (Var(i as u32), e))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exps.iter().cmp(other.exps.iter()))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("unknown variable: {0}")]
    UnknownVariable(String),
    #[error("duplicate variable: {0}")]
    DuplicateVariable(String),
    #[error("negative exponent on non-localized variable: {0}")]
    NegativeExponentNotLocalized(String),
    #[error("operands from different ring contexts")]
    ContextMismatch,
    #[error("not divisible; remainder {0}")]
    NotDivisible(String),
    #[error("zero polynomial has no valuation")]
    ZeroPolynomial,
    #[error("substitution violates a pair relation: {0}")]
    RelationViolated(String),
    #[error("cannot invert {0} in this context")]
    NotInvertible(String),
    #[error("matrix is not square")]
    NonSquareMatrix,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Standard contexts used across the engine.
pub mod contexts {
    use super::*;

    /// Q[x_1..x_m, y_1..y_m, t] with pair relations x_i y_i = t, plus named
    /// free parameters.
    pub fn point_ring(m: usize, params: &[&str]) -> Ctx {
        let mut b = RegistryBuilder::new();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 1..=m {
            xs.push(b.add(&format!("x{i}"), VarKind::X(i)).unwrap());
        }
        for i in 1..=m {
            ys.push(b.add(&format!("y{i}"), VarKind::Y(i)).unwrap());
        }
        let t = b.add("t", VarKind::T).unwrap();
        for p in params {
            b.add(p, VarKind::Param).unwrap();
        }
        let registry = b.build();
        let pairs = xs
            .into_iter()
            .zip(ys)
            .map(|(x, y)| NodePair { x, y })
            .collect();
        QuotientContext::new(registry, pairs, Some(t))
    }

    /// Q[s^x_1..s^x_m, s^y_1..s^y_m, t]: free symbols for elementary
    /// symmetric values; no pair relations.
    pub fn sigma_ring(m: usize) -> Ctx {
        let mut b = RegistryBuilder::new();
        for j in 1..=m {
            b.add(&format!("sx{j}"), VarKind::SigmaX(j)).unwrap();
        }
        for j in 1..=m {
            b.add(&format!("sy{j}"), VarKind::SigmaY(j)).unwrap();
        }
        b.add("t", VarKind::T).unwrap();
        QuotientContext::new(b.build(), Vec::new(), None)
    }

    /// Free polynomial ring on named parameters only.
    pub fn param_ring(params: &[&str]) -> Ctx {
        let mut b = RegistryBuilder::new();
        for p in params {
            b.add(p, VarKind::Param).unwrap();
        }
        QuotientContext::new(b.build(), Vec::new(), None)
    }
}

#[cfg(test)]
mod tests {
    use super::contexts::{param_ring, point_ring};
    use super::*;

    fn p(ctx: &Ctx, s: &str) -> QPoly {
        parse_poly(ctx, s).unwrap()
    }

    #[test]
    fn pair_products_collapse_to_t() {
        let ctx = point_ring(2, &[]);
        let prod = p(&ctx, "x1 + x2").mul(&p(&ctx, "y1 + y2")).unwrap();
        assert_eq!(prod, p(&ctx, "2*t + x1*y2 + x2*y1"));
    }

    #[test]
    fn exact_division_through_the_pair_relation() {
        let ctx = point_ring(2, &[]);
        assert_eq!(
            exact_div(&p(&ctx, "t"), &p(&ctx, "x1")).unwrap(),
            p(&ctx, "y1")
        );
    }

    #[test]
    fn non_divisible_input_is_an_error() {
        let ctx = point_ring(2, &[]);
        assert!(matches!(
            exact_div(&p(&ctx, "x1 - x2"), &p(&ctx, "t")),
            Err(RingError::NotDivisible(_))
        ));
    }

    #[test]
    fn multi_term_divisor_cancels_exactly() {
        let ctx = point_ring(2, &[]);
        let a = p(&ctx, "x1 - x2");
        let b = p(&ctx, "y1 - y2");
        let prod = a.mul(&b).unwrap();
        assert_eq!(exact_div(&prod, &a).unwrap(), b);
    }

    #[test]
    fn division_multiplicity_counts_repeated_factors() {
        let ctx = point_ring(2, &[]);
        let a = p(&ctx, "x1 - x2");
        let sq = a.mul(&a).unwrap().mul(&p(&ctx, "y1")).unwrap();
        assert_eq!(divisibility_multiplicity(&sq, &a).unwrap(), 2);
    }

    #[test]
    fn localization_eliminates_the_partner_coordinate() {
        let ctx = point_ring(1, &[]);
        let loc = ctx.localize(&["y1"]).unwrap();
        let image = p(&ctx, "x1").transport(&loc).unwrap();
        assert_eq!(image, p(&loc, "t*y1^-1"));
    }

    #[test]
    fn adic_order_reads_the_minimal_exponent() {
        let ctx = point_ring(1, &[]);
        let q = p(&ctx, "t^2*x1 + t^3");
        let t = ctx.var("t").unwrap();
        assert_eq!(q.adic_order(t).unwrap(), 2);
    }

    #[test]
    fn point_relabeling_permutes_pairs_together() {
        let ctx = point_ring(2, &[]);
        let q = p(&ctx, "x1*y2");
        assert_eq!(q.permute_points(&[2, 1]).unwrap(), p(&ctx, "x2*y1"));
    }

    #[test]
    fn fraction_free_determinant_on_a_numeric_matrix() {
        let ctx = param_ring(&[]);
        let nodes: [i64; 5] = [1, 2, 3, 4, 5];
        let mat: Vec<Vec<QPoly>> = nodes
            .iter()
            .map(|&a| (0..5).map(|c| QPoly::int(&ctx, a.pow(c))).collect())
            .collect();
        assert_eq!(det_fraction_free(&mat).unwrap(), QPoly::int(&ctx, 288));
    }

    #[test]
    fn display_and_parse_round_trip() {
        let ctx = point_ring(2, &["u"]);
        let q = p(&ctx, "3/2*x1^2*y2 - t*u + 7");
        assert_eq!(parse_poly(&ctx, &q.to_string()).unwrap(), q);
    }

    #[test]
    fn double_localization_of_a_pair_is_rejected() {
        let ctx = point_ring(2, &[]);
        assert!(std::panic::catch_unwind(|| ctx.localize(&["x1", "y1"])).is_err());
    }
}
