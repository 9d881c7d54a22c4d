//! Polynomials in canonical form over a `QuotientContext`.

use super::{Ctx, Monomial, RawTerm, RingError, Var};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::collections::BTreeMap;

/// A ring element stored in canonical form: a map from canonical monomials
/// to nonzero exact rational coefficients.
#[derive(Debug, Clone)]
pub struct QPoly {
    pub(crate) ctx: Ctx,
    pub(crate) terms: BTreeMap<Monomial, BigRational>,
}

impl PartialEq for QPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.terms == other.terms
    }
}

impl Eq for QPoly {}

impl QPoly {
    pub fn zero(ctx: &Ctx) -> Self {
        QPoly {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::constant(ctx, BigRational::one())
    }

    pub fn constant(ctx: &Ctx, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ctx.registry.len()), c);
        }
        QPoly {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn int(ctx: &Ctx, n: i64) -> Self {
        Self::constant(ctx, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(ctx: &Ctx, v: Var) -> Self {
        Self::var_pow(ctx, v, 1)
    }

    pub fn named(ctx: &Ctx, name: &str) -> Result<Self, RingError> {
        Ok(Self::var(ctx, ctx.var(name)?))
    }

    pub fn var_pow(ctx: &Ctx, v: Var, e: i32) -> Self {
        let m = Monomial::var_pow(ctx.registry.len(), v, e);
        let mut p = QPoly::zero(ctx);
        p.add_term(m, BigRational::one());
        p
    }

    /// Build from raw terms, validating variables and exponent signs, then
    /// normalizing to canonical form.
    pub fn from_raw_terms(ctx: &Ctx, raw: Vec<RawTerm>) -> Result<Self, RingError> {
        let width = ctx.registry.len();
        let mut p = QPoly::zero(ctx);
        for (coef, factors) in raw {
            let mut m = Monomial::one(width);
            for (v, e) in factors {
                if v.index() >= width {
                    return Err(RingError::UnknownVariable(format!("#{}", v.0)));
                }
                m.exps[v.index()] += e;
            }
            p.add_term(m, coef);
        }
        p.validate()?;
        Ok(p)
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    /// Leading (maximal) term in the registry graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Total degree of the canonical form (None for zero).
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Insert after normalizing the monomial against the context relations.
    pub(crate) fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        if let Some(norm) = normalize_monomial(&self.ctx, m) {
            merge_term(&mut self.terms, norm, c);
        }
    }

    fn validate(&self) -> Result<(), RingError> {
        for m in self.terms.keys() {
            for (v, e) in m.support() {
                if e < 0 && !self.ctx.is_localized(v) {
                    return Err(RingError::NegativeExponentNotLocalized(
                        self.ctx.registry.name(v).to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn check_ctx(&self, other: &Self) -> Result<(), RingError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(RingError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        self.check_ctx(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            merge_term(&mut terms, m.clone(), c.clone());
        }
        Ok(QPoly {
            ctx: self.ctx.clone(),
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RingError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return QPoly::zero(&self.ctx);
        }
        QPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check_ctx(other)?;
        let mut out = QPoly::zero(&self.ctx);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self, RingError> {
        let mut out = QPoly::one(&self.ctx);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Monic rescale: divide by the leading coefficient (None for zero).
    pub fn monic(&self) -> Option<Self> {
        let (_, lc) = self.leading()?;
        let inv = lc.recip();
        Some(self.scale(&inv))
    }

    /// Evaluate the canonical representative under a partial assignment of
    /// variables to polynomials in `target`. Unassigned variables map to the
    /// same-named variable of the target context. When both ends of a node
    /// pair are assigned, the images must satisfy the pair relation.
    pub fn substitute(
        &self,
        assign: &BTreeMap<Var, QPoly>,
        target: &Ctx,
    ) -> Result<QPoly, RingError> {
        for (v, img) in assign {
            if v.index() >= self.ctx.registry.len() {
                return Err(RingError::UnknownVariable(format!("#{}", v.0)));
            }
            if &img.ctx != target {
                return Err(RingError::ContextMismatch);
            }
        }
        for pair in &self.ctx.pairs {
            if let (Some(xi), Some(yi)) = (assign.get(&pair.x), assign.get(&pair.y)) {
                let t_img = match self.ctx.t {
                    Some(t) => match assign.get(&t) {
                        Some(img) => img.clone(),
                        None => QPoly::named(target, self.ctx.registry.name(t))?,
                    },
                    None => QPoly::zero(target),
                };
                let prod = xi.mul(yi)?;
                if prod != t_img {
                    return Err(RingError::RelationViolated(format!(
                        "{} * {}",
                        self.ctx.registry.name(pair.x),
                        self.ctx.registry.name(pair.y)
                    )));
                }
            }
        }
        let mut images: BTreeMap<Var, QPoly> = BTreeMap::new();
        let mut out = QPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = QPoly::constant(target, c.clone());
            for (v, e) in m.support() {
                let img = match images.get(&v) {
                    Some(img) => img.clone(),
                    None => {
                        let img = match assign.get(&v) {
                            Some(img) => img.clone(),
                            None => QPoly::named(target, self.ctx.registry.name(v))?,
                        };
                        images.insert(v, img.clone());
                        img
                    }
                };
                let factor = if e >= 0 {
                    img.pow(e as u32)?
                } else {
                    img.invert_monomial()?.pow((-e) as u32)?
                };
                term = term.mul(&factor)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Invert a single-term polynomial; every variable in the support must
    /// stay legal with negated exponent (i.e. be localized).
    pub fn invert_monomial(&self) -> Result<QPoly, RingError> {
        if self.terms.len() != 1 {
            return Err(RingError::NotInvertible(format!(
                "{} terms",
                self.terms.len()
            )));
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let mut inv = Monomial::one(self.ctx.registry.len());
        for (v, e) in m.support() {
            inv.exps[v.index()] = -e;
        }
        let p = QPoly {
            ctx: self.ctx.clone(),
            terms: BTreeMap::from([(inv, c.recip())]),
        };
        p.validate()
            .map_err(|_| RingError::NotInvertible(format!("{}", self)))?;
        Ok(p)
    }

    /// Re-express in another context by matching variable names, then
    /// renormalizing there.
    pub fn transport(&self, target: &Ctx) -> Result<QPoly, RingError> {
        if self.ctx == *target {
            return Ok(QPoly {
                ctx: target.clone(),
                terms: self.terms.clone(),
            });
        }
        let mut out = QPoly::zero(target);
        let width = target.registry.len();
        for (m, c) in &self.terms {
            let mut nm = Monomial::one(width);
            for (v, e) in m.support() {
                let name = self.ctx.registry.name(v);
                let tv = target.var(name)?;
                nm.exps[tv.index()] += e;
            }
            out.add_term(nm, c.clone());
        }
        out.validate()?;
        Ok(out)
    }

    /// Minimal exponent of `v` across the canonical form: the exact order of
    /// vanishing along {v = 0} when the remaining coordinates are units.
    pub fn adic_order(&self, v: Var) -> Result<i64, RingError> {
        if self.is_zero() {
            return Err(RingError::ZeroPolynomial);
        }
        Ok(self
            .terms
            .keys()
            .map(|m| m.exp(v) as i64)
            .min()
            .unwrap())
    }

    /// Multiply by enough positive powers of localized variables to clear
    /// every negative exponent; returns the cleared polynomial and the
    /// clearing monomial.
    pub fn clear_inverses(&self) -> (QPoly, Monomial) {
        let width = self.ctx.registry.len();
        let mut clearing = Monomial::one(width);
        for m in self.terms.keys() {
            for (v, e) in m.support() {
                if e < 0 {
                    let need = -e;
                    if clearing.exps[v.index()] < need {
                        clearing.exps[v.index()] = need;
                    }
                }
            }
        }
        let mut cleared = QPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            cleared.add_term(m.mul(&clearing), c.clone());
        }
        (cleared, clearing)
    }

    /// Apply a relabeling of node pairs: point i of the support moves to
    /// point perm[i-1] (1-based values). Non-point variables are fixed.
    pub fn permute_points(&self, perm: &[usize]) -> Result<QPoly, RingError> {
        use super::VarKind;
        let reg = &self.ctx.registry;
        let width = reg.len();
        let mut map: Vec<Var> = (0..width as u32).map(Var).collect();
        for v in reg.vars() {
            match reg.info(v).kind {
                VarKind::X(i) => {
                    let j = perm[i - 1];
                    map[v.index()] = self.ctx.var(&format!("x{j}"))?;
                }
                VarKind::Y(i) => {
                    let j = perm[i - 1];
                    map[v.index()] = self.ctx.var(&format!("y{j}"))?;
                }
                _ => {}
            }
        }
        let mut out = QPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let mut nm = Monomial::one(width);
            for (v, e) in m.support() {
                nm.exps[map[v.index()].index()] += e;
            }
            out.add_term(nm, c.clone());
        }
        Ok(out)
    }

    /// Sum of the absolute values of all coefficients (test heuristic).
    pub fn coeff_mass(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.terms.values() {
            acc += c.abs();
        }
        acc
    }
}

pub(crate) fn merge_term(
    terms: &mut BTreeMap<Monomial, BigRational>,
    m: Monomial,
    c: BigRational,
) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let sum = e.get() + &c;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// Rewrite one monomial to canonical form. Returns None when the monomial
/// dies (pair product in a t-less context).
pub(crate) fn normalize_monomial(ctx: &Ctx, mut m: Monomial) -> Option<Monomial> {
    for pair in &ctx.pairs {
        let ex = m.exps[pair.x.index()];
        let ey = m.exps[pair.y.index()];
        match ctx.t {
            Some(t) => {
                if ctx.is_localized(pair.y) {
                    if ex > 0 {
                        m.exps[t.index()] += ex;
                        m.exps[pair.y.index()] -= ex;
                        m.exps[pair.x.index()] = 0;
                    }
                } else if ctx.is_localized(pair.x) {
                    if ey > 0 {
                        m.exps[t.index()] += ey;
                        m.exps[pair.x.index()] -= ey;
                        m.exps[pair.y.index()] = 0;
                    }
                } else {
                    let k = ex.min(ey);
                    if k > 0 {
                        m.exps[pair.x.index()] -= k;
                        m.exps[pair.y.index()] -= k;
                        m.exps[t.index()] += k;
                    }
                }
            }
            None => {
                if ex > 0 && ey > 0 {
                    return None;
                }
            }
        }
    }
    Some(m)
}
