//! Formal divisor-class bookkeeping over a fixed symbol basis: the
//! two-branch weight classes attached to a persisting node, the scroll
//! descriptors they assemble into, the psi-truncation dictionary matching
//! the local picture, and telescoping of the polarization record across
//! several nodes. Symbols are free generators; nothing is quotiented.

use crate::report::{anchors, CheckRecord, CheckReport, Detail, Status};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScrollError {
    #[error("index j={j} out of range for n={n}")]
    IndexOutOfRange { n: u32, j: u32 },
    #[error("node multiplicities sum to {total}, exceeding the length {m}")]
    MultiplicityOverflow { total: u32, m: u32 },
    #[error("lists of node data have mismatched lengths {0} and {1}")]
    LengthMismatch(usize, usize),
}

/// Basis symbols of the formal divisor-class module, in their fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PicSymbol {
    PsiX,
    PsiY,
    NormThetaX,
    NormThetaY,
    Gamma(u32),
    Boundary,
    DThetaPrime,
    DThetaDoublePrime,
}

impl fmt::Display for PicSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PicSymbol::PsiX => write!(f, "psi_x"),
            PicSymbol::PsiY => write!(f, "psi_y"),
            PicSymbol::NormThetaX => write!(f, "Nm_x"),
            PicSymbol::NormThetaY => write!(f, "Nm_y"),
            PicSymbol::Gamma(k) => write!(f, "Gamma({k})"),
            PicSymbol::Boundary => write!(f, "bd"),
            PicSymbol::DThetaPrime => write!(f, "Dth1"),
            PicSymbol::DThetaDoublePrime => write!(f, "Dth2"),
        }
    }
}

/// Integer combination of basis symbols; zero coefficients are never
/// stored, so structural equality is class equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PicClass {
    coeffs: BTreeMap<PicSymbol, i64>,
}

impl PicClass {
    pub fn zero() -> PicClass {
        PicClass::default()
    }

    pub fn single(sym: PicSymbol, c: i64) -> PicClass {
        let mut out = PicClass::zero();
        out.add_in(sym, c);
        out
    }

    fn add_in(&mut self, sym: PicSymbol, c: i64) {
        let entry = self.coeffs.entry(sym).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&sym);
        }
    }

    pub fn coeff(&self, sym: PicSymbol) -> i64 {
        self.coeffs.get(&sym).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &PicClass) -> PicClass {
        let mut out = self.clone();
        for (&sym, &c) in &other.coeffs {
            out.add_in(sym, c);
        }
        out
    }

    pub fn sub(&self, other: &PicClass) -> PicClass {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PicClass {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> PicClass {
        let mut out = PicClass::zero();
        for (&sym, &c) in &self.coeffs {
            out.add_in(sym, c * k);
        }
        out
    }

    /// Exchange the two branches: psi and norm symbols swap sides, every
    /// other symbol is fixed.
    pub fn swap_branches(&self) -> PicClass {
        let mut out = PicClass::zero();
        for (&sym, &c) in &self.coeffs {
            let image = match sym {
                PicSymbol::PsiX => PicSymbol::PsiY,
                PicSymbol::PsiY => PicSymbol::PsiX,
                PicSymbol::NormThetaX => PicSymbol::NormThetaY,
                PicSymbol::NormThetaY => PicSymbol::NormThetaX,
                other => other,
            };
            out.add_in(image, c);
        }
        out
    }

    /// Forget the psi symbols (the local model has trivial cotangent
    /// classes).
    pub fn psi_truncation(&self) -> PicClass {
        let mut out = PicClass::zero();
        for (&sym, &c) in &self.coeffs {
            if !matches!(sym, PicSymbol::PsiX | PicSymbol::PsiY) {
                out.add_in(sym, c);
            }
        }
        out
    }

    /// Translate the local divisor symbols into the global norm symbols.
    pub fn local_dictionary(&self) -> PicClass {
        let mut out = PicClass::zero();
        for (&sym, &c) in &self.coeffs {
            let image = match sym {
                PicSymbol::DThetaPrime => PicSymbol::NormThetaX,
                PicSymbol::DThetaDoublePrime => PicSymbol::NormThetaY,
                other => other,
            };
            out.add_in(image, c);
        }
        out
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (sym, &c) in &self.coeffs {
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if a == 1 {
                write!(f, "{sym}")?;
            } else {
                write!(f, "{a}*{sym}")?;
            }
        }
        Ok(())
    }
}

fn binom2(v: i64) -> i64 {
    v * (v - 1) / 2
}

/// Weight class of the j-th summand line bundle at a node of the
/// length-n part, with k residual points elsewhere.
pub fn d_class(n: u32, j: u32, _k: u32) -> Result<PicClass, ScrollError> {
    if j < 1 || j > n {
        return Err(ScrollError::IndexOutOfRange { n, j });
    }
    let mut out = PicClass::zero();
    out.add_in(PicSymbol::PsiX, -binom2((n - j + 1) as i64));
    out.add_in(PicSymbol::PsiY, -binom2(j as i64));
    out.add_in(PicSymbol::NormThetaX, (n - j + 1) as i64);
    out.add_in(PicSymbol::NormThetaY, j as i64);
    Ok(out)
}

/// The scroll over a persisting node: two summand classes, two disjoint
/// section labels, and the canonical polarization record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScrollDescriptor {
    pub n: u32,
    pub j: u32,
    pub k: u32,
    pub summands: (PicClass, PicClass),
    pub sections: (String, String),
    pub polarization: PicClass,
}

impl ScrollDescriptor {
    /// Difference of the summand classes, second minus first.
    pub fn summand_difference(&self) -> PicClass {
        self.summands.1.sub(&self.summands.0)
    }

    /// The class of the first section minus the second, as dictated by the
    /// two identities -Gamma = Q_j + pullback(second summand) = Q_{j+1} +
    /// pullback(first summand).
    pub fn section_difference(&self) -> PicClass {
        self.summands.0.sub(&self.summands.1)
    }

    /// Twist both summands by the same class; the scroll is unchanged.
    pub fn twist(&self, c: &PicClass) -> ScrollDescriptor {
        let mut out = self.clone();
        out.summands = (self.summands.0.add(c), self.summands.1.add(c));
        out
    }
}

pub fn node_scroll(n: u32, j: u32, k: u32) -> Result<ScrollDescriptor, ScrollError> {
    if j < 1 || j >= n {
        return Err(ScrollError::IndexOutOfRange { n, j });
    }
    let lo = d_class(n, j, k)?;
    let hi = d_class(n, j + 1, k)?;
    let polarization = PicClass::single(PicSymbol::Gamma(n + k), -1)
        .add(&PicClass::single(PicSymbol::Gamma(k), 1));
    Ok(ScrollDescriptor {
        n,
        j,
        k,
        summands: (lo, hi),
        sections: (format!("Q{j}"), format!("Q{}", j + 1)),
        polarization,
    })
}

/// Scrolls over several nodes at once: per-node descriptors with the
/// common residual count, plus the summed polarization record.
pub fn polyscroll(
    ns: &[u32],
    js: &[u32],
    m: u32,
) -> Result<(Vec<ScrollDescriptor>, PicClass), ScrollError> {
    if ns.len() != js.len() {
        return Err(ScrollError::LengthMismatch(ns.len(), js.len()));
    }
    assert!(!ns.is_empty(), "at least one node required");
    let total: u32 = ns.iter().sum();
    if total > m {
        return Err(ScrollError::MultiplicityOverflow { total, m });
    }
    let k = m - total;
    let mut descriptors = Vec::new();
    let mut polarization = PicClass::zero();
    let mut level = m;
    for (&n, &j) in ns.iter().zip(js) {
        descriptors.push(node_scroll(n, j, k)?);
        let next = level - n;
        polarization = polarization
            .add(&PicClass::single(PicSymbol::Gamma(level), -1))
            .add(&PicClass::single(PicSymbol::Gamma(next), 1));
        level = next;
    }
    Ok((descriptors, polarization))
}

fn compositions_at_least_two(sum: u32) -> Vec<Vec<u32>> {
    if sum == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 2..=sum {
        for mut rest in compositions_at_least_two(sum - first) {
            let mut c = vec![first];
            c.append(&mut rest);
            out.push(c);
        }
    }
    out
}

fn pass(id: String, anchor: crate::report::Anchor, ok: bool) -> CheckRecord {
    CheckRecord::new(
        id,
        anchor,
        if ok { Status::Verified } else { Status::Failed },
    )
}

/// The full formal-calculus suite: branch-swap symmetry of the weight
/// classes, descriptor consistency and twist invariance of every scroll,
/// the psi-truncation dictionary, and polarization telescoping over all
/// multi-node compositions.
pub fn scroll_suite(n_max: u32, m_max: u32) -> Result<CheckReport, ScrollError> {
    let mut report = CheckReport::new();
    for n in 1..=n_max {
        for j in 1..=n {
            let here = d_class(n, j, 0)?;
            let there = d_class(n, n + 1 - j, 0)?;
            let ok = here.swap_branches() == there;
            let mut rec = pass(
                format!("scrolls/dclass/n={n}/j={j}"),
                anchors::D_CLASSES,
                ok,
            );
            rec.put("class", Detail::text(here.to_string()));
            report.push(rec);
        }
    }
    let twist_class = PicClass::single(PicSymbol::PsiX, 1)
        .add(&PicClass::single(PicSymbol::Boundary, 2))
        .add(&PicClass::single(PicSymbol::Gamma(1), -3));
    for n in 2..=n_max {
        for j in 1..n {
            for k in 0..=(m_max.saturating_sub(n)) {
                let scroll = node_scroll(n, j, k)?;
                let diff_ok = scroll.summand_difference()
                    == d_class(n, j + 1, k)?.sub(&d_class(n, j, k)?);
                let corollary_ok =
                    scroll.section_difference() == scroll.summand_difference().neg();
                let twisted = scroll.twist(&twist_class);
                let twist_ok = twisted.section_difference() == scroll.section_difference();
                let sections_ok = scroll.sections.0 != scroll.sections.1;
                let pol_ok = scroll.polarization
                    == PicClass::single(PicSymbol::Gamma(n + k), -1)
                        .add(&PicClass::single(PicSymbol::Gamma(k), 1));
                let mut rec = pass(
                    format!("scrolls/node/n={n}/j={j}/k={k}"),
                    anchors::NODE_SCROLL,
                    diff_ok && corollary_ok && twist_ok && sections_ok && pol_ok,
                );
                rec.put(
                    "polarization",
                    Detail::text(scroll.polarization.to_string()),
                );
                report.push(rec);
            }
        }
    }
    for n in 2..=n_max {
        for j in 1..n {
            let diff = d_class(n, j + 1, 0)?.sub(&d_class(n, j, 0)?);
            let mut expected = PicClass::single(PicSymbol::PsiX, (n - j) as i64);
            expected = expected.add(&PicClass::single(PicSymbol::PsiY, -(j as i64)));
            expected = expected.add(&PicClass::single(PicSymbol::NormThetaX, -1));
            expected = expected.add(&PicClass::single(PicSymbol::NormThetaY, 1));
            let formula_ok = diff == expected;
            let truncated = diff.psi_truncation();
            let local = PicClass::single(PicSymbol::DThetaDoublePrime, 1)
                .add(&PicClass::single(PicSymbol::DThetaPrime, -1));
            let dict_ok = truncated == local.local_dictionary();
            let mut rec = pass(
                format!("scrolls/localglobal/n={n}/j={j}"),
                anchors::DISJOINT_SECTIONS,
                formula_ok && dict_ok,
            );
            rec.put("difference", Detail::text(diff.to_string()));
            rec.put(
                "assumption",
                Detail::text("the local theta divisors globalize to the norm classes"),
            );
            report.push(rec);
        }
    }
    for m in 2..=m_max {
        for s in 2..=m {
            for parts in compositions_at_least_two(s) {
                if parts.is_empty() {
                    continue;
                }
                let js: Vec<u32> = parts.iter().map(|_| 1).collect();
                let (descs, polarization) = polyscroll(&parts, &js, m)?;
                let telescoped = PicClass::single(PicSymbol::Gamma(m), -1)
                    .add(&PicClass::single(PicSymbol::Gamma(m - s), 1));
                let tele_ok = polarization == telescoped;
                let mut reversed_parts = parts.clone();
                reversed_parts.reverse();
                let (rdescs, rpol) = polyscroll(&reversed_parts, &js, m)?;
                let perm_ok = rpol == polarization && rdescs.len() == descs.len();
                let single_ok = if parts.len() == 1 {
                    polarization == descs[0].polarization
                } else {
                    true
                };
                let label = parts
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join(".");
                report.push(pass(
                    format!("scrolls/poly/m={m}/parts={label}"),
                    anchors::POLYSCROLL,
                    tele_ok && perm_ok && single_ok,
                ));
            }
        }
    }
    let overflow = polyscroll(&[m_max, 2], &[1, 1], m_max);
    report.push(
        pass(
            "scrolls/poly/overflow".to_string(),
            anchors::POLYSCROLL,
            matches!(overflow, Err(ScrollError::MultiplicityOverflow { .. })),
        )
        .with("rejected", Detail::Bool(overflow.is_err())),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::worst_status;

    #[test]
    fn summand_classes_for_short_chains() {
        let d = d_class(2, 1, 0).unwrap();
        assert_eq!(d.coeff(PicSymbol::PsiX), -1);
        assert_eq!(d.coeff(PicSymbol::PsiY), 0);
        assert_eq!(d.coeff(PicSymbol::NormThetaX), 2);
        assert_eq!(d.coeff(PicSymbol::NormThetaY), 1);
        let d = d_class(3, 2, 0).unwrap();
        assert_eq!(d.coeff(PicSymbol::PsiX), -1);
        assert_eq!(d.coeff(PicSymbol::PsiY), -1);
        assert_eq!(d.coeff(PicSymbol::NormThetaX), 2);
        assert_eq!(d.coeff(PicSymbol::NormThetaY), 2);
    }

    #[test]
    fn out_of_range_column_indices_are_rejected() {
        assert!(d_class(3, 0, 0).is_err());
        assert!(d_class(3, 4, 0).is_err());
    }

    #[test]
    fn single_node_descriptor_pairs_adjacent_summands() {
        let s = node_scroll(2, 1, 0).unwrap();
        assert_eq!(s.summands.0, d_class(2, 1, 0).unwrap());
        assert_eq!(s.summands.1, d_class(2, 2, 0).unwrap());
        assert_eq!(s.sections, ("Q1".to_string(), "Q2".to_string()));
        let mut pol = PicClass::single(PicSymbol::Gamma(2), -1);
        pol.add_in(PicSymbol::Gamma(0), 1);
        assert_eq!(s.polarization, pol);
    }

    #[test]
    fn chained_polarizations_telescope() {
        let (nodes, total) = polyscroll(&[2, 3], &[1, 2], 7).unwrap();
        assert_eq!(nodes.len(), 2);
        let mut pol = PicClass::single(PicSymbol::Gamma(7), -1);
        pol.add_in(PicSymbol::Gamma(2), 1);
        assert_eq!(total, pol);
    }

    #[test]
    fn multiplicity_overflow_is_rejected() {
        assert!(matches!(
            polyscroll(&[5, 5], &[1, 1], 7),
            Err(ScrollError::MultiplicityOverflow { .. })
        ));
    }

    #[test]
    fn the_full_divisor_suite_verifies() {
        let report = scroll_suite(8, 12).unwrap();
        assert!(!report.is_empty());
        assert_eq!(worst_status(&report), Status::Verified);
    }
}
