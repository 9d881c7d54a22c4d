//! Fibre geometry over the degenerate parameter value: which chain
//! components survive on each coordinate stratum, the lengths of the
//! punctual ideals supported at the singular point, and the two-generator
//! presentation of the interpolating section ideal.

use crate::groebner::{groebner_basis, ideals_equal, standard_monomials, GbConfig, GbError,
    MonomialOrder};
use crate::report::{anchors, CheckRecord, CheckReport, Detail, Status};
use crate::ring::{Ctx, QPoly, QuotientContext, RegistryBuilder, RingError, VarKind};
use num::{BigInt, BigRational};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FibreError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error("corner index {0} exceeds colength {1}")]
    CornerIndex(usize, usize),
    #[error("staircase of the ideal is infinite")]
    InfiniteLength,
}

/// Coordinates pinned to zero by the k-th chain component (1 <= k <= m-1):
/// every factor before k sits at its v = 0 point, every factor after k at
/// its u = 0 point, and factor k stays free.
pub fn component_pins(m: usize, k: usize) -> BTreeSet<String> {
    let mut pins = BTreeSet::new();
    for j in 1..m {
        if j < k {
            pins.insert(format!("v{j}"));
        } else if j > k {
            pins.insert(format!("u{j}"));
        }
    }
    pins
}

/// Coordinates pinned by the k-th node of the chain (the intersection of
/// components k-1 and k): every factor is pinned, switching sides at k.
pub fn node_pins(m: usize, k: usize) -> BTreeSet<String> {
    let mut pins = BTreeSet::new();
    for j in 1..m {
        if j < k {
            pins.insert(format!("v{j}"));
        } else {
            pins.insert(format!("u{j}"));
        }
    }
    pins
}

/// Equations of the coordinate stratum indexed by (a, b): the first b
/// v-coordinates and the last a u-coordinates vanish.
pub fn stratum_equations(m: usize, a: usize, b: usize) -> BTreeSet<String> {
    let mut eqs = BTreeSet::new();
    for j in 1..=b {
        eqs.insert(format!("v{j}"));
    }
    for j in (m - a)..m {
        eqs.insert(format!("u{j}"));
    }
    eqs
}

/// Which components lie inside the stratum: containment of a coordinate
/// subvariety in a coordinate subvariety is containment of the pin sets.
pub fn surviving_components(m: usize, a: usize, b: usize) -> Vec<usize> {
    let eqs = stratum_equations(m, a, b);
    (1..m)
        .filter(|&k| eqs.is_subset(&component_pins(m, k)))
        .collect()
}

fn xy_ring() -> Ctx {
    let mut b = RegistryBuilder::new();
    b.add("x", VarKind::Param).unwrap();
    b.add("y", VarKind::Param).unwrap();
    QuotientContext::new(b.build(), Vec::new(), None)
}

fn ideal_length(gens: &[QPoly], ctx: &Ctx, cfg: GbConfig, limit: usize) -> Result<usize, FibreError> {
    let order = MonomialOrder::Grevlex;
    let gb = groebner_basis(ctx, gens, &order, cfg)?;
    match standard_monomials(ctx, &gb, &order, limit) {
        Ok(sm) => Ok(sm.len()),
        Err(GbError::InfiniteStaircase) => Err(FibreError::InfiniteLength),
        Err(e) => Err(e.into()),
    }
}

/// The ideal cut out on the curve at the node by the punctual subscheme
/// whose support meets both branches through a principal generator.
pub fn principal_ideal(
    ctx: &Ctx,
    m: usize,
    i: usize,
    lambda: &BigRational,
) -> Result<Vec<QPoly>, FibreError> {
    if i < 1 || i >= m {
        return Err(FibreError::CornerIndex(i, m));
    }
    let x = QPoly::named(ctx, "x")?;
    let y = QPoly::named(ctx, "y")?;
    let gen = x
        .pow((m - i) as u32)?
        .add(&y.pow(i as u32)?.scale(lambda))?;
    Ok(vec![x.mul(&y)?, gen])
}

/// The monomial punctual ideal with corner at position i, 1 <= i <= m.
pub fn corner_ideal(ctx: &Ctx, m: usize, i: usize) -> Result<Vec<QPoly>, FibreError> {
    if i < 1 || i > m {
        return Err(FibreError::CornerIndex(i, m));
    }
    let x = QPoly::named(ctx, "x")?;
    let y = QPoly::named(ctx, "y")?;
    Ok(vec![
        x.mul(&y)?,
        x.pow((m + 1 - i) as u32)?,
        y.pow(i as u32)?,
    ])
}

/// Component survival on every stratum, the point strata with their curve
/// ideals, and the per-stratum section descriptions with the corrected
/// free-factor count.
pub fn strata_suite(m: usize, cfg: GbConfig) -> Result<CheckReport, FibreError> {
    let mut report = CheckReport::new();
    let ctx = xy_ring();
    for a in 0..m {
        for b in 0..m {
            if a + b > m - 1 {
                continue;
            }
            let derived = surviving_components(m, a, b);
            let lo = b + 1;
            let hi = m as i64 - a as i64 - 1;
            let formula: Vec<usize> = if hi < lo as i64 {
                Vec::new()
            } else {
                (lo..=(hi as usize)).collect()
            };
            let mut rec = CheckRecord::new(
                format!("strata/m={m}/a={a}/b={b}"),
                anchors::STRATA_FIBRES,
                if derived == formula {
                    Status::Verified
                } else {
                    Status::Failed
                },
            )
            .with(
                "survivors",
                Detail::text(format!("{derived:?}")),
            );
            if derived != formula {
                rec.put("formula", Detail::text(format!("{formula:?}")));
            }
            report.push(rec);

            if a + b == m - 1 {
                let stratum_is_node = stratum_equations(m, a, b) == node_pins(m, b + 1);
                let length = ideal_length(
                    &corner_ideal(&ctx, m, b + 1)?,
                    &ctx,
                    cfg,
                    4 * m + 4,
                )?;
                report.push(
                    CheckRecord::new(
                        format!("strata/m={m}/a={a}/b={b}/point"),
                        anchors::STRATA_FIBRES,
                        if stratum_is_node && length == m {
                            Status::Verified
                        } else {
                            Status::Failed
                        },
                    )
                    .with("node_index", Detail::Num((b + 1) as i64))
                    .with("curve_ideal_length", Detail::Num(length as i64)),
                );
            }

            let count = derived.len();
            if count >= 1 {
                let mut all_ok = true;
                let mut printed_free_total = 0usize;
                let mut corrected_free_total = 0usize;
                for (idx, &k) in derived.iter().enumerate() {
                    // Section idx+1 over this stratum: the stated equation
                    // set pins every factor including k; dropping the pin
                    // on factor k leaves exactly the surviving component.
                    let printed: BTreeSet<String> = node_pins(m, k);
                    let corrected: BTreeSet<String> = component_pins(m, k);
                    let printed_free = (1..m)
                        .filter(|j| {
                            !printed.contains(&format!("u{j}"))
                                && !printed.contains(&format!("v{j}"))
                        })
                        .count();
                    let corrected_free = (1..m)
                        .filter(|j| {
                            !corrected.contains(&format!("u{j}"))
                                && !corrected.contains(&format!("v{j}"))
                        })
                        .count();
                    printed_free_total += printed_free;
                    corrected_free_total += corrected_free;
                    if corrected_free != 1 {
                        all_ok = false;
                    }
                    if idx + 1 < derived.len() {
                        let next = derived[idx + 1];
                        let union: BTreeSet<String> = corrected
                            .union(&component_pins(m, next))
                            .cloned()
                            .collect();
                        if union != node_pins(m, next) {
                            all_ok = false;
                        }
                    }
                }
                // The implemented pin sets leave one free factor per
                // section; the stated sets would pin every factor, which
                // is recorded in the detail fields for comparison.
                let status = if all_ok { Status::Verified } else { Status::Failed };
                report.push(
                    CheckRecord::new(
                        format!("strata/m={m}/a={a}/b={b}/sections"),
                        anchors::NODE_SCROLL,
                        status,
                    )
                    .with("sections", Detail::Num(count as i64))
                    .with("stated_free_factors", Detail::Num(printed_free_total as i64))
                    .with(
                        "corrected_free_factors",
                        Detail::Num(corrected_free_total as i64),
                    ),
                );
            }
        }
    }
    Ok(report)
}

/// Lengths of the punctual ideals at the node: both families have colength
/// exactly m, and the corner index must not exceed m.
pub fn punctual_suite(m: usize, cfg: GbConfig) -> Result<CheckReport, FibreError> {
    let mut report = CheckReport::new();
    let ctx = xy_ring();
    let lambda = BigRational::new(BigInt::from(7), BigInt::from(3));
    for i in 1..m {
        let gens = principal_ideal(&ctx, m, i, &lambda)?;
        let length = ideal_length(&gens, &ctx, cfg, 4 * m + 4)?;
        let mut rec = CheckRecord::new(
            format!("fibre/punctual/m={m}/principal/i={i}"),
            anchors::PUNCTUAL_IDEALS,
            if length == m {
                Status::Verified
            } else {
                Status::Failed
            },
        )
        .with("length", Detail::Num(length as i64));
        if m - i != i {
            let expected: Vec<(i32, i32)> = if m - i > i {
                (0..(m - i) as i32)
                    .map(|c| (c, 0))
                    .chain((1..=i as i32).map(|s| (0, s)))
                    .collect()
            } else {
                (0..=(m - i) as i32)
                    .map(|c| (c, 0))
                    .chain((1..i as i32).map(|s| (0, s)))
                    .collect()
            };
            let order = MonomialOrder::Grevlex;
            let gb = groebner_basis(&ctx, &gens, &order, cfg)?;
            let sm = standard_monomials(&ctx, &gb, &order, 4 * m + 4)?;
            let xv = ctx.var("x")?;
            let yv = ctx.var("y")?;
            let got: BTreeSet<(i32, i32)> =
                sm.iter().map(|mo| (mo.exp(xv), mo.exp(yv))).collect();
            let want: BTreeSet<(i32, i32)> = expected.into_iter().collect();
            rec.put("staircase_matches", Detail::Bool(got == want));
            if got != want {
                rec.status = Status::Failed;
                rec.put("staircase", Detail::text(format!("{got:?}")));
            }
        }
        report.push(rec);
    }
    for i in 1..=m {
        let length = ideal_length(&corner_ideal(&ctx, m, i)?, &ctx, cfg, 4 * m + 4)?;
        report.push(
            CheckRecord::new(
                format!("fibre/punctual/m={m}/corner/i={i}"),
                anchors::PUNCTUAL_IDEALS,
                if length == m {
                    Status::Verified
                } else {
                    Status::Failed
                },
            )
            .with("length", Detail::Num(length as i64)),
        );
    }
    let overflow = corner_ideal(&ctx, m, m + 1);
    report.push(
        CheckRecord::new(
            format!("fibre/punctual/m={m}/corner-overflow"),
            anchors::PUNCTUAL_IDEALS,
            if overflow.is_err() {
                Status::Verified
            } else {
                Status::Failed
            },
        )
        .with(
            "rejected",
            Detail::Bool(overflow.is_err()),
        ),
    );
    Ok(report)
}

fn interp_ring() -> Ctx {
    let mut b = RegistryBuilder::new();
    b.add("x", VarKind::Param).unwrap();
    b.add("y", VarKind::Param).unwrap();
    b.add("s", VarKind::Param).unwrap();
    b.add("c", VarKind::Param).unwrap();
    QuotientContext::new(b.build(), Vec::new(), None)
}

/// The two presentations of the interpolating section ideal agree exactly
/// when the curve relation xy is added, and disagree without it.
pub fn interpolation_suite(n: usize, cfg: GbConfig) -> Result<CheckReport, FibreError> {
    let mut report = CheckReport::new();
    let ctx = interp_ring();
    let x = QPoly::named(&ctx, "x")?;
    let y = QPoly::named(&ctx, "y")?;
    let s = QPoly::named(&ctx, "s")?;
    let c = QPoly::named(&ctx, "c")?;
    let order = MonomialOrder::Grevlex;
    for j in 1..n {
        let front = s.mul(&x.pow((n - j) as u32)?)?.add(&y.pow(j as u32)?)?;
        let gens_a = vec![
            front.mul(&x.sub(&c)?)?,
            front.mul(&y)?,
        ];
        let gens_b = vec![
            s.mul(&x.pow((n - j + 1) as u32)?)?
                .sub(&c.mul(&s)?.mul(&x.pow((n - j) as u32)?)?)?
                .sub(&c.mul(&y.pow(j as u32)?)?)?,
            y.pow((j + 1) as u32)?,
        ];
        let curve = x.mul(&y)?;
        let mut with_a = gens_a.clone();
        with_a.push(curve.clone());
        let mut with_b = gens_b.clone();
        with_b.push(curve.clone());
        let (ab, ba) = ideals_equal(&with_a, &with_b, &order, cfg)?;
        report.push(
            CheckRecord::new(
                format!("fibre/interp/n={n}/j={j}"),
                anchors::INTERPOLATING_SECTION,
                if ab && ba {
                    Status::Verified
                } else {
                    Status::Failed
                },
            )
            .with("forward", Detail::Bool(ab))
            .with("backward", Detail::Bool(ba)),
        );
        let (cab, cba) = ideals_equal(&gens_a, &gens_b, &order, cfg)?;
        report.push(
            CheckRecord::new(
                format!("fibre/interp/n={n}/j={j}/control"),
                anchors::INTERPOLATING_SECTION,
                if cab && cba {
                    Status::Failed
                } else {
                    Status::Verified
                },
            )
            .with("equal_without_curve_relation", Detail::Bool(cab && cba)),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::worst_status;

    fn find<'a>(report: &'a [CheckRecord], id: &str) -> &'a CheckRecord {
        report
            .iter()
            .find(|r| r.id == id)
            .unwrap_or_else(|| panic!("missing record {id}"))
    }

    #[test]
    fn component_survival_matches_the_index_window() {
        assert_eq!(surviving_components(4, 1, 1), vec![2]);
        assert_eq!(surviving_components(4, 0, 0), vec![1, 2, 3]);
        assert!(surviving_components(3, 1, 1).is_empty());
    }

    #[test]
    fn deepest_strata_are_points_of_full_length() {
        let report = strata_suite(3, GbConfig::default()).unwrap();
        assert_eq!(worst_status(&report), Status::Verified);
        let point = find(&report, "strata/m=3/a=1/b=1/point");
        assert_eq!(point.detail.get("curve_ideal_length"), Some(&Detail::Num(3)));
    }

    #[test]
    fn principal_punctual_ideals_have_the_expected_length() {
        let report = punctual_suite(3, GbConfig::default()).unwrap();
        assert_eq!(worst_status(&report), Status::Verified);
        let rec = find(&report, "fibre/punctual/m=3/principal/i=1");
        assert_eq!(rec.detail.get("length"), Some(&Detail::Num(3)));
        assert_eq!(rec.detail.get("staircase_matches"), Some(&Detail::Bool(true)));
    }

    #[test]
    fn interpolation_generators_agree_modulo_the_curve() {
        let report = interpolation_suite(2, GbConfig::default()).unwrap();
        assert!(!report.is_empty());
        assert_eq!(worst_status(&report), Status::Verified);
    }

    #[test]
    fn corner_index_past_the_length_is_rejected() {
        let ctx = xy_ring();
        assert!(corner_ideal(&ctx, 3, 4).is_err());
        assert!(corner_ideal(&ctx, 3, 3).is_ok());
    }
}
