//! Check records: every verification routine returns a list of uniformly
//! shaped records that the driver turns into certificates.

use num::BigInt;
use std::collections::BTreeMap;
use std::fmt;

/// Outcome of a single check.
///
/// `Corrected` means the computed ground truth disagrees with the closed
/// formula the check compares against, and the record carries both values;
/// the underlying identity itself was established. `Skipped` marks a check
/// not run to completion (budget exceeded or gated off), never a failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Verified,
    Corrected,
    Failed,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Corrected => "corrected",
            Status::Failed => "failed",
            Status::Skipped => "skipped",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Points a check at the claim it certifies: a stable topical location plus
/// a short locator phrase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anchor {
    pub location: &'static str,
    pub quote: &'static str,
}

/// Detail values carried by a record; integers wider than 64 bits serialize
/// as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Detail {
    Num(i64),
    Big(String),
    Text(String),
    Bool(bool),
}

impl Detail {
    pub fn big(n: &BigInt) -> Detail {
        match i64::try_from(n) {
            Ok(v) => Detail::Num(v),
            Err(_) => Detail::Big(n.to_string()),
        }
    }

    pub fn text(s: impl Into<String>) -> Detail {
        Detail::Text(s.into())
    }
}

impl fmt::Display for Detail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Detail::Num(n) => write!(f, "{n}"),
            Detail::Big(s) => f.write_str(s),
            Detail::Text(s) => f.write_str(s),
            Detail::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// One verified / corrected / failed / skipped claim instance.
#[derive(Debug, Clone)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: Anchor,
    pub status: Status,
    pub detail: BTreeMap<String, Detail>,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, anchor: Anchor, status: Status) -> Self {
        CheckRecord {
            id: id.into(),
            anchor,
            status,
            detail: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: Detail) -> Self {
        self.detail.insert(key.to_string(), value);
        self
    }

    pub fn put(&mut self, key: &str, value: Detail) {
        self.detail.insert(key.to_string(), value);
    }
}

/// Record list produced by one verification routine.
pub type CheckReport = Vec<CheckRecord>;

/// Worst status across a report, for exit-code style summaries. Skipped
/// never dominates a success.
pub fn worst_status(records: &[CheckRecord]) -> Status {
    let mut worst = Status::Verified;
    for r in records {
        let rank = |s: Status| match s {
            Status::Verified | Status::Skipped => 0,
            Status::Corrected => 1,
            Status::Failed => 2,
        };
        if rank(r.status) > rank(worst) {
            worst = r.status;
        }
    }
    worst
}

/// Claim anchor catalog. Locations name the topic; quotes are short locator
/// phrases for the claims being machine-checked.
pub mod anchors {
    use super::Anchor;

    pub const SIGMA_RELATIONS: Anchor = Anchor {
        location: "local model / symmetric products",
        quote: "these functions satisfy the relations",
    };
    pub const SIGMA_EMBEDDING: Anchor = Anchor {
        location: "local model / symmetric products",
        quote: "yields a closed embedding",
    };
    pub const SYMMETRIZATION: Anchor = Anchor {
        location: "local model / symmetric products",
        quote: "the symmetrization or averaging operator",
    };
    pub const IMAGE_EQUATIONS: Anchor = Anchor {
        location: "local model / symmetric products",
        quote: "schematically defined by the equations",
    };
    pub const CHAIN_QUADRICS: Anchor = Anchor {
        location: "local model / chain family",
        quote: "these satisfy the relations",
    };
    pub const CHAIN_SIGMA_LINK: Anchor = Anchor {
        location: "local model / chain family",
        quote: "defined by the relations",
    };
    pub const H_EQUATIONS: Anchor = Anchor {
        location: "local model / universal subscheme",
        quote: "the subscheme defined by the equations",
    };
    pub const F_GENERATORS: Anchor = Anchor {
        location: "local model / universal subscheme",
        quote: "generated by the polynomials",
    };
    pub const F_RELATIONS: Anchor = Anchor {
        location: "local model / universal subscheme",
        quote: "the generators admit the relations",
    };
    pub const CHART_FLATNESS: Anchor = Anchor {
        location: "local model / universal subscheme",
        quote: "flat of relative length m",
    };
    pub const COBASIS: Anchor = Anchor {
        location: "local model / universal subscheme",
        quote: "a co-basis for the universal ideal",
    };
    pub const PUNCTUAL_IDEALS: Anchor = Anchor {
        location: "local model / punctual fibre",
        quote: "the ideals of the punctual subschemes",
    };
    pub const MIXED_VDM: Anchor = Anchor {
        location: "ordered model / mixed determinants",
        quote: "the mixed Van der Monde matrix",
    };
    pub const G_DEFINITION: Anchor = Anchor {
        location: "ordered model / mixed determinants",
        quote: "an elementary calculation shows",
    };
    pub const G_RECURRENCE: Anchor = Anchor {
        location: "ordered model / mixed determinants",
        quote: "multiplying each column and dividing by t",
    };
    pub const G_SYZYGIES: Anchor = Anchor {
        location: "ordered model / mixed determinants",
        quote: "the determinants satisfy the relations",
    };
    pub const BOUNDARY_ORDERS: Anchor = Anchor {
        location: "ordered model / boundary valuations",
        quote: "the vanishing order along each boundary component",
    };
    pub const DISCRIMINANT: Anchor = Anchor {
        location: "symmetric model / discriminant ideal",
        quote: "the half discriminant",
    };
    pub const ETA_POLYNOMIAL: Anchor = Anchor {
        location: "symmetric model / discriminant ideal",
        quote: "this is a polynomial in the symmetric functions",
    };
    pub const STRATA_FIBRES: Anchor = Anchor {
        location: "strata / nearby fibres",
        quote: "the fibre over this point is schematically",
    };
    pub const SCROLL_CHAIN: Anchor = Anchor {
        location: "strata / scroll chains",
        quote: "arranged in a chain",
    };
    pub const DISJOINT_SECTIONS: Anchor = Anchor {
        location: "strata / scroll chains",
        quote: "admits two disjoint sections",
    };
    pub const INTERPOLATING_SECTION: Anchor = Anchor {
        location: "strata / interpolating sections",
        quote: "there is a well-defined section",
    };
    pub const ELIMINATION: Anchor = Anchor {
        location: "symmetric model / image equations",
        quote: "obtained by eliminating the chain coordinates",
    };
    pub const LOCALIZATION: Anchor = Anchor {
        location: "global structure / localization",
        quote: "vanishing nowhere in the open set",
    };
    pub const D_CLASSES: Anchor = Anchor {
        location: "global structure / divisor classes",
        quote: "it is natural to set",
    };
    pub const NODE_SCROLL: Anchor = Anchor {
        location: "global structure / scroll structure",
        quote: "a projective bundle with two summands",
    };
    pub const POLYSCROLL: Anchor = Anchor {
        location: "global structure / scroll structure",
        quote: "the polarizations compose across a fibre product",
    };
    pub const RESTRICTION: Anchor = Anchor {
        location: "global structure / divisor classes",
        quote: "the pullback factors through the partial diagonal",
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, status: Status) -> CheckRecord {
        CheckRecord::new(id, anchors::SIGMA_RELATIONS, status)
    }

    #[test]
    fn failure_dominates_every_other_status() {
        let report = vec![
            rec("a", Status::Verified),
            rec("b", Status::Failed),
            rec("c", Status::Corrected),
        ];
        assert_eq!(worst_status(&report), Status::Failed);
    }

    #[test]
    fn corrected_outranks_verified() {
        let report = vec![rec("a", Status::Verified), rec("b", Status::Corrected)];
        assert_eq!(worst_status(&report), Status::Corrected);
    }

    #[test]
    fn skipped_checks_do_not_mask_success() {
        let report = vec![rec("a", Status::Skipped), rec("b", Status::Verified)];
        assert_eq!(worst_status(&report), Status::Verified);
    }

    #[test]
    fn big_details_fall_back_to_plain_numbers() {
        assert_eq!(Detail::big(&num::BigInt::from(7)), Detail::Num(7));
        let huge = num::BigInt::from(i64::MAX) * 2;
        assert_eq!(Detail::big(&huge), Detail::Big(huge.to_string()));
    }
}
