//! Oriented homotopy decision between two members of the family.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::Residue;
use crate::error::{Error, Result};
use crate::invariants::{
    invariant_set, invariant_triple, BundleParams, InvariantSet, InvariantTriple, Sign,
    SmoothingChoice,
};

/// How to treat a pair whose fundamental groups differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankPolicy {
    Reject,
    /// Return a non-equivalent verdict instead of an error.
    ReportInequivalent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub triple: InvariantTriple,
    pub left: SmoothingChoice,
    pub right: SmoothingChoice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyVerdict {
    pub equivalent: bool,
    pub witness: Option<Witness>,
    /// Any homotopy equivalence is simple: Reidemeister torsion is trivial.
    pub simple: bool,
    /// Any homotopy equivalence is tangential: tangent bundles are stably trivial.
    pub tangential: bool,
    pub reason: String,
}

impl HomotopyVerdict {
    fn from_witness(witness: Option<Witness>) -> Self {
        match witness {
            Some(w) => HomotopyVerdict {
                equivalent: true,
                reason: format!("common invariant triple {}", w.triple),
                witness: Some(w),
                simple: true,
                tangential: true,
            },
            None => HomotopyVerdict {
                equivalent: false,
                witness: None,
                simple: false,
                tangential: false,
                reason: "invariant sets are disjoint".into(),
            },
        }
    }

    fn rank_mismatch(a: &BundleParams, b: &BundleParams) -> Self {
        HomotopyVerdict {
            equivalent: false,
            witness: None,
            simple: false,
            tangential: false,
            reason: format!("fundamental groups differ: Z/{} vs Z/{}", a.r(), b.r()),
        }
    }
}

/// Decides from precomputed fingerprints.
pub fn decide_from_sets(a: &InvariantSet, b: &InvariantSet) -> HomotopyVerdict {
    let witness = a
        .first_common(b)
        .map(|(triple, left, right)| Witness { triple, left, right });
    HomotopyVerdict::from_witness(witness)
}

pub fn homotopy_equivalent(a: &BundleParams, b: &BundleParams) -> Result<HomotopyVerdict> {
    homotopy_equivalent_with(a, b, RankPolicy::Reject)
}

pub fn homotopy_equivalent_with(
    a: &BundleParams,
    b: &BundleParams,
    policy: RankPolicy,
) -> Result<HomotopyVerdict> {
    if a.r() != b.r() {
        return match policy {
            RankPolicy::Reject => Err(Error::RankMismatch { left: a.r().clone(), right: b.r().clone() }),
            RankPolicy::ReportInequivalent => Ok(HomotopyVerdict::rank_mismatch(a, b)),
        };
    }
    let sa = invariant_set(a)?;
    let sb = if a == b { sa.clone() } else { invariant_set(b)? };
    Ok(decide_from_sets(&sa, &sb))
}

/// One of the three congruences, with every residue spelled out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceLine {
    pub expression: String,
    pub left: String,
    pub right: String,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyCertificate {
    pub left: BundleParams,
    pub right: BundleParams,
    pub modulus: u64,
    pub triple: InvariantTriple,
    pub left_choice: SmoothingChoice,
    pub right_choice: SmoothingChoice,
    pub congruences: Vec<CongruenceLine>,
}

struct Instantiation {
    cubic: String,
    product: String,
    mixed: String,
}

fn instantiate(params: &BundleParams, c: &SmoothingChoice, r: u64) -> Instantiation {
    let red = |v: &num_bigint::BigInt| Residue::from_bigint(v, r).unwrap().value();
    let (pb, qb) = (red(params.p_bar()), red(params.q_bar()));
    let (m, n) = (red(&c.bezout.m), red(&c.bezout.n));
    let (s, k) = (c.s.value(), c.k.value());
    let e = match c.epsilon {
        Sign::Plus => "+1",
        Sign::Minus => "-1",
    };
    Instantiation {
        cubic: format!("{s}³·{pb}·{qb}"),
        product: format!("{s}·({e}·{m} + {k}·{pb})·({e}·{n} − {k}·{qb})"),
        mixed: format!("{s}²·({qb}·({e}·{m} + {k}·{pb}) − {pb}·({e}·{n} − {k}·{qb}))"),
    }
}

/// A human-readable proof object for an equivalent pair.
pub fn homotopy_certificate(a: &BundleParams, b: &BundleParams) -> Result<HomotopyCertificate> {
    let verdict = homotopy_equivalent(a, b)?;
    let w = verdict.witness.ok_or(Error::NotEquivalent)?;
    let r = a.modulus()?;
    debug_assert_eq!(invariant_triple(a, &w.left)?, w.triple);
    debug_assert_eq!(invariant_triple(b, &w.right)?, w.triple);
    let li = instantiate(a, &w.left, r);
    let ri = instantiate(b, &w.right, r);
    let [v1, v2, v3] = w.triple.values();
    let congruences = vec![
        CongruenceLine { expression: "s³·p̄·q̄".into(), left: li.cubic, right: ri.cubic, value: v1 },
        CongruenceLine {
            expression: "s·(εm + k·p̄)·(εn − k·q̄)".into(),
            left: li.product,
            right: ri.product,
            value: v2,
        },
        CongruenceLine {
            expression: "s²·(q̄·(εm + k·p̄) − p̄·(εn − k·q̄))".into(),
            left: li.mixed,
            right: ri.mixed,
            value: v3,
        },
    ];
    Ok(HomotopyCertificate {
        left: a.clone(),
        right: b.clone(),
        modulus: r,
        triple: w.triple,
        left_choice: w.left,
        right_choice: w.right,
        congruences,
    })
}

impl fmt::Display for HomotopyCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ≃ {} (oriented, simple, tangential)", self.left, self.right)?;
        writeln!(f, "common triple: {}", self.triple)?;
        writeln!(f, "left smoothing:  {}", self.left_choice)?;
        writeln!(f, "right smoothing: {}", self.right_choice)?;
        for c in &self.congruences {
            writeln!(
                f,
                "  {}:  {} ≡ {} ≡ {}  (mod {})",
                c.expression, c.left, c.value, c.right, self.modulus
            )?;
        }
        Ok(())
    }
}
