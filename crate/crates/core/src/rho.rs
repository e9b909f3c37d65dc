//! Atiyah–Singer ρ-invariants of `L^{p,q}` and the non-homeomorphism
//! certificates derived from them.
//!
//! For a nontrivial `g ∈ Z/r` acting by fibrewise rotation through
//! `θ_g = 2π·min(g, r−g)/r ∈ (0, π]`,
//!
//! ```text
//! ρ(g, L^{p,q}) = −i · pq / (2r²) · cos(θ_g/2) / sin³(θ_g/2)
//! ```
//!
//! The trigonometric factor is positive and strictly decreasing on `(0, π/2)`,
//! so ρ-profiles of two members with the same `r` can only agree when `|pq|`
//! agrees. Verdicts are decided on `|pq|` alone; the certified intervals are
//! kept for reporting and for [`monotonicity_check`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::{pi, sin_cos, Interval};
use crate::invariants::BundleParams;

pub const MAX_PRECISION_BITS: u32 = 4096;
pub const DEFAULT_START_BITS: u32 = 128;
/// Default target relative width, as a power of ten.
pub const DEFAULT_RELATIVE_WIDTH_EXP10: u32 = 30;
/// Fractional digits in serialized bounds.
pub const DECIMAL_DIGITS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RhoPrecision {
    pub start_bits: u32,
    pub relative_width_exp10: u32,
}

impl Default for RhoPrecision {
    fn default() -> Self {
        RhoPrecision {
            start_bits: DEFAULT_START_BITS,
            relative_width_exp10: DEFAULT_RELATIVE_WIDTH_EXP10,
        }
    }
}

/// `cos(πm/r) / sin³(πm/r)` at a fixed working precision.
pub fn trig_factor_at(m_fold: u64, r: u64, prec: u32) -> Interval {
    assert!(m_fold >= 1 && 2 * m_fold <= r, "fold must lie in [1, r/2]");
    if 2 * m_fold == r {
        return Interval::zero(prec);
    }
    let half_angle = pi(prec).mul_int(&BigInt::from(m_fold)).div_int(&BigInt::from(r));
    let (sin, cos) = sin_cos(&half_angle);
    let sin3 = sin.mul(&sin).mul(&sin);
    cos.div(&sin3)
}

/// Refines [`trig_factor_at`] by precision doubling until the relative width
/// target is met. Each refinement is intersected with its predecessor, so the
/// returned sequence of enclosures is nested.
pub fn trig_factor(m_fold: u64, r: u64, precision: RhoPrecision) -> Result<Interval> {
    let mut prec = precision.start_bits.max(32);
    let mut current: Option<Interval> = None;
    loop {
        let fresh = trig_factor_at(m_fold, r, prec);
        let refined = match current {
            Some(prev) => prev.intersect(&fresh).expect("sound enclosures always overlap"),
            None => fresh,
        };
        if refined.relative_width_at_most(precision.relative_width_exp10) {
            return Ok(refined);
        }
        if prec >= MAX_PRECISION_BITS {
            return Err(Error::PrecisionExhausted { bits: prec });
        }
        current = Some(refined);
        prec = (prec * 2).min(MAX_PRECISION_BITS);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoValue {
    pub g: u64,
    pub m_fold: u64,
    pub pq: BigInt,
    /// Exact `pq / (2r²)`.
    pub coefficient: BigRational,
    /// Enclosure of `cos(θ/2) / sin³(θ/2)`.
    pub magnitude: Interval,
}

impl RhoValue {
    /// Enclosure of `|ρ(g)| = |pq| / (2r²) · magnitude`.
    pub fn abs_value(&self) -> Interval {
        let c = self.coefficient.abs();
        self.magnitude.mul_int(c.numer()).div_int(c.denom())
    }

    /// Enclosure of `Im ρ(g) = −pq / (2r²) · magnitude`.
    pub fn imaginary_part(&self) -> Interval {
        let c = -self.coefficient.clone();
        self.magnitude.mul_int(c.numer()).div_int(c.denom())
    }

    pub fn record(&self) -> RhoRecord {
        RhoRecord {
            g: self.g,
            m_fold: self.m_fold,
            pq: self.pq.to_string(),
            magnitude_lo: self.magnitude.lo_decimal(DECIMAL_DIGITS),
            magnitude_hi: self.magnitude.hi_decimal(DECIMAL_DIGITS),
        }
    }
}

/// Serialized form of one profile entry. Bounds are decimal strings rounded outward.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoRecord {
    pub g: u64,
    pub m_fold: u64,
    pub pq: String,
    pub magnitude_lo: String,
    pub magnitude_hi: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoProfile {
    pub r: u64,
    pub pq: BigInt,
    pub entries: Vec<RhoValue>,
}

impl RhoProfile {
    pub fn records(&self) -> Vec<RhoRecord> {
        self.entries.iter().map(RhoValue::record).collect()
    }

    pub fn get(&self, g: u64) -> Option<&RhoValue> {
        self.entries.get(g.checked_sub(1)? as usize)
    }
}

pub fn rho_profile(params: &BundleParams) -> Result<RhoProfile> {
    rho_profile_with(params, RhoPrecision::default())
}

pub fn rho_profile_with(params: &BundleParams, precision: RhoPrecision) -> Result<RhoProfile> {
    if params.r().is_one() {
        return Err(Error::SimplyConnected);
    }
    let r = params.modulus()?;
    let pq = params.pq();
    let coefficient = BigRational::new(pq.clone(), BigInt::from(2) * params.r() * params.r());
    let folds: Vec<u64> = (1..=r / 2).collect();
    let factors: Vec<Interval> = folds
        .par_iter()
        .map(|&m| trig_factor(m, r, precision))
        .collect::<Result<_>>()?;
    let entries = (1..r)
        .map(|g| {
            let m_fold = g.min(r - g);
            RhoValue {
                g,
                m_fold,
                pq: pq.clone(),
                coefficient: coefficient.clone(),
                magnitude: factors[(m_fold - 1) as usize].clone(),
            }
        })
        .collect();
    Ok(RhoProfile { r, pq, entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistinctnessStatus {
    Distinct,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctnessVerdict {
    pub status: DistinctnessStatus,
    pub reason: String,
    /// ρ is an h-cobordism invariant, so distinct profiles separate h-cobordism classes.
    pub h_cobordism_distinct: bool,
    #[serde(with = "crate::bigint_serde")]
    pub left_abs_pq: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub right_abs_pq: BigInt,
}

impl DistinctnessVerdict {
    pub fn is_distinct(&self) -> bool {
        self.status == DistinctnessStatus::Distinct
    }
}

/// Certifies non-homeomorphism when `|pq|` differs.
///
/// In dimension five, non-diffeomorphic closed manifolds are non-homeomorphic.
pub fn distinguish(a: &BundleParams, b: &BundleParams) -> Result<DistinctnessVerdict> {
    if a.r() != b.r() {
        return Err(Error::RankMismatch { left: a.r().clone(), right: b.r().clone() });
    }
    if a.r().is_one() {
        return Err(Error::SimplyConnected);
    }
    let (x, y) = (a.abs_pq(), b.abs_pq());
    Ok(if x != y {
        DistinctnessVerdict {
            status: DistinctnessStatus::Distinct,
            reason: format!("|pq| {x} ≠ {y}"),
            h_cobordism_distinct: true,
            left_abs_pq: x,
            right_abs_pq: y,
        }
    } else {
        DistinctnessVerdict {
            status: DistinctnessStatus::Inconclusive,
            reason: format!("|pq| = {x} on both sides; ρ-profiles coincide up to sign"),
            h_cobordism_distinct: false,
            left_abs_pq: x,
            right_abs_pq: y,
        }
    })
}

/// Checks that the certified trig factors for folds `1..=r/2` are pairwise
/// disjoint and strictly decreasing, doubling precision until every
/// consecutive pair separates.
pub fn monotonicity_check(r: u64) -> Result<bool> {
    if r < 3 {
        return Err(Error::InvalidModulus(r));
    }
    let half = r / 2;
    let mut prec = 64u32;
    loop {
        let values: Vec<Interval> = (1..=half).map(|m| trig_factor_at(m, r, prec)).collect();
        let mut unresolved = false;
        for pair in values.windows(2) {
            if pair[1].strictly_below(&pair[0]) {
                continue;
            }
            if pair[0].strictly_below(&pair[1]) {
                return Ok(false);
            }
            unresolved = true;
        }
        if !unresolved {
            return Ok(true);
        }
        if prec >= MAX_PRECISION_BITS {
            return Err(Error::PrecisionExhausted { bits: prec });
        }
        prec = (prec * 2).min(MAX_PRECISION_BITS);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: i64, q: i64) -> BundleParams {
        BundleParams::new(p, q).unwrap()
    }

    #[test]
    fn symmetric_folds() {
        let prof = rho_profile(&params(7, 21)).unwrap();
        assert_eq!(prof.entries.len(), 6);
        for g in 1..7 {
            let a = prof.get(g).unwrap();
            let b = prof.get(7 - g).unwrap();
            assert_eq!(a.m_fold, b.m_fold);
            assert_eq!(a.magnitude, b.magnitude);
        }
    }

    #[test]
    fn profile_factorizes_through_pq() {
        let a = rho_profile(&params(5, 30)).unwrap();
        let b = rho_profile(&params(5, 55)).unwrap();
        for (x, y) in a.entries.iter().zip(&b.entries) {
            assert_eq!(x.magnitude, y.magnitude);
            assert_eq!(&x.coefficient * BigInt::from(275), &y.coefficient * BigInt::from(150));
        }
    }

    #[test]
    fn simply_connected_rejected() {
        assert_eq!(rho_profile(&params(2, 3)), Err(Error::SimplyConnected));
    }

    #[test]
    fn even_modulus_half_turn_is_zero() {
        let prof = rho_profile(&params(4, 8)).unwrap();
        let half = prof.get(2).unwrap();
        assert_eq!(half.m_fold, 2);
        assert!(half.magnitude.contains_decimal("0") && half.magnitude.width_at_most(100));
    }

    #[test]
    fn distinguish_examples() {
        let v = distinguish(&params(5, 30), &params(5, 55)).unwrap();
        assert!(v.is_distinct() && v.h_cobordism_distinct);
        assert_eq!(v.reason, "|pq| 150 ≠ 275");
        let v = distinguish(&params(5, 30), &params(5, 30)).unwrap();
        assert_eq!(v.status, DistinctnessStatus::Inconclusive);
        assert!(!v.h_cobordism_distinct);
        let v = distinguish(&params(5, 30), &params(30, 5)).unwrap();
        assert_eq!(v.status, DistinctnessStatus::Inconclusive);
        assert!(matches!(distinguish(&params(5, 5), &params(7, 7)), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn monotone_small_moduli() {
        assert_eq!(monotonicity_check(3), Ok(true));
        assert_eq!(monotonicity_check(5), Ok(true));
        assert_eq!(monotonicity_check(7), Ok(true));
        assert_eq!(monotonicity_check(8), Ok(true));
        assert_eq!(monotonicity_check(2), Err(Error::InvalidModulus(2)));
    }

    #[test]
    fn record_fields() {
        let prof = rho_profile(&params(5, 30)).unwrap();
        let rec = prof.get(1).unwrap().record();
        assert_eq!(rec.pq, "150");
        assert!(rec.magnitude_lo.starts_with("3.98383725581244843744"));
        assert!(rec.magnitude_lo < rec.magnitude_hi);
    }
}
