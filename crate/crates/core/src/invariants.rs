//! Basic invariants of `L^{p,q}` and the congruence fingerprints that
//! determine its oriented homotopy type.
//!
//! A normal 2-smoothing of `L^{p,q}` is determined (for a fixed Bézout pair
//! `(m, n)` with `m q̄ + n p̄ = 1`) by a unit `s`, a sign `ε` and a residue `k`.
//! Each smoothing yields the triple
//!
//! ```text
//! t1 = s³ p̄ q̄
//! t2 = s (ε m + k p̄)(ε n − k q̄)
//! t3 = s² (q̄ (ε m + k p̄) − p̄ (ε n − k q̄))          (mod r)
//! ```
//!
//! where `p̄ = p/r`, `q̄ = q/r`. The universal Bockstein unit and the factor
//! `−2` that appear in the cohomological derivation rescale a whole component
//! uniformly and are omitted. Two members are oriented homotopy equivalent
//! exactly when their sets of triples meet.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd_full, units_mod, validate_admissible, BezoutPair, Residue};
use crate::error::{Error, Result};

/// Parameters `(p, q)` of the circle bundle with Chern class `px + qy`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct BundleParams {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    p_bar: BigInt,
    q_bar: BigInt,
    bezout: BezoutPair,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    #[serde(with = "crate::bigint_serde")]
    p: BigInt,
    #[serde(with = "crate::bigint_serde")]
    q: BigInt,
}

impl TryFrom<RawParams> for BundleParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        BundleParams::new(raw.p, raw.q)
    }
}

impl From<BundleParams> for RawParams {
    fn from(params: BundleParams) -> Self {
        RawParams { p: params.p, q: params.q }
    }
}

impl BundleParams {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        let (r, bezout) = gcd_full(&p, &q)?;
        let p_bar = &p / &r;
        let q_bar = &q / &r;
        Ok(BundleParams { p, q, r, p_bar, q_bar, bezout })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// Order of the fundamental group, `gcd(|p|, |q|)`.
    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn p_bar(&self) -> &BigInt {
        &self.p_bar
    }

    pub fn q_bar(&self) -> &BigInt {
        &self.q_bar
    }

    /// Canonical Bézout pair for `(p̄, q̄)`.
    pub fn bezout(&self) -> &BezoutPair {
        &self.bezout
    }

    pub fn pq(&self) -> BigInt {
        &self.p * &self.q
    }

    pub fn abs_pq(&self) -> BigInt {
        num_traits::Signed::abs(&self.pq())
    }

    /// The parameters with the two base factors exchanged.
    pub fn swapped(&self) -> BundleParams {
        BundleParams::new(self.q.clone(), self.p.clone()).expect("swap of valid params is valid")
    }

    /// `r` as a machine modulus, for enumeration.
    pub fn modulus(&self) -> Result<u64> {
        self.r.to_u64().ok_or_else(|| Error::ModulusTooLarge(self.r.clone()))
    }

    /// Canonical report order: `(r, |pq|, p, q)`.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.r
            .cmp(&other.r)
            .then_with(|| self.abs_pq().cmp(&other.abs_pq()))
            .then_with(|| self.p.cmp(&other.p))
            .then_with(|| self.q.cmp(&other.q))
    }
}

impl fmt::Display for BundleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L^{{{},{}}}", self.p, self.q)
    }
}

/// Facts that hold for every member of the family, plus `π₁`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicInvariants {
    #[serde(with = "crate::bigint_serde")]
    pub pi1_order: BigInt,
    pub pi2: String,
    pub pi3: String,
    pub universal_cover: String,
    pub h2: String,
    pub stably_parallelizable: bool,
    pub reidemeister_torsion_trivial: bool,
    pub spin: bool,
    /// `Some(true)` when `π₁` has odd order; `None` when uniqueness is not asserted.
    pub spin_structure_unique: Option<bool>,
    pub simply_connected: bool,
}

pub fn basic_invariants(params: &BundleParams) -> BasicInvariants {
    let r = params.r().clone();
    let simply_connected = r.is_one();
    let h2 = if simply_connected { "Z".to_string() } else { format!("Z ⊕ Z/{r}") };
    let odd = num_integer::Integer::is_odd(&r);
    BasicInvariants {
        pi1_order: r,
        pi2: "Z".into(),
        pi3: "Z".into(),
        universal_cover: "S2xS3".into(),
        h2,
        stably_parallelizable: true,
        reidemeister_torsion_trivial: true,
        spin: true,
        spin_structure_unique: odd.then_some(true),
        simply_connected,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.as_i8()
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be ±1, got {other}")),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Parameters `(s, ε, k)` of a normal 2-smoothing, relative to a Bézout pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SmoothingChoice {
    pub s: Residue,
    pub epsilon: Sign,
    pub k: Residue,
    pub bezout: BezoutPair,
}

impl SmoothingChoice {
    pub fn new(s: i128, epsilon: Sign, k: i128, bezout: BezoutPair, r: u64) -> Result<Self> {
        let s = Residue::new(s, r)?;
        if !s.is_unit() {
            return Err(Error::InvalidSmoothing(format!("s = {s} is not a unit mod {r}")));
        }
        Ok(SmoothingChoice { s, epsilon, k: Residue::new(k, r)?, bezout })
    }

    /// `(s, ε, k) = (1, +1, 0)`.
    pub fn identity(params: &BundleParams) -> Result<Self> {
        let r = params.modulus()?;
        Ok(SmoothingChoice {
            s: Residue::new(1, r)?,
            epsilon: Sign::Plus,
            k: Residue::new(0, r)?,
            bezout: params.bezout().clone(),
        })
    }

    /// Enumeration order used for witnesses: `s` ascending, `ε = +1` first, `k` ascending.
    fn order_key(&self) -> (u64, Sign, u64) {
        (self.s.value(), self.epsilon, self.k.value())
    }
}

impl fmt::Display for SmoothingChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(s, ε, k) = ({}, {}, {}) with (m, n) = {}",
            self.s, self.epsilon, self.k, self.bezout
        )
    }
}

/// Values of the three congruence expressions, in the order
/// (cubic, product, mixed).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "RawTriple", try_from = "RawTriple")]
pub struct InvariantTriple {
    pub t1: Residue,
    pub t2: Residue,
    pub t3: Residue,
}

#[derive(Serialize, Deserialize)]
struct RawTriple {
    modulus: u64,
    residues: [u64; 3],
}

impl From<InvariantTriple> for RawTriple {
    fn from(t: InvariantTriple) -> Self {
        RawTriple { modulus: t.modulus(), residues: t.values() }
    }
}

impl TryFrom<RawTriple> for InvariantTriple {
    type Error = Error;

    fn try_from(raw: RawTriple) -> Result<Self> {
        let [a, b, c] = raw.residues;
        InvariantTriple::from_values(a, b, c, raw.modulus)
    }
}

impl InvariantTriple {
    pub fn from_values(t1: u64, t2: u64, t3: u64, modulus: u64) -> Result<Self> {
        Ok(InvariantTriple {
            t1: Residue::new(t1 as i128, modulus)?,
            t2: Residue::new(t2 as i128, modulus)?,
            t3: Residue::new(t3 as i128, modulus)?,
        })
    }

    pub fn values(&self) -> [u64; 3] {
        [self.t1.value(), self.t2.value(), self.t3.value()]
    }

    pub fn modulus(&self) -> u64 {
        self.t1.modulus()
    }
}

impl fmt::Display for InvariantTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}) mod {}", self.t1, self.t2, self.t3, self.modulus())
    }
}

/// Reductions of `p̄, q̄, m, n` mod `r` shared by every choice.
#[derive(Debug, Clone, Copy)]
struct Reduced {
    p_bar: Residue,
    q_bar: Residue,
    m: Residue,
    n: Residue,
}

impl Reduced {
    fn new(params: &BundleParams, bezout: &BezoutPair, r: u64) -> Result<Self> {
        Ok(Reduced {
            p_bar: Residue::from_bigint(params.p_bar(), r)?,
            q_bar: Residue::from_bigint(params.q_bar(), r)?,
            m: Residue::from_bigint(&bezout.m, r)?,
            n: Residue::from_bigint(&bezout.n, r)?,
        })
    }

    fn triple(&self, s: Residue, epsilon: Sign, k: Residue) -> InvariantTriple {
        let eps = match epsilon {
            Sign::Plus => Residue::new(1, s.modulus()).unwrap(),
            Sign::Minus => Residue::new(-1, s.modulus()).unwrap(),
        };
        let a = eps.mul(self.m).add(k.mul(self.p_bar));
        let b = eps.mul(self.n).sub(k.mul(self.q_bar));
        let s2 = s.mul(s);
        InvariantTriple {
            t1: s2.mul(s).mul(self.p_bar).mul(self.q_bar),
            t2: s.mul(a).mul(b),
            t3: s2.mul(self.q_bar.mul(a).sub(self.p_bar.mul(b))),
        }
    }
}

fn admissible_modulus(params: &BundleParams) -> Result<u64> {
    validate_admissible(params.r())?;
    params.modulus()
}

/// The triple of one smoothing choice.
pub fn invariant_triple(params: &BundleParams, choice: &SmoothingChoice) -> Result<InvariantTriple> {
    let r = admissible_modulus(params)?;
    if choice.s.modulus() != r || choice.k.modulus() != r {
        return Err(Error::InvalidSmoothing(format!(
            "residues are mod {} but r = {r}",
            choice.s.modulus()
        )));
    }
    if !choice.s.is_unit() {
        return Err(Error::InvalidSmoothing(format!("s = {} is not a unit mod {r}", choice.s)));
    }
    if !choice.bezout.satisfies(params.p_bar(), params.q_bar()) {
        return Err(Error::InvalidSmoothing(format!(
            "{} does not satisfy m·q̄ + n·p̄ = 1",
            choice.bezout
        )));
    }
    let reduced = Reduced::new(params, &choice.bezout, r)?;
    Ok(reduced.triple(choice.s, choice.epsilon, choice.k))
}

/// All triples of a manifold, each with the first choice (in enumeration
/// order) that produces it. Sorted lexicographically by triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantSet {
    modulus: u64,
    entries: Vec<(InvariantTriple, SmoothingChoice)>,
}

impl InvariantSet {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn triples(&self) -> impl Iterator<Item = &InvariantTriple> {
        self.entries.iter().map(|(t, _)| t)
    }

    pub fn entries(&self) -> &[(InvariantTriple, SmoothingChoice)] {
        &self.entries
    }

    pub fn same_triples(&self, other: &InvariantSet) -> bool {
        self.modulus == other.modulus && self.triples().eq(other.triples())
    }

    pub fn witness(&self, triple: &InvariantTriple) -> Option<&SmoothingChoice> {
        self.entries
            .binary_search_by(|(t, _)| t.cmp(triple))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn contains(&self, triple: &InvariantTriple) -> bool {
        self.witness(triple).is_some()
    }

    /// First choice of `self` (in enumeration order) whose triple lies in
    /// `other`, paired with `other`'s witness for that triple.
    pub fn first_common(
        &self,
        other: &InvariantSet,
    ) -> Option<(InvariantTriple, SmoothingChoice, SmoothingChoice)> {
        if self.modulus != other.modulus {
            return None;
        }
        let mut ordered: Vec<&(InvariantTriple, SmoothingChoice)> = self.entries.iter().collect();
        ordered.sort_by_key(|(_, c)| c.order_key());
        ordered.into_iter().find_map(|(t, c)| {
            other.witness(t).map(|w| (*t, c.clone(), w.clone()))
        })
    }

    pub fn intersects(&self, other: &InvariantSet) -> bool {
        if self.modulus != other.modulus {
            return false;
        }
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() && j < other.entries.len() {
            match self.entries[i].0.cmp(&other.entries[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return true,
            }
        }
        false
    }
}

/// The fingerprint of `L^{p,q}` using the canonical Bézout pair.
pub fn invariant_set(params: &BundleParams) -> Result<InvariantSet> {
    invariant_set_with(params, params.bezout())
}

/// The fingerprint computed with an explicit Bézout pair.
pub fn invariant_set_with(params: &BundleParams, bezout: &BezoutPair) -> Result<InvariantSet> {
    let r = admissible_modulus(params)?;
    if !bezout.satisfies(params.p_bar(), params.q_bar()) {
        return Err(Error::InvalidSmoothing(format!(
            "{bezout} does not satisfy m·q̄ + n·p̄ = 1"
        )));
    }
    let reduced = Reduced::new(params, bezout, r)?;
    let units = units_mod(r)?;
    let per_unit: Vec<Vec<(InvariantTriple, SmoothingChoice)>> = units
        .par_iter()
        .map(|&s| {
            let mut out = Vec::with_capacity(2 * r as usize);
            for epsilon in [Sign::Plus, Sign::Minus] {
                for kv in 0..r {
                    let k = Residue::new(kv as i128, r).unwrap();
                    let triple = reduced.triple(s, epsilon, k);
                    out.push((triple, SmoothingChoice { s, epsilon, k, bezout: bezout.clone() }));
                }
            }
            out
        })
        .collect();
    // Concatenation preserves enumeration order, so a stable sort keeps the
    // first producing choice at the head of each run of equal triples.
    let mut entries: Vec<_> = per_unit.into_iter().flatten().collect();
    entries.sort_by_key(|a| a.0);
    entries.dedup_by(|later, earlier| later.0 == earlier.0);
    Ok(InvariantSet { modulus: r, entries })
}

/// Upper bound `2 r φ(r)` on the size of an invariant set.
pub fn max_set_size(r: u64) -> u64 {
    2 * r * crate::arith::totient(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: i64, q: i64) -> BundleParams {
        BundleParams::new(p, q).unwrap()
    }

    fn triple(p: &BundleParams, s: i128, e: Sign, k: i128, bez: BezoutPair) -> [u64; 3] {
        let r = p.modulus().unwrap();
        let c = SmoothingChoice::new(s, e, k, bez, r).unwrap();
        invariant_triple(p, &c).unwrap().values()
    }

    #[test]
    fn basic_facts() {
        let b = basic_invariants(&params(5, 30));
        assert_eq!(b.pi1_order, BigInt::from(5));
        assert_eq!(b.universal_cover, "S2xS3");
        assert_eq!(b.h2, "Z ⊕ Z/5");
        assert_eq!(b.spin_structure_unique, Some(true));
        assert!(b.stably_parallelizable && b.reidemeister_torsion_trivial && b.spin);

        let b = basic_invariants(&params(1, 1));
        assert!(b.simply_connected);
        assert_eq!(b.pi1_order, BigInt::from(1));
        assert_eq!(basic_invariants(&params(7, 0)).pi1_order, BigInt::from(7));
        assert_eq!(basic_invariants(&params(4, 6)).spin_structure_unique, None);
    }

    #[test]
    fn worked_family_triples() {
        let p = params(5, 30);
        assert_eq!(triple(&p, 1, Sign::Plus, 0, BezoutPair::new(0, 1)), [1, 0, 4]);
        for t in 0..5i64 {
            let p = params(5, 5 * t + 25);
            assert_eq!(triple(&p, 1, Sign::Minus, 0, BezoutPair::new(0, 1)), [t as u64, 0, 1]);
        }
    }

    #[test]
    fn rejects_bad_choices() {
        let p = params(5, 30);
        let bad_s = SmoothingChoice {
            s: Residue::new(0, 5).unwrap(),
            epsilon: Sign::Plus,
            k: Residue::new(0, 5).unwrap(),
            bezout: BezoutPair::new(0, 1),
        };
        assert!(matches!(invariant_triple(&p, &bad_s), Err(Error::InvalidSmoothing(_))));
        let bad_bez = SmoothingChoice::new(1, Sign::Plus, 0, BezoutPair::new(1, 1), 5).unwrap();
        assert!(matches!(invariant_triple(&p, &bad_bez), Err(Error::InvalidSmoothing(_))));
        assert!(matches!(invariant_set(&params(9, 9)), Err(Error::NotAdmissible { .. })));
        assert!(matches!(invariant_set(&params(1, 4)), Err(Error::NotAdmissible { .. })));
    }

    #[test]
    fn t1_depends_only_on_s() {
        let p = params(35, -70);
        let r = 35;
        for s in crate::arith::units_mod(r).unwrap() {
            let mut seen = std::collections::BTreeSet::new();
            for e in [Sign::Plus, Sign::Minus] {
                for k in 0..r as i128 {
                    seen.insert(triple(&p, s.value() as i128, e, k, p.bezout().clone())[0]);
                }
            }
            assert_eq!(seen.len(), 1);
        }
    }

    #[test]
    fn set_is_sorted_bounded_and_deterministic() {
        let p = params(25, 40);
        let a = invariant_set(&p).unwrap();
        let b = invariant_set(&p).unwrap();
        assert_eq!(a, b);
        assert!(a.len() as u64 <= max_set_size(25));
        assert!(a.triples().zip(a.triples().skip(1)).all(|(x, y)| x < y));
    }

    #[test]
    fn witnesses_reproduce_their_triples() {
        let p = params(7, 21);
        let set = invariant_set(&p).unwrap();
        for (t, c) in set.entries() {
            assert_eq!(&invariant_triple(&p, c).unwrap(), t);
        }
        let id = SmoothingChoice::identity(&p).unwrap();
        let t = invariant_triple(&p, &id).unwrap();
        assert_eq!(set.witness(&t), Some(&id));
    }

    #[test]
    fn params_json_round_trip() {
        let p = params(-12, 18);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"p":"-12","q":"18"}"#);
        let back: BundleParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<BundleParams>(r#"{"p":"0","q":"0"}"#).is_err());
    }
}
