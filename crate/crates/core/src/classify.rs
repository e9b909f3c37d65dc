//! Batch classification of parameter collections and the `L^{r,(t+kr)r}` families.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::validate_admissible;
use crate::error::{Error, Result};
use crate::homotopy::{decide_from_sets, Witness};
use crate::invariants::{basic_invariants, invariant_set, BasicInvariants, BundleParams, InvariantSet};
use crate::rho::distinguish;

/// The family `{L^{r,(t+kr)r} : k_lo ≤ k ≤ k_hi}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub r: u64,
    pub t: i64,
    pub k_lo: i64,
    pub k_hi: i64,
}

impl FamilySpec {
    pub fn new(r: u64, t: i64, k_lo: i64, k_hi: i64) -> Result<Self> {
        validate_admissible(&BigInt::from(r))?;
        if k_lo > k_hi {
            return Err(Error::EmptyRange { lo: k_lo, hi: k_hi });
        }
        Ok(FamilySpec { r, t, k_lo, k_hi })
    }
}

pub fn generate_family(spec: &FamilySpec) -> Result<Vec<BundleParams>> {
    let spec = FamilySpec::new(spec.r, spec.t, spec.k_lo, spec.k_hi)?;
    let r = BigInt::from(spec.r);
    (spec.k_lo..=spec.k_hi)
        .map(|k| {
            let q = (BigInt::from(spec.t) + BigInt::from(k) * &r) * &r;
            let params = BundleParams::new(r.clone(), q)?;
            assert_eq!(params.r(), &r, "gcd(r, (t + kr) r) must equal r");
            Ok(params)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCounterexample {
    pub left: BundleParams,
    pub right: BundleParams,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyVerification {
    pub spec: FamilySpec,
    pub members: Vec<BundleParams>,
    pub pairs_checked: usize,
    pub passed: bool,
    pub counterexample: Option<FamilyCounterexample>,
}

/// Checks every pair of the family for equivalence and for ρ-distinctness.
pub fn verify_theorem1(spec: &FamilySpec) -> Result<FamilyVerification> {
    let members = generate_family(spec)?;
    let sets: Vec<InvariantSet> = members.par_iter().map(invariant_set).collect::<Result<_>>()?;
    let mut pairs_checked = 0;
    let mut counterexample = None;
    'outer: for i in 0..members.len() {
        for j in i + 1..members.len() {
            pairs_checked += 1;
            let verdict = decide_from_sets(&sets[i], &sets[j]);
            let reason = if !(verdict.equivalent && verdict.simple && verdict.tangential) {
                Some(format!("not homotopy equivalent: {}", verdict.reason))
            } else {
                let d = distinguish(&members[i], &members[j])?;
                (!d.is_distinct()).then(|| format!("not ρ-distinct: {}", d.reason))
            };
            if let Some(reason) = reason {
                counterexample = Some(FamilyCounterexample {
                    left: members[i].clone(),
                    right: members[j].clone(),
                    reason,
                });
                break 'outer;
            }
        }
    }
    Ok(FamilyVerification {
        spec: *spec,
        passed: counterexample.is_none(),
        members,
        pairs_checked,
        counterexample,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubclassStatus {
    Singleton,
    /// Equal parameters or the factor swap `(p, q) ↔ (q, p)`; the swap is a
    /// derived symmetry.
    IdenticalOrSwapped,
    /// Equal `|pq|` with no known homeomorphism.
    Unresolved,
}

/// Items of one homotopy class sharing `|pq|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subclass {
    pub members: Vec<usize>,
    #[serde(with = "crate::bigint_serde")]
    pub abs_pq: BigInt,
    pub status: SubclassStatus,
    pub note: Option<String>,
}

/// Two subclasses separated by ρ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctEdge {
    pub left: usize,
    pub right: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberWitness {
    pub member: usize,
    pub representative: usize,
    pub witness: Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyClass {
    #[serde(with = "crate::bigint_serde")]
    pub r: BigInt,
    pub members: Vec<usize>,
    /// `None` when the class was decided; otherwise why it was not.
    pub undecided: Option<String>,
    pub witnesses: Vec<MemberWitness>,
    pub subclasses: Vec<Subclass>,
    pub distinct_edges: Vec<DistinctEdge>,
}

/// `a ≃ b` and `b ≃ c` observed with `a ≄ c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityViolation {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub items: Vec<BundleParams>,
    pub facts: Vec<BasicInvariants>,
    pub classes: Vec<HomotopyClass>,
    pub transitivity_violations: Vec<TransitivityViolation>,
}

impl ClassificationReport {
    /// Index of the class containing item `i`.
    pub fn class_of(&self, i: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.members.contains(&i))
    }
}

fn swap_or_equal(a: &BundleParams, b: &BundleParams) -> bool {
    a == b || a.swapped() == *b
}

fn subclasses(items: &[BundleParams], members: &[usize]) -> (Vec<Subclass>, Vec<DistinctEdge>) {
    let mut groups: BTreeMap<BigInt, Vec<usize>> = BTreeMap::new();
    for &i in members {
        groups.entry(items[i].abs_pq()).or_default().push(i);
    }
    let subs: Vec<Subclass> = groups
        .into_iter()
        .map(|(abs_pq, members)| {
            let first = &items[members[0]];
            let (status, note) = if members.len() == 1 {
                (SubclassStatus::Singleton, None)
            } else if members.iter().all(|&i| swap_or_equal(first, &items[i])) {
                (SubclassStatus::IdenticalOrSwapped, Some("derived symmetry".to_string()))
            } else {
                (SubclassStatus::Unresolved, None)
            };
            Subclass { members, abs_pq, status, note }
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..subs.len() {
        for j in i + 1..subs.len() {
            let (a, b) = (&items[subs[i].members[0]], &items[subs[j].members[0]]);
            if let Ok(v) = distinguish(a, b) {
                if v.is_distinct() {
                    edges.push(DistinctEdge { left: i, right: j, reason: v.reason });
                }
            }
        }
    }
    (subs, edges)
}

/// Partitions `items` into oriented homotopy classes and `|pq|` subclasses.
///
/// Items are sorted by `(r, |pq|, p, q)` first, so the report does not depend
/// on the input order. Each admissible item joins the first class all of whose
/// members it is equivalent to.
pub fn classify_collection(items: &[BundleParams]) -> ClassificationReport {
    let mut items = items.to_vec();
    items.sort_by(|a, b| a.canonical_cmp(b));
    let facts = items.iter().map(basic_invariants).collect();

    let sets: Vec<Option<InvariantSet>> = items
        .par_iter()
        .map(|p| validate_admissible(p.r()).and_then(|_| invariant_set(p)).ok())
        .collect();

    let mut classes: Vec<HomotopyClass> = Vec::new();
    let mut violations = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let Some(set) = &sets[i] else {
            let reason = match validate_admissible(item.r()) {
                Err(e) => format!("undecided (outside the admissible range: {e})"),
                Ok(()) => "undecided (modulus too large to enumerate)".to_string(),
            };
            classes.push(HomotopyClass {
                r: item.r().clone(),
                members: vec![i],
                undecided: Some(reason),
                witnesses: Vec::new(),
                subclasses: Vec::new(),
                distinct_edges: Vec::new(),
            });
            continue;
        };
        let mut placed = false;
        for class in classes.iter_mut().filter(|c| c.undecided.is_none() && c.r == *item.r()) {
            let verdicts: Vec<_> = class
                .members
                .iter()
                .map(|&j| decide_from_sets(set, sets[j].as_ref().unwrap()))
                .collect();
            let hits = verdicts.iter().filter(|v| v.equivalent).count();
            if hits == class.members.len() {
                let representative = class.members[0];
                let witness = verdicts.into_iter().next().unwrap().witness.unwrap();
                class.witnesses.push(MemberWitness { member: i, representative, witness });
                class.members.push(i);
                placed = true;
                break;
            }
            if hits > 0 {
                let b = class.members[verdicts.iter().position(|v| v.equivalent).unwrap()];
                let c = class.members[verdicts.iter().position(|v| !v.equivalent).unwrap()];
                violations.push(TransitivityViolation { a: i, b, c });
            }
        }
        if !placed {
            classes.push(HomotopyClass {
                r: item.r().clone(),
                members: vec![i],
                undecided: None,
                witnesses: Vec::new(),
                subclasses: Vec::new(),
                distinct_edges: Vec::new(),
            });
        }
    }

    for class in classes.iter_mut().filter(|c| c.undecided.is_none()) {
        let (subs, edges) = subclasses(&items, &class.members);
        class.subclasses = subs;
        class.distinct_edges = edges;
    }

    ClassificationReport { items, facts, classes, transitivity_violations: violations }
}

/// Items that cannot be codimension-one souls of a common manifold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimOneAnnotation {
    pub distinct_pairs: Vec<(usize, usize)>,
    pub note: String,
}

/// Items lying in pairwise distinct h-cobordism classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimTwoAnnotation {
    pub representatives: Vec<usize>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoulObstructionReport {
    pub items: Vec<BundleParams>,
    pub codim_one: Option<CodimOneAnnotation>,
    pub codim_two: Option<CodimTwoAnnotation>,
    /// Items left out, with the reason.
    pub skipped: Vec<(usize, String)>,
}

/// Soul obstructions implied by ρ-distinctness within a collection.
///
/// Two non-homeomorphic members with trivial Reidemeister torsion cannot both
/// be codimension-one souls of one manifold, since an s-cobordism between them
/// would be a product. Members with pairwise distinct `|pq|` lie in distinct
/// h-cobordism classes, so only finitely many of them can occur as
/// codimension-two souls with trivial normal bundle of a fixed manifold.
pub fn soul_obstruction_report(items: &[BundleParams]) -> SoulObstructionReport {
    let mut items = items.to_vec();
    items.sort_by(|a, b| a.canonical_cmp(b));
    let mut skipped = Vec::new();
    let mut usable = Vec::new();
    for (i, p) in items.iter().enumerate() {
        match validate_admissible(p.r()) {
            Ok(()) => usable.push(i),
            Err(e) => skipped.push((i, e.to_string())),
        }
    }

    let mut distinct_pairs = Vec::new();
    for (x, &i) in usable.iter().enumerate() {
        for &j in &usable[x + 1..] {
            if let Ok(v) = distinguish(&items[i], &items[j]) {
                if v.is_distinct() {
                    distinct_pairs.push((i, j));
                }
            }
        }
    }
    let codim_one = (!distinct_pairs.is_empty()).then(|| CodimOneAnnotation {
        note: format!(
            "{} non-homeomorphic pair(s): no two of these are codimension-1 souls of one manifold",
            distinct_pairs.len()
        ),
        distinct_pairs,
    });

    let mut by_rank: BTreeMap<(BigInt, BigInt), usize> = BTreeMap::new();
    for &i in &usable {
        by_rank.entry((items[i].r().clone(), items[i].abs_pq())).or_insert(i);
    }
    let mut per_rank: BTreeMap<BigInt, Vec<usize>> = BTreeMap::new();
    for ((r, _), i) in by_rank {
        per_rank.entry(r).or_default().push(i);
    }
    let representatives: Vec<usize> =
        per_rank.into_values().filter(|v| v.len() >= 2).flatten().collect();
    let codim_two = (!representatives.is_empty()).then(|| CodimTwoAnnotation {
        note: format!(
            "{} pairwise distinct h-cobordism classes: a fixed manifold has only finitely many of them as codimension-2 souls with trivial normal bundle",
            representatives.len()
        ),
        representatives,
    });

    SoulObstructionReport { items, codim_one, codim_two, skipped }
}
