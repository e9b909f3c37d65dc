mod common;

use lpq::arith::BezoutPair;
use lpq::invariants::{
    basic_invariants, invariant_set, invariant_set_with, invariant_triple, max_set_size,
    BundleParams, InvariantTriple, Sign, SmoothingChoice,
};
use lpq::Error;
use num_bigint::BigInt;

fn params(p: i64, q: i64) -> BundleParams {
    BundleParams::new(p, q).unwrap()
}

#[test]
fn hand_computed_triple_matches_direct_substitution() {
    // (5, 10): p̄ = 1, q̄ = 2, (m, n) = (0, 1), (s, ε, k) = (2, +1, 1).
    let oracle = common::triple(5, 1, 2, 0, 1, 2, 1, 1);
    assert_eq!(oracle, [1, 3, 2]);
    let choice = SmoothingChoice::new(2, Sign::Plus, 1, BezoutPair::new(0, 1), 5).unwrap();
    let t = invariant_triple(&params(5, 10), &choice).unwrap();
    assert_eq!(t.values(), [1, 3, 2]);
}

#[test]
fn identity_fingerprint_of_diagonal_bundle() {
    let set = invariant_set(&params(5, 5)).unwrap();
    assert!(set.contains(&InvariantTriple::from_values(1, 0, 4, 5).unwrap()));
}

#[test]
fn sets_agree_with_oracle_enumeration() {
    for (p, q) in [(5, 5), (5, 10), (-35, 14), (7, 7), (11, -22), (13, 39), (25, 5)] {
        let set = invariant_set(&params(p, q)).unwrap();
        let mut oracle: Vec<[u64; 3]> = common::all_triples(p, q)
            .into_iter()
            .map(|(t, _)| t.map(|x| x as u64))
            .collect();
        oracle.sort();
        oracle.dedup();
        let ours: Vec<[u64; 3]> = set.triples().map(|t| t.values()).collect();
        assert_eq!(ours, oracle, "({p}, {q})");
        assert!(set.len() as u64 <= max_set_size(set.modulus()));
    }
}

#[test]
fn every_witness_reproduces_its_triple() {
    let p = params(7, 21);
    for (t, c) in invariant_set(&p).unwrap().entries() {
        assert_eq!(&invariant_triple(&p, c).unwrap(), t);
    }
}

#[test]
fn fingerprint_independent_of_bezout_pair() {
    for (p, q) in [(5, 30), (7, -14), (11, 121), (-13, 26)] {
        let bp = params(p, q);
        let base = invariant_set(&bp).unwrap();
        for c in [-3i64, 1, 2, 9] {
            let shifted = bp.bezout().shifted(&BigInt::from(c), bp.p_bar(), bp.q_bar());
            assert!(shifted.satisfies(bp.p_bar(), bp.q_bar()));
            let other = invariant_set_with(&bp, &shifted).unwrap();
            assert!(base.same_triples(&other), "({p}, {q}) shift {c}");
        }
    }
}

#[test]
fn inadmissible_moduli_are_rejected() {
    for (p, q) in [(1, 0), (2, 4), (9, 18), (6, 6)] {
        assert!(matches!(invariant_set(&params(p, q)), Err(Error::NotAdmissible { .. })));
    }
    assert_eq!(BundleParams::new(0, 0), Err(Error::BothZero));
}

#[test]
fn basic_facts_of_family_members() {
    let b = basic_invariants(&params(5, 30));
    assert_eq!(b.pi1_order, BigInt::from(5));
    assert_eq!(b.h2, "Z ⊕ Z/5");
    assert!(b.stably_parallelizable && b.reidemeister_torsion_trivial && b.spin);
    assert_eq!(b.spin_structure_unique, Some(true));
    let b = basic_invariants(&params(2, 3));
    assert!(b.simply_connected);
    assert_eq!(b.h2, "Z");
}
