mod common;

use lpq::invariants::BundleParams;
use lpq::rho::{distinguish, monotonicity_check, rho_profile, rho_profile_with, RhoPrecision};

#[test]
fn enclosures_contain_oracle_values() {
    for &(p, q, g, value) in common::RHO_ORACLE {
        let prof = rho_profile(&BundleParams::new(p, q).unwrap()).unwrap();
        let v = prof.get(g).unwrap().abs_value();
        assert!(v.contains_decimal(value), "({p}, {q}) g={g}");
        assert!(v.width_at_most(25), "({p}, {q}) g={g}");
    }
}

#[test]
fn higher_targets_stay_sound() {
    let params = BundleParams::new(5, 30).unwrap();
    let precision = RhoPrecision { start_bits: 64, relative_width_exp10: 120 };
    let v = rho_profile_with(&params, precision).unwrap().get(1).unwrap().abs_value();
    assert!(v.near_decimal(common::RHO_ORACLE[0].3, 43));
    assert!(v.relative_width_at_most(120));
}

#[test]
fn imaginary_part_sign_follows_pq() {
    let pos = rho_profile(&BundleParams::new(5, 30).unwrap()).unwrap();
    let neg = rho_profile(&BundleParams::new(5, -30).unwrap()).unwrap();
    let a = pos.get(1).unwrap().imaginary_part();
    let b = neg.get(1).unwrap().imaginary_part();
    assert!(!a.is_positive() && b.is_positive());
    assert!(a.neg().contains_decimal(common::RHO_ORACLE[0].3));
}

#[test]
fn monotone_for_odd_moduli() {
    for r in (3..=61).step_by(2) {
        assert_eq!(monotonicity_check(r), Ok(true), "r = {r}");
    }
}

#[test]
fn distinct_exactly_when_abs_pq_differs() {
    let items = [(5, 5), (5, 30), (30, 5), (5, -30), (-5, -30), (5, 55), (25, 6 * 5)];
    for a in items {
        for b in items {
            let (x, y) = (BundleParams::new(a.0, a.1).unwrap(), BundleParams::new(b.0, b.1).unwrap());
            let v = distinguish(&x, &y).unwrap();
            assert_eq!(v.is_distinct(), x.abs_pq() != y.abs_pq(), "{a:?} {b:?}");
        }
    }
}
