//! Integer and modular arithmetic over arbitrary-precision integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};

/// An element of `Z/r`, `r >= 2`, stored by its least nonnegative representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(value: i128, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        let value = value.rem_euclid(modulus as i128) as u64;
        Ok(Residue { value, modulus })
    }

    /// Reduces an arbitrary-precision integer.
    pub fn from_bigint(value: &BigInt, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        let v = value.mod_floor(&BigInt::from(modulus));
        Ok(Residue {
            value: v.to_u64().expect("reduced value fits the modulus"),
            modulus,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_unit(&self) -> bool {
        self.value.gcd(&self.modulus) == 1
    }

    pub fn add(self, other: Residue) -> Residue {
        debug_assert_eq!(self.modulus, other.modulus);
        let v = (self.value as u128 + other.value as u128) % self.modulus as u128;
        Residue { value: v as u64, modulus: self.modulus }
    }

    pub fn sub(self, other: Residue) -> Residue {
        self.add(other.neg())
    }

    pub fn neg(self) -> Residue {
        let v = if self.value == 0 { 0 } else { self.modulus - self.value };
        Residue { value: v, modulus: self.modulus }
    }

    pub fn mul(self, other: Residue) -> Residue {
        debug_assert_eq!(self.modulus, other.modulus);
        let v = (self.value as u128 * other.value as u128) % self.modulus as u128;
        Residue { value: v as u64, modulus: self.modulus }
    }

    pub fn pow(self, mut exp: u32) -> Residue {
        let mut base = self;
        let mut acc = Residue { value: 1 % self.modulus, modulus: self.modulus };
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, if the residue is a unit.
    pub fn inverse(self) -> Option<Residue> {
        let (g, x, _) = ext_gcd(&BigInt::from(self.value), &BigInt::from(self.modulus));
        if !g.is_one() {
            return None;
        }
        Residue::from_bigint(&x, self.modulus).ok()
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Integers `(m, n)` with `m * q_bar + n * p_bar = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BezoutPair {
    #[serde(with = "crate::bigint_serde")]
    pub m: BigInt,
    #[serde(with = "crate::bigint_serde")]
    pub n: BigInt,
}

impl BezoutPair {
    pub fn new(m: impl Into<BigInt>, n: impl Into<BigInt>) -> Self {
        BezoutPair { m: m.into(), n: n.into() }
    }

    pub fn satisfies(&self, p_bar: &BigInt, q_bar: &BigInt) -> bool {
        (&self.m * q_bar + &self.n * p_bar).is_one()
    }

    /// The pair `(m + c p_bar, n - c q_bar)`, which solves the same identity.
    pub fn shifted(&self, c: &BigInt, p_bar: &BigInt, q_bar: &BigInt) -> Self {
        BezoutPair { m: &self.m + c * p_bar, n: &self.n - c * q_bar }
    }
}

impl fmt::Display for BezoutPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g = gcd(|a|, |b|) >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let quot = old_r.div_floor(&r);
        let next_r = &old_r - &quot * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &quot * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &quot * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// `r = gcd(|p|, |q|)` together with the canonical Bézout pair for `(p/r, q/r)`.
///
/// The canonical pair has the smallest `|m|`; on a tie the positive `m` wins.
/// When `p/r = 0` (so `q/r = ±1`) the pair is `(q/r, 0)`.
pub fn gcd_full(p: &BigInt, q: &BigInt) -> Result<(BigInt, BezoutPair)> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::BothZero);
    }
    let r = p.gcd(q);
    let p_bar = p / &r;
    let q_bar = q / &r;
    Ok((r, canonical_bezout(&p_bar, &q_bar)))
}

fn canonical_bezout(p_bar: &BigInt, q_bar: &BigInt) -> BezoutPair {
    if p_bar.is_zero() {
        // q_bar = ±1
        return BezoutPair { m: q_bar.clone(), n: BigInt::zero() };
    }
    let modulus = p_bar.abs();
    let (_, x, _) = ext_gcd(q_bar, p_bar);
    let mut m = x.mod_floor(&modulus);
    if &m * 2 > modulus {
        m -= &modulus;
    }
    let n = (BigInt::one() - &m * q_bar) / p_bar;
    let pair = BezoutPair { m, n };
    debug_assert!(pair.satisfies(p_bar, q_bar));
    pair
}

/// The units of `Z/r` in ascending order.
pub fn units_mod(r: u64) -> Result<Vec<Residue>> {
    if r < 2 {
        return Err(Error::InvalidModulus(r));
    }
    Ok((1..r)
        .filter(|v| v.gcd(&r) == 1)
        .map(|value| Residue { value, modulus: r })
        .collect())
}

/// Euler's totient by trial division.
pub fn totient(r: u64) -> u64 {
    let mut n = r;
    let mut phi = r;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            while n.is_multiple_of(d) {
                n /= d;
            }
            phi -= phi / d;
        }
        d += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// Checks that `r` is odd, greater than one and prime to 3.
pub fn validate_admissible(r: &BigInt) -> Result<()> {
    let violation = if *r <= BigInt::one() {
        Some(Violation::TooSmall)
    } else if r.is_even() {
        Some(Violation::Even)
    } else if (r % 3u32).is_zero() {
        Some(Violation::DivisibleByThree)
    } else {
        None
    };
    match violation {
        Some(violation) => Err(Error::NotAdmissible { r: r.clone(), violation }),
        None => Ok(()),
    }
}

pub fn is_admissible(r: &BigInt) -> bool {
    validate_admissible(r).is_ok()
}
