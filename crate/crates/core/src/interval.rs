//! Outward-rounded dyadic interval arithmetic.
//!
//! An [`Interval`] at precision `prec` is `[lo, hi] · 2^-prec` with integer
//! endpoints. Every operation rounds the lower endpoint down and the upper
//! endpoint up, so the result encloses every value the operands could take.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// Decimal expansion of `value / 2^prec` with `digits` fractional digits.
fn to_decimal(value: &BigInt, prec: u32, digits: usize, round_up: bool) -> String {
    let scaled = value * BigInt::from(10u32).pow(digits as u32);
    let q = if round_up { ceil_div(&scaled, &pow2(prec)) } else { floor_div(&scaled, &pow2(prec)) };
    let negative = q.is_negative();
    let mut s = q.abs().to_string();
    if s.len() <= digits {
        s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
    }
    let (int, frac) = s.split_at(s.len() - digits);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

impl Interval {
    pub fn from_int(n: impl Into<BigInt>, prec: u32) -> Self {
        let v = n.into() << prec;
        Interval { lo: v.clone(), hi: v, prec }
    }

    /// Enclosure of `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        let scaled = num << prec;
        Interval { lo: floor_div(&scaled, &den), hi: ceil_div(&scaled, &den), prec }
    }

    pub fn zero(prec: u32) -> Self {
        Interval::from_int(0, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_raw(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_raw(&self) -> &BigInt {
        &self.hi
    }

    /// Re-expresses the interval at another precision, rounding outward.
    pub fn with_prec(&self, prec: u32) -> Self {
        match prec.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let k = prec - self.prec;
                Interval { lo: &self.lo << k, hi: &self.hi << k, prec }
            }
            Ordering::Less => {
                let d = pow2(self.prec - prec);
                Interval { lo: floor_div(&self.lo, &d), hi: ceil_div(&self.hi, &d), prec }
            }
        }
    }

    fn check(&self, other: &Interval) {
        assert_eq!(self.prec, other.prec, "interval precision mismatch");
    }

    pub fn add(&self, other: &Interval) -> Interval {
        self.check(other);
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi, prec: self.prec }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.check(other);
        Interval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo, prec: self.prec }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        self.check(other);
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = products.iter().min().unwrap();
        let max = products.iter().max().unwrap();
        let d = pow2(self.prec);
        Interval { lo: floor_div(min, &d), hi: ceil_div(max, &d), prec: self.prec }
    }

    pub fn mul_int(&self, k: &BigInt) -> Interval {
        let (a, b) = (&self.lo * k, &self.hi * k);
        if k.is_negative() {
            Interval { lo: b, hi: a, prec: self.prec }
        } else {
            Interval { lo: a, hi: b, prec: self.prec }
        }
    }

    pub fn div_int(&self, d: &BigInt) -> Interval {
        assert!(!d.is_zero(), "division by zero");
        let base = if d.is_negative() { self.neg() } else { self.clone() };
        let d = d.abs();
        Interval { lo: floor_div(&base.lo, &d), hi: ceil_div(&base.hi, &d), prec: self.prec }
    }

    /// Panics if `other` contains zero.
    pub fn div(&self, other: &Interval) -> Interval {
        self.check(other);
        assert!(!other.contains_zero(), "division by an interval containing zero");
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let (num, den) = if b.is_negative() { (-(a << self.prec), -b) } else { (a << self.prec, b.clone()) };
                let f = floor_div(&num, &den);
                let c = ceil_div(&num, &den);
                lo = Some(lo.map_or(f.clone(), |x| x.min(f)));
                hi = Some(hi.map_or(c.clone(), |x| x.max(c)));
            }
        }
        Interval { lo: lo.unwrap(), hi: hi.unwrap(), prec: self.prec }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Widens symmetrically by `units · 2^-prec`.
    fn widen(&self, units: &BigInt) -> Interval {
        Interval { lo: &self.lo - units, hi: &self.hi + units, prec: self.prec }
    }

    /// True if every point of `self` is strictly less than every point of `other`.
    pub fn strictly_below(&self, other: &Interval) -> bool {
        let p = self.prec.max(other.prec);
        self.with_prec(p).hi < other.with_prec(p).lo
    }

    /// `self ⊆ other`.
    pub fn within(&self, other: &Interval) -> bool {
        let p = self.prec.max(other.prec);
        let (a, b) = (self.with_prec(p), other.with_prec(p));
        b.lo <= a.lo && a.hi <= b.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let p = self.prec.max(other.prec);
        let (a, b) = (self.with_prec(p), other.with_prec(p));
        let lo = a.lo.max(b.lo);
        let hi = a.hi.min(b.hi);
        (lo <= hi).then_some(Interval { lo, hi, prec: p })
    }

    /// Whether `num / den` lies in the interval.
    pub fn contains_ratio(&self, num: &BigInt, den: &BigInt) -> bool {
        let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
        let target = num << self.prec;
        &self.lo * &den <= target && target <= &self.hi * &den
    }

    /// Whether a decimal literal such as `"11.9516"` lies in the interval.
    pub fn contains_decimal(&self, literal: &str) -> bool {
        let (num, den) = parse_decimal(literal).expect("malformed decimal literal");
        self.contains_ratio(&num, &den)
    }

    /// `self ⊆ [x − 10^-exp10, x + 10^-exp10]` for the decimal literal `x`.
    pub fn near_decimal(&self, literal: &str, exp10: u32) -> bool {
        let (num, den) = parse_decimal(literal).expect("malformed decimal literal");
        let tol = BigInt::from(10u32).pow(exp10);
        // lo·2^-prec ≥ num/den − 1/tol  ⇔  lo·den·tol ≥ (num·tol − den)·2^prec
        let scale = pow2(self.prec);
        let lo_ok = &self.lo * &den * &tol >= (&num * &tol - &den) * &scale;
        let hi_ok = &self.hi * &den * &tol <= (&num * &tol + &den) * &scale;
        lo_ok && hi_ok
    }

    /// `hi - lo <= 10^-exp10`.
    pub fn width_at_most(&self, exp10: u32) -> bool {
        (&self.hi - &self.lo) * BigInt::from(10u32).pow(exp10) <= pow2(self.prec)
    }

    /// `hi - lo <= 10^-exp10 · min(|lo|, |hi|)`; false when the interval contains zero.
    pub fn relative_width_at_most(&self, exp10: u32) -> bool {
        if self.contains_zero() {
            return self.lo.is_zero() && self.hi.is_zero();
        }
        let mag = self.lo.abs().min(self.hi.abs());
        (&self.hi - &self.lo) * BigInt::from(10u32).pow(exp10) <= mag
    }

    pub fn lo_decimal(&self, digits: usize) -> String {
        to_decimal(&self.lo, self.prec, digits, false)
    }

    pub fn hi_decimal(&self, digits: usize) -> String {
        to_decimal(&self.hi, self.prec, digits, true)
    }

    /// Approximate midpoint, for display only.
    pub fn midpoint_f64(&self) -> f64 {
        let mid = to_decimal(&(&self.lo + &self.hi), self.prec + 1, 20, false);
        mid.parse().unwrap_or(f64::NAN)
    }

    /// Approximate width, for display only.
    pub fn width_f64(&self) -> f64 {
        to_decimal(&(&self.hi - &self.lo), self.prec, 40, true).parse().unwrap_or(f64::NAN)
    }
}

/// Parses `[-]digits[.digits]` into `num / 10^k`.
pub fn parse_decimal(literal: &str) -> Option<(BigInt, BigInt)> {
    let literal = literal.trim();
    let (neg, body) = match literal.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, literal),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let mut num: BigInt = digits.parse().ok()?;
    if neg {
        num = -num;
    }
    Some((num, BigInt::from(10u32).pow(frac.len() as u32)))
}

/// Enclosure of `atan(1/k)` for an integer `k >= 2` by its alternating series.
fn atan_inv(k: u32, prec: u32) -> Interval {
    let one = pow2(prec);
    let k = BigInt::from(k);
    let k2 = &k * &k;
    let mut power = k.clone();
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut j: u32 = 0;
    loop {
        let den = &power * BigInt::from(2 * j + 1);
        let t_lo = floor_div(&one, &den);
        let t_hi = ceil_div(&one, &den);
        if t_lo.is_zero() {
            // the tail is bounded by this term
            lo -= &t_hi;
            hi += &t_hi;
            break;
        }
        if j.is_multiple_of(2) {
            lo += &t_lo;
            hi += &t_hi;
        } else {
            lo -= &t_hi;
            hi -= &t_lo;
        }
        power *= &k2;
        j += 1;
    }
    Interval { lo, hi, prec }
}

/// Enclosure of π by Machin's formula.
pub fn pi(prec: u32) -> Interval {
    let wp = prec + 16;
    let a = atan_inv(5, wp).mul_int(&BigInt::from(16));
    let b = atan_inv(239, wp).mul_int(&BigInt::from(4));
    a.sub(&b).with_prec(prec)
}

/// Enclosures of `(sin x, cos x)` for `x ⊆ [-2, 2]`.
pub fn sin_cos(x: &Interval) -> (Interval, Interval) {
    let prec = x.prec;
    let bound = BigInt::from(2) << prec;
    assert!(x.hi <= bound && x.lo >= -&bound, "sin_cos argument outside [-2, 2]");
    let wp = prec + 32;
    let x = x.with_prec(wp);
    let x2 = x.mul(&x);
    let unit = BigInt::one();

    let series = |first: Interval, offset: u64| -> Interval {
        // Alternating Taylor series; term ratios are x² / ((2j+offset)(2j+offset+1)).
        let mut term = first.clone();
        let mut sum = first;
        let mut j: u64 = 1;
        loop {
            let d = BigInt::from((2 * j - 1 + offset) * (2 * j + offset));
            term = term.mul(&x2).div_int(&d);
            sum = if j % 2 == 1 { sum.sub(&term) } else { sum.add(&term) };
            let mag = term.lo.abs().max(term.hi.abs());
            if mag <= unit {
                return sum.widen(&mag);
            }
            j += 1;
        }
    };

    let sin = series(x.clone(), 1);
    let cos = series(Interval::from_int(1, wp), 0);
    (sin.with_prec(prec), cos.with_prec(prec))
}
