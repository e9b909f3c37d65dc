//! Independent oracles shared by the integration tests and the acceptance run.
//!
//! Everything here uses plain `i64` arithmetic written directly from the
//! congruences, without going through the library's residue types.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Vec7 = [f64; 7];

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn md(x: i64, r: i64) -> i64 {
    x.rem_euclid(r)
}

/// Some `(m, n)` with `m·qb + n·pb = 1`, found by scanning `m`.
pub fn bezout(pb: i64, qb: i64) -> (i64, i64) {
    if pb == 0 {
        return (qb, 0);
    }
    for m in 0..pb.abs() {
        let rest = 1 - m * qb;
        if rest % pb == 0 {
            return (m, rest / pb);
        }
    }
    panic!("({pb}, {qb}) not coprime");
}

/// The three congruence values for one smoothing choice.
pub fn triple(r: i64, pb: i64, qb: i64, m: i64, n: i64, s: i64, eps: i64, k: i64) -> [i64; 3] {
    let a = eps * m + k * pb;
    let b = eps * n - k * qb;
    let (pb, qb, a, b, s) = (md(pb, r), md(qb, r), md(a, r), md(b, r), md(s, r));
    [
        md(s * s % r * s % r * pb % r * qb, r),
        md(s * a % r * b, r),
        md(s * s % r * md(qb * a - pb * b, r), r),
    ]
}

/// Every triple of `(p, q)` over all units `s`, signs and `k`, with its choice.
pub fn all_triples(p: i64, q: i64) -> Vec<([i64; 3], (i64, i64, i64))> {
    let r = gcd(p, q);
    let (pb, qb) = (p / r, q / r);
    let (m, n) = bezout(pb, qb);
    let mut out = Vec::new();
    for s in 1..r {
        if gcd(s, r) != 1 {
            continue;
        }
        for eps in [1, -1] {
            for k in 0..r {
                out.push((triple(r, pb, qb, m, n, s, eps, k), (s, eps, k)));
            }
        }
    }
    out
}

/// Exhaustive search over all `(s, ε, k, s', ε', k')` for a common triple.
pub fn exhaustive_equivalent(a: (i64, i64), b: (i64, i64)) -> bool {
    let left = all_triples(a.0, a.1);
    let right = all_triples(b.0, b.1);
    left.iter().any(|(x, _)| right.iter().any(|(y, _)| x == y))
}

pub fn admissible(r: i64) -> bool {
    r > 1 && r % 2 == 1 && r % 3 != 0
}

/// Random `(p, q)` with `gcd = r`, cofactors in `[-bound, bound]`.
pub fn random_params(rng: &mut ChaCha8Rng, r: i64, bound: i64) -> (i64, i64) {
    loop {
        let a = rng.random_range(-bound..=bound);
        let b = rng.random_range(-bound..=bound);
        if gcd(a, b) == 1 {
            return (r * a, r * b);
        }
    }
}

/// |ρ| oracle values at 45 significant digits, from an independent
/// arbitrary-precision evaluation of `|pq|/(2r²) · cos(θ/2)/sin³(θ/2)`.
pub const RHO_ORACLE: &[(i64, i64, u64, &str)] = &[
    (5, 30, 1, "11.9515117674373453123276061827096178659634386"),
    (5, 30, 2, "1.07766714379100489386066836431406429019010996"),
    (7, 14, 1, "11.0303593731250095080964773874704712531949521"),
    (7, 14, 3, "0.240133837270044311854722739267848521547260168"),
    (11, 22, 4, "0.551931275588118130739343892440290881908328985"),
    (8, 8, 2, "1.0"),
];

pub fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

/// On each `su(2)` factor the bracket is twice the cross product in `(X, Y, Z)`.
pub fn oracle_bracket(x: &Vec7, y: &Vec7) -> Vec7 {
    let a = cross([x[0], x[1], x[2]], [y[0], y[1], y[2]]);
    let b = cross([x[3], x[4], x[5]], [y[3], y[4], y[5]]);
    [2.0 * a[0], 2.0 * a[1], 2.0 * a[2], 2.0 * b[0], 2.0 * b[1], 2.0 * b[2], 0.0]
}

pub fn dot(u: &Vec7, v: &Vec7) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Orthogonal projection onto `span{u, v}` through the 2×2 Gram system.
pub fn oracle_project(w: &Vec7, u: &Vec7, v: &Vec7) -> Vec7 {
    let (g11, g12, g22) = (dot(u, u), dot(u, v), dot(v, v));
    let (b1, b2) = (dot(w, u), dot(w, v));
    let det = g11 * g22 - g12 * g12;
    let c1 = (b1 * g22 - b2 * g12) / det;
    let c2 = (g11 * b2 - g12 * b1) / det;
    std::array::from_fn(|i| c1 * u[i] + c2 * v[i])
}

/// Sectional curvature of the plane `(x, y)` for the vertical span `{u, v}`.
pub fn oracle_sec(x: &Vec7, y: &Vec7, u: &Vec7, v: &Vec7) -> f64 {
    let b = oracle_bracket(x, y);
    let pb = oracle_project(&b, u, v);
    (0.25 * dot(&b, &b) + 0.75 * dot(&pb, &pb)) / (dot(x, x) * dot(y, y) - dot(x, y).powi(2))
}
