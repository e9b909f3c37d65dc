//! Seeded multistart search for the extreme sectional curvatures.
//!
//! Horizontal vectors are parametrized by `R⁵ → h`,
//! `(u₀..u₄) ↦ u₀X₁ + u₁Y₁ + u₂X₂ + u₃Y₂ + u₄ν̂`. Random planes are drawn in
//! fixed shards, each with its own ChaCha stream, so the result does not depend
//! on the thread count. The best candidates are then polished by projected
//! gradient steps on the unit sphere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    dot, embedding_spec, norm_sq, oneill_terms, KernelBasis, LieAlgebraFrame,
    Vec7, VerticalSpace, DIM, TORUS, X1, X2, Y1, Y2,
};
use crate::error::Result;
use crate::invariants::BundleParams;

type Coords = [f64; 5];

const SHARDS: u64 = 16;
const CANDIDATES: usize = 8;
const MAX_STEPS: usize = 2000;
const STATIONARY: f64 = 1e-10;
const MIN_STEP: f64 = 1e-14;

fn lift(nu: &[f64; 3], u: &Coords) -> Vec7 {
    let mut v = [0.0; DIM];
    v[X1] = u[0];
    v[Y1] = u[1];
    v[X2] = u[2];
    v[Y2] = u[3];
    for (slot, n) in TORUS.iter().zip(nu) {
        v[*slot] = u[4] * n;
    }
    v
}

fn pull_back(nu: &[f64; 3], g: &Vec7) -> Coords {
    let along: f64 = TORUS.iter().zip(nu).map(|(s, n)| g[*s] * n).sum();
    [g[X1], g[Y1], g[X2], g[Y2], along]
}

fn normalize<const N: usize>(v: [f64; N]) -> Option<[f64; N]> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (n > 0.0 && n.is_finite()).then(|| v.map(|x| x / n))
}

fn tangent<const N: usize>(g: [f64; N], at: &[f64; N]) -> [f64; N] {
    let c: f64 = g.iter().zip(at).map(|(a, b)| a * b).sum();
    std::array::from_fn(|i| g[i] - c * at[i])
}

fn sq<const N: usize>(v: &[f64; N]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

/// A point of the search: unit normal, and two unit coordinate vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Plane {
    nu: [f64; 3],
    u: Coords,
    w: Coords,
}

struct Evaluation {
    sec: f64,
    grad_u: Coords,
    grad_w: Coords,
    grad_nu: [f64; 3],
}

fn evaluate(frame: &LieAlgebraFrame, plane: &Plane) -> Option<Evaluation> {
    let vertical = VerticalSpace { normal: plane.nu };
    let x = lift(&plane.nu, &plane.u);
    let y = lift(&plane.nu, &plane.w);
    let terms = oneill_terms(frame, &vertical, &x, &y);
    let area = terms.area_sq;
    if !(area > 1e-12) {
        return None;
    }
    let numer = terms.bi_invariant + terms.vertical;
    let sec = numer / area;

    // N = ⟨B, M B⟩ with M = ¼ + ¾ P; ad-invariance gives
    // ∇_X N = 2 [Y, M B] and ∇_Y N = 2 [M B, X].
    let b = frame.bracket(&x, &y);
    let pb = vertical.project(&b);
    let mb: Vec7 = std::array::from_fn(|i| 0.25 * b[i] + 0.75 * pb[i]);
    let gx_n = frame.bracket(&y, &mb).map(|v| 2.0 * v);
    let gy_n = frame.bracket(&mb, &x).map(|v| 2.0 * v);
    let (xx, yy, xy) = (norm_sq(&x), norm_sq(&y), dot(&x, &y));
    let gx: Vec7 = std::array::from_fn(|i| {
        (gx_n[i] * area - numer * (2.0 * yy * x[i] - 2.0 * xy * y[i])) / (area * area)
    });
    let gy: Vec7 = std::array::from_fn(|i| {
        (gy_n[i] * area - numer * (2.0 * xx * y[i] - 2.0 * xy * x[i])) / (area * area)
    });

    // Moving ν changes X, Y through their ν̂ component and the projector.
    // The area is constant along the sphere, so only N contributes.
    let bt = TORUS.map(|i| b[i]);
    let bn: f64 = bt.iter().zip(plane.nu).map(|(a, n)| a * n).sum();
    let grad_nu: [f64; 3] = std::array::from_fn(|j| {
        let slot = TORUS[j];
        (plane.u[4] * gx_n[slot] + plane.w[4] * gy_n[slot] - 1.5 * bn * bt[j]) / area
    });

    Some(Evaluation {
        sec,
        grad_u: tangent(pull_back(&plane.nu, &gx), &plane.u),
        grad_w: tangent(pull_back(&plane.nu, &gy), &plane.w),
        grad_nu: tangent(grad_nu, &plane.nu),
    })
}

/// Step-halving gradient ascent (`sign = 1`) or descent (`sign = -1`).
fn polish(frame: &LieAlgebraFrame, start: Plane, sign: f64, move_normal: bool) -> (f64, Plane) {
    let Some(mut cur) = evaluate(frame, &start) else {
        return (f64::NAN, start);
    };
    let mut plane = start;
    let mut step = 0.1;
    for _ in 0..MAX_STEPS {
        let gn = if move_normal { cur.grad_nu } else { [0.0; 3] };
        let size = (sq(&cur.grad_u) + sq(&cur.grad_w) + sq(&gn)).sqrt();
        if size < STATIONARY || step < MIN_STEP {
            break;
        }
        let advance = |v: &[f64], g: &[f64], i: usize| v[i] + sign * step * g[i];
        let trial = (|| {
            Some(Plane {
                u: normalize(std::array::from_fn(|i| advance(&plane.u, &cur.grad_u, i)))?,
                w: normalize(std::array::from_fn(|i| advance(&plane.w, &cur.grad_w, i)))?,
                nu: normalize(std::array::from_fn(|i| advance(&plane.nu, &gn, i)))?,
            })
        })();
        match trial.and_then(|t| evaluate(frame, &t).map(|e| (t, e))) {
            Some((t, e)) if sign * (e.sec - cur.sec) > 0.0 => {
                plane = t;
                cur = e;
                step = (step * 2.0).min(1.0);
            }
            _ => step *= 0.5,
        }
    }
    (cur.sec, plane)
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    sec: f64,
    shard: u64,
    index: u64,
    plane: Plane,
}

fn ranked(mut v: Vec<Candidate>, sign: f64) -> Vec<Candidate> {
    v.sort_by(|a, b| {
        (sign * b.sec)
            .total_cmp(&(sign * a.sec))
            .then(a.shard.cmp(&b.shard))
            .then(a.index.cmp(&b.index))
    });
    v.truncate(CANDIDATES);
    v
}

fn random_unit<const N: usize>(rng: &mut ChaCha8Rng) -> [f64; N] {
    loop {
        let v: [f64; N] = std::array::from_fn(|_| StandardNormal.sample(rng));
        if let Some(u) = normalize(v) {
            return u;
        }
    }
}

/// Draws `samples` planes; `normal_for(shard_rng, index)` supplies ν.
fn sample<F>(samples: u64, seed: u64, normal_for: F) -> (Vec<Candidate>, Vec<Candidate>)
where
    F: Fn(&mut ChaCha8Rng, u64) -> [f64; 3] + Sync,
{
    let frame = LieAlgebraFrame::standard();
    let per_shard = samples.div_ceil(SHARDS);
    let shards: Vec<(Vec<Candidate>, Vec<Candidate>)> = (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let lo = shard * per_shard;
            let hi = ((shard + 1) * per_shard).min(samples);
            let mut all = Vec::new();
            for index in lo..hi {
                let nu = normal_for(&mut rng, index);
                let plane = Plane { nu, u: random_unit(&mut rng), w: random_unit(&mut rng) };
                if let Some(e) = evaluate(&frame, &plane) {
                    all.push(Candidate { sec: e.sec, shard, index, plane });
                    if all.len() >= 4 * CANDIDATES {
                        let top = ranked(all.clone(), 1.0);
                        let bottom = ranked(all, -1.0);
                        all = top.into_iter().chain(bottom).collect();
                    }
                }
            }
            (ranked(all.clone(), 1.0), ranked(all, -1.0))
        })
        .collect();
    let (tops, bottoms): (Vec<_>, Vec<_>) = shards.into_iter().unzip();
    (
        ranked(tops.into_iter().flatten().collect(), 1.0),
        ranked(bottoms.into_iter().flatten().collect(), -1.0),
    )
}

fn refine(candidates: &[Candidate], sign: f64, move_normal: bool) -> (f64, Plane) {
    let frame = LieAlgebraFrame::standard();
    let polished: Vec<(f64, Plane)> = candidates
        .par_iter()
        .map(|c| {
            let (sec, plane) = polish(&frame, c.plane, sign, move_normal);
            // Never report less than the raw sample.
            if sign * (sec - c.sec) >= 0.0 {
                (sec, plane)
            } else {
                (c.sec, c.plane)
            }
        })
        .collect();
    polished
        .into_iter()
        .reduce(|a, b| if sign * (b.0 - a.0) > 0.0 { b } else { a })
        .expect("no candidate planes")
}

fn decimal_plane(plane: &Plane) -> [[String; DIM]; 2] {
    [plane.u, plane.w].map(|c| lift(&plane.nu, &c).map(|x| format!("{:e}", x + 0.0)))
}

/// Supremum estimate of `sec` over every horizontal plane of every kernel plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniversalBound {
    pub value: f64,
    pub samples: u64,
    pub seed: u64,
    pub witness_normal: [String; 3],
    pub witness_plane: [[String; DIM]; 2],
}

/// Normals on a latitude/longitude grid, visited cyclically before random ones.
fn grid_normals() -> Vec<[f64; 3]> {
    use std::f64::consts::PI;
    let mut out = vec![[0.0, 0.0, 1.0]];
    for i in 1..8 {
        let phi = i as f64 * PI / 8.0;
        for j in 0..16 {
            let lam = j as f64 * PI / 8.0;
            out.push([phi.sin() * lam.cos(), phi.sin() * lam.sin(), phi.cos()]);
        }
    }
    out.push([1.0, 0.0, 0.0]);
    out.push([0.0, 1.0, 0.0]);
    out
}

pub fn universal_bound(samples: u64, seed: u64) -> UniversalBound {
    let grid = grid_normals();
    let (top, _) = sample(samples, seed, |rng, index| {
        if index % 2 == 0 {
            grid[(index / 2) as usize % grid.len()]
        } else {
            random_unit(rng)
        }
    });
    let (value, plane) = refine(&top, 1.0, true);
    UniversalBound {
        value,
        samples,
        seed,
        witness_normal: plane.nu.map(|x| format!("{x:e}")),
        witness_plane: decimal_plane(&plane),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub params: BundleParams,
    pub kernel_basis: KernelBasis,
    pub embedding: String,
    pub sec_min_sampled: f64,
    pub sec_max_sampled: f64,
    pub min_plane: [[String; DIM]; 2],
    pub max_plane: [[String; DIM]; 2],
    pub normalization: f64,
    pub samples: u64,
    pub seed: u64,
}

pub fn curvature_report(basis: &KernelBasis, samples: u64, seed: u64) -> Result<CurvatureReport> {
    let bound = universal_bound(samples, seed);
    curvature_report_with_bound(basis, samples, seed, bound.value)
}

/// As [`curvature_report`], reusing an already computed normalization.
pub fn curvature_report_with_bound(
    basis: &KernelBasis,
    samples: u64,
    seed: u64,
    normalization: f64,
) -> Result<CurvatureReport> {
    let params = basis.params()?;
    basis.validate(&params)?;
    let spec = embedding_spec(basis)?;
    let vertical = VerticalSpace::from_basis(basis)?;
    let nu = vertical.normal;
    let (top, bottom) = sample(samples, seed, |_, _| nu);
    let (max, max_plane) = refine(&top, 1.0, false);
    let (min, min_plane) = refine(&bottom, -1.0, false);
    Ok(CurvatureReport {
        params,
        kernel_basis: basis.clone(),
        embedding: spec.description,
        sec_min_sampled: min,
        sec_max_sampled: max,
        min_plane: decimal_plane(&min_plane),
        max_plane: decimal_plane(&max_plane),
        normalization,
        samples,
        seed,
    })
}
