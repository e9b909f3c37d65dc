//! `L^{p,q}` as the homogeneous space `SU(2)×SU(2)×U(1) / T²` and the
//! O'Neill curvature of its submersion metric.
//!
//! The Lie algebra `su(2) ⊕ su(2) ⊕ u(1)` carries the orthonormal frame
//! `X₁, Y₁, Z₁, X₂, Y₂, Z₂, W` with `[Xᵢ, Yᵢ] = 2Zᵢ` and cyclic, so each
//! `SU(2)` factor is a unit round `S³` and `W` generates a unit circle. The
//! torus `T²` embeds through a basis `{a, b}` of the kernel of
//! `(p, q, 1): Z³ → Z`; its Lie algebra is spanned by `ι(a) = a₁Z₁ + a₂Z₂ + a₃W`
//! and `ι(b)`. The metric is homogeneous, so curvature is evaluated at the
//! identity coset only.

mod optimize;

pub use optimize::{
    curvature_report, curvature_report_with_bound, universal_bound, CurvatureReport,
    UniversalBound,
};

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::BundleParams;

pub const DIM: usize = 7;
pub type Vec7 = [f64; DIM];

pub const X1: usize = 0;
pub const Y1: usize = 1;
pub const Z1: usize = 2;
pub const X2: usize = 3;
pub const Y2: usize = 4;
pub const Z2: usize = 5;
pub const W: usize = 6;

/// Frame indices of the maximal torus directions `Z₁, Z₂, W`.
pub const TORUS: [usize; 3] = [Z1, Z2, W];

pub const LABELS: [&str; DIM] = ["X1", "Y1", "Z1", "X2", "Y2", "Z2", "W"];

pub fn dot(u: &Vec7, v: &Vec7) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn norm_sq(u: &Vec7) -> f64 {
    u.iter().map(|a| a * a).sum()
}

/// Structure constants of the frame: `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraFrame {
    pub constants: [[[i8; DIM]; DIM]; DIM],
    nonzero: Vec<(usize, usize, usize, f64)>,
}

impl LieAlgebraFrame {
    pub fn standard() -> Self {
        let mut c = [[[0i8; DIM]; DIM]; DIM];
        for (x, y, z) in [(X1, Y1, Z1), (X2, Y2, Z2)] {
            for (i, j, k) in [(x, y, z), (y, z, x), (z, x, y)] {
                c[i][j][k] = 2;
                c[j][i][k] = -2;
            }
        }
        let mut nonzero = Vec::new();
        for (i, ci) in c.iter().enumerate() {
            for (j, cij) in ci.iter().enumerate() {
                for (k, &v) in cij.iter().enumerate() {
                    if v != 0 {
                        nonzero.push((i, j, k, v as f64));
                    }
                }
            }
        }
        LieAlgebraFrame { constants: c, nonzero }
    }

    pub fn bracket(&self, u: &Vec7, v: &Vec7) -> Vec7 {
        let mut out = [0.0; DIM];
        for &(i, j, k, c) in &self.nonzero {
            out[k] += c * u[i] * v[j];
        }
        out
    }

    pub fn is_antisymmetric(&self) -> bool {
        let c = &self.constants;
        (0..DIM).all(|i| (0..DIM).all(|j| (0..DIM).all(|k| c[i][j][k] == -c[j][i][k])))
    }

    /// Jacobi identity on basis triples, in exact integer arithmetic.
    pub fn satisfies_jacobi(&self) -> bool {
        let c = &self.constants;
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    for l in 0..DIM {
                        let mut total = 0i32;
                        for (a, b, cc) in [(i, j, k), (j, k, i), (k, i, j)] {
                            for m in 0..DIM {
                                total += c[a][b][m] as i32 * c[m][cc][l] as i32;
                            }
                        }
                        if total != 0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `⟨[e_i, e_j], e_k⟩ = −⟨e_j, [e_i, e_k]⟩` for the orthonormal frame,
    /// i.e. the metric is ad-invariant.
    pub fn is_ad_skew(&self) -> bool {
        let c = &self.constants;
        (0..DIM).all(|i| (0..DIM).all(|j| (0..DIM).all(|k| c[i][j][k] == -c[i][k][j])))
    }
}

impl Default for LieAlgebraFrame {
    fn default() -> Self {
        Self::standard()
    }
}

/// Integer basis `{a, b}` of `ker (p, q, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelBasis {
    #[serde(with = "crate::bigint_serde::array3")]
    pub a: [BigInt; 3],
    #[serde(with = "crate::bigint_serde::array3")]
    pub b: [BigInt; 3],
}

/// `(d, e, f)` with `dp + eq + f = 1` and `det [a; b; (d, e, f)]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnimodularityCertificate {
    #[serde(with = "crate::bigint_serde::array3")]
    pub section: [BigInt; 3],
    #[serde(with = "crate::bigint_serde")]
    pub determinant: BigInt,
}

fn cross(a: &[BigInt; 3], b: &[BigInt; 3]) -> [BigInt; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot3(a: &[BigInt; 3], b: &[BigInt; 3]) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

impl KernelBasis {
    pub fn new(a: [i64; 3], b: [i64; 3]) -> Self {
        KernelBasis { a: a.map(BigInt::from), b: b.map(BigInt::from) }
    }

    /// Checks both kernel relations and unimodularity against `params`.
    pub fn validate(&self, params: &BundleParams) -> Result<UnimodularityCertificate> {
        let form = [params.p().clone(), params.q().clone(), BigInt::one()];
        for (name, v) in [("a", &self.a), ("b", &self.b)] {
            if !dot3(&form, v).is_zero() {
                return Err(Error::InvalidKernelBasis(format!(
                    "p·{name}₁ + q·{name}₂ + {name}₃ ≠ 0"
                )));
            }
        }
        let section = [BigInt::zero(), BigInt::zero(), BigInt::one()];
        let determinant = dot3(&section, &cross(&self.a, &self.b));
        if determinant.abs() != BigInt::one() {
            return Err(Error::InvalidKernelBasis(format!(
                "determinant {determinant} is not ±1"
            )));
        }
        Ok(UnimodularityCertificate { section, determinant })
    }

    /// The normal `a × b` of the vertical plane inside the torus algebra.
    pub fn normal(&self) -> [BigInt; 3] {
        cross(&self.a, &self.b)
    }

    /// Recovers `(p, q)` from `a × b = ±(p, q, 1)`.
    pub fn params(&self) -> Result<BundleParams> {
        let n = self.normal();
        if n[2].abs() != BigInt::one() {
            return Err(Error::InvalidKernelBasis(
                "a × b is not a primitive multiple of (p, q, 1)".into(),
            ));
        }
        let sign = n[2].clone();
        BundleParams::new(&n[0] * &sign, &n[1] * &sign)
    }
}

/// Canonical basis `a = (1, 0, −p)`, `b = (0, 1, −q)`.
pub fn kernel_basis(params: &BundleParams) -> KernelBasis {
    KernelBasis {
        a: [BigInt::one(), BigInt::zero(), -params.p().clone()],
        b: [BigInt::zero(), BigInt::one(), -params.q().clone()],
    }
}

/// Embeds an integer torus vector `(c₁, c₂, c₃)` as `c₁Z₁ + c₂Z₂ + c₃W`.
pub fn iota(c: &[BigInt; 3]) -> Vec7 {
    let mut v = [0.0; DIM];
    for (slot, x) in TORUS.iter().zip(c) {
        v[*slot] = x.to_f64().unwrap_or(f64::NAN);
    }
    v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingSpec {
    pub basis: KernelBasis,
    /// `ι(a)` and `ι(b)`.
    pub vertical: [Vec7; 2],
    pub description: String,
}

fn exponent_pair(x: &BigInt, y: &BigInt) -> String {
    format!("z₁^{x} z₂^{y}")
}

/// The torus homomorphism `i_{a,b}` and its differential.
pub fn embedding_spec(basis: &KernelBasis) -> Result<EmbeddingSpec> {
    if basis.normal().iter().all(Zero::is_zero) {
        return Err(Error::DegenerateBasis);
    }
    let (a, b) = (&basis.a, &basis.b);
    let description = format!(
        "(z₁, z₂) ↦ (diag({e1}, conj), diag({e2}, conj), {e3}); d i(t) spans ι(a) = {a0}·Z1 + {a1}·Z2 + {a2}·W, ι(b) = {b0}·Z1 + {b1}·Z2 + {b2}·W",
        e1 = exponent_pair(&a[0], &b[0]),
        e2 = exponent_pair(&a[1], &b[1]),
        e3 = exponent_pair(&a[2], &b[2]),
        a0 = a[0],
        a1 = a[1],
        a2 = a[2],
        b0 = b[0],
        b1 = b[1],
        b2 = b[2],
    );
    Ok(EmbeddingSpec { basis: basis.clone(), vertical: [iota(a), iota(b)], description })
}

/// The vertical plane `ν^⊥ ∩ span{Z₁, Z₂, W}`, stored by its unit normal `ν`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalSpace {
    pub normal: [f64; 3],
}

impl VerticalSpace {
    pub fn from_normal(normal: [f64; 3]) -> Option<Self> {
        let n = normal.iter().map(|x| x * x).sum::<f64>().sqrt();
        (n > 0.0 && n.is_finite()).then(|| VerticalSpace { normal: normal.map(|x| x / n) })
    }

    pub fn from_basis(basis: &KernelBasis) -> Result<Self> {
        let n = basis.normal();
        let scale = n.iter().map(|x| x.abs()).max().unwrap();
        if scale.is_zero() {
            return Err(Error::DegenerateBasis);
        }
        let comps = n.map(|x| BigRational::new(x, scale.clone()).to_f64().unwrap_or(0.0));
        VerticalSpace::from_normal(comps).ok_or(Error::DegenerateBasis)
    }

    /// `ν̂ = ν₁Z₁ + ν₂Z₂ + ν₃W`, the torus direction that is horizontal.
    pub fn normal_vector(&self) -> Vec7 {
        let mut v = [0.0; DIM];
        for (slot, x) in TORUS.iter().zip(self.normal) {
            v[*slot] = x;
        }
        v
    }

    /// Orthogonal projection onto the vertical plane.
    pub fn project(&self, w: &Vec7) -> Vec7 {
        let t = TORUS.map(|i| w[i]);
        let c: f64 = t.iter().zip(self.normal).map(|(a, b)| a * b).sum();
        let mut out = [0.0; DIM];
        for (k, slot) in TORUS.iter().enumerate() {
            out[*slot] = t[k] - c * self.normal[k];
        }
        out
    }
}

/// The two nonnegative O'Neill terms and the Gram determinant of the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneillTerms {
    /// `¼ |[X, Y]|²`
    pub bi_invariant: f64,
    /// `¾ |P_v [X, Y]|²`
    pub vertical: f64,
    /// `|X|²|Y|² − ⟨X, Y⟩²`
    pub area_sq: f64,
}

impl OneillTerms {
    pub fn sec(&self) -> f64 {
        (self.bi_invariant + self.vertical) / self.area_sq
    }
}

pub fn oneill_terms(
    frame: &LieAlgebraFrame,
    vertical: &VerticalSpace,
    x: &Vec7,
    y: &Vec7,
) -> OneillTerms {
    let b = frame.bracket(x, y);
    let pb = vertical.project(&b);
    let xy = dot(x, y);
    OneillTerms {
        bi_invariant: 0.25 * norm_sq(&b),
        vertical: 0.75 * norm_sq(&pb),
        area_sq: norm_sq(x) * norm_sq(y) - xy * xy,
    }
}

const HORIZONTAL_TOL: f64 = 1e-9;
const DEGENERATE_TOL: f64 = 1e-12;

/// Sectional curvature of the quotient on the horizontal plane spanned by `plane`.
pub fn oneill_sec(basis: &KernelBasis, plane: (&Vec7, &Vec7)) -> Result<f64> {
    let vertical = VerticalSpace::from_basis(basis)?;
    let frame = LieAlgebraFrame::standard();
    let (x, y) = plane;
    for v in [x, y] {
        let residual = norm_sq(&vertical.project(v)).sqrt();
        if residual > HORIZONTAL_TOL * norm_sq(v).sqrt().max(1.0) {
            return Err(Error::NotHorizontal { residual });
        }
    }
    let terms = oneill_terms(&frame, &vertical, x, y);
    if terms.area_sq <= DEGENERATE_TOL * norm_sq(x) * norm_sq(y) {
        return Err(Error::DegeneratePlane);
    }
    Ok(terms.sec())
}

/// Diameter of `SU(2)×SU(2)×U(1)` with the product of unit round metrics:
/// each factor has diameter π and the product diameter is `π√3`.
pub fn diameter_bound() -> f64 {
    PI * 3f64.sqrt()
}
