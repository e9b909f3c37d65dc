//! Homotopy classification, ρ-invariant certificates and curvature checks for
//! the circle bundles `L^{p,q}` over `S² × S²`.

pub mod arith;
pub(crate) mod bigint_serde;
pub mod classify;
pub mod cli;
pub mod error;
pub mod homogeneous;
pub mod homotopy;
pub mod interval;
pub mod invariants;
pub mod report;
pub mod rho;

pub use error::{Error, Result};
pub use invariants::BundleParams;
