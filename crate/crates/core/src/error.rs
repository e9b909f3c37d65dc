use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

/// Which admissibility hypothesis a modulus violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// `r <= 1`
    TooSmall,
    Even,
    DivisibleByThree,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooSmall => f.write_str("not greater than one"),
            Violation::Even => f.write_str("even"),
            Violation::DivisibleByThree => f.write_str("divisible by 3"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("(p, q) = (0, 0) does not define a member of the family")]
    BothZero,

    #[error("modulus r = {r} is not admissible ({violation})")]
    NotAdmissible { r: BigInt, violation: Violation },

    #[error("invalid smoothing choice: {0}")]
    InvalidSmoothing(String),

    #[error("fundamental groups differ: Z/{left} vs Z/{right}")]
    RankMismatch { left: BigInt, right: BigInt },

    #[error("modulus r = {0} is too large for enumeration")]
    ModulusTooLarge(BigInt),

    #[error("manifolds are not oriented homotopy equivalent")]
    NotEquivalent,

    #[error("manifold is simply connected; rho-invariants are undefined")]
    SimplyConnected,

    #[error("intervals could not be separated at {bits} bits")]
    PrecisionExhausted { bits: u32 },

    #[error("invalid modulus {0}")]
    InvalidModulus(u64),

    #[error("invalid kernel basis: {0}")]
    InvalidKernelBasis(String),

    #[error("kernel vectors are linearly dependent")]
    DegenerateBasis,

    #[error("plane vector is not horizontal (vertical component {residual:e})")]
    NotHorizontal { residual: f64 },

    #[error("plane vectors are linearly dependent")]
    DegeneratePlane,

    #[error("empty range {lo}..{hi}")]
    EmptyRange { lo: i64, hi: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
