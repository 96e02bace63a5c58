//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("the zero matrix cannot be reduced")]
    ZeroMatrix,

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("operation requires degree {expected}, equation has degree {got}")]
    WrongDegree { expected: u32, got: u32 },

    #[error("degree {got} exceeds the supported maximum {max}")]
    DegreeTooHigh { max: u32, got: u32 },

    #[error("leading minor {index} is zero before the rank is exhausted")]
    ZeroMinor { index: usize },

    #[error("leading minor {index} is not a unit")]
    MinorNotUnit { index: usize },

    #[error("translation component {index} is not an integer")]
    NonIntegerTranslation { index: usize },

    #[error("{count} variables survive only linearly; cannot reduce to a single linear term")]
    DegenerateLinearPart { count: usize },

    #[error("the supplied transform does not diagonalize the equation")]
    NotDiagonalized,

    #[error("expected a homogeneous binary form, got {reason}")]
    NotBinaryForm { reason: String },

    #[error("equation is not in diagonal form")]
    NotDiagonal,

    #[error("equation shape is not covered by the estimator: {reason}")]
    UnsupportedShape { reason: String },

    #[error("signature contains {zeros} zero coefficients; a full-rank normal form is required")]
    SignatureHasZeros { zeros: usize },

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("grid must be strictly increasing with at least {needed} entries")]
    InvalidGrid { needed: usize },

    #[error("enumeration volume {volume} exceeds the ceiling {ceiling}")]
    EnumerationTooLarge { volume: String, ceiling: u128 },

    #[error("cannot fit an exponent: only {nonzero} grid points have a nonzero count")]
    NoFit { nonzero: usize },

    #[error("io error: {0}")]
    Io(String),

    #[error("{0}")]
    Unsupported(String),
}
