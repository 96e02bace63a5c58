//! Exact-arithmetic toolkit for integer Diophantine equations.
//!
//! The crate reduces integer-coefficient algebraic equations to diagonal
//! form through rational affine changes of variables (completion of squares
//! or powers, center translation, denominator-clearing deformation) and
//! checks, by exact brute-force counting, that the reduction does not change
//! the growth exponent of the integer-solution count in hypercubes
//! `[-N, N]^k`.
//!
//! Everything algebraic runs on arbitrary-precision rationals; floating
//! point appears only in the final log-log exponent fits.

pub mod classify;
pub mod count;
pub mod diagonalize;
pub mod error;
pub mod fit;
pub mod matrix;
pub mod parser;
pub mod poly;
pub mod rat;
pub mod transform;

pub use classify::{
    fermat_bound_check, lower_bound_count, normal_form_case, predicted_exponent, signature,
    surface_class, surface_of_diagonal, ExponentPrediction, FermatVerdict, FormulaId, Signature,
    Surface, DEFAULT_FERMAT_CONSTANT,
};
pub use count::{
    count_hypercube, count_in_pullback, count_pullback, image_vertices, image_volume,
    is_signed_permutation, is_unimodular, CountConfig, CountRegion, CountResult, ImageVolume,
    DEFAULT_CEILING,
};
pub use diagonalize::{
    binary_form_complete_power, complete_center, denominator_clearing, diagonalize,
    diagonalize_quadratic, integerize, integerize_higher, jacobi_canonical, lagrange_matrix_3,
    lagrange_reduce, lagrange_reduce_steps, CenterResidual, DiagonalizationReport,
};
pub use error::Error;
pub use fit::{
    fit_exponent, fit_samples, verify_preservation, ExponentFit, PreservationOutcome, Verdict,
    DEFAULT_RSQ_MIN,
};
pub use matrix::{RatMatrix, SymmetricMatrix};
pub use parser::{
    format_equation, format_polynomial, load_corpus, load_equation_file, parse_equation, Equation,
};
pub use poly::{Monomial, Polynomial};
pub use rat::Rat;
pub use transform::{compose, AffineTransform, StepLabel, TransformChain};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
