//! Crate-wide error type.

use num_complex::Complex64;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("non-finite entry encountered")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric (max asymmetry {deviation:e})")]
    NotSymmetric { deviation: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("determinant must be 1, got {det}")]
    DetNotOne { det: f64 },
    #[error("matrix is not orthogonal (deviation {deviation:e})")]
    NotOrthogonal { deviation: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("vector must be nonzero to generate a cyclic span")]
    NotCyclic,
    #[error("span search exhausted its candidate pool at rank {achieved} of {needed}")]
    SpanSearchExhausted { achieved: usize, needed: usize },
    #[error("translate expansion certification failed: residual {residual:e} at tolerance {tolerance:e}")]
    CertificationFailed { residual: f64, tolerance: f64 },
    #[error("phase profile is degenerate: no nonzero-weight term above the coefficient cutoff")]
    DegenerateProfile,
    #[error("no derivative threshold found below cap {cap}")]
    NoThreshold { cap: f64 },
    #[error("weight basis action is not diagonal in the chosen basis (off-diagonal mass {deviation:e})")]
    NonDiagonalAction { deviation: f64 },
    #[error("no generic direction found after {attempts} perturbation attempts")]
    NoGenericDirection { attempts: usize },
    #[error("quadrature could not reach tolerance within the panel budget: achieved bound {error_bound:e}")]
    TooOscillatory { value: Complex64, error_bound: f64 },
    #[error("derivative-bound certificate violated: modulus {modulus} exceeds {bound} + quadrature error {quadrature_error:e}")]
    CertificateViolation {
        modulus: f64,
        bound: f64,
        quadrature_error: f64,
    },
    #[error("generator is not nilpotent within {dim} powers")]
    NotNilpotent { dim: usize },
    #[error("lattice basis is singular or ill-conditioned (condition {condition:e})")]
    SingularLattice { condition: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
