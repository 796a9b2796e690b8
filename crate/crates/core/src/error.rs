use std::fmt;

use thiserror::Error;

/// Which validity condition of an `(A, B, C)` triple failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleViolation {
    ShapeMismatch,
    DiagonalMismatch { index: usize },
    ANegativeEntry { row: usize, col: usize },
    BNotPsd,
    CNotHermitian,
    ProductBound { row: usize, col: usize },
}

impl fmt::Display for TripleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TripleViolation::ShapeMismatch => write!(f, "A, B, C must all be d x d"),
            TripleViolation::DiagonalMismatch { index } => {
                write!(f, "diagonals of A, B, C differ at index {}", index + 1)
            }
            TripleViolation::ANegativeEntry { row, col } => {
                write!(f, "A is not entrywise non-negative at ({}, {})", row + 1, col + 1)
            }
            TripleViolation::BNotPsd => write!(f, "B is not positive semi-definite"),
            TripleViolation::CNotHermitian => write!(f, "C is not Hermitian"),
            TripleViolation::ProductBound { row, col } => write!(
                f,
                "A_ij A_ji >= |C_ij|^2 fails at ({}, {})",
                row + 1,
                col + 1
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (asymmetry {asymmetry:e} exceeds {allowed:e})")]
    NonHermitian { asymmetry: f64, allowed: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("state is not positive semi-definite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("state has non-positive trace {0:e}")]
    NonPositiveTrace(f64),

    #[error("invalid (A, B, C) triple: {0}")]
    InvalidTriple(TripleViolation),

    #[error("TCP witness has no vector pairs")]
    EmptyWitness,

    #[error("dimension {d} exceeds the supported maximum {max}")]
    DimensionTooLarge { d: usize, max: usize },

    #[error("rectangular detection needs d1 < d2, got {d1} x {d2}")]
    DimensionOrder { d1: usize, d2: usize },

    #[error("cycle length {0} is below 4")]
    CycleTooShort(usize),

    #[error("graph contains a triangle")]
    NotTriangleFree,

    #[error("graph is acyclic: every PSD realization has a PSD comparison matrix")]
    Acyclic,

    #[error("no shift x found with M(B_x) outside the PSD cone")]
    SearchFailed,

    #[error("rejection budget of {0} attempts exceeded")]
    RejectionBudgetExceeded(usize),

    #[error("graph on {n} vertices exceeds the brute-force limit {max}")]
    GraphTooLarge { n: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
