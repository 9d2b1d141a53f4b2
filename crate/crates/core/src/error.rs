use thiserror::Error;

use crate::fock::Statistics;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0}")]
    InvalidSystem(String),

    #[error("mode index {mode} out of range 1..={n_modes}")]
    ModeOutOfRange { mode: usize, n_modes: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires {expected} statistics")]
    WrongStatistics { expected: Statistics },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error(
        "max index {max_index} too large for cutoff {cutoff}: basis construction reaches \
         occupation {reach} per mode, but at most cutoff - 2 = {limit} stays clear of the \
         truncation edge"
    )]
    TruncationMargin {
        max_index: usize,
        cutoff: usize,
        reach: usize,
        limit: isize,
    },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error(
        "generator is not quadratic in the adjoint maps (reconstruction residual {residual:e})"
    )]
    NonQuadratic { residual: f64 },

    #[error("degenerate steady state: null space of dimension {null_dim}")]
    Degenerate { null_dim: usize },

    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
