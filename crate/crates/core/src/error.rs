use thiserror::Error;

use crate::HalfInt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("symplectic irreps only occur at half-integral spin, got j = {0}")]
    UnsupportedSpin(HalfInt),

    #[error("distance {d} needs ranks beyond 2j = {twice_j}")]
    RankOverflow { d: u32, twice_j: i64 },

    #[error("irrep delta_{a} of BD_{two_b} is not a middle irrep (need 1 < a < b)")]
    NotMiddleIrrep { two_b: u32, a: u32 },

    #[error("spin {j} is too small, need at least {min}")]
    InsufficientSpin { j: HalfInt, min: HalfInt },

    #[error("support lattice is empty, no degrees of freedom")]
    NoDegreesOfFreedom,

    #[error("no solution below tolerance after {restarts} restarts (best residual {best_residual:e})")]
    NotFound { restarts: usize, best_residual: f64 },

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error("resource guard: {0}")]
    ResourceLimit(String),

    #[error("codespace not preserved, leakage {leakage:e}")]
    NotTransversal { leakage: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
