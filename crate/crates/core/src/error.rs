use thiserror::Error;

use crate::solver::SolveResult;

/// Errors produced by the discrimination toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("2x2 square root is degenerate (tau + 2s = 0)")]
    DegenerateSqrt,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("state {0} is not pure")]
    NotPure(usize),

    #[error("invalid fidelity: {0}")]
    InvalidFidelity(String),

    #[error("fidelity matrix is not realizable by single-qubit states: {0}")]
    NotRealizableInQubit(String),

    #[error("alpha = {0} outside [1/2, 1]")]
    InvalidAlpha(f64),

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("operation requires dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid support set: {0}")]
    InvalidSupport(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("solver did not converge: gap {:e} after {} iterations", .0.gap, .0.iterations)]
    NotConverged(Box<SolveResult>),
}

pub type Result<T> = std::result::Result<T, Error>;
