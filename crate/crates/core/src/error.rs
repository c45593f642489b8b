use thiserror::Error;

use crate::ket::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state has zero norm")]
    ZeroState,

    #[error("invalid dimensions: {0}")]
    InvalidDims(String),

    #[error("amplitude count {got} does not match total dimension {expected}")]
    AmplitudeCount { expected: usize, got: usize },

    #[error("invalid bipartite split: {0}")]
    InvalidSplit(String),

    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),

    #[error("unknown state name `{0}`")]
    UnknownName(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("{solver} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("partial contraction for subsystem {subsystem} vanished")]
    ZeroContraction { subsystem: usize },

    #[error("no restart converged out of {restarts} (best gamma {best_gamma})")]
    NoRestartConverged { restarts: usize, best_gamma: f64 },

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("state file: {0}")]
    StateFile(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
