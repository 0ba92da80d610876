use std::io;

use thiserror::Error;

/// Errors produced anywhere in the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(
        "configuration model gave no simple connected {d}-regular graph on {n} vertices after {restarts} restarts"
    )]
    RestartCapExceeded { n: usize, d: usize, restarts: usize },
    #[error("degenerate point set: {0}")]
    DegenerateInput(String),
    #[error("duplicate points at indices {0} and {1}")]
    DuplicatePoint(usize, usize),
    #[error("matrix entry ({0}, {1}) is not finite")]
    NonFinite(usize, usize),
    #[error("eigenvalue {index} did not converge within {cap} QL sweeps")]
    NoConvergence { index: usize, cap: usize },
    #[error("not enough data: {0}")]
    InsufficientData(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
