use thiserror::Error;

/// Errors produced by graph ingestion, pattern parsing and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: duplicate edge {u}-{v} with conflicting weights {first} and {second}")]
    DuplicateEdge {
        line: usize,
        u: usize,
        v: usize,
        first: f64,
        second: f64,
    },

    #[error("self-loop on vertex {vertex} is not allowed")]
    SelfLoop { vertex: usize },

    #[error("line {line}: weight {value} is not finite")]
    BadWeight { line: usize, value: f64 },

    #[error("shape error: {0}")]
    ShapeError(String),

    #[error("matrix is not symmetric: |A[{i}][{j}] - A[{j}][{i}]| = {delta:e} exceeds 1e-12")]
    NotSymmetric { i: usize, j: usize, delta: f64 },

    #[error("nonzero diagonal entry A[{i}][{i}] = {value}")]
    NonzeroDiagonal { i: usize, value: f64 },

    #[error("malformed input at line {line}: {msg}")]
    Malformed { line: usize, msg: String },

    #[error("unknown pattern {0:?}")]
    UnknownPattern(String),

    #[error("unsupported pattern size m = {0} (supported: 2..=8)")]
    UnsupportedSize(usize),

    #[error("problem too large for brute force: n = {n} (cap {max_n}), m = {m} (cap {max_m})")]
    TooLarge {
        n: usize,
        max_n: usize,
        m: usize,
        max_m: usize,
    },

    #[error("empty contraction plan")]
    EmptyPlan,

    #[error("bench configuration error: {0}")]
    ConfigError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
