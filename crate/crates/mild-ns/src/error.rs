//! Crate-wide error type and exit-code mapping for the batch front end.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid error: {0}")]
    Grid(String),

    #[error("rank error: expected rank {expected}, got {got}")]
    Rank { expected: usize, got: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("non-finite sample encountered: {0}")]
    NonFinite(String),

    #[error("unsupported initial-data spec: {0}")]
    UnsupportedSpec(String),

    #[error("time lattice mismatch: {0}")]
    LatticeMismatch(String),

    #[error("time {0} outside trajectory range")]
    Range(f64),

    #[error("subcriticality violated: r = {r} must exceed n = {n}")]
    Subcritical { n: usize, r: f64 },

    #[error("divergent integral: n/r = {0} >= 1")]
    DivergentIntegral(f64),

    #[error("no contraction: g0 = {0} >= 1/4")]
    NoContraction(f64),

    #[error(
        "cannot extend: restart criterion fails, threshold {threshold}, weak norm {weak_norm}"
    )]
    CannotExtend { threshold: f64, weak_norm: f64 },

    #[error("convergence failure: {0}")]
    Convergence(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for validation problems, 3 for
    /// numeric-convergence failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Convergence(_) | Error::NoContraction(_) | Error::CannotExtend { .. } => 3,
            _ => 2,
        }
    }
}
