use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid site pair ({n1}, {n2}) on a ring of {n_sites} sites")]
    InvalidPair {
        n1: usize,
        n2: usize,
        n_sites: usize,
    },

    #[error("site {site} out of range for a ring of {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires the {expected} sector")]
    WrongSector { expected: &'static str },

    #[error("diagonalization failed in momentum block {block}")]
    Diagonalization { block: usize },

    #[error(
        "Chebyshev expansion did not reach tolerance {tolerance:e} within degree cap {cap} \
         (tail {tail:e})"
    )]
    ChebyshevNonConvergence {
        cap: usize,
        tolerance: f64,
        tail: f64,
    },

    #[error("basis overflow at period {period}: edge population {edge:e}")]
    BasisOverflow { period: usize, edge: f64 },

    #[error("insufficient dynamic range: {0}")]
    InsufficientRange(String),

    #[error("Bethe root for (lambda1, lambda2) = ({lambda1}, {lambda2}) did not converge")]
    RootNotConverged { lambda1: usize, lambda2: usize },

    #[error("line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("desk-scale cap exceeded: {0} (set override_caps to run anyway)")]
    CapExceeded(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
