use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("truncation half-width must be at least 1, got {0}")]
    InvalidTruncation(usize),

    #[error("empty interior: depth {depth} exceeds n_max {n_max}")]
    EmptyInterior { depth: usize, n_max: usize },

    #[error("residual requested over an empty mask")]
    EmptyMask,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid spin offset {0:?}: expected 0 or 1/2")]
    InvalidOffset(String),

    #[error("inconsistent Dirac parameters: {0}")]
    InconsistentDirac(String),

    #[error("degenerate tau: tau1* tau2 - tau1 tau2* = 0, the Hochschild prefactor is undefined")]
    DegenerateTau,

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("empty sample window")]
    EmptySampleWindow,

    #[error("growth trend needs at least two truncations, got {0}")]
    TooFewTruncations(usize),
}
