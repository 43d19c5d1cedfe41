use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid Thoma point: {0}")]
    InvalidPoint(String),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("level mismatch: {0}")]
    LevelMismatch(String),

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("gamma argument at or adjacent to a pole: {0}")]
    PoleAdjacent(String),

    #[error("boundary point outside the supported stratum: {0}")]
    UnsupportedBoundaryPoint(String),

    #[error("tail budget unachievable: needed {required:e}, best bound {achieved:e} at cutoff {cutoff}")]
    TailBudgetExceeded {
        required: f64,
        achieved: f64,
        cutoff: usize,
    },

    #[error("exact evaluation unavailable: {0}")]
    ExactUnavailable(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),
}

pub type Result<T> = std::result::Result<T, Error>;
