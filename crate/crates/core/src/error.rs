use thiserror::Error;

/// Unified error type for every fallible operation in the crate.
///
/// Numeric payloads are carried as `f64` regardless of the scalar the
/// computation ran in, so the error type stays object-safe and printable.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid event handle for this theory: {0}")]
    InvalidEvent(String),

    #[error("events are not pairwise orthogonal: {0}")]
    NotOrthogonal(String),

    #[error(
        "cannot condition on an event of probability {probability:e} (cut-off {tolerance:e})"
    )]
    ZeroProbabilityConditioning { probability: f64, tolerance: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("numeric invariant violated: {0}")]
    InvariantViolation(String),

    #[error("spectral decomposition failed: {0}")]
    SpectralFailure(String),

    #[error("sampler produced no valid draw after {attempts} attempts")]
    SamplerExhausted { attempts: u32 },

    #[error(
        "zero threshold {zero:e} must be strictly below the significance threshold {significance:e}"
    )]
    ContradictoryThresholds { zero: f64, significance: f64 },

    #[error("invalid slit geometry: {0}")]
    InvalidGeometry(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
