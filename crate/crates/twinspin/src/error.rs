//! Crate-wide error type.

/// Errors produced by constructors and operations across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry (NaN or infinity) in {0}")]
    NonFinite(&'static str),

    #[error("state vector is not normalized: ‖v‖ = {norm}")]
    NotNormalized { norm: f64 },

    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("operator is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("trace is {trace:.12} instead of 1")]
    NotUnitTrace { trace: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("invalid projective measurement: {0}")]
    InvalidMeasurement(String),

    #[error("conditioning on an event of probability {probability:.3e}")]
    ZeroProbabilityCondition { probability: f64 },

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("direction is not a unit vector: ‖v‖ = {norm}")]
    InvalidDirection { norm: f64 },

    #[error("direction {w:?} is not an axis of the frame")]
    NotAFrameAxis { w: [f64; 3] },

    #[error("triple {triple:?} is not mutually orthogonal (|dot| = {dot:.3e})")]
    NonOrthogonalTriple { triple: [usize; 3], dot: f64 },

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("angle {phi} outside [0, 2π)")]
    PhiOutOfRange { phi: f64 },

    #[error("subsystem selection is invalid: {0}")]
    InvalidSubsystem(String),

    #[error("register dimension {requested} exceeds the configured limit {limit}")]
    DimensionLimitExceeded { requested: usize, limit: usize },

    #[error("trial count must be at least 1")]
    NoTrials,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
