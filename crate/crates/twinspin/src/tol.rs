//! Central numerical tolerances.
//!
//! All validation in the crate goes through these constants so that an
//! experiment can be retried with looser bounds from one place (the CLI
//! exposes `--tolerance` for the algebraic bound).

/// Tolerance for algebraic identities: normalization, hermiticity,
/// unitarity, trace conditions, reconstruction residuals.
pub const ALGEBRAIC: f64 = 1e-10;

/// Tolerance for spectral statements: eigenvalue floors, frame
/// orthonormality, rotation determinants.
pub const SPECTRAL: f64 = 1e-9;

/// Amplitudes and probabilities below this magnitude are treated as
/// exact zeros (clamping of tiny negatives, degenerate relative states).
pub const NEGLIGIBLE: f64 = 1e-12;

/// Runtime-adjustable bundle of the tolerances above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub algebraic: f64,
    pub spectral: f64,
    pub negligible: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            algebraic: ALGEBRAIC,
            spectral: SPECTRAL,
            negligible: NEGLIGIBLE,
        }
    }
}

impl Tolerances {
    /// Bundle with a custom algebraic tolerance, spectral and negligible
    /// bounds kept at their defaults.
    pub fn with_algebraic(algebraic: f64) -> Self {
        Self {
            algebraic,
            ..Self::default()
        }
    }
}
