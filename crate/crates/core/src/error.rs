use thiserror::Error;

/// Errors raised by the scattering library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Cone parameter above one (anti-cone geometry is not modelled).
    #[error("anti-cone geometry (alpha = {0}) is not supported")]
    AntiCone(f64),

    /// A result would overflow the floating point range.
    #[error("range error: {0}")]
    Range(String),

    /// A channel with negative effective angular momentum squared.
    #[error("unsupported channel m = {m}: effective angular momentum squared {j_squared} < 0")]
    UnsupportedChannel { m: i64, j_squared: f64 },

    /// The coefficient ratio denominator vanishes.
    #[error("pole in coefficient ratio for m = {m} at k = {k}")]
    Pole { m: i64, k: f64 },

    /// The amplitude is singular in the forward direction.
    #[error("scattering amplitude is singular at theta = 0")]
    ForwardSingularity,

    /// Abel extrapolation did not settle within tolerance. Carries the partial result.
    #[error("amplitude extrapolation did not converge: spread {spread:e} > tolerance {tolerance:e}")]
    NotConverged {
        spread: f64,
        tolerance: f64,
        partial: Box<crate::scattering::AmplitudeResult>,
    },

    /// Iterative kernel exhausted its iteration budget.
    #[error("iteration limit reached in {0}")]
    IterationLimit(&'static str),

    /// Radial integration or phase fit failed.
    #[error("radial integration failed: {0}")]
    Integration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
