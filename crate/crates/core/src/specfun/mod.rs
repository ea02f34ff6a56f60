//! Special functions needed by the closed-form scattering results.

mod bessel;
mod gamma;

pub use bessel::{bessel_j, bessel_jy, bessel_y, BesselPair};
pub use gamma::gamma;
pub(crate) use gamma::sin_pi;

/// A special-function value with an estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    /// Estimate, not a rigorous bound.
    pub est_abs_error: f64,
}

impl SpecFunResult {
    pub(crate) fn new(value: f64, est_abs_error: f64) -> Self {
        Self { value, est_abs_error }
    }
}
