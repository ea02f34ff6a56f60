//! Closed-form scattering observables for the cone with an Aharonov–Bohm
//! flux line.
//!
//! For an extension-eligible channel (`0 < |J| < 1`) the boundary condition
//! at the apex mixes the regular and irregular Bessel solutions. With
//! `ν = |J|`, the two quantities
//!
//! ```text
//! A = ρ k^{2ν} Γ(1−ν)        B = 4^ν Γ(1+ν)
//! ```
//!
//! fix everything: the coefficient ratio `b/a = −A sin(νπ) / (B + A cos(νπ))`,
//! the extension phase `Θ = arctan[A sin(νπ) / (B + A cos(νπ))]` and the
//! S-matrix element `S = e^{2iΔ} (A e^{iπν} + B) / (A e^{−iπν} + B)` with
//! `Δ = (π/2)(|m| − ν)`.

mod amplitude;
mod bound;
mod extension;
mod smatrix;

pub use amplitude::{differential_cross_section, scattering_amplitude, AmplitudeResult, RegularizationConfig};
pub use bound::{find_bound_states, pole_denominator, BoundState, BoundStateSearch};
pub use extension::{ExtensionMap, ExtensionSpec};
pub use smatrix::{coefficient_ratio, phase_shift, s_matrix_element, PhaseShift, SMatrixElement};
