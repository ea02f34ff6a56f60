//! Aharonov–Bohm scattering of a spinless charged particle confined to a
//! cone, with the singular origin handled by a one-parameter family of
//! self-adjoint extensions.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: cone metric, curvatures and geometric potential.
//! - [`channels`]: effective angular momentum and channel regularity classes.
//! - [`specfun`]: real-order Bessel functions and the Gamma function.
//! - [`scattering`]: phase shifts, S-matrix, regularised amplitude and
//!   bound-state poles.
//! - [`oracle`]: direct radial integration used to cross-check the closed
//!   forms.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod scattering;
pub mod specfun;

pub use channels::{classify, effective_j_squared, Channel, ChannelClass};
pub use error::{Error, Result};
pub use geometry::ConeGeometry;
pub use scattering::{
    coefficient_ratio, differential_cross_section, find_bound_states, phase_shift, s_matrix_element,
    scattering_amplitude, AmplitudeResult, BoundState, ExtensionMap, ExtensionSpec, PhaseShift, RegularizationConfig,
    SMatrixElement,
};
