//! Bound states as poles of the S-matrix at imaginary wave number.
//!
//! At `k = iκ` the S-matrix denominator `A e^{−iπν} + B` loses its phase and
//! becomes `D(κ) = ρ κ^{2ν} Γ(1−ν) + 4^ν Γ(1+ν)`, which has a single positive
//! root for `ρ < 0` and none otherwise.

use super::extension::ExtensionSpec;
use crate::channels::{Channel, ChannelClass};
use crate::error::Result;
use crate::geometry::ConeGeometry;
use crate::specfun::gamma;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub m: i64,
    pub j_abs: f64,
    pub kappa: f64,
    /// `E = −κ²/(2M)`.
    pub energy: f64,
    /// `|D(κ)|` at the reported root.
    pub pole_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundStateSearch {
    pub states: Vec<BoundState>,
    /// Why the search returned nothing, when it did.
    pub diagnostic: Option<String>,
}

impl BoundStateSearch {
    fn none(reason: impl Into<String>) -> Self {
        Self {
            states: Vec::new(),
            diagnostic: Some(reason.into()),
        }
    }
}

/// Real reduced S-matrix denominator `D(κ)` at `k = iκ`.
pub fn pole_denominator(nu: f64, rho: f64, kappa: f64) -> Result<f64> {
    Ok(rho * kappa.powf(2.0 * nu) * gamma(1.0 - nu)?.value + 4f64.powf(nu) * gamma(1.0 + nu)?.value)
}

pub fn find_bound_states(channel: &Channel, rho: ExtensionSpec, geom: &ConeGeometry) -> Result<BoundStateSearch> {
    match channel.class() {
        ChannelClass::Unsupported => {
            return Ok(BoundStateSearch::none(format!(
                "channel m = {} is unsupported (J^2 < 0)",
                channel.m()
            )))
        }
        ChannelClass::RegularOnly | ChannelClass::LogDegenerate => {
            return Ok(BoundStateSearch::none(format!(
                "channel m = {} admits no self-adjoint extension",
                channel.m()
            )))
        }
        ChannelClass::ExtensionEligible => {}
    }
    let rho = match rho {
        ExtensionSpec::Zero => return Ok(BoundStateSearch::none("rho = 0: regular boundary condition")),
        ExtensionSpec::Infinite => return Ok(BoundStateSearch::none("rho = inf: pole moves to kappa = 0")),
        ExtensionSpec::Finite(r) if r > 0.0 => {
            return Ok(BoundStateSearch::none("rho > 0: pole condition has no positive root"))
        }
        ExtensionSpec::Finite(r) => r,
    };
    let nu = channel.order()?;
    let g_minus = gamma(1.0 - nu)?.value;
    let b = 4f64.powf(nu) * gamma(1.0 + nu)?.value;
    let kappa = (b / (-rho * g_minus)).powf(1.0 / (2.0 * nu));
    let pole_residual = pole_denominator(nu, rho, kappa)?.abs();
    Ok(BoundStateSearch {
        states: vec![BoundState {
            m: channel.m(),
            j_abs: nu,
            kappa,
            energy: -kappa * kappa / (2.0 * geom.mass()),
            pole_residual,
        }],
        diagnostic: None,
    })
}
