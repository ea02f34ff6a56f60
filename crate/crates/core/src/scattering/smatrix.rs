use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::extension::ExtensionSpec;
use crate::channels::{Channel, ChannelClass};
use crate::error::{Error, Result};
use crate::specfun::{gamma, sin_pi};

/// Phase shift `δ = Δ + Θ` of one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShift {
    /// `Δ = (π/2)(|m| − |J|)`.
    pub delta_ab: f64,
    /// Extension contribution, principal branch in `(−π/2, π/2]`.
    pub theta_rho: f64,
    pub total: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMatrixElement {
    pub value: Complex64,
    pub channel: Channel,
    pub k: f64,
}

/// `A = ρ k^{2ν} Γ(1−ν)` and `B = 4^ν Γ(1+ν)` for a finite extension.
pub(crate) fn extension_weights(nu: f64, rho: f64, k: f64) -> Result<(f64, f64)> {
    let a = rho * k.powf(2.0 * nu) * gamma(1.0 - nu)?.value;
    let b = 4f64.powf(nu) * gamma(1.0 + nu)?.value;
    if !a.is_finite() {
        return Err(Error::Range(format!(
            "extension weight overflows for rho = {rho}, k = {k}"
        )));
    }
    Ok((a, b))
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("wave number must be positive, got {k}")))
    }
}

fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

/// Ratio `b/a` of irregular to regular coefficients.
///
/// Zero for `ρ = 0` and for channels where the extension does not apply.
/// The `ρ → ∞` limit `−tan(νπ)` is returned in closed form and is a pole at
/// `ν = 1/2`.
pub fn coefficient_ratio(channel: &Channel, rho: ExtensionSpec, k: f64) -> Result<f64> {
    check_k(k)?;
    let nu = channel.order()?;
    if channel.class() != ChannelClass::ExtensionEligible {
        return Ok(0.0);
    }
    let s = sin_pi(nu);
    let c = cos_pi(nu);
    match rho {
        ExtensionSpec::Zero => Ok(0.0),
        ExtensionSpec::Infinite => {
            if c == 0.0 {
                Err(Error::Pole { m: channel.m(), k })
            } else {
                Ok(-s / c)
            }
        }
        ExtensionSpec::Finite(rho) => {
            let (a, b) = extension_weights(nu, rho, k)?;
            let den = b + a * c;
            if den.abs() <= 8.0 * f64::EPSILON * (b.abs() + a.abs()) {
                return Err(Error::Pole { m: channel.m(), k });
            }
            Ok(-a * s / den)
        }
    }
}

pub fn phase_shift(channel: &Channel, rho: ExtensionSpec, k: f64) -> Result<PhaseShift> {
    check_k(k)?;
    let nu = channel.order()?;
    let delta_ab = FRAC_PI_2 * (channel.m().unsigned_abs() as f64 - nu);
    let theta_rho = if channel.class() == ChannelClass::ExtensionEligible {
        match rho {
            ExtensionSpec::Zero => 0.0,
            ExtensionSpec::Infinite => {
                if nu <= 0.5 {
                    PI * nu
                } else {
                    PI * nu - PI
                }
            }
            ExtensionSpec::Finite(rho) => {
                let (a, b) = extension_weights(nu, rho, k)?;
                let num = a * sin_pi(nu);
                let den = b + a * cos_pi(nu);
                if den == 0.0 {
                    FRAC_PI_2
                } else {
                    (num / den).atan()
                }
            }
        }
    } else {
        0.0
    };
    Ok(PhaseShift {
        delta_ab,
        theta_rho,
        total: delta_ab + theta_rho,
    })
}

/// S-matrix element from the branch-free complex form.
pub fn s_matrix_element(channel: &Channel, rho: ExtensionSpec, k: f64) -> Result<SMatrixElement> {
    check_k(k)?;
    let nu = channel.order()?;
    let dirichlet_phase = PI * (channel.m().unsigned_abs() as f64 - nu);
    let eligible = channel.class() == ChannelClass::ExtensionEligible;
    let value = match rho {
        _ if !eligible => Complex64::from_polar(1.0, dirichlet_phase),
        ExtensionSpec::Zero => Complex64::from_polar(1.0, dirichlet_phase),
        ExtensionSpec::Infinite => Complex64::from_polar(1.0, dirichlet_phase + 2.0 * PI * nu),
        ExtensionSpec::Finite(rho) => {
            let (a, b) = extension_weights(nu, rho, k)?;
            let rotation = Complex64::new(cos_pi(nu), sin_pi(nu));
            let numerator = a * rotation + b;
            let denominator = a * rotation.conj() + b;
            if denominator.norm() == 0.0 {
                return Err(Error::Pole { m: channel.m(), k });
            }
            Complex64::from_polar(1.0, dirichlet_phase) * (numerator / denominator)
        }
    };
    Ok(SMatrixElement {
        value,
        channel: *channel,
        k,
    })
}
