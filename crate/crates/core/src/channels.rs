//! Partial-wave channels and their regularity classes.

use crate::error::{Error, Result};
use crate::geometry::validate_alpha;

/// Regularity class of a channel, a total function of `J²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelClass {
    /// `0 < |J| < 1`: the radial operator admits a one-parameter family of
    /// self-adjoint extensions.
    ExtensionEligible,
    /// `|J| ≥ 1`: only the regular solution is admissible.
    RegularOnly,
    /// `|J| = 0`: the second solution is logarithmic; treated as regular-only.
    LogDegenerate,
    /// `J² < 0`: imaginary Bessel order, not modelled.
    Unsupported,
}

impl ChannelClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ChannelClass::ExtensionEligible => "extension-eligible",
            ChannelClass::RegularOnly => "regular-only",
            ChannelClass::LogDegenerate => "log-degenerate",
            ChannelClass::Unsupported => "unsupported",
        }
    }
}

/// Effective angular momentum squared
/// `J² = [4(m+φ)² − (1−α²)] / (4α²)`. May be negative.
pub fn effective_j_squared(m: i64, flux: f64, alpha: f64) -> Result<f64> {
    validate_alpha(alpha)?;
    if !flux.is_finite() {
        return Err(Error::Domain(format!("flux must be finite, got {flux}")));
    }
    let shifted = m as f64 + flux;
    Ok((4.0 * shifted * shifted - (1.0 - alpha * alpha)) / (4.0 * alpha * alpha))
}

/// One partial wave `(m, φ, α)` with its derived effective angular momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    m: i64,
    flux: f64,
    alpha: f64,
    j_squared: f64,
}

impl Channel {
    pub fn new(m: i64, flux: f64, alpha: f64) -> Result<Self> {
        let j_squared = effective_j_squared(m, flux, alpha)?;
        Ok(Self {
            m,
            flux,
            alpha,
            j_squared,
        })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn flux(&self) -> f64 {
        self.flux
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn j_squared(&self) -> f64 {
        self.j_squared
    }

    /// `|J|`, defined only when `J² ≥ 0`.
    pub fn j_abs(&self) -> Option<f64> {
        (self.j_squared >= 0.0).then(|| self.j_squared.sqrt())
    }

    /// `|J|`, or an [`Error::UnsupportedChannel`] when `J² < 0`.
    pub fn order(&self) -> Result<f64> {
        self.j_abs().ok_or(Error::UnsupportedChannel {
            m: self.m,
            j_squared: self.j_squared,
        })
    }

    pub fn class(&self) -> ChannelClass {
        classify(self)
    }
}

pub fn classify(channel: &Channel) -> ChannelClass {
    let j2 = channel.j_squared;
    if j2 < 0.0 {
        ChannelClass::Unsupported
    } else if j2 == 0.0 {
        ChannelClass::LogDegenerate
    } else if j2 < 1.0 {
        ChannelClass::ExtensionEligible
    } else {
        ChannelClass::RegularOnly
    }
}
