//! Partial-wave amplitude `f(k, θ) = (2πik)^{−1/2} Σ_m (S_m − 1) e^{imθ}`.
//!
//! On a cone `|J| ≈ |m + φ|/α` for large `|m|`, so `S_m − 1` does not decay
//! and the series only exists in a summability sense. Each term is damped
//! by `e^{−η|m|}`; the damped sums are evaluated for a decreasing schedule
//! of `η` and extrapolated polynomially to `η = 0` (Neville). The spread
//! between the last two extrapolation stages is reported with the value.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use super::extension::ExtensionMap;
use super::smatrix::s_matrix_element;
use crate::channels::{Channel, ChannelClass};
use crate::error::{Error, Result};
use crate::geometry::ConeGeometry;

#[derive(Debug, Clone, PartialEq)]
pub struct RegularizationConfig {
    /// Damping parameters, at least two distinct positive values.
    pub eta_schedule: Vec<f64>,
    /// Truncate each damped sum once `e^{−η m} <` this.
    pub tail_tolerance: f64,
    /// Largest acceptable extrapolation spread.
    pub spread_tolerance: f64,
    /// Lower bound on the truncation order.
    pub min_order: usize,
    /// Hard cap on the truncation order.
    pub max_order: usize,
}

impl Default for RegularizationConfig {
    fn default() -> Self {
        Self {
            eta_schedule: vec![0.02, 0.01, 0.005],
            tail_tolerance: 1e-10,
            spread_tolerance: 1e-3,
            min_order: 1,
            max_order: 5_000_000,
        }
    }
}

impl RegularizationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.eta_schedule.len() < 2 {
            return Err(Error::Domain("eta schedule needs at least two values".into()));
        }
        for (i, &eta) in self.eta_schedule.iter().enumerate() {
            if !(eta.is_finite() && eta > 0.0) {
                return Err(Error::Domain(format!("eta values must be positive, got {eta}")));
            }
            if self.eta_schedule[..i].contains(&eta) {
                return Err(Error::Domain(format!("eta value {eta} repeated in schedule")));
            }
        }
        if !(self.tail_tolerance > 0.0 && self.tail_tolerance < 1.0) {
            return Err(Error::Domain("tail tolerance must lie in (0, 1)".into()));
        }
        if !(self.spread_tolerance > 0.0) {
            return Err(Error::Domain("spread tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Truncation order for one damping parameter.
    pub fn order_for(&self, eta: f64) -> usize {
        let n = (-self.tail_tolerance.ln() / eta).ceil() as usize;
        n.max(self.min_order)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeResult {
    /// Extrapolated `f(k, θ)`, in units of length^{1/2}.
    pub value: Complex64,
    pub theta: f64,
    pub k: f64,
    /// Largest `|m|` included in any damped sum.
    pub m_max: usize,
    pub eta_sequence: Vec<f64>,
    /// Damped sums for each `η`, prefactor included, in schedule order.
    pub damped_values: Vec<Complex64>,
    /// `|last − second-to-last|` extrapolation stage, plus a rounding floor.
    pub extrapolation_spread: f64,
    /// Channels left out because `J² < 0`.
    pub skipped_channels: Vec<i64>,
}

impl AmplitudeResult {
    pub fn converged(&self, tolerance: f64) -> bool {
        self.extrapolation_spread <= tolerance
    }
}

/// `dσ/dθ = |f|²`.
pub fn differential_cross_section(amp: &AmplitudeResult) -> f64 {
    amp.value.norm_sqr()
}

/// Summation order `0, 1, −1, 2, −2, …` up to `|m| = n`.
fn interleaved(n: usize) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=n as i64).flat_map(|j| [j, -j]))
}

pub fn scattering_amplitude(
    geom: &ConeGeometry,
    flux: f64,
    rho_map: &ExtensionMap,
    k: f64,
    theta: f64,
    reg: &RegularizationConfig,
) -> Result<AmplitudeResult> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::Domain(format!("wave number must be positive, got {k}")));
    }
    if !(theta > -PI && theta <= PI) {
        return Err(Error::Domain(format!("angle must lie in (-pi, pi], got {theta}")));
    }
    if theta == 0.0 {
        return Err(Error::ForwardSingularity);
    }
    reg.validate()?;

    let orders: Vec<usize> = reg.eta_schedule.iter().map(|&eta| reg.order_for(eta)).collect();
    let m_max = *orders.iter().max().expect("schedule is nonempty");
    if m_max > reg.max_order {
        return Err(Error::Domain(format!(
            "truncation order {m_max} exceeds the cap {}",
            reg.max_order
        )));
    }

    // (S_m − 1) e^{imθ}, in interleaved order; None marks skipped channels.
    let mut terms: Vec<(i64, Complex64)> = Vec::with_capacity(2 * m_max + 1);
    let mut skipped = Vec::new();
    for m in interleaved(m_max) {
        let channel = Channel::new(m, flux, geom.alpha())?;
        if channel.class() == ChannelClass::Unsupported {
            skipped.push(m);
            continue;
        }
        let s = s_matrix_element(&channel, rho_map.get(m), k)?.value;
        let phase = Complex64::from_polar(1.0, m as f64 * theta);
        terms.push((m, (s - 1.0) * phase));
    }

    let prefactor = Complex64::from_polar(1.0, -FRAC_PI_4) / (2.0 * PI * k).sqrt();
    let mut damped_values = Vec::with_capacity(orders.len());
    let mut magnitude = 0.0f64;
    for (&eta, &order) in reg.eta_schedule.iter().zip(&orders) {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs_sum = 0.0;
        for &(m, t) in &terms {
            let am = m.unsigned_abs() as usize;
            if am > order {
                continue;
            }
            let w = (-eta * am as f64).exp();
            sum += t * w;
            abs_sum += t.norm() * w;
        }
        magnitude = magnitude.max(abs_sum);
        damped_values.push(sum * prefactor);
    }

    let (value, last_stage_gap, lebesgue) = extrapolate_to_zero(&reg.eta_schedule, &damped_values);
    let rounding = 4.0 * f64::EPSILON * magnitude * prefactor.norm() * lebesgue;
    let result = AmplitudeResult {
        value,
        theta,
        k,
        m_max,
        eta_sequence: reg.eta_schedule.clone(),
        damped_values,
        extrapolation_spread: last_stage_gap + rounding,
        skipped_channels: skipped,
    };
    if !result.converged(reg.spread_tolerance) {
        return Err(Error::NotConverged {
            spread: result.extrapolation_spread,
            tolerance: reg.spread_tolerance,
            partial: Box::new(result),
        });
    }
    Ok(result)
}

/// Neville extrapolation of `values(η)` to `η = 0`.
///
/// Returns the final estimate, its distance from the best estimate of one
/// lower degree, and the sum of absolute interpolation weights.
fn extrapolate_to_zero(etas: &[f64], values: &[Complex64]) -> (Complex64, f64, f64) {
    let n = etas.len();
    let mut table: Vec<Complex64> = values.to_vec();
    let mut previous_stage = table[n - 1];
    for level in 1..n {
        if level == n - 1 {
            previous_stage = table[n - 1];
        }
        for i in (level..n).rev() {
            let (hi, lo) = (etas[i - level], etas[i]);
            // Linear extrapolation through (hi, table[i-1]) and (lo, table[i]) to 0.
            table[i] = (table[i] * hi - table[i - 1] * lo) / (hi - lo);
        }
    }
    let best = table[n - 1];
    let lebesgue: f64 = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| (etas[j] / (etas[j] - etas[i])).abs())
                .product::<f64>()
        })
        .sum();
    (best, (best - previous_stage).norm(), lebesgue)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::ExtensionSpec;

    fn zero_map() -> ExtensionMap {
        ExtensionMap::uniform(ExtensionSpec::Zero)
    }

    /// `(e^{−iπφ} − 1) Σ_{m≥0} e^{imθ} + (e^{iπφ} − 1) Σ_{m<0} e^{imθ}` summed in closed form,
    /// valid in flat space for `0 < φ < 1`.
    fn flat_closed_form(flux: f64, k: f64, theta: f64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let z = Complex64::from_polar(1.0, theta);
        let pos = (Complex64::from_polar(1.0, -PI * flux) - 1.0) / (one - z);
        let neg = (Complex64::from_polar(1.0, PI * flux) - 1.0) * z.conj() / (one - z.conj());
        (pos + neg) * Complex64::from_polar(1.0, -FRAC_PI_4) / (2.0 * PI * k).sqrt()
    }

    #[test]
    fn extrapolation_is_exact_for_quadratics() {
        let etas = [0.02, 0.01, 0.005];
        let vals: Vec<Complex64> = etas
            .iter()
            .map(|&e| Complex64::new(1.5 - 3.0 * e + 7.0 * e * e, 2.0 + e))
            .collect();
        let (v, _, leb) = extrapolate_to_zero(&etas, &vals);
        assert!((v - Complex64::new(1.5, 2.0)).norm() < 1e-13);
        assert!((leb - (8.0 / 3.0 + 2.0 + 1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn flat_zero_flux_amplitude_vanishes() {
        let reg = RegularizationConfig::default();
        for theta in [PI / 4.0, PI / 2.0, PI] {
            let a = scattering_amplitude(&ConeGeometry::flat(), 0.0, &zero_map(), 1.0, theta, &reg).unwrap();
            assert_eq!(a.value, Complex64::new(0.0, 0.0));
            assert_eq!(differential_cross_section(&a), 0.0);
        }
    }

    #[test]
    fn flat_half_flux_matches_closed_form() {
        let reg = RegularizationConfig::default();
        for &theta in &[PI, PI / 2.0, -PI / 3.0, 2.5] {
            let a = scattering_amplitude(&ConeGeometry::flat(), 0.5, &zero_map(), 1.3, theta, &reg).unwrap();
            let exact = flat_closed_form(0.5, 1.3, theta);
            assert!((a.value - exact).norm() < 1e-6, "{theta}: {} vs {exact}", a.value);
            assert!((a.value - exact).norm() <= a.extrapolation_spread.max(1e-9));
        }
    }

    #[test]
    fn damped_sums_agree_with_brute_force() {
        let geom = ConeGeometry::new(0.8, 1.0).unwrap();
        let reg = RegularizationConfig::default();
        let a = scattering_amplitude(&geom, 0.25, &zero_map(), 1.0, PI / 2.0, &reg).unwrap();
        for (&eta, &damped) in reg.eta_schedule.iter().zip(&a.damped_values) {
            let n = reg.order_for(eta) as i64;
            let mut brute = Complex64::new(0.0, 0.0);
            for m in -n..=n {
                let ch = Channel::new(m, 0.25, 0.8).unwrap();
                if ch.class() == ChannelClass::Unsupported {
                    continue;
                }
                let nu = ch.j_abs().unwrap();
                let s = Complex64::from_polar(1.0, PI * (m.abs() as f64 - nu));
                brute += (s - 1.0) * Complex64::from_polar((-eta * m.abs() as f64).exp(), m as f64 * PI / 2.0);
            }
            brute *= Complex64::from_polar(1.0, -FRAC_PI_4) / (2.0 * PI).sqrt();
            assert!((brute - damped).norm() < 1e-9);
        }
        assert_eq!(a.skipped_channels, vec![0]);
    }

    #[test]
    fn forward_direction_and_bad_inputs_rejected() {
        let reg = RegularizationConfig::default();
        let g = ConeGeometry::flat();
        assert!(matches!(
            scattering_amplitude(&g, 0.3, &zero_map(), 1.0, 0.0, &reg),
            Err(Error::ForwardSingularity)
        ));
        assert!(scattering_amplitude(&g, 0.3, &zero_map(), 0.0, 1.0, &reg).is_err());
        assert!(scattering_amplitude(&g, 0.3, &zero_map(), 1.0, 4.0, &reg).is_err());
        let bad = RegularizationConfig {
            eta_schedule: vec![0.01],
            ..Default::default()
        };
        assert!(scattering_amplitude(&g, 0.3, &zero_map(), 1.0, 1.0, &bad).is_err());
    }

    #[test]
    fn unsupported_channels_are_skipped() {
        let geom = ConeGeometry::new(0.5, 1.0).unwrap();
        let reg = RegularizationConfig::default();
        let a = scattering_amplitude(&geom, 0.0, &zero_map(), 1.0, 2.0, &reg).unwrap();
        assert_eq!(a.skipped_channels, vec![0]);
    }

    #[test]
    fn singular_direction_reports_non_convergence() {
        // For α = 0.8 the m > 0 terms rotate by π(1 − 1/α) = −π/4 per step,
        // so the damped sum blows up like 1/η at θ = π/4.
        let geom = ConeGeometry::new(0.8, 1.0).unwrap();
        let reg = RegularizationConfig::default();
        match scattering_amplitude(&geom, 0.25, &zero_map(), 1.0, PI / 4.0, &reg) {
            Err(Error::NotConverged { spread, partial, .. }) => {
                assert!(spread > reg.spread_tolerance);
                assert_eq!(partial.extrapolation_spread, spread);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
