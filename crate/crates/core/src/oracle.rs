//! Direct numerical solution of the radial equation
//!
//! ```text
//! −f'' − f'/r + (J²/r²) f = k² f
//! ```
//!
//! used as an independent check of the closed-form phase shifts and bound
//! states. The apex is never integrated through. The solution starts at a
//! small `r_inner` from its Frobenius expansion
//!
//! ```text
//! f(r) = c_reg · r^{ν} Σ_j (−k²r²/4)^j / (j! (1+ν)_j)
//!      + c_irr · r^{−ν} Σ_j (−k²r²/4)^j / (j! (1−ν)_j),      ν = |J|
//! ```
//!
//! and is carried outward in `t = ln r`, where the equation becomes
//! `g'' = (ν² − k² e^{2t}) g` with no first-derivative term and Numerov's
//! method applies directly. The extension boundary condition fixes
//! `c_irr = ρ c_reg` (`ρ = 0` regular, `ρ = ∞` purely irregular).

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::channels::{Channel, ChannelClass};
use crate::error::{Error, Result};
use crate::geometry::ConeGeometry;
use crate::scattering::{phase_shift, ExtensionSpec};
use crate::specfun::{gamma, sin_pi};

/// How the solution is seeded at `r_inner`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InnerCondition {
    /// `a J_ν(kr) + b Y_ν(kr)`.
    Bessel { a: f64, b: f64 },
    /// Boundary condition of the self-adjoint extension with parameter `ρ`.
    Extension(ExtensionSpec),
}

/// Weights of the normalised Frobenius solutions `r^{ν}(1 + …)` and `r^{−ν}(1 + …)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrobeniusMix {
    pub regular: f64,
    pub irregular: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// `k²` in the equation; negative for bound-state integrations.
    pub k_squared: f64,
    pub channel: Channel,
    pub inner: InnerCondition,
    pub mix: FrobeniusMix,
    /// Steps used for the final grid.
    pub steps: usize,
    /// Largest change between the last two step halvings, relative to `max |f|`.
    pub refinement_change: f64,
}

impl RadialSolution {
    pub fn k(&self) -> f64 {
        self.k_squared.abs().sqrt()
    }

    pub fn r_inner(&self) -> f64 {
        self.grid[0]
    }

    pub fn r_outer(&self) -> f64 {
        *self.grid.last().expect("grid is nonempty")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFit {
    /// Phase relative to `cos(kr − |m|π/2 − π/4)`, in `(−π, π]`.
    pub delta: f64,
    pub amplitude_scale: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig {
    /// Defaults to `1e-3/k`.
    pub r_inner: Option<f64>,
    /// Defaults to `(50 + 10|J|)/k`.
    pub r_outer: Option<f64>,
    /// Initial number of Numerov steps.
    pub steps: usize,
    /// Stop halving once successive solutions agree to this, relative to `max |f|`.
    pub refine_tolerance: f64,
    pub max_halvings: usize,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            r_inner: None,
            r_outer: None,
            steps: 20_000,
            refine_tolerance: 1e-8,
            max_halvings: 4,
        }
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive, got {v}")))
    }
}

/// Frobenius weights for the requested inner condition.
pub fn frobenius_mix(channel: &Channel, k: f64, inner: InnerCondition) -> Result<FrobeniusMix> {
    let nu = channel.order()?;
    match inner {
        InnerCondition::Extension(rho) => {
            if channel.class() != ChannelClass::ExtensionEligible {
                return Ok(FrobeniusMix {
                    regular: 1.0,
                    irregular: 0.0,
                });
            }
            Ok(match rho {
                ExtensionSpec::Zero => FrobeniusMix {
                    regular: 1.0,
                    irregular: 0.0,
                },
                ExtensionSpec::Infinite => FrobeniusMix {
                    regular: 0.0,
                    irregular: 1.0,
                },
                ExtensionSpec::Finite(rho) => FrobeniusMix {
                    regular: 1.0,
                    irregular: rho,
                },
            })
        }
        InnerCondition::Bessel { a, b } => {
            let half_k = 0.5 * k;
            let j_scale = half_k.powf(nu) / gamma(1.0 + nu)?.value;
            if b == 0.0 {
                return Ok(FrobeniusMix {
                    regular: a * j_scale,
                    irregular: 0.0,
                });
            }
            let s = sin_pi(nu);
            if s == 0.0 {
                return Err(Error::Domain(format!(
                    "integer order {nu}: Y_nu has a logarithmic expansion"
                )));
            }
            let c = sin_pi(nu + 0.5);
            let jm_scale = half_k.powf(-nu) / gamma(1.0 - nu)?.value;
            // Y_ν = (cos νπ J_ν − J_{−ν}) / sin νπ
            Ok(FrobeniusMix {
                regular: (a + b * c / s) * j_scale,
                irregular: -b / s * jm_scale,
            })
        }
    }
}

/// `Σ_{j≥1} z^j / (j! (1+s)_j)`, the series without its leading 1.
fn frobenius_tail(shift: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for j in 1..200 {
        let jf = j as f64;
        term *= z / (jf * (jf + shift));
        sum += term;
        if term.abs() <= 1e-17 * (1.0 + sum.abs()) {
            break;
        }
    }
    sum
}

/// Frobenius solution at `r0` and `r0·e^h`, plus their difference
/// evaluated without cancellation.
fn frobenius_start(nu: f64, k_squared: f64, mix: FrobeniusMix, r0: f64, h: f64) -> (f64, f64, f64) {
    let r1 = r0 * h.exp();
    let z0 = -k_squared * r0 * r0 / 4.0;
    let z1 = -k_squared * r1 * r1 / 4.0;
    let (mut g0, mut g1, mut dg) = (0.0, 0.0, 0.0);
    for (weight, power) in [(mix.regular, nu), (mix.irregular, -nu)] {
        if weight == 0.0 {
            continue;
        }
        let a0 = weight * r0.powf(power);
        let tail0 = frobenius_tail(power, z0);
        let tail1 = frobenius_tail(power, z1);
        let growth = (power * h).exp_m1();
        g0 += a0 * (1.0 + tail0);
        g1 += a0 * (1.0 + growth) * (1.0 + tail1);
        // A1 S1 − A0 S0 = A0 [(e^{ph} − 1) S1 + (S1 − S0)]
        dg += a0 * (growth * (1.0 + tail1) + (tail1 - tail0));
    }
    (g0, g1, dg)
}

/// Kahan–Babuška running sum.
#[derive(Debug, Clone, Copy)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn new(v: f64) -> Self {
        Self { sum: v, carry: 0.0 }
    }

    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Fixed-step Numerov march in `t = ln r`. Returns `(r, f)` samples.
fn numerov(
    nu: f64,
    k_squared: f64,
    mix: FrobeniusMix,
    r_inner: f64,
    r_outer: f64,
    steps: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let t0 = r_inner.ln();
    let h = (r_outer.ln() - t0) / steps as f64;
    let h2 = h * h / 12.0;
    let nu2 = nu * nu;
    let q = |t: f64| nu2 - k_squared * (2.0 * t).exp();

    let mut grid = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    let (g0, g1, dg) = frobenius_start(nu, k_squared, mix, r_inner, h);
    grid.push(r_inner);
    values.push(g0);
    grid.push((t0 + h).exp());
    values.push(g1);

    // Summed form: with y = (1 − h²Q/12) g, y_{n+1} − y_n = y_n − y_{n−1} + h² Q_n g_n.
    // Both running sums carry a compensation term.
    let weight = |qv: f64| 1.0 - h2 * qv;
    let q_start = q(t0);
    let mut q_curr = q(t0 + h);
    let mut y = Compensated::new(weight(q_curr) * g1);
    let mut increment = Compensated::new(dg - h2 * (q_curr * g1 - q_start * g0));
    let mut g_curr = values[1];
    for n in 1..steps {
        let t_next = t0 + (n + 1) as f64 * h;
        increment.add(h * h * q_curr * g_curr);
        y.add(increment.value());
        let q_next = q(t_next);
        let g_next = y.value() / weight(q_next);
        if !g_next.is_finite() {
            return Err(Error::Integration(format!(
                "solution overflowed at r = {}",
                t_next.exp()
            )));
        }
        grid.push(if n + 1 == steps { r_outer } else { t_next.exp() });
        values.push(g_next);
        q_curr = q_next;
        g_curr = g_next;
    }
    Ok((grid, values))
}

fn integrate_with_refinement(
    channel: &Channel,
    k_squared: f64,
    inner: InnerCondition,
    mix: FrobeniusMix,
    r_inner: f64,
    r_outer: f64,
    cfg: &IntegrationConfig,
) -> Result<RadialSolution> {
    let nu = channel.order()?;
    if !(r_outer > r_inner) {
        return Err(Error::Domain(format!(
            "r_outer ({r_outer}) must exceed r_inner ({r_inner})"
        )));
    }
    if cfg.steps < 2 {
        return Err(Error::Domain("need at least two integration steps".into()));
    }
    let mut steps = cfg.steps;
    let (mut grid, mut values) = numerov(nu, k_squared, mix, r_inner, r_outer, steps)?;
    let mut change = f64::INFINITY;
    for _ in 0..cfg.max_halvings {
        let (fine_grid, fine_values) = numerov(nu, k_squared, mix, r_inner, r_outer, 2 * steps)?;
        let scale = fine_values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let next_change = values
            .iter()
            .zip(fine_values.iter().step_by(2))
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
            / scale;
        if next_change > change {
            // Rounding now dominates the truncation error; keep the coarser grid.
            break;
        }
        change = next_change;
        grid = fine_grid;
        values = fine_values;
        steps *= 2;
        if change <= cfg.refine_tolerance {
            break;
        }
    }
    Ok(RadialSolution {
        grid,
        values,
        k_squared,
        channel: *channel,
        inner,
        mix,
        steps,
        refinement_change: change,
    })
}

/// Integrates the scattering radial equation from `r_inner` to `r_outer`.
pub fn integrate_radial(
    channel: &Channel,
    k: f64,
    inner: InnerCondition,
    cfg: &IntegrationConfig,
) -> Result<RadialSolution> {
    check_positive("wave number", k)?;
    let nu = channel.order()?;
    let r_inner = cfg.r_inner.unwrap_or(1e-3 / k);
    let r_outer = cfg.r_outer.unwrap_or((50.0 + 10.0 * nu) / k);
    check_positive("r_inner", r_inner)?;
    let mix = frobenius_mix(channel, k, inner)?;
    integrate_with_refinement(channel, k * k, inner, mix, r_inner, r_outer, cfg)
}

/// Phase of the Bessel-type solution at large `x` beyond its limit
/// `x − (ν/2 + 1/4)π`, and the squared modulus relative to `2/(πx)`.
/// Both come from the asymptotic expansion of the free radial equation of
/// order `ν`; they vanish as `x → ∞`.
fn centrifugal_corrections(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let y = 4.0 * x;
    let phase = (mu - 1.0) / (2.0 * y)
        + (mu - 1.0) * (mu - 25.0) / (6.0 * y.powi(3))
        + (mu - 1.0) * (mu * mu - 114.0 * mu + 1073.0) / (5.0 * y.powi(5));
    let w = (2.0 * x).powi(2);
    let modulus_sq = 1.0
        + (mu - 1.0) / (2.0 * w)
        + 3.0 * (mu - 1.0) * (mu - 9.0) / (8.0 * w * w)
        + 15.0 * (mu - 1.0) * (mu - 9.0) * (mu - 25.0) / (48.0 * w * w * w);
    (phase, modulus_sq)
}

/// Least-squares fit of `A cos(kr − |m|π/2 − π/4 + δ)` over the outer
/// `window` fraction of the radial interval, with the finite-`r`
/// centrifugal corrections applied to the basis.
pub fn extract_phase_shift_window(sol: &RadialSolution, window: f64) -> Result<PhaseFit> {
    if sol.k_squared <= 0.0 {
        return Err(Error::Domain(
            "phase extraction needs a scattering solution (k^2 > 0)".into(),
        ));
    }
    if !(window > 0.0 && window <= 1.0) {
        return Err(Error::Domain(format!("fit window must lie in (0, 1], got {window}")));
    }
    let k = sol.k();
    let nu = sol.channel.order()?;
    let m_abs = sol.channel.m().unsigned_abs() as f64;
    let r_start = sol.r_outer() - window * (sol.r_outer() - sol.r_inner());

    // Normal equations for f ≈ C·u + D·v, u = M cos X, v = M sin X.
    let (mut suu, mut suv, mut svv, mut suf, mut svf) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut samples = Vec::new();
    for (&r, &f) in sol.grid.iter().zip(&sol.values) {
        if r < r_start {
            continue;
        }
        let x = k * r;
        let (dphase, mod_sq) = centrifugal_corrections(nu, x);
        let modulus = (2.0 / (PI * x) * mod_sq).sqrt();
        let arg = x - m_abs * FRAC_PI_2 - FRAC_PI_4 + dphase;
        let (s, c) = arg.sin_cos();
        let (u, v) = (modulus * c, modulus * s);
        suu += u * u;
        suv += u * v;
        svv += v * v;
        suf += u * f;
        svf += v * f;
        samples.push((u, v, f));
    }
    if samples.len() < 8 {
        return Err(Error::Integration("too few samples in the fit window".into()));
    }
    let det = suu * svv - suv * suv;
    if det.abs() <= f64::EPSILON * suu * svv {
        return Err(Error::Integration("degenerate phase fit".into()));
    }
    let c = (suf * svv - svf * suv) / det;
    let d = (svf * suu - suf * suv) / det;
    let sq: f64 = samples.iter().map(|&(u, v, f)| (f - c * u - d * v).powi(2)).sum();
    let residual = (sq / samples.len() as f64).sqrt();
    let envelope = (2.0 / (PI * k * r_start)).sqrt();
    // C cos X + D sin X = A cos(X + δ) with C = A cos δ, D = −A sin δ.
    let amplitude = c.hypot(d);
    let fit = PhaseFit {
        delta: (-d).atan2(c),
        amplitude_scale: amplitude,
        residual,
    };
    if residual > 1e-4 * amplitude * envelope {
        return Err(Error::Integration(format!(
            "phase fit residual {residual:e} too large; grid is not asymptotic"
        )));
    }
    Ok(fit)
}

/// Phase fit over the outer 20% of the grid.
pub fn extract_phase_shift(sol: &RadialSolution) -> Result<PhaseFit> {
    extract_phase_shift_window(sol, 0.2)
}

/// Difference of two phases modulo π, in `[0, π/2]`.
pub fn phase_distance_mod_pi(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundStateCheck {
    pub confirmed: bool,
    /// `|f(r_outer)| / max |f|`.
    pub tail_ratio: f64,
    pub r_outer: f64,
    pub energy: f64,
}

/// Integrates the radial equation at `k² = −κ²` from the extension boundary
/// condition and reports whether the solution decays.
pub fn confirm_bound_state(
    channel: &Channel,
    rho: ExtensionSpec,
    kappa: f64,
    geom: &ConeGeometry,
) -> Result<BoundStateCheck> {
    check_positive("kappa", kappa)?;
    let cfg = IntegrationConfig {
        r_outer: Some(12.0 / kappa),
        ..Default::default()
    };
    confirm_bound_state_with(channel, rho, kappa, geom, &cfg)
}

/// [`confirm_bound_state`] with explicit integration settings.
pub fn confirm_bound_state_with(
    channel: &Channel,
    rho: ExtensionSpec,
    kappa: f64,
    geom: &ConeGeometry,
    cfg: &IntegrationConfig,
) -> Result<BoundStateCheck> {
    check_positive("kappa", kappa)?;
    let r_inner = cfg.r_inner.unwrap_or(1e-3 / kappa);
    let r_outer = cfg.r_outer.unwrap_or(12.0 / kappa);
    let inner = InnerCondition::Extension(rho);
    let mix = frobenius_mix(channel, kappa, inner)?;
    let sol = integrate_with_refinement(channel, -kappa * kappa, inner, mix, r_inner, r_outer, cfg)?;
    let max = sol.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tail = sol.values.last().copied().unwrap_or(0.0).abs();
    let tail_ratio = tail / max;
    Ok(BoundStateCheck {
        confirmed: tail_ratio < 1e-6,
        tail_ratio,
        r_outer,
        energy: -kappa * kappa / (2.0 * geom.mass()),
    })
}

/// Tolerances of the oracle-versus-closed-form comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyTolerances {
    pub phase: f64,
    pub refinement: f64,
    pub window: f64,
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        Self {
            phase: 2e-4,
            refinement: 1e-5,
            window: 1e-4,
        }
    }
}

/// One channel of the verification grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyCase {
    pub alpha: f64,
    pub flux: f64,
    pub k: f64,
    pub m: i64,
    pub rho: ExtensionSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub case: VerifyCase,
    pub j_abs: f64,
    pub analytic: f64,
    pub fitted: f64,
    /// `|fitted − analytic|` modulo π.
    pub phase_error: f64,
    /// Change in fitted δ when the step is halved once more.
    pub refinement_change: f64,
    /// Change in fitted δ between the outer 20% and outer 10% windows.
    pub window_change: f64,
    pub passed: bool,
    /// Set when the case could not be evaluated.
    pub error: Option<String>,
}

/// The default grid: `α ∈ {0.6, 0.8, 0.95}`, `φ ∈ {0.1, 0.25, 0.4}`,
/// `k ∈ {0.5, 1, 2}`, `m ∈ {0, ±1}`, with `ρ = 0` for every supported
/// channel and `ρ = 1` additionally for extension-eligible ones.
pub fn default_verify_cases() -> Vec<VerifyCase> {
    let mut cases = Vec::new();
    for &alpha in &[0.6, 0.8, 0.95] {
        for &flux in &[0.1, 0.25, 0.4] {
            for &k in &[0.5, 1.0, 2.0] {
                for m in [0, 1, -1] {
                    cases.extend(channel_cases(alpha, flux, k, m, ExtensionSpec::Finite(1.0)));
                }
            }
        }
    }
    cases
}

/// `ρ = 0` for a supported channel, plus `finite_rho` when the channel is
/// extension-eligible. Unsupported channels yield nothing.
pub fn channel_cases(alpha: f64, flux: f64, k: f64, m: i64, finite_rho: ExtensionSpec) -> Vec<VerifyCase> {
    let Ok(channel) = Channel::new(m, flux, alpha) else {
        return Vec::new();
    };
    let base = VerifyCase {
        alpha,
        flux,
        k,
        m,
        rho: ExtensionSpec::Zero,
    };
    match channel.class() {
        ChannelClass::Unsupported => Vec::new(),
        ChannelClass::ExtensionEligible if !finite_rho.is_zero() => {
            vec![
                base,
                VerifyCase {
                    rho: finite_rho,
                    ..base
                },
            ]
        }
        _ => vec![base],
    }
}

/// Integrates one case and compares against the closed-form phase shift.
pub fn verify_case(case: &VerifyCase, tol: &VerifyTolerances) -> VerifyOutcome {
    match verify_case_inner(case, tol) {
        Ok(outcome) => outcome,
        Err(e) => VerifyOutcome {
            case: *case,
            j_abs: f64::NAN,
            analytic: f64::NAN,
            fitted: f64::NAN,
            phase_error: f64::NAN,
            refinement_change: f64::NAN,
            window_change: f64::NAN,
            passed: false,
            error: Some(e.to_string()),
        },
    }
}

fn verify_case_inner(case: &VerifyCase, tol: &VerifyTolerances) -> Result<VerifyOutcome> {
    let channel = Channel::new(case.m, case.flux, case.alpha)?;
    let nu = channel.order()?;
    let inner = InnerCondition::Extension(case.rho);
    let cfg = IntegrationConfig::default();
    let sol = integrate_radial(&channel, case.k, inner, &cfg)?;
    let fit = extract_phase_shift(&sol)?;
    let narrow = extract_phase_shift_window(&sol, 0.1)?;

    let finer_cfg = IntegrationConfig {
        steps: sol.steps * 2,
        max_halvings: 0,
        ..cfg
    };
    let finer = integrate_radial(&channel, case.k, inner, &finer_cfg)?;
    let finer_fit = extract_phase_shift(&finer)?;

    let analytic = phase_shift(&channel, case.rho, case.k)?.total;
    let phase_error = phase_distance_mod_pi(finer_fit.delta, analytic);
    let refinement_change = phase_distance_mod_pi(finer_fit.delta, fit.delta);
    let window_change = phase_distance_mod_pi(fit.delta, narrow.delta);
    let passed = phase_error < tol.phase && refinement_change < tol.refinement && window_change < tol.window;
    Ok(VerifyOutcome {
        case: *case,
        j_abs: nu,
        analytic,
        fitted: finer_fit.delta,
        phase_error,
        refinement_change,
        window_change,
        passed,
        error: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::coefficient_ratio;
    use crate::specfun::bessel_jy;

    fn half() -> Channel {
        Channel::new(0, 0.5, 1.0).unwrap()
    }

    fn max_relative_deviation(sol: &RadialSolution, reference: impl Fn(f64) -> f64) -> f64 {
        // Best scale by least squares, then the worst relative deviation.
        let (mut num, mut den) = (0.0, 0.0);
        for (&r, &f) in sol.grid.iter().zip(&sol.values) {
            let g = reference(r);
            num += f * g;
            den += g * g;
        }
        let scale = num / den;
        let peak = sol.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        sol.grid
            .iter()
            .zip(&sol.values)
            .map(|(&r, &f)| (f - scale * reference(r)).abs() / peak)
            .fold(0.0, f64::max)
    }

    #[test]
    fn regular_mix_follows_bessel_j() {
        let sol = integrate_radial(
            &half(),
            1.0,
            InnerCondition::Bessel { a: 1.0, b: 0.0 },
            &IntegrationConfig::default(),
        )
        .unwrap();
        assert!(sol.r_inner() > 0.0);
        assert!(sol.values.iter().all(|v| v.is_finite()));
        let dev = max_relative_deviation(&sol, |r| bessel_jy(0.5, r).unwrap().j);
        assert!(dev < 1e-8, "{dev}");
    }

    #[test]
    fn irregular_mix_follows_bessel_minus_half() {
        let sol = integrate_radial(
            &half(),
            1.0,
            InnerCondition::Bessel { a: 0.0, b: 1.0 },
            &IntegrationConfig::default(),
        )
        .unwrap();
        // J_{−1/2}(x) = √(2/πx) cos x
        let dev = max_relative_deviation(&sol, |r| (2.0 / (PI * r)).sqrt() * r.cos());
        assert!(dev < 1e-8, "{dev}");
    }

    #[test]
    fn wave_number_scaling() {
        let ch = Channel::new(1, 0.3, 0.9).unwrap();
        let cfg1 = IntegrationConfig {
            r_inner: Some(2e-3),
            r_outer: Some(60.0),
            ..Default::default()
        };
        let cfg2 = IntegrationConfig {
            r_inner: Some(1e-3),
            r_outer: Some(30.0),
            ..Default::default()
        };
        let inner = InnerCondition::Bessel { a: 1.0, b: 0.0 };
        let s1 = integrate_radial(&ch, 1.0, inner, &cfg1).unwrap();
        let s2 = integrate_radial(&ch, 2.0, inner, &cfg2).unwrap();
        assert_eq!(s1.steps, s2.steps);
        let ratio = s2.values[s2.values.len() / 2] / s1.values[s1.values.len() / 2];
        let peak = s1.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in s1.values.iter().zip(&s2.values) {
            assert!((b - ratio * a).abs() < 1e-9 * peak * ratio.abs());
        }
    }

    #[test]
    fn regular_solution_recovers_dirichlet_phase() {
        for &(m, flux, alpha) in &[(0, 0.4, 0.8), (1, 0.25, 0.8), (-1, 0.4, 0.95), (2, 0.1, 0.6)] {
            let ch = Channel::new(m, flux, alpha).unwrap();
            let sol = integrate_radial(
                &ch,
                1.0,
                InnerCondition::Bessel { a: 1.0, b: 0.0 },
                &IntegrationConfig::default(),
            )
            .unwrap();
            let fit = extract_phase_shift(&sol).unwrap();
            let expected = FRAC_PI_2 * (m.unsigned_abs() as f64 - ch.j_abs().unwrap());
            assert!(
                phase_distance_mod_pi(fit.delta, expected) < 2e-4,
                "m={m}: {} vs {expected}",
                fit.delta
            );
            assert!(fit.delta > -PI && fit.delta <= PI);
        }
    }

    #[test]
    fn mixed_solution_recovers_total_phase() {
        let ch = half();
        let ratio = coefficient_ratio(&ch, ExtensionSpec::Finite(1.0), 1.0).unwrap();
        let sol = integrate_radial(
            &ch,
            1.0,
            InnerCondition::Bessel { a: 1.0, b: ratio },
            &IntegrationConfig::default(),
        )
        .unwrap();
        let fit = extract_phase_shift(&sol).unwrap();
        let total = phase_shift(&ch, ExtensionSpec::Finite(1.0), 1.0).unwrap().total;
        assert!(phase_distance_mod_pi(fit.delta, total) < 2e-4);
    }

    #[test]
    fn extension_condition_matches_bessel_mixture() {
        // The boundary condition c_irr = ρ c_reg reproduces the Bessel mixture with b/a from the ratio.
        let ch = Channel::new(0, 0.3, 0.9).unwrap();
        for rho in [0.5, -2.0, 7.0] {
            let ratio = coefficient_ratio(&ch, ExtensionSpec::Finite(rho), 1.3).unwrap();
            let mix = frobenius_mix(&ch, 1.3, InnerCondition::Bessel { a: 1.0, b: ratio }).unwrap();
            assert!((mix.irregular / mix.regular - rho).abs() < 1e-12 * rho.abs());
        }
    }

    #[test]
    fn flat_free_wave_has_no_phase_shift() {
        let ch = Channel::new(1, 0.0, 1.0).unwrap();
        let sol = integrate_radial(
            &ch,
            1.0,
            InnerCondition::Bessel { a: 1.0, b: 0.0 },
            &IntegrationConfig::default(),
        )
        .unwrap();
        let fit = extract_phase_shift(&sol).unwrap();
        assert!(phase_distance_mod_pi(fit.delta, 0.0) < 2e-4);
    }

    #[test]
    fn bound_state_confirmation() {
        let geom = ConeGeometry::flat();
        let ch = half();
        let at_pole = confirm_bound_state(&ch, ExtensionSpec::Finite(-1.0), 1.0, &geom).unwrap();
        assert!(at_pole.confirmed, "{at_pole:?}");
        assert_eq!(at_pole.energy, -0.5);
        let off_pole = confirm_bound_state(&ch, ExtensionSpec::Finite(-1.0), 2.0, &geom).unwrap();
        assert!(!off_pole.confirmed);
        for kappa in [0.1, 0.5, 1.0, 2.0, 5.0] {
            assert!(
                !confirm_bound_state(&ch, ExtensionSpec::Finite(1.0), kappa, &geom)
                    .unwrap()
                    .confirmed
            );
        }
        assert!(confirm_bound_state(&ch, ExtensionSpec::Finite(-1.0), 0.0, &geom).is_err());
    }

    #[test]
    fn phase_distance_wraps() {
        assert!(phase_distance_mod_pi(0.1, 0.1 + PI) < 1e-15);
        assert!((phase_distance_mod_pi(0.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((phase_distance_mod_pi(0.0, 3.0) - (PI - 3.0)).abs() < 1e-15);
    }

    #[test]
    fn unsupported_channel_rejected() {
        let ch = Channel::new(0, 0.0, 0.5).unwrap();
        assert!(integrate_radial(
            &ch,
            1.0,
            InnerCondition::Extension(ExtensionSpec::Zero),
            &IntegrationConfig::default()
        )
        .is_err());
        let case = VerifyCase {
            alpha: 0.5,
            flux: 0.0,
            k: 1.0,
            m: 0,
            rho: ExtensionSpec::Zero,
        };
        let out = verify_case(&case, &VerifyTolerances::default());
        assert!(!out.passed);
        assert!(out.error.is_some());
    }

    #[test]
    fn single_channel_verification_passes() {
        for case in channel_cases(0.8, 0.25, 1.0, 0, ExtensionSpec::Finite(1.0)) {
            let out = verify_case(&case, &VerifyTolerances::default());
            assert!(out.passed, "{out:?}");
        }
    }

    #[test]
    fn strict_tolerance_fails_cleanly() {
        let tol = VerifyTolerances {
            phase: 1e-12,
            refinement: 1e-12,
            window: 1e-12,
        };
        let case = channel_cases(0.8, 0.25, 1.0, 1, ExtensionSpec::Zero)[0];
        let out = verify_case(&case, &tol);
        assert!(!out.passed);
        assert!(out.error.is_none());
    }
}
