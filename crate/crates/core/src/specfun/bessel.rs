//! Bessel functions of the first and second kind for real order `ν ≥ 0` and
//! real argument `x > 0`.
//!
//! The ratio `J'_ν/J_ν` comes from a continued fraction evaluated by the
//! modified Lentz method and is carried down to a reduced order
//! `μ = ν − n`, `|μ| ≤ 1/2`, by backward recurrence. At the reduced order
//! the pair `(J_μ, Y_μ)` is fixed by Temme's series for `x < 2` and by
//! Steed's complex continued fraction for `x ≥ 2`, using the Wronskian
//! `J Y' − J' Y = 2/(πx)` for normalisation. `Y` is then recurred upward,
//! which is stable, so no `J_{−ν}` connection formula (and no cancellation
//! near integer orders) is involved.
//!
//! For `x` large compared with `ν²` the Hankel asymptotic expansion is used
//! instead, since the continued fractions lose accuracy there.

use std::f64::consts::PI;

use super::gamma::{sin_pi, temme_gammas};
use super::SpecFunResult;
use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const FPMIN: f64 = f64::MIN_POSITIVE / EPS;
const SERIES_SWITCH: f64 = 2.0;
const RESCALE_ABOVE: f64 = 1e250;
const HANKEL_MIN_X: f64 = 25.0;

/// `J_ν(x)`, `Y_ν(x)` and their derivatives with respect to `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselPair {
    pub j: f64,
    pub y: f64,
    pub jp: f64,
    pub yp: f64,
    /// Estimated absolute error on `j`.
    pub j_err: f64,
    /// Estimated absolute error on `y`.
    pub y_err: f64,
}

pub fn bessel_j(nu: f64, x: f64) -> Result<SpecFunResult> {
    let p = bessel_jy(nu, x)?;
    Ok(SpecFunResult::new(p.j, p.j_err))
}

pub fn bessel_y(nu: f64, x: f64) -> Result<SpecFunResult> {
    let p = bessel_jy(nu, x)?;
    Ok(SpecFunResult::new(p.y, p.y_err))
}

pub fn bessel_jy(nu: f64, x: f64) -> Result<BesselPair> {
    if !(nu.is_finite() && nu >= 0.0) {
        return Err(Error::Domain(format!(
            "Bessel order must be finite and nonnegative, got {nu}"
        )));
    }
    if !(x > 0.0) {
        return Err(Error::Domain(format!("Bessel argument must be positive, got {x}")));
    }
    if !x.is_finite() {
        return Err(Error::Domain("Bessel argument must be finite".into()));
    }

    if x >= HANKEL_MIN_X + 0.5 * (nu + 1.0) * (nu + 1.0) {
        return Ok(hankel_pair(nu, x));
    }

    let nl = if x < SERIES_SWITCH {
        (nu + 0.5).floor() as usize
    } else {
        (nu - x + 1.5).floor().max(0.0) as usize
    };
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // J'_ν / J_ν by continued fraction (modified Lentz).
    let max_iter = 10_000 + 20 * x as usize;
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..max_iter {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() <= EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::IterationLimit("Bessel J'/J continued fraction"));
    }

    // Backward recurrence from ν down to μ with an arbitrary normalisation.
    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut rjp1 = rjpl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > RESCALE_ABOVE {
            let s = 1.0 / RESCALE_ABOVE;
            rjl *= s;
            rjpl *= s;
            rjl1 *= s;
            rjp1 *= s;
        }
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, mut rymu, mut ry1) = if x < SERIES_SWITCH {
        temme_series(xmu, xmu2, x, xi, xi2, w, f)?
    } else {
        steed_cf2(xmu, xmu2, x, xi, w, f, rjl)?
    };

    let scale = rjmu / rjl;
    let j = rjl1 * scale;
    let jp = rjp1 * scale;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    let y = rymu;
    let yp = nu * xi * rymu - ry1;

    if !(j.is_finite() && y.is_finite() && jp.is_finite() && yp.is_finite()) {
        return Err(Error::Range(format!(
            "Bessel functions of order {nu} overflow at x = {x}"
        )));
    }

    let envelope = if x > nu { (2.0 / (PI * x)).sqrt() } else { 0.0 };
    let growth = 8.0 * EPS * (4.0 + nl as f64 + x);
    Ok(BesselPair {
        j,
        y,
        jp,
        yp,
        j_err: growth * j.abs().max(envelope),
        y_err: growth * y.abs().max(envelope),
    })
}

/// `(J_ν(x), Y_ν(x))` from the Hankel expansion
/// `J = √(2/πx)(P cos χ − Q sin χ)`, `Y = √(2/πx)(P sin χ + Q cos χ)`,
/// `χ = x − (ν/2 + 1/4)π`.
fn hankel(nu: f64, x: f64) -> (f64, f64) {
    let four_nu2 = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut previous = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        term *= (four_nu2 - odd * odd) / (8.0 * k as f64 * x);
        if term.abs() > previous {
            break;
        }
        previous = term.abs();
        // a_k / x^k enters P with sign (−1)^{k/2} for even k and Q with (−1)^{(k−1)/2} for odd k.
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term.abs() < 0.1 * EPS {
            break;
        }
    }
    let phase = 0.5 * nu + 0.25;
    let (sa, ca) = (sin_pi(phase), sin_pi(phase + 0.5));
    let (sx, cx) = x.sin_cos();
    let cos_chi = cx * ca + sx * sa;
    let sin_chi = sx * ca - cx * sa;
    let amp = (2.0 / (PI * x)).sqrt();
    (amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi))
}

fn hankel_pair(nu: f64, x: f64) -> BesselPair {
    let (j, y) = hankel(nu, x);
    let (j1, y1) = hankel(nu + 1.0, x);
    let err = 16.0 * EPS * (2.0 / (PI * x)).sqrt();
    BesselPair {
        j,
        y,
        jp: nu / x * j - j1,
        yp: nu / x * y - y1,
        j_err: err.max(4.0 * EPS * j.abs()),
        y_err: err.max(4.0 * EPS * y.abs()),
    }
}

/// Temme's series for `Y_μ`, `Y_{μ+1}` at `x < 2`; returns `(J_μ, Y_μ, Y_{μ+1})`.
fn temme_series(xmu: f64, xmu2: f64, x: f64, xi: f64, xi2: f64, w: f64, f: f64) -> Result<(f64, f64, f64)> {
    let x2 = 0.5 * x;
    let pimu = PI * xmu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = xmu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
    let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let e = e.exp();
    let mut p = e / (gampl * PI);
    let mut q = 1.0 / (e * PI * gammi);
    let pimu2 = 0.5 * pimu;
    let fact3 = if pimu2.abs() < EPS { 1.0 } else { pimu2.sin() / pimu2 };
    let r = PI * pimu2 * fact3 * fact3;
    let mut c = 1.0;
    let d = -x2 * x2;
    let mut sum = ff + r * q;
    let mut sum1 = p;
    let mut i = 1usize;
    loop {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - xmu2);
        c *= d / fi;
        p /= fi - xmu;
        q /= fi + xmu;
        let del = c * (ff + r * q);
        sum += del;
        let del1 = c * p - fi * del;
        sum1 += del1;
        if del.abs() < (1.0 + sum.abs()) * EPS {
            break;
        }
        i += 1;
        if i > 1_000 {
            return Err(Error::IterationLimit("Temme series for Y"));
        }
    }
    let rymu = -sum;
    let ry1 = -sum1 * xi2;
    let rymup = xmu * xi * rymu - ry1;
    let rjmu = w / (rymup - f * rymu);
    Ok((rjmu, rymu, ry1))
}

/// Steed's complex continued fraction for `x ≥ 2`; returns `(J_μ, Y_μ, Y_{μ+1})`.
fn steed_cf2(xmu: f64, xmu2: f64, x: f64, xi: f64, w: f64, f: f64, rjl: f64) -> Result<(f64, f64, f64)> {
    let mut a = 0.25 - xmu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fact = a * xi / (p * p + q * q);
    let mut cr = br + q * fact;
    let mut ci = bi + p * fact;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    let mut converged = false;
    for i in 1..100_000 {
        a += 2.0 * i as f64;
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di = -di / den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() <= EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::IterationLimit("Steed continued fraction"));
    }
    let gam = (p - f) / q;
    let rjmu = (w / ((p - f) * gam + q)).sqrt().copysign(rjl);
    let rymu = rjmu * gam;
    let rymup = rymu * (p + q / gam);
    let ry1 = xmu * xi * rymu - rymup;
    Ok((rjmu, rymu, ry1))
}
