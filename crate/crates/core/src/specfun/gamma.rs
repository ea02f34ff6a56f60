use std::f64::consts::PI;

use super::SpecFunResult;
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Taylor coefficients of `1/Γ(1+x)` about `x = 0`.
const RECIP_GAMMA_TAYLOR: [f64; 27] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_9,
    -0.042_002_635_034_095_24,
    0.166_538_611_382_291_48,
    -0.042_197_734_555_544_33,
    -0.009_621_971_527_876_973,
    0.007_218_943_246_663_1,
    -0.001_165_167_591_859_065_2,
    -0.000_215_241_674_114_950_98,
    0.000_128_050_282_388_116_2,
    -2.013_485_478_078_824e-5,
    -1.250_493_482_142_670_6e-6,
    1.133_027_231_981_696e-6,
    -2.056_338_416_977_607e-7,
    6.116_095_104_481_416e-9,
    5.002_007_644_469_223e-9,
    -1.181_274_570_487_02e-9,
    1.043_426_711_691_100_5e-10,
    7.782_263_439_905_071e-12,
    -3.696_805_618_642_206e-12,
    5.100_370_287_454_476e-13,
    -2.058_326_053_566_506_6e-14,
    -5.348_122_539_423_018e-15,
    1.226_778_628_238_260_8e-15,
    -1.181_259_301_697_458_8e-16,
    1.186_692_254_751_600_4e-18,
];

/// Largest argument whose Gamma value is finite in `f64`.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

/// Gamma function for real arguments away from the poles at `0, -1, -2, …`.
pub fn gamma(x: f64) -> Result<SpecFunResult> {
    if x.is_nan() {
        return Err(Error::Domain("gamma of NaN".into()));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Domain(format!("gamma has a pole at {x}")));
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::Range(format!("gamma({x}) overflows")));
    }
    let value = if x < 0.5 {
        // Reflection: Γ(x) Γ(1−x) = π / sin(πx).
        let s = sin_pi(x);
        let g = gamma_positive(1.0 - x);
        let v = PI / (s * g);
        if !v.is_finite() {
            return Err(Error::Range(format!("gamma({x}) overflows")));
        }
        v
    } else {
        gamma_positive(x)
    };
    if value == 0.0 {
        return Err(Error::Range(format!("gamma({x}) underflows")));
    }
    let rel = if x < 0.5 {
        1e-14 * (1.0 + x.abs())
    } else {
        2e-15 * (1.0 + x.abs().ln_1p())
    };
    Ok(SpecFunResult::new(value, rel * value.abs()))
}

/// `sin(πx)` with exact zeros at integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    (PI * r).sin()
}

/// `Γ(x)` for `x ≥ 0.5`. Moderate arguments are shifted into `[0.5, 1.5)`
/// and use the reciprocal Taylor series, which keeps integers exact.
fn gamma_positive(x: f64) -> f64 {
    if x >= 20.0 {
        return lanczos(x);
    }
    let mut y = x;
    let mut product = 1.0;
    while y >= 1.5 {
        y -= 1.0;
        product *= y;
    }
    product / recip_gamma_one_plus(y - 1.0)
}

/// `1/Γ(1+t)` for `|t| ≤ 1/2`.
fn recip_gamma_one_plus(t: f64) -> f64 {
    RECIP_GAMMA_TAYLOR.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Lanczos approximation for `x ≥ 0.5`.
fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // Split the power so intermediate values stay finite near the overflow edge.
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * sum
}

/// Temme's auxiliary functions for `|μ| ≤ 1/2`:
/// `γ₁ = (1/Γ(1−μ) − 1/Γ(1+μ)) / (2μ)` and `γ₂ = (1/Γ(1−μ) + 1/Γ(1+μ)) / 2`,
/// together with `1/Γ(1+μ)` and `1/Γ(1−μ)`.
pub(crate) fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let x2 = mu * mu;
    let mut odd = 0.0;
    let mut even = 0.0;
    // even = Σ c_{2j} μ^{2j}, odd = Σ c_{2j+1} μ^{2j}
    for (k, c) in RECIP_GAMMA_TAYLOR.iter().enumerate().rev() {
        if k % 2 == 1 {
            odd = odd * x2 + c;
        } else {
            even = even * x2 + c;
        }
    }
    let gam1 = -odd;
    let gam2 = even;
    let gampl = gam2 + mu * odd;
    let gammi = gam2 - mu * odd;
    (gam1, gam2, gampl, gammi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn known_values() {
        assert_eq!(gamma(1.0).unwrap().value, 1.0);
        let sqrt_pi = PI.sqrt();
        assert!(rel(gamma(0.5).unwrap().value, sqrt_pi) < 1e-14);
        assert!(rel(gamma(1.5).unwrap().value, sqrt_pi / 2.0) < 1e-14);
        assert!(rel(gamma(5.0).unwrap().value, 24.0) < 1e-14);
        assert!(rel(gamma(-0.5).unwrap().value, -2.0 * sqrt_pi) < 1e-14);
        // mpmath: gamma(0.1), gamma(1.9), gamma(-1.3), gamma(30.5)
        assert!(rel(gamma(0.1).unwrap().value, 9.513_507_698_668_73) < 1e-14);
        assert!(rel(gamma(1.9).unwrap().value, 0.961_765_831_907_387_4) < 1e-14);
        assert!(rel(gamma(-1.3).unwrap().value, 3.328_347_006_788_609) < 1e-13);
        assert!(rel(gamma(30.5).unwrap().value, 4.822_696_933_490_909e31) < 1e-13);
    }

    #[test]
    fn poles_and_overflow() {
        assert!(matches!(gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(gamma(-3.0), Err(Error::Domain(_))));
        assert!(matches!(gamma(200.0), Err(Error::Range(_))));
        assert!(gamma(171.0).unwrap().value.is_finite());
    }

    #[test]
    fn recurrence_holds() {
        for i in 1..200 {
            let x = 0.013 * i as f64;
            let lhs = gamma(x + 1.0).unwrap().value;
            let rhs = x * gamma(x).unwrap().value;
            assert!(rel(lhs, rhs) < 5e-14, "x = {x}");
        }
    }

    #[test]
    fn temme_gammas_match_direct_evaluation() {
        for i in -50..=50 {
            let mu = i as f64 / 100.0;
            let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
            let direct_pl = 1.0 / gamma(1.0 + mu).unwrap().value;
            let direct_mi = 1.0 / gamma(1.0 - mu).unwrap().value;
            assert!((gampl - direct_pl).abs() < 1e-15);
            assert!((gammi - direct_mi).abs() < 1e-15);
            assert!((gam2 - 0.5 * (direct_pl + direct_mi)).abs() < 1e-15);
            if mu.abs() > 0.1 {
                assert!((gam1 - (direct_mi - direct_pl) / (2.0 * mu)).abs() < 1e-13);
            }
        }
        // γ₁(0) = −γ_E
        assert!((temme_gammas(0.0).0 + 0.577_215_664_901_532_9).abs() < 1e-16);
    }
}
