//! Cone metric `ds² = dr² + α²r²dθ²` and the curvature data it induces on
//! the radial problem.
//!
//! Two conventions appear for the geometric potential. The physical
//! potential carries a `1/2M` prefactor,
//!
//! ```text
//! V_s(r) = (1/2M) [ -(1-α²)/(4α²r²) + ((1-α)/α) δ(r)/r ]
//! ```
//!
//! while the reduced radial operator `h = h₀ + ((1-α)/α) δ(r)/r` has the
//! `2M` absorbed into `k² = 2ME`. [`ConeGeometry::geometric_potential_regular_coefficient`]
//! returns the first (energy units), [`ConeGeometry::geometric_potential_delta_coefficient`]
//! the second (dimensionless, as it enters `h`).

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeGeometry {
    alpha: f64,
    mass: f64,
}

impl ConeGeometry {
    /// Builds a cone with deficit parameter `alpha ∈ (0, 1]` and particle mass `mass > 0`.
    pub fn new(alpha: f64, mass: f64) -> Result<Self> {
        validate_alpha(alpha)?;
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::Domain(format!("mass must be positive, got {mass}")));
        }
        Ok(Self { alpha, mass })
    }

    /// Flat plane with unit mass.
    pub fn flat() -> Self {
        Self { alpha: 1.0, mass: 1.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn is_flat(&self) -> bool {
        self.alpha == 1.0
    }

    /// Coefficient `(1-α)/α` of `δ(r)/r` in the Gaussian curvature.
    pub fn gaussian_curvature_coefficient(&self) -> f64 {
        (1.0 - self.alpha) / self.alpha
    }

    /// Mean curvature `√(1-α²)/(2αr)` at distance `r` from the apex.
    pub fn mean_curvature(&self, r: f64) -> Result<f64> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Domain(format!("radius must be positive, got {r}")));
        }
        Ok((1.0 - self.alpha * self.alpha).sqrt() / (2.0 * self.alpha * r))
    }

    /// Coefficient `c` of the regular part `c/r²` of the geometric potential,
    /// `c = -(1-α²)/(8Mα²)`. Includes the `1/2M` prefactor.
    pub fn geometric_potential_regular_coefficient(&self) -> f64 {
        let a2 = self.alpha * self.alpha;
        -(1.0 - a2) / (8.0 * self.mass * a2)
    }

    /// Strength `(1-α)/α` of the `δ(r)/r` term as it appears in the reduced
    /// radial operator (no `1/2M`).
    pub fn geometric_potential_delta_coefficient(&self) -> f64 {
        (1.0 - self.alpha) / self.alpha
    }
}

pub(crate) fn validate_alpha(alpha: f64) -> Result<()> {
    if alpha.is_nan() || alpha <= 0.0 {
        return Err(Error::Domain(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    if alpha > 1.0 {
        return Err(Error::AntiCone(alpha));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(alpha: f64) -> ConeGeometry {
        ConeGeometry::new(alpha, 1.0).unwrap()
    }

    #[test]
    fn construction_rejects_bad_parameters() {
        assert!(matches!(ConeGeometry::new(1.5, 1.0), Err(Error::AntiCone(_))));
        assert!(matches!(ConeGeometry::new(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(ConeGeometry::new(-0.3, 1.0), Err(Error::Domain(_))));
        assert!(matches!(ConeGeometry::new(f64::NAN, 1.0), Err(Error::Domain(_))));
        assert!(matches!(ConeGeometry::new(0.5, 0.0), Err(Error::Domain(_))));
        assert!(ConeGeometry::new(1.0, 2.0).is_ok());
    }

    #[test]
    fn gaussian_curvature_values() {
        assert_eq!(cone(1.0).gaussian_curvature_coefficient(), 0.0);
        assert_eq!(cone(0.5).gaussian_curvature_coefficient(), 1.0);
        assert!((cone(0.8).gaussian_curvature_coefficient() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn mean_curvature_values() {
        assert_eq!(cone(1.0).mean_curvature(2.0).unwrap(), 0.0);
        assert!((cone(0.6).mean_curvature(1.0).unwrap() - 0.8 / 1.2).abs() < 1e-15);
        assert!((cone(0.5).mean_curvature(2.0).unwrap() - 0.75f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(cone(0.5).mean_curvature(0.0).is_err());
        assert!(cone(0.5).mean_curvature(-1.0).is_err());
    }

    #[test]
    fn geometric_potential_values() {
        assert_eq!(
            ConeGeometry::new(1.0, 3.0)
                .unwrap()
                .geometric_potential_regular_coefficient(),
            0.0
        );
        assert!((cone(0.5).geometric_potential_regular_coefficient() + 0.375).abs() < 1e-15);
        let g = ConeGeometry::new(0.8, 0.5).unwrap();
        assert!((g.geometric_potential_regular_coefficient() + 0.140625).abs() < 1e-15);

        assert_eq!(cone(1.0).geometric_potential_delta_coefficient(), 0.0);
        assert_eq!(cone(0.5).geometric_potential_delta_coefficient(), 1.0);
        assert_eq!(cone(0.25).geometric_potential_delta_coefficient(), 3.0);
    }

    #[test]
    fn regular_coefficient_is_monotone_and_signs_hold() {
        let mut prev = f64::NEG_INFINITY;
        for i in 1..=1000 {
            let g = cone(i as f64 / 1000.0);
            let c = g.geometric_potential_regular_coefficient();
            assert!(c > prev);
            assert!(c <= 0.0);
            assert!(g.geometric_potential_delta_coefficient() >= 0.0);
            assert_eq!(
                g.gaussian_curvature_coefficient(),
                g.geometric_potential_delta_coefficient()
            );
            prev = c;
        }
        assert_eq!(prev, 0.0);
    }
}
