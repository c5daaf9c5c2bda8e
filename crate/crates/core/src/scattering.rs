//! Differential cross-section at a finite observer distance, the Rutherford
//! reference, the small-angle law and the angular scales of the problem.
//!
//! Cross-sections here are per unit θ: they include the 2π azimuthal
//! integral and the sin θ Jacobian. Divide by 2π sin θ for per-steradian
//! values.

use crate::error::{Error, Result};
use crate::specfun::{u_shifted_with, AutoStrategy, Sign, TricomiStrategy};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Below this k·r the far-from-scatterer assumptions are doubtful.
pub const KR_WARNING: f64 = 1e3;
pub const KR_WARNING_LABEL: &str = "outside k r >> 1 regime";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoulombInteraction {
    pub xi: f64,
    pub sign: Sign,
    /// wavenumber, 1/length
    pub k: f64,
}

impl CoulombInteraction {
    pub fn new(xi: f64, sign: Sign, k: f64) -> Result<Self> {
        let ci = CoulombInteraction { xi, sign, k };
        ci.validate()?;
        Ok(ci)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.xi > 0.0 && self.xi.is_finite()) {
            return Err(Error::DomainError(format!("xi must be positive, got {}", self.xi)));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::DomainError(format!("k must be positive, got {}", self.k)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservationGeometry {
    pub r: f64,
    pub theta: f64,
    pub kr: f64,
    /// k r (1 − cos θ)
    pub z: f64,
    pub theta0: f64,
    /// θ/θ₀
    pub x: f64,
}

impl ObservationGeometry {
    pub fn new(k: f64, r: f64, theta: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::DomainError(format!("r must be positive, got {r}")));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::DomainError(format!("theta must lie in [0, pi], got {theta}")));
        }
        let theta0 = kinematic_angle(k, r)?;
        let kr = k * r;
        Ok(ObservationGeometry { r, theta, kr, z: z_of(kr, theta), theta0, x: theta / theta0 })
    }

    /// Geometry placed at x = θ/θ₀.
    pub fn from_x(k: f64, r: f64, x: f64) -> Result<Self> {
        let theta0 = kinematic_angle(k, r)?;
        Self::new(k, r, x * theta0)
    }

    /// Label for results computed below the k r ≫ 1 threshold.
    pub fn warning(&self) -> Option<&'static str> {
        (self.kr < KR_WARNING).then_some(KR_WARNING_LABEL)
    }
}

/// k r (1 − cos θ), written with sin² to keep small angles exact.
pub fn z_of(kr: f64, theta: f64) -> f64 {
    let s = (0.5 * theta).sin();
    2.0 * kr * s * s
}

/// θ₀ = sqrt(2/(k r)).
pub fn kinematic_angle(k: f64, r: f64) -> Result<f64> {
    if !(k > 0.0 && r > 0.0 && k.is_finite() && r.is_finite()) {
        return Err(Error::DomainError(format!("k and r must be positive, got k = {k}, r = {r}")));
    }
    Ok((2.0 / (k * r)).sqrt())
}

/// σ₁(θ) = 2πξ² e^{∓πξ} |U(1 ± iξ, 1, iz)|² r² sin θ, equivalently
/// 2ξ sinh(πξ) |G1|² r² sin θ.
pub fn differential_xs(ci: &CoulombInteraction, g: &ObservationGeometry) -> Result<f64> {
    differential_xs_with(&AutoStrategy::default(), ci, g)
}

pub fn differential_xs_with(
    strategy: &dyn TricomiStrategy,
    ci: &CoulombInteraction,
    g: &ObservationGeometry,
) -> Result<f64> {
    ci.validate()?;
    let sin = g.theta.sin();
    if g.theta == 0.0 || g.z == 0.0 {
        return Ok(0.0);
    }
    let u = u_shifted_with(strategy, ci.xi, ci.sign, g.z)?;
    let v = 2.0 * PI * ci.xi * ci.xi * (-ci.sign.s() * PI * ci.xi).exp() * u.norm_sqr() * g.r * g.r * sin;
    Ok(v.max(0.0))
}

/// Scattered to incident flux ratio j_sc/j₀ at the observation point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxDensity {
    pub j_over_j0: f64,
}

pub fn flux_density(ci: &CoulombInteraction, g: &ObservationGeometry) -> Result<FluxDensity> {
    ci.validate()?;
    if g.z == 0.0 {
        return Err(Error::SingularAngle("flux density is log-singular at theta = 0".into()));
    }
    let u = u_shifted_with(&AutoStrategy::default(), ci.xi, ci.sign, g.z)?;
    let j = ci.xi * ci.xi * (-ci.sign.s() * PI * ci.xi).exp() * u.norm_sqr();
    Ok(FluxDensity { j_over_j0: j })
}

/// (ξ/2k)² / sin⁴(θ/2) · 2π sin θ. Independent of the sign.
pub fn rutherford_xs(ci: &CoulombInteraction, theta: f64) -> Result<f64> {
    ci.validate()?;
    if !(theta > 0.0 && theta <= PI) {
        return Err(Error::SingularAngle(format!("Rutherford cross-section needs theta in (0, pi], got {theta}")));
    }
    let b = ci.xi / (2.0 * ci.k);
    let s2 = (0.5 * theta).sin().powi(2);
    Ok(b * b / (s2 * s2) * 2.0 * PI * theta.sin())
}

/// Leading near-zone term 8√2 ξ e^{∓πξ} sinh(πξ) x (ln x)² r^{3/2}/√k.
pub fn small_angle_xs(ci: &CoulombInteraction, g: &ObservationGeometry) -> Result<f64> {
    ci.validate()?;
    if g.x >= 1.0 {
        return Err(Error::DomainError(format!("small-angle law needs x < 1, got {}", g.x)));
    }
    if g.x == 0.0 {
        return Ok(0.0);
    }
    let lx = g.x.ln();
    let xi = ci.xi;
    let amp = 8.0 * 2f64.sqrt() * xi * (-ci.sign.s() * PI * xi).exp() * (PI * xi).sinh();
    Ok(amp * g.x * lx * lx * g.r.powf(1.5) / ci.k.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoneFlags {
    /// k r ≥ 10³
    pub wave_zone_ok: bool,
    /// k R_s²/r > 1
    pub kinematic_dominates_screening: bool,
    /// k a²/r < 1
    pub kinematic_dominates_packet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZoneReport {
    pub theta0: f64,
    /// a/r
    pub theta_int: f64,
    /// 1/(k R_s)
    pub theta_s: f64,
    /// δ = k a²/(2r), interference share of the flux
    pub interference_fraction: f64,
    pub flags: ZoneFlags,
}

pub fn zone_report(ci: &CoulombInteraction, r: f64, packet_width_a: f64, screening_rs: f64) -> Result<ZoneReport> {
    ci.validate()?;
    if !(packet_width_a >= 0.0 && screening_rs > 0.0) {
        return Err(Error::DomainError(format!(
            "packet width must be nonnegative and screening radius positive, got a = {packet_width_a}, Rs = {screening_rs}"
        )));
    }
    let k = ci.k;
    let theta0 = kinematic_angle(k, r)?;
    let a2 = packet_width_a * packet_width_a;
    Ok(ZoneReport {
        theta0,
        theta_int: packet_width_a / r,
        theta_s: 1.0 / (k * screening_rs),
        interference_fraction: k * a2 / (2.0 * r),
        flags: ZoneFlags {
            wave_zone_ok: k * r >= KR_WARNING,
            kinematic_dominates_screening: k * screening_rs * screening_rs / r > 1.0,
            kinematic_dominates_packet: k * a2 / r < 1.0,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta0_values() {
        assert!((kinematic_angle(2.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((kinematic_angle(1.0, 2e6).unwrap() - 1e-3).abs() < 1e-18);
        let a = kinematic_angle(3.0, 5.0).unwrap();
        let b = kinematic_angle(3.0, 20.0).unwrap();
        assert!((a / b - 2.0).abs() < 1e-15);
        assert!(kinematic_angle(0.0, 1.0).is_err());
    }

    #[test]
    fn zero_angle_is_zero() {
        let ci = CoulombInteraction::new(1.0, Sign::Attract, 1.0).unwrap();
        let g = ObservationGeometry::new(1.0, 1e6, 0.0).unwrap();
        assert_eq!(differential_xs(&ci, &g).unwrap(), 0.0);
        assert!(matches!(rutherford_xs(&ci, 0.0), Err(Error::SingularAngle(_))));
    }

    #[test]
    fn warning_below_threshold() {
        assert!(ObservationGeometry::new(1.0, 10.0, 0.1).unwrap().warning().is_some());
        assert!(ObservationGeometry::new(1.0, 1e4, 0.1).unwrap().warning().is_none());
    }
}
