//! Impurity-limited carrier mobility in an extrinsic semiconductor, built on
//! the finite-distance transport cross-section, with the Conwell–Weisskopf
//! formula as the baseline. Gaussian-CGS throughout; mobilities leave in
//! cm²/(V·s).

mod mobility;
mod table;

pub use mobility::{
    mobility, mobility_analytic, mobility_cw, mobility_integral, mobility_registry, AnalyticModel,
    ConwellWeisskopfModel, Evaluation, IntegralModel, MobilityMethod, MobilityModel, MobilityOptions, MobilityResult,
    MobilityValidity, X_MAX, X_MIN,
};
pub use table::SigmaPrimeTable;

use crate::error::{Error, Result};
use crate::integralxs::ln_sigma_tr_prime;
use crate::Sign;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Physical constants, CGS.
pub mod constants {
    /// elementary charge, esu
    pub const E_ESU: f64 = 4.80320425e-10;
    /// erg·s
    pub const HBAR: f64 = 1.054571817e-27;
    /// electron mass, g
    pub const M0: f64 = 9.1093837e-28;
    /// erg/K
    pub const KB: f64 = 1.380649e-16;
    /// volts per statvolt
    pub const STATVOLT: f64 = 299.792458;
}
use constants::*;

/// cm²/(statV·s) → cm²/(V·s)
pub fn mobility_to_practical(mu_cgs: f64) -> f64 {
    mu_cgs / STATVOLT
}

/// cm²/(V·s) → cm²/(statV·s)
pub fn mobility_from_practical(mu: f64) -> f64 {
    mu * STATVOLT
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemiconductorSample {
    /// temperature, K
    #[serde(rename = "T")]
    pub t: f64,
    /// net carrier concentration, cm⁻³
    pub n: f64,
    /// compensation n₂/n₁
    #[serde(rename = "K")]
    pub k: f64,
    /// static dielectric constant
    pub eps: f64,
    /// m*/m₀
    pub m_eff_ratio: f64,
    #[serde(rename = "Z1")]
    pub z1: u32,
    #[serde(rename = "Z2")]
    pub z2: u32,
}

impl SemiconductorSample {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::DomainError(what.to_string()));
        if !(self.t > 0.0 && self.t.is_finite()) {
            return bad(&format!("T must be positive, got {}", self.t));
        }
        if !(self.n > 0.0 && self.n.is_finite()) {
            return bad(&format!("n must be positive, got {}", self.n));
        }
        if !(0.0..1.0).contains(&self.k) {
            return bad(&format!("K must lie in [0, 1), got {}", self.k));
        }
        if !(self.eps >= 1.0 && self.eps.is_finite()) {
            return bad(&format!("eps must be at least 1, got {}", self.eps));
        }
        if !(self.m_eff_ratio > 0.0 && self.m_eff_ratio.is_finite()) {
            return bad(&format!("m_eff_ratio must be positive, got {}", self.m_eff_ratio));
        }
        if self.z1 < 1 || self.z2 < 1 {
            return bad(&format!("Z1 and Z2 must be at least 1, got {} and {}", self.z1, self.z2));
        }
        let d = self.z1 as f64 - self.k * self.z2 as f64;
        if d <= 0.0 {
            return Err(Error::DegenerateCompensation(d));
        }
        Ok(())
    }

    pub fn m_eff(&self) -> f64 {
        self.m_eff_ratio * M0
    }

    pub fn kt(&self) -> f64 {
        KB * self.t
    }

    /// Z1 − K Z2
    pub fn net_charge_factor(&self) -> f64 {
        self.z1 as f64 - self.k * self.z2 as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringEnvironment {
    /// donor concentration, cm⁻³
    pub n1: f64,
    /// acceptor concentration, cm⁻³
    pub n2: f64,
    /// half mean donor spacing, cm
    pub r1: f64,
    /// half mean acceptor spacing, cm (infinite without acceptors)
    pub r2: f64,
    /// Debye radius, cm
    pub rs: f64,
}

pub fn environment(s: &SemiconductorSample) -> Result<ScatteringEnvironment> {
    s.validate()?;
    let d = s.net_charge_factor();
    let n1 = s.n / d;
    let n2 = s.n * s.k / d;
    let half_spacing = |c: f64| if c > 0.0 { 0.5 * c.powf(-1.0 / 3.0) } else { f64::INFINITY };
    // free carriers screen; at low T their density is the net n
    let rs = (s.eps * s.kt() / (4.0 * PI * E_ESU * E_ESU * s.n)).sqrt();
    Ok(ScatteringEnvironment { n1, n2, r1: half_spacing(n1), r2: half_spacing(n2), rs })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicValidity {
    /// k R_s²/r at the thermal wavenumber sqrt(3 m* k_B T)/ħ with r = n^{−1/3}
    pub ratio: f64,
    pub valid: bool,
}

/// ε (3 m*)^{1/2} (k_B T)^{3/2} / (4π e² ħ n^{2/3}) and whether it exceeds 1.
pub fn kinematic_validity(s: &SemiconductorSample) -> Result<KinematicValidity> {
    s.validate()?;
    let ratio =
        s.eps * (3.0 * s.m_eff()).sqrt() * s.kt().powf(1.5) / (4.0 * PI * E_ESU * E_ESU * HBAR * s.n.powf(2.0 / 3.0));
    Ok(KinematicValidity { ratio, valid: ratio > 1.0 })
}

/// Carrier speed, wavenumber and the two Coulomb parameters at energy E.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarrierKinematics {
    /// cm/s
    pub v: f64,
    /// 1/cm
    pub k: f64,
    pub xi1: f64,
    pub xi2: f64,
}

pub fn carrier_kinematics(s: &SemiconductorSample, energy: f64) -> Result<CarrierKinematics> {
    s.validate()?;
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(Error::DomainError(format!("carrier energy must be positive, got {energy}")));
    }
    let m = s.m_eff();
    let v = (2.0 * energy / m).sqrt();
    let xi = |z: u32| z as f64 * E_ESU * E_ESU / (s.eps * HBAR * v);
    Ok(CarrierKinematics { v, k: m * v / HBAR, xi1: xi(s.z1), xi2: xi(s.z2) })
}

/// Which potential sign each impurity kind presents to the carrier.
/// Standard: donors attract, acceptors repel.
pub(crate) fn species_signs(swap: bool) -> (Sign, Sign) {
    if swap {
        (Sign::Repel, Sign::Attract)
    } else {
        (Sign::Attract, Sign::Repel)
    }
}

/// ln σ′ for donors and (if present) acceptors at energy E.
pub(crate) fn ln_transport_primes(s: &SemiconductorSample, energy: f64, swap: bool) -> Result<(f64, Option<f64>)> {
    let env = environment(s)?;
    let kin = carrier_kinematics(s, energy)?;
    let (s1, s2) = species_signs(swap);
    let l1 = ln_sigma_tr_prime(kin.xi1, s1, kin.k * env.r1)?;
    let l2 = if env.n2 > 0.0 { Some(ln_sigma_tr_prime(kin.xi2, s2, kin.k * env.r2)?) } else { None };
    Ok((l1, l2))
}

/// (σ′₁, σ′₂) at carrier energy E (erg), donors attracting and acceptors
/// repelling; σ′₂ is None when K = 0. Always the direct integral, since
/// k r is small here.
pub fn transport_primes(s: &SemiconductorSample, energy: f64) -> Result<(f64, Option<f64>)> {
    let (l1, l2) = ln_transport_primes(s, energy, false)?;
    Ok((l1.exp(), l2.map(f64::exp)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig6(n: f64) -> SemiconductorSample {
        SemiconductorSample { t: 78.0, n, k: 0.15, eps: 10.0, m_eff_ratio: 0.2, z1: 1, z2: 1 }
    }

    #[test]
    fn degenerate_compensation() {
        let s = SemiconductorSample { z1: 1, z2: 2, k: 0.5, ..fig6(1e16) };
        assert!(matches!(environment(&s), Err(Error::DegenerateCompensation(_))));
    }

    #[test]
    fn kinematic_ratio_at_reference_point() {
        let v = kinematic_validity(&fig6(1e15)).unwrap();
        assert!(v.valid && (v.ratio - 8.55).abs() < 0.05, "{v:?}");
    }
}
