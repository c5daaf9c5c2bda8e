//! Mobility models: the thermal average of the relaxation time with the
//! finite-distance transport cross-section (by quadrature, or frozen at
//! E = 3 k_B T), and the Conwell–Weisskopf closed form.

use super::constants::E_ESU;
use super::table::SigmaPrimeTable;
use super::{
    carrier_kinematics, environment, kinematic_validity, ln_transport_primes, mobility_to_practical,
    SemiconductorSample,
};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_adaptive_points, QuadratureConfig};
use crate::scattering::KR_WARNING;
use crate::strategy::{Named, Registry};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Thermal integral runs over x = E/(k_B T) ∈ [X_MIN, X_MAX]. Below X_MIN
/// the integrand is O(x²) and the cut part is under 1e-9 of the total.
pub const X_MIN: f64 = 1e-3;
pub const X_MAX: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evaluation {
    /// σ′ by quadrature at every energy
    Direct,
    /// σ′ from a per-sample interpolation table
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobilityOptions {
    pub evaluation: Evaluation,
    /// donors repel and acceptors attract instead of the reverse
    pub swap_signs: bool,
    pub table_nodes: usize,
    pub rel_tol: f64,
}

impl Default for MobilityOptions {
    fn default() -> Self {
        MobilityOptions { evaluation: Evaluation::Table, swap_signs: false, table_nodes: 121, rel_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MobilityMethod {
    Integral,
    Analytic,
}

impl MobilityMethod {
    pub fn name(self) -> &'static str {
        match self {
            MobilityMethod::Integral => "integral",
            MobilityMethod::Analytic => "analytic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobilityValidity {
    /// k R_s²/r at the thermal wavenumber
    pub kinematic_ratio: f64,
    pub kinematic_ok: bool,
    /// k r₁ and k r₂ at E = 3 k_B T
    pub kr1: f64,
    pub kr2: Option<f64>,
    /// k r ≥ 10³ for every kind (never the case for real samples)
    pub wave_zone_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobilityResult {
    /// cm²/(V·s)
    pub mu_nonasym: f64,
    /// cm²/(V·s); None unless Z1 = Z2
    pub mu_cw: Option<f64>,
    /// σ′ at E = 3 k_B T
    pub sigma_tr1_prime: f64,
    pub sigma_tr2_prime: Option<f64>,
    pub validity: MobilityValidity,
    pub method: MobilityMethod,
}

/// 2^{5/2} ε² (Z1 − K Z2) (k_B T)^{3/2} / (3 π^{3/2} e³ m*^{1/2} n), CGS.
fn prefactor(s: &SemiconductorSample) -> f64 {
    2f64.powf(2.5) * s.eps * s.eps * s.net_charge_factor() * s.kt().powf(1.5)
        / (3.0 * PI.powf(1.5) * E_ESU.powi(3) * s.m_eff().sqrt() * s.n)
}

/// ln(Z1² σ′₁ + K Z2² σ′₂)
fn ln_denominator(s: &SemiconductorSample, l1: f64, l2: Option<f64>) -> f64 {
    let a = 2.0 * (s.z1 as f64).ln() + l1;
    match l2 {
        Some(l2) if s.k > 0.0 => {
            let b = s.k.ln() + 2.0 * (s.z2 as f64).ln() + l2;
            let m = a.max(b);
            m + ((a - m).exp() + (b - m).exp()).ln()
        }
        _ => a,
    }
}

pub trait MobilityModel: Named + Send + Sync {
    /// μ in cm²/(V·s).
    fn mobility(&self, s: &SemiconductorSample, opts: &MobilityOptions) -> Result<f64>;
}

/// Maxwell average of the relaxation time by quadrature over x.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntegralModel;

impl Named for IntegralModel {
    fn name(&self) -> &'static str {
        "integral"
    }
}

impl MobilityModel for IntegralModel {
    fn mobility(&self, s: &SemiconductorSample, opts: &MobilityOptions) -> Result<f64> {
        s.validate()?;
        let kt = s.kt();
        let table = match opts.evaluation {
            Evaluation::Table => Some(SigmaPrimeTable::build(s, opts.swap_signs, X_MIN, X_MAX, opts.table_nodes)?),
            Evaluation::Direct => None,
        };
        let failure = std::cell::RefCell::new(None);
        let f = |x: f64| {
            let l = match &table {
                Some(t) => t.ln_primes(x),
                None => ln_transport_primes(s, x * kt, opts.swap_signs),
            };
            match l {
                Ok((l1, l2)) => x.powi(3) * (-x - ln_denominator(s, l1, l2)).exp(),
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        };
        let cfg = QuadratureConfig::with_tol(opts.rel_tol, 1e-300);
        let r = integrate_adaptive_points(f, &[X_MIN, 0.01, 0.1, 1.0, 3.0, 10.0, 20.0, X_MAX], &cfg);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let v = r?.value;
        if !(v > 0.0) {
            return Err(Error::IntegrandUnderflow(format!("thermal integral is {v}")));
        }
        Ok(mobility_to_practical(prefactor(s) * v))
    }
}

/// σ′ frozen at E = 3 k_B T, where x³e^{−x} peaks.
#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyticModel;

impl Named for AnalyticModel {
    fn name(&self) -> &'static str {
        "analytic"
    }
}

impl MobilityModel for AnalyticModel {
    fn mobility(&self, s: &SemiconductorSample, opts: &MobilityOptions) -> Result<f64> {
        s.validate()?;
        let (l1, l2) = ln_transport_primes(s, 3.0 * s.kt(), opts.swap_signs)?;
        // ∫x³e^{−x} dx = 6
        Ok(mobility_to_practical(prefactor(s) * 6.0 * (-ln_denominator(s, l1, l2)).exp()))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ConwellWeisskopfModel;

impl Named for ConwellWeisskopfModel {
    fn name(&self) -> &'static str {
        "conwell-weisskopf"
    }
}

impl MobilityModel for ConwellWeisskopfModel {
    fn mobility(&self, s: &SemiconductorSample, _opts: &MobilityOptions) -> Result<f64> {
        mobility_cw(s)
    }
}

pub fn mobility_registry() -> Registry<dyn MobilityModel> {
    let mut r: Registry<dyn MobilityModel> = Registry::new("mobility model");
    r.register(Arc::new(IntegralModel)).register(Arc::new(AnalyticModel)).register(Arc::new(ConwellWeisskopfModel));
    r
}

/// μ_CW = 2^{7/2} ε² (1−K) (k_B T)^{3/2} /
///   (π^{3/2} e³ m*^{1/2} n (1+K) ln(1 + (3 ε k_B T (1−K)^{1/3} / (Z e² (n(1+K))^{1/3}))²)),
/// in cm²/(V·s). Needs Z1 = Z2.
pub fn mobility_cw(s: &SemiconductorSample) -> Result<f64> {
    s.validate()?;
    if s.z1 != s.z2 {
        return Err(Error::DomainError(format!("Conwell-Weisskopf needs Z1 = Z2, got {} and {}", s.z1, s.z2)));
    }
    let z = s.z1 as f64;
    let k = s.k;
    let e2 = E_ESU * E_ESU;
    let arg = 3.0 * s.eps * s.kt() * (1.0 - k).cbrt() / (z * e2 * (s.n * (1.0 + k)).cbrt());
    let log = (arg * arg).ln_1p();
    let mu = 2f64.powf(3.5) * s.eps * s.eps * (1.0 - k) * s.kt().powf(1.5)
        / (PI.powf(1.5) * E_ESU.powi(3) * s.m_eff().sqrt() * s.n * (1.0 + k) * log);
    Ok(mobility_to_practical(mu))
}

pub fn mobility_integral(s: &SemiconductorSample, opts: &MobilityOptions) -> Result<MobilityResult> {
    mobility(s, MobilityMethod::Integral, opts)
}

pub fn mobility_analytic(s: &SemiconductorSample, opts: &MobilityOptions) -> Result<MobilityResult> {
    mobility(s, MobilityMethod::Analytic, opts)
}

/// Full result: μ by the chosen method, μ_CW when defined, σ′ at the
/// thermal peak and the validity flags.
pub fn mobility(s: &SemiconductorSample, method: MobilityMethod, opts: &MobilityOptions) -> Result<MobilityResult> {
    s.validate()?;
    let mu = mobility_registry().get(method.name())?.mobility(s, opts)?;
    let e3 = 3.0 * s.kt();
    let (l1, l2) = ln_transport_primes(s, e3, opts.swap_signs)?;
    let env = environment(s)?;
    let kin = carrier_kinematics(s, e3)?;
    let kv = kinematic_validity(s)?;
    let kr1 = kin.k * env.r1;
    let kr2 = (env.n2 > 0.0).then_some(kin.k * env.r2);
    let validity = MobilityValidity {
        kinematic_ratio: kv.ratio,
        kinematic_ok: kv.valid,
        kr1,
        kr2,
        wave_zone_ok: kr1 >= KR_WARNING && kr2.is_none_or(|k| k >= KR_WARNING),
    };
    Ok(MobilityResult {
        mu_nonasym: mu,
        mu_cw: if s.z1 == s.z2 { Some(mobility_cw(s)?) } else { None },
        sigma_tr1_prime: l1.exp(),
        sigma_tr2_prime: l2.map(f64::exp),
        validity,
        method,
    })
}
