//! The third-genus pair U1, U2 splitting F(±iξ, 1, iz) into the outgoing
//! and plane-wave parts, and the kernels G1, G2 behind them.
//!
//! With a = ±iξ (upper sign attraction):
//!   U2 = e^{iπa} U(a, 1, iz)
//!   U1 = e^{iπ(a−1)} e^{iz} U(1−a, 1, −iz)
//!   F(a, 1, iz) = U1/Γ(a) + U2/Γ(1−a)
//!   U1 = z^{a} e^{iz} e^{∓πξ/2} G1 / Γ(1−a)
//!   U2 = z^{−a} e^{∓πξ/2} G2 / Γ(a)

use super::gamma::{complex_gamma, recip_gamma};
use super::kummer::{kummer_m, OVERFLOW_GUARD};
use super::tricomi::{expm1_c, ln1p_c, AutoStrategy, TricomiStrategy};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_adaptive_points, integrate_semi_infinite, QuadratureConfig};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Sign of the potential. Attraction is the upper sign everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Attract,
    Repel,
}

impl Sign {
    /// +1 for attraction, −1 for repulsion.
    pub fn s(self) -> f64 {
        match self {
            Sign::Attract => 1.0,
            Sign::Repel => -1.0,
        }
    }

    /// The Coulomb parameter a = ±iξ.
    pub fn a(self, xi: f64) -> Complex64 {
        Complex64::new(0.0, self.s() * xi)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Attract => "attract",
            Sign::Repel => "repel",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "attract" | "attraction" | "+" | "+1" => Ok(Sign::Attract),
            "repel" | "repulsion" | "-" | "-1" => Ok(Sign::Repel),
            _ => Err(Error::DomainError(format!("unknown sign '{s}' (expected attract or repel)"))),
        }
    }
}

fn check(xi: f64, z: f64) -> Result<()> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::DomainError(format!("z must be positive and finite, got {z}")));
    }
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::DomainError(format!("xi must be positive and finite, got {xi}")));
    }
    Ok(())
}

/// U(1 ± iξ, 1, iz), the function whose modulus sets the scattered flux.
pub fn u_shifted(xi: f64, sign: Sign, z: f64) -> Result<Complex64> {
    u_shifted_with(&AutoStrategy::default(), xi, sign, z)
}

pub fn u_shifted_with(strategy: &dyn TricomiStrategy, xi: f64, sign: Sign, z: f64) -> Result<Complex64> {
    check(xi, z)?;
    strategy.eval(Complex64::new(1.0, sign.s() * xi), Complex64::new(0.0, z))
}

/// (U1, U2) at a = ±iξ, t = iz.
pub fn u1_u2(xi: f64, sign: Sign, z: f64) -> Result<(Complex64, Complex64)> {
    u1_u2_with(&AutoStrategy::default(), xi, sign, z)
}

pub fn u1_u2_with(strategy: &dyn TricomiStrategy, xi: f64, sign: Sign, z: f64) -> Result<(Complex64, Complex64)> {
    check(xi, z)?;
    let s = sign.s();
    let t = Complex64::new(0.0, z);
    let damp = (-s * PI * xi).exp();
    let u2 = strategy.eval(sign.a(xi), t)? * damp;
    // U(1−a, 1, −iz) is the conjugate of U(1 + isξ, 1, iz)
    let up = strategy.eval(Complex64::new(1.0, s * xi), t)?;
    let u1 = -up.conj() * t.exp() * damp;
    Ok((u1, u2))
}

/// F(a, 1, iz) for z > 0. Beyond the Kummer overflow guard it is rebuilt
/// from the connection formula
/// F = e^{iπa} U(a,1,iz)/Γ(1−a) + e^{iπ(a−1)} e^{iz} U(1−a,1,−iz)/Γ(a).
pub fn kummer_m_imaginary(a: Complex64, z: f64) -> Result<Complex64> {
    if !(z >= 0.0 && z.is_finite()) {
        return Err(Error::DomainError(format!("z must be nonnegative and finite, got {z}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let t = Complex64::new(0.0, z);
    if z <= OVERFLOW_GUARD {
        return kummer_m(a, one, t);
    }
    let i = Complex64::new(0.0, 1.0);
    let st = AutoStrategy::default();
    let first = (i * PI * a).exp() * st.eval(a, t)? * recip_gamma(one - a)?;
    // U(1−a, 1, −iz) = conj U(1 − ā, 1, iz)
    let u_back = st.eval(one - a.conj(), t)?.conj();
    let second = (i * PI * (a - 1.0) + t).exp() * u_back * recip_gamma(a)?;
    Ok(first + second)
}

/// G1 obtained from U1 through the linear relation.
pub fn g1_from_u1(xi: f64, sign: Sign, z: f64, u1: Complex64) -> Result<Complex64> {
    let a = sign.a(xi);
    let pre = (a * z.ln() + Complex64::new(0.0, z)).exp() * (-0.5 * sign.s() * PI * xi).exp();
    Ok(u1 * complex_gamma(1.0 - a)? / pre)
}

/// G2 obtained from U2 through the linear relation.
pub fn g2_from_u2(xi: f64, sign: Sign, z: f64, u2: Complex64) -> Result<Complex64> {
    let a = sign.a(xi);
    let pre = (-a * z.ln()).exp() * (-0.5 * sign.s() * PI * xi).exp();
    Ok(u2 * complex_gamma(a)? / pre)
}

/// U1 rebuilt from G1.
pub fn u1_from_g1(xi: f64, sign: Sign, z: f64, g1: Complex64) -> Result<Complex64> {
    let a = sign.a(xi);
    let pre = (a * z.ln() + Complex64::new(0.0, z)).exp() * (-0.5 * sign.s() * PI * xi).exp();
    Ok(pre * g1 / complex_gamma(1.0 - a)?)
}

/// U2 rebuilt from G2.
pub fn u2_from_g2(xi: f64, sign: Sign, z: f64, g2: Complex64) -> Result<Complex64> {
    let a = sign.a(xi);
    let pre = (-a * z.ln()).exp() * (-0.5 * sign.s() * PI * xi).exp();
    Ok(pre * g2 / complex_gamma(a)?)
}

/// log-scale lower cut for the u ∈ (0, 1] part of the kernels
const SIGMA_MIN: f64 = -40.0;

fn kernel_cfg() -> QuadratureConfig {
    QuadratureConfig::with_tol(1e-12, 1e-300)
}

/// σ-breakpoints for u = e^σ on (0, 1], refined near u = z where the G1
/// kernel peaks for small z.
fn sigma_points(z: f64) -> Vec<f64> {
    let mut p = vec![SIGMA_MIN, -20.0, -5.0];
    let lz = z.ln();
    if lz > -20.0 && lz < 0.0 {
        p.extend([lz - 2.0, lz, lz + 2.0]);
    }
    p.push(0.0);
    p.retain(|&x| (SIGMA_MIN..=0.0).contains(&x));
    p.sort_by(|a, b| a.partial_cmp(b).unwrap());
    p.dedup();
    p
}

/// G1(±iξ, iz) = ∫₀^∞ e^{−u} u^{−a} (1 − u/(iz))^{a} du / (iz − u) along the
/// real u axis. The pole at u = iz never touches the path.
pub fn g1(xi: f64, sign: Sign, z: f64) -> Result<Complex64> {
    check(xi, z)?;
    let a = sign.a(xi);
    let iz = Complex64::new(0.0, z);
    let kernel = move |u: f64| {
        let w = Complex64::new(u, 0.0);
        // 1 − u/(iz) = 1 + iu/z
        let lk = ln1p_c(Complex64::new(0.0, u / z));
        (-w - a * w.ln() + a * lk).exp() / (iz - w)
    };
    let cfg = kernel_cfg();
    let lower = integrate_adaptive_points(
        |sg: f64| {
            let u = sg.exp();
            kernel(u) * u
        },
        &sigma_points(z),
        &cfg,
    )?;
    let upper = integrate_semi_infinite(kernel, 1.0, &cfg)?;
    // ∫₀^ε u^{−a} du / (iz)
    let head = ((1.0 - a) * SIGMA_MIN).exp() / ((1.0 - a) * iz);
    Ok(lower.value + upper.value + head)
}

/// G2(±iξ, iz) = ∫₀^∞ e^{−u} u^{a−1} (1 + u/(iz))^{−a} du. The u^{a−1}
/// endpoint is split off: ∫₀¹ u^{a−1} du = 1/a analytically, the rest by
/// quadrature.
pub fn g2(xi: f64, sign: Sign, z: f64) -> Result<Complex64> {
    check(xi, z)?;
    let a = sign.a(xi);
    // 1 + u/(iz) = 1 − iu/z
    let body = move |u: f64| -> Complex64 { -u - a * ln1p_c(Complex64::new(0.0, -u / z)) };
    let cfg = kernel_cfg();
    let lower = integrate_adaptive_points(
        |sg: f64| {
            let u = sg.exp();
            // u^{a−1} (e^{body} − 1) du with du = u dσ
            (a * sg).exp() * expm1_c(body(u))
        },
        &sigma_points(z),
        &cfg,
    )?;
    let upper = integrate_semi_infinite(|u: f64| (body(u) + (a - 1.0) * u.ln()).exp(), 1.0, &cfg)?;
    Ok(lower.value + upper.value + 1.0 / a)
}
