//! Scattering-operator quantities: the forward amplitude A, the kernel f̂,
//! the kernel's solid-angle integral, and the flux balance that plays the
//! role of the optical theorem for the Coulomb field.

use crate::error::{Error, Result};
use crate::integralxs::{sigma_total, CrossSectionValue};
use crate::quadrature::{integrate_adaptive_points, oscillatory_registry, QuadratureConfig, QuadratureResult};
use crate::scattering::CoulombInteraction;
use crate::specfun::{
    complex_digamma, complex_gamma, kummer_m, kummer_m_imaginary, u_shifted, AutoStrategy, Sign, TricomiStrategy,
    OVERFLOW_GUARD,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::f64::consts::PI;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn check_xi(xi: f64) -> Result<()> {
    if !(xi > 0.0 && xi <= 5.0) {
        return Err(Error::DomainError(format!("xi must lie in (0, 5], got {xi}")));
    }
    Ok(())
}

/// A = i e^{∓πξ/2} ∫₀^∞ e^{−iz} U(±iξ, 1, iz) dz with the named oscillatory
/// method ("contour", "acceleration" or "abel").
pub fn forward_amplitude_with(
    xi: f64,
    sign: Sign,
    method: &str,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult<Complex64>> {
    check_xi(xi)?;
    let a = sign.a(xi);
    let st = AutoStrategy::default();
    let failure = RefCell::new(None);
    let envelope = |z: Complex64| match st.eval(a, I * z) {
        Ok(u) => u,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            Complex64::new(0.0, 0.0)
        }
    };
    let r = oscillatory_registry().get(method)?.integrate(&envelope, 1.0, 0.0, cfg);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let r = r?;
    let pre = I * (-0.5 * sign.s() * PI * xi).exp();
    Ok(QuadratureResult { value: pre * r.value, abs_error: pre.norm() * r.abs_error, ..r })
}

pub fn forward_amplitude(xi: f64, sign: Sign) -> Result<Complex64> {
    Ok(forward_amplitude_with(xi, sign, "contour", &QuadratureConfig::with_tol(1e-11, 1e-14))?.value)
}

/// f̂ at z = kr(1 − cos Θ):
/// −(i kr Γ(1∓iξ) / (2π Γ(±iξ))) e^{∓πξ/2} U(1∓iξ, 1, −iz).
pub fn scattering_kernel_z(xi: f64, sign: Sign, kr: f64, z: f64) -> Result<Complex64> {
    if !(xi > 0.0 && kr > 0.0) {
        return Err(Error::DomainError(format!("xi and kr must be positive, got {xi}, {kr}")));
    }
    if z == 0.0 {
        return Err(Error::CoincidentDirections);
    }
    let a = sign.a(xi);
    let ratio = complex_gamma(1.0 - a)? / complex_gamma(a)?;
    // U(1 − a, 1, −iz) = conj U(1 + isξ, 1, iz)
    let u = u_shifted(xi, sign, z)?.conj();
    Ok(-I * kr * ratio / (2.0 * PI) * (-0.5 * sign.s() * PI * xi).exp() * u)
}

pub fn scattering_kernel(xi: f64, sign: Sign, kr: f64, cos_theta: f64) -> Result<Complex64> {
    if cos_theta == 1.0 {
        return Err(Error::CoincidentDirections);
    }
    if !(-1.0..1.0).contains(&cos_theta) {
        return Err(Error::DomainError(format!("cos(Theta) must lie in [-1, 1), got {cos_theta}")));
    }
    scattering_kernel_z(xi, sign, kr, kr * (1.0 - cos_theta))
}

/// ∫ |f̂|² dΩ′ over the sphere, done in ln z with z = kr(1 − cos Θ).
pub fn kernel_solid_angle_integral(xi: f64, sign: Sign, kr: f64) -> Result<f64> {
    let cfg = QuadratureConfig::with_tol(1e-11, 1e-300);
    let failure = RefCell::new(None);
    // dΩ = 2π d cos Θ = 2π dz / kr = 2π z dσ / kr
    let f = |s: f64| {
        let z = s.exp();
        match scattering_kernel_z(xi, sign, kr, z) {
            Ok(v) => 2.0 * PI * v.norm_sqr() * z / kr,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let hi = (2.0 * kr).ln();
    let mut points: Vec<f64> = (-23..=(hi / 2.0).floor() as i32).map(|k| 2.0 * k as f64).collect();
    points.push(hi);
    points.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let r = integrate_adaptive_points(f, &points, &cfg);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r?.value)
}

/// (2π/k)² ∫ |f̂|² dΩ′: the kernel integral in cross-section units.
pub fn kernel_total_xs(ci: &CoulombInteraction, r: f64) -> Result<f64> {
    ci.validate()?;
    let s = kernel_solid_angle_integral(ci.xi, ci.sign, ci.k * r)?;
    Ok((2.0 * PI / ci.k).powi(2) * s)
}

/// σ_tot / r² = (2π/kr) ξ² I±.
pub fn flux_ratio(ci: &CoulombInteraction, r: f64) -> Result<f64> {
    let CrossSectionValue { value, .. } = sigma_total(ci, r)?;
    Ok(value / (r * r))
}

/// Both sides of the flux balance
/// ∫₀^{2kr} |F|² dz = (1/kr) ∫₀^{2kr} |F|² z dz + (ξ/kr) ∫₀^{2kr} z Im[F* F(1+iξ, 2, iz)] dz
/// with F = F(iξ, 1, iz), by direct quadrature and by the large-kr forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxBalance {
    pub xi: f64,
    pub kr: f64,
    pub j1_num: f64,
    pub j2_num: f64,
    pub j3_num: f64,
    pub j1_asym: f64,
    pub j2_asym: f64,
    pub j3_asym: f64,
    /// |J1 − J2 − J3| / J1 from the quadratures
    pub residual: f64,
    /// max_i |J_i,num − J_i,asym| / (2kr·c), c = e^{−πξ} sinh(πξ)/(πξ)
    pub asymptotic_residual: f64,
    /// Re{Γ(1+iξ) e^{−2ikr − 2iξ ln 2kr} / Γ(−iξ)}
    pub oscillating: f64,
}

/// Large-kr forms (J1, J2, J3) and the oscillating term, for signed ξ.
pub fn flux_asymptotics(xs: f64, kr: f64) -> Result<(f64, f64, f64, f64)> {
    let c = leading_coefficient(xs);
    let l = (2.0 * kr).ln();
    let g = complex_gamma(Complex64::new(1.0, xs))? / complex_gamma(Complex64::new(0.0, -xs))?;
    let osc = (g * (-I * (2.0 * kr + 2.0 * xs * l)).exp()).re;
    let psi = complex_digamma(Complex64::new(1.0, xs))?.re;
    let x2 = xs * xs;
    let j1 = c * (2.0 * kr - (x2 + osc) / kr);
    let j2 = c * (2.0 * kr + 2.0 / kr * (x2 * (-0.5 - psi + l) - osc));
    let j3 = -2.0 / kr * c * (x2 * (-psi + l) - 0.5 * osc);
    Ok((j1, j2, j3, osc))
}

/// c = e^{−πξ} sinh(πξ)/(πξ), the density of |F|² far from the origin.
pub fn leading_coefficient(xs: f64) -> f64 {
    let p = PI * xs;
    (-p).exp() * p.sinh() / p
}

/// F(a, 2, iz) from the contiguous relation when z is beyond the guard.
fn kummer_b2(a: Complex64, z: f64) -> Result<Complex64> {
    let t = Complex64::new(0.0, z);
    if z <= OVERFLOW_GUARD {
        return kummer_m(a, Complex64::new(2.0, 0.0), t);
    }
    // F(α+1, 2, t) = (1/t)[F(α+1, 1, t) − F(α, 1, t)]
    Ok((kummer_m_imaginary(a, z)? - kummer_m_imaginary(a - 1.0, z)?) / t)
}

/// The attractive balance (the case the large-kr forms are written for).
pub fn flux_balance(xi: f64, kr: f64) -> Result<FluxBalance> {
    flux_balance_signed(xi, Sign::Attract, kr)
}

/// Repulsion is experimental: ξ → −ξ in F and in the large-kr forms.
pub fn flux_balance_signed(xi: f64, sign: Sign, kr: f64) -> Result<FluxBalance> {
    check_xi(xi)?;
    if !(kr >= 100.0 && kr.is_finite()) {
        return Err(Error::DomainError(format!("flux balance needs kr >= 100, got {kr}")));
    }
    let xs = sign.s() * xi;
    let a = Complex64::new(0.0, xs);
    let cfg = QuadratureConfig::with_tol(1e-13, 1e-300);
    let zmax = 2.0 * kr;
    // one breakpoint per period of the e^{iz} beat
    let n = (zmax / (2.0 * PI)).ceil().max(1.0) as usize;
    let points: Vec<f64> = (0..=n).map(|k| zmax * k as f64 / n as f64).collect();
    let failure = RefCell::new(None);
    let eval = |z: f64| -> (f64, f64) {
        let r = (|| -> Result<(f64, f64)> {
            let f = kummer_m_imaginary(a, z)?;
            let f1 = kummer_b2(a + 1.0, z)?;
            Ok((f.norm_sqr(), (f.conj() * f1).im))
        })();
        r.unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e);
            (0.0, 0.0)
        })
    };
    // J1 and J2 share |F|²; pack them as one complex integrand
    let r12 = integrate_adaptive_points(
        |z: f64| {
            let (m, _) = eval(z);
            Complex64::new(m, m * z)
        },
        &points,
        &cfg,
    );
    let r3 = integrate_adaptive_points(|z: f64| z * eval(z).1, &points, &cfg);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let r12 = r12?.value;
    let j1 = r12.re;
    let j2 = r12.im / kr;
    let j3 = xs / kr * r3?.value;
    let (a1, a2, a3, osc) = flux_asymptotics(xs, kr)?;
    let scale = 2.0 * kr * leading_coefficient(xs);
    let asymptotic_residual = [(j1 - a1), (j2 - a2), (j3 - a3)].iter().map(|d| d.abs()).fold(0.0, f64::max) / scale;
    Ok(FluxBalance {
        xi,
        kr,
        j1_num: j1,
        j2_num: j2,
        j3_num: j3,
        j1_asym: a1,
        j2_asym: a2,
        j3_asym: a3,
        residual: (j1 - j2 - j3).abs() / j1,
        asymptotic_residual,
        oscillating: osc,
    })
}
