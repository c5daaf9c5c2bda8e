//! Total and transport cross-sections at a finite observer distance and the
//! universal functions behind them.
//!
//! Everything is written in terms of w(z) = e^{∓πξ} z² |U(1 ± iξ, 1, iz)|²,
//! which tends to 1 as z → ∞ and is free of the e^{±πξ} scale:
//!   I± = ∫₀^∞ w/z² dz,   σ_tot = (2πr/k) ξ² I±
//!   σ_tr′(kr) = ∫₀^{2kr} w/z dz,   σ_tr = 2π (ξ²/k²) σ_tr′
//! Beyond z_cut, w is replaced by its asymptotic series |S(z)|² and
//! integrated term by term.

use crate::error::{Error, Result};
use crate::quadrature::{integrate_adaptive_points, QuadratureConfig};
use crate::scattering::CoulombInteraction;
use crate::specfun::{u_shifted_with, AutoStrategy, Sign, TricomiStrategy};
use crate::strategy::{Named, Registry};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

/// ln z below which the integrands are dropped (z (ln z)² ≈ 1e-17 there).
const LN_Z_MIN: f64 = -46.0;
/// Terms kept in the |S|² expansion of the analytic tail.
const TAIL_TERMS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralConfig {
    /// Largest ξ accepted by the universal functions.
    pub xi_max: f64,
    /// z_cut = max(z_cut_min, z_cut_xi2 · ξ²)
    pub z_cut_min: f64,
    pub z_cut_xi2: f64,
    pub quad: QuadratureConfig,
}

impl Default for IntegralConfig {
    fn default() -> Self {
        IntegralConfig { xi_max: 5.0, z_cut_min: 1e3, z_cut_xi2: 50.0, quad: QuadratureConfig::with_tol(1e-11, 1e-300) }
    }
}

impl IntegralConfig {
    pub fn z_cut(&self, xi: f64) -> f64 {
        self.z_cut_min.max(self.z_cut_xi2 * xi * xi)
    }

    fn check_xi(&self, xi: f64) -> Result<()> {
        if !(xi > 0.0 && xi <= self.xi_max) {
            return Err(Error::DomainError(format!("xi must lie in (0, {}], got {xi}", self.xi_max)));
        }
        Ok(())
    }
}

/// w(z) = e^{∓πξ} z² |U(1 ± iξ, 1, iz)|².
pub fn scaled_modulus(strategy: &dyn TricomiStrategy, xi: f64, sign: Sign, z: f64) -> Result<f64> {
    scaled_modulus_shifted(strategy, xi, sign, z, 0.0)
}

/// w(z) e^{−shift}.
fn scaled_modulus_shifted(strategy: &dyn TricomiStrategy, xi: f64, sign: Sign, z: f64, shift: f64) -> Result<f64> {
    let u = u_shifted_with(strategy, xi, sign, z)?;
    // e^{∓πξ/2} z |U| first, so large ξ does not overflow the square
    let m = (-0.5 * (sign.s() * PI * xi + shift)).exp() * z * u.norm();
    Ok(m * m)
}

/// Coefficients c_m of |S(z)|² = Σ c_m z^{−m}, S(z) = Σ ((a)_k)²/k! (i/z)^k.
fn tail_coefficients(xi: f64, sign: Sign) -> Vec<f64> {
    let a = Complex64::new(1.0, sign.s() * xi);
    let mut s = Vec::with_capacity(TAIL_TERMS);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 0..TAIL_TERMS {
        s.push(term);
        let kf = k as f64;
        term = term * (a + kf) * (a + kf) * Complex64::new(0.0, 1.0) / (kf + 1.0);
    }
    (0..TAIL_TERMS).map(|m| (0..=m).map(|j| (s[j] * s[m - j].conj()).re).sum()).collect()
}

/// ∫_{zc}^∞ |S|²/z² dz.
fn total_tail(xi: f64, sign: Sign, zc: f64) -> f64 {
    tail_coefficients(xi, sign).iter().enumerate().map(|(m, c)| c * zc.powi(-(m as i32) - 1) / (m as f64 + 1.0)).sum()
}

/// ∫_{zc}^∞ (|S|² − 1)/z dz.
fn transport_tail(xi: f64, sign: Sign, zc: f64) -> f64 {
    tail_coefficients(xi, sign).iter().enumerate().skip(1).map(|(m, c)| c * zc.powi(-(m as i32)) / m as f64).sum()
}

/// Breakpoints in σ = ln z on [lo, hi]: every two units plus the regime
/// switch points of U.
fn log_points(lo: f64, hi: f64) -> Vec<f64> {
    let mut p = vec![lo, hi];
    let mut s = (lo / 2.0).ceil() * 2.0;
    while s < hi {
        if s > lo {
            p.push(s);
        }
        s += 2.0;
    }
    for extra in [2f64.ln(), 30f64.ln()] {
        if extra > lo && extra < hi {
            p.push(extra);
        }
    }
    p.sort_by(|a, b| a.partial_cmp(b).unwrap());
    p.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    p
}

/// ∫ g(z, w(z)) dσ over σ = ln z ∈ [lo, hi].
fn integrate_log<G>(
    strategy: &dyn TricomiStrategy,
    xi: f64,
    sign: Sign,
    lo: f64,
    hi: f64,
    cfg: &QuadratureConfig,
    g: G,
) -> Result<(f64, f64)>
where
    G: Fn(f64, f64) -> f64,
{
    integrate_log_shifted(strategy, xi, sign, lo, hi, cfg, 0.0, g)
}

#[allow(clippy::too_many_arguments)]
fn integrate_log_shifted<G>(
    strategy: &dyn TricomiStrategy,
    xi: f64,
    sign: Sign,
    lo: f64,
    hi: f64,
    cfg: &QuadratureConfig,
    shift: f64,
    g: G,
) -> Result<(f64, f64)>
where
    G: Fn(f64, f64) -> f64,
{
    if hi <= lo {
        return Ok((0.0, 0.0));
    }
    let failure = RefCell::new(None);
    let f = |s: f64| {
        let z = s.exp();
        match scaled_modulus_shifted(strategy, xi, sign, z, shift) {
            Ok(w) => g(z, w),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let r = integrate_adaptive_points(f, &log_points(lo, hi), cfg);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let r = r?;
    Ok((r.value, r.abs_error))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniversalTotals {
    pub xi: f64,
    pub i_attract: f64,
    pub i_repel: f64,
    pub err: f64,
}

/// I±(ξ) with the tail beyond `z_cut` done analytically. Returns (I, error).
pub fn universal_total_cut(xi: f64, sign: Sign, z_cut: f64, cfg: &IntegralConfig) -> Result<(f64, f64)> {
    cfg.check_xi(xi)?;
    if !(z_cut > 30.0) {
        return Err(Error::DomainError(format!("z_cut must exceed the asymptotic switch point, got {z_cut}")));
    }
    let st = AutoStrategy::default();
    // w/z² dz = w/z dσ
    let (v, e) = integrate_log(&st, xi, sign, LN_Z_MIN, z_cut.ln(), &cfg.quad, |z, w| w / z)?;
    let tail = total_tail(xi, sign, z_cut);
    let value = v + tail;
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::NoConvergence(format!("universal total at xi = {xi} is {value}")));
    }
    Ok((value, e))
}

/// I±(ξ) = e^{∓πξ} ∫₀^∞ |U(1 ± iξ, 1, iz)|² dz.
pub fn universal_total(xi: f64, sign: Sign) -> Result<f64> {
    let cfg = IntegralConfig::default();
    Ok(universal_total_cut(xi, sign, cfg.z_cut(xi), &cfg)?.0)
}

pub fn universal_totals(xi: f64, cfg: &IntegralConfig) -> Result<UniversalTotals> {
    let (a, ea) = universal_total_cut(xi, Sign::Attract, cfg.z_cut(xi), cfg)?;
    let (r, er) = universal_total_cut(xi, Sign::Repel, cfg.z_cut(xi), cfg)?;
    Ok(UniversalTotals { xi, i_attract: a, i_repel: r, err: ea.max(er) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransportKind {
    Direct,
    Regularized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossSectionValue {
    pub value: f64,
    pub r_used: f64,
    pub method: TransportKind,
}

/// σ_tot = (2πr/k) ξ² I±, linear in r.
pub fn sigma_total(ci: &CoulombInteraction, r: f64) -> Result<CrossSectionValue> {
    ci.validate()?;
    check_r(r)?;
    let i = universal_total(ci.xi, ci.sign)?;
    Ok(CrossSectionValue {
        value: 2.0 * PI * r / ci.k * ci.xi * ci.xi * i,
        r_used: r,
        method: TransportKind::Regularized,
    })
}

/// ∫₀^π σ₁ dθ at finite r: the same integral cut at z = 2kr. Differs from
/// `sigma_total` by πξ²/k² to leading order.
pub fn sigma_total_finite(ci: &CoulombInteraction, r: f64) -> Result<CrossSectionValue> {
    ci.validate()?;
    check_r(r)?;
    let cfg = IntegralConfig::default();
    let kr = ci.k * r;
    let (v, _) =
        integrate_log(&AutoStrategy::default(), ci.xi, ci.sign, LN_Z_MIN, (2.0 * kr).ln(), &cfg.quad, |z, w| w / z)?;
    Ok(CrossSectionValue { value: 2.0 * PI * r / ci.k * ci.xi * ci.xi * v, r_used: r, method: TransportKind::Direct })
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::DomainError(format!("r must be positive, got {r}")));
    }
    Ok(())
}

/// Split of the transport integral into r-independent pieces:
/// ∫₀^{2kr} |U|² z dz ≈ head + tail_reg + log_coeff · ln(2kr).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransportDecomposition {
    pub xi: f64,
    pub sign: Sign,
    /// ∫₀¹ |U|² z dz
    pub head: f64,
    /// ∫₁^∞ [|U|² − e^{±πξ}/z²] z dz
    pub tail_reg: f64,
    /// e^{±πξ}
    pub log_coeff: f64,
}

impl TransportDecomposition {
    /// e^{∓πξ}(head + tail_reg): the r-independent part of σ_tr′.
    pub fn regular_part(&self) -> f64 {
        (self.head + self.tail_reg) / self.log_coeff
    }

    /// σ_tr′ rebuilt for a given k r.
    pub fn sigma_tr_prime(&self, kr: f64) -> f64 {
        self.regular_part() + (2.0 * kr).ln()
    }
}

pub fn transport_decomposition(xi: f64, sign: Sign) -> Result<TransportDecomposition> {
    transport_decomposition_with(xi, sign, &IntegralConfig::default())
}

pub fn transport_decomposition_with(xi: f64, sign: Sign, cfg: &IntegralConfig) -> Result<TransportDecomposition> {
    cfg.check_xi(xi)?;
    let st = AutoStrategy::default();
    let zc = cfg.z_cut(xi);
    // in units of e^{±πξ}: head = ∫ w/z dz on (0, 1), tail = ∫ (w − 1)/z dz
    let (head, _) = integrate_log(&st, xi, sign, LN_Z_MIN, 0.0, &cfg.quad, |_, w| w)?;
    let (mid, _) = integrate_log(&st, xi, sign, 0.0, zc.ln(), &cfg.quad, |_, w| w - 1.0)?;
    let tail = mid + transport_tail(xi, sign, zc);
    let scale = (sign.s() * PI * xi).exp();
    Ok(TransportDecomposition { xi, sign, head: head * scale, tail_reg: tail * scale, log_coeff: scale })
}

/// σ_tr′ = e^{∓πξ} ∫₀^{2kr} |U(1 ± iξ, 1, iz)|² z dz by direct quadrature.
pub fn sigma_tr_prime(xi: f64, sign: Sign, kr: f64) -> Result<f64> {
    sigma_tr_prime_with(&AutoStrategy::default(), xi, sign, kr, &QuadratureConfig::with_tol(1e-11, 1e-300))
}

pub fn sigma_tr_prime_with(
    strategy: &dyn TricomiStrategy,
    xi: f64,
    sign: Sign,
    kr: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(kr > 0.0 && kr.is_finite()) {
        return Err(Error::DomainError(format!("kr must be positive, got {kr}")));
    }
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::DomainError(format!("xi must be positive, got {xi}")));
    }
    let (v, _) = integrate_log(strategy, xi, sign, LN_Z_MIN, (2.0 * kr).ln(), cfg, |_, w| w)?;
    Ok(v)
}

/// ln σ_tr′ by the direct path. For repulsion the integrand is carried
/// with e^{−2πξ} taken out, which keeps ξ in the hundreds finite.
pub fn ln_sigma_tr_prime(xi: f64, sign: Sign, kr: f64) -> Result<f64> {
    if !(kr > 0.0 && kr.is_finite()) {
        return Err(Error::DomainError(format!("kr must be positive, got {kr}")));
    }
    if !(xi > 0.0 && xi.is_finite()) {
        return Err(Error::DomainError(format!("xi must be positive, got {xi}")));
    }
    let shift = match sign {
        Sign::Attract => 0.0,
        Sign::Repel => 2.0 * PI * xi,
    };
    let cfg = QuadratureConfig::with_tol(1e-11, 1e-300);
    let v = match integrate_log_shifted(
        &AutoStrategy::default(),
        xi,
        sign,
        LN_Z_MIN,
        (2.0 * kr).ln(),
        &cfg,
        shift,
        |_, w| w,
    ) {
        Ok((v, _)) => v,
        // at large ξ rounding in U stalls the last digits; 1e-8 is plenty here
        Err(Error::MaxDepthExceeded { estimate, abs_error }) if abs_error <= 1e-8 * estimate => estimate,
        Err(e) => return Err(e),
    };
    if !(v > 0.0) {
        return Err(Error::IntegrandUnderflow(format!("sigma_tr' vanished at xi = {xi}, kr = {kr}")));
    }
    Ok(v.ln() + shift)
}

/// A way of computing σ_tr′(ξ, kr).
pub trait TransportMethod: Named + Send + Sync {
    /// The method actually used at this k r.
    fn kind(&self, kr: f64) -> TransportKind;
    fn sigma_tr_prime(&self, xi: f64, sign: Sign, kr: f64) -> Result<f64>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct DirectTransport;

impl Named for DirectTransport {
    fn name(&self) -> &'static str {
        "direct"
    }
}

impl TransportMethod for DirectTransport {
    fn kind(&self, _kr: f64) -> TransportKind {
        TransportKind::Direct
    }
    fn sigma_tr_prime(&self, xi: f64, sign: Sign, kr: f64) -> Result<f64> {
        sigma_tr_prime(xi, sign, kr)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RegularizedTransport;

impl Named for RegularizedTransport {
    fn name(&self) -> &'static str {
        "regularized"
    }
}

impl TransportMethod for RegularizedTransport {
    fn kind(&self, _kr: f64) -> TransportKind {
        TransportKind::Regularized
    }
    fn sigma_tr_prime(&self, xi: f64, sign: Sign, kr: f64) -> Result<f64> {
        if !(kr > 0.0 && kr.is_finite()) {
            return Err(Error::DomainError(format!("kr must be positive, got {kr}")));
        }
        Ok(transport_decomposition(xi, sign)?.sigma_tr_prime(kr))
    }
}

/// Direct below `threshold` in k r, regularized above.
#[derive(Debug, Clone, Copy)]
pub struct AutoTransport {
    pub threshold: f64,
}

impl Default for AutoTransport {
    fn default() -> Self {
        AutoTransport { threshold: 1e3 }
    }
}

impl Named for AutoTransport {
    fn name(&self) -> &'static str {
        "auto"
    }
}

impl TransportMethod for AutoTransport {
    fn kind(&self, kr: f64) -> TransportKind {
        if kr < self.threshold {
            TransportKind::Direct
        } else {
            TransportKind::Regularized
        }
    }
    fn sigma_tr_prime(&self, xi: f64, sign: Sign, kr: f64) -> Result<f64> {
        match self.kind(kr) {
            TransportKind::Direct => DirectTransport.sigma_tr_prime(xi, sign, kr),
            TransportKind::Regularized => RegularizedTransport.sigma_tr_prime(xi, sign, kr),
        }
    }
}

pub fn transport_registry() -> Registry<dyn TransportMethod> {
    let mut r: Registry<dyn TransportMethod> = Registry::new("transport method");
    r.register(Arc::new(AutoTransport::default()));
    r.register(Arc::new(DirectTransport));
    r.register(Arc::new(RegularizedTransport));
    r
}

/// σ_tr = 2π (ξ²/k²) σ_tr′ with the named method ("direct", "regularized"
/// or "auto").
pub fn sigma_transport(ci: &CoulombInteraction, r: f64, method: &str) -> Result<CrossSectionValue> {
    ci.validate()?;
    check_r(r)?;
    let m = transport_registry().get(method)?;
    let kr = ci.k * r;
    let sp = m.sigma_tr_prime(ci.xi, ci.sign, kr)?;
    Ok(CrossSectionValue { value: 2.0 * PI * ci.xi * ci.xi / (ci.k * ci.k) * sp, r_used: r, method: m.kind(kr) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_coefficients_start_with_the_known_terms() {
        let c = tail_coefficients(1.5, Sign::Attract);
        assert!((c[0] - 1.0).abs() < 1e-15);
        assert!((c[1] + 4.0 * 1.5).abs() < 1e-13);
        let c = tail_coefficients(1.5, Sign::Repel);
        assert!((c[1] - 4.0 * 1.5).abs() < 1e-13);
    }

    #[test]
    fn log_points_are_sorted_and_cover() {
        let p = log_points(-46.0, 7.0);
        assert_eq!(p[0], -46.0);
        assert_eq!(*p.last().unwrap(), 7.0);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }
}
