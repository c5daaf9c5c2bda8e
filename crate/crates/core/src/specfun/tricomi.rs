//! Tricomi's U(a, 1, t) in three regimes: the logarithmic power series,
//! the Laplace-type integral representation, and the large-|t| asymptotic
//! expansion.

use super::dd::{Cdd, Dd};
use super::gamma::{complex_digamma, complex_gamma};
use super::kummer::asymptotic_sum;
use crate::error::{Error, Result};
use crate::quadrature::{integrate_adaptive_best, QuadratureConfig};
use crate::strategy::{Named, Registry};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeTag {
    NearZoneSeries,
    IntegralRep,
    Asymptotic,
}

/// Switch points between the regimes, in |t|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeConfig {
    pub switch_z_low: f64,
    pub switch_z_high: f64,
    /// Above this Im a the series also covers the middle window; there the
    /// integral representation stalls while the series stays accurate.
    pub series_xi_threshold: f64,
    /// Relative truncation error the asymptotic series must reach; otherwise
    /// the middle-window method is used instead.
    pub asymptotic_tol: f64,
}

impl Default for RegimeConfig {
    fn default() -> Self {
        RegimeConfig { switch_z_low: 2.0, switch_z_high: 30.0, series_xi_threshold: 6.0, asymptotic_tol: 1e-13 }
    }
}

impl RegimeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.switch_z_low > 0.0 && self.switch_z_low < self.switch_z_high) {
            return Err(Error::DomainError(format!(
                "switch points must satisfy 0 < low < high, got {} and {}",
                self.switch_z_low, self.switch_z_high
            )));
        }
        Ok(())
    }
}

/// The regime plus the switch points it was chosen with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalRegime {
    pub tag: RegimeTag,
    pub switch_z_low: f64,
    pub switch_z_high: f64,
}

fn check_t(t: Complex64) -> Result<()> {
    if !(t.re.is_finite() && t.im.is_finite()) {
        return Err(Error::DomainError(format!("non-finite argument {t}")));
    }
    if t.im == 0.0 && t.re <= 0.0 {
        return Err(Error::BranchError(format!("t = {t} lies on the branch cut (−∞, 0]")));
    }
    if t.re < 0.0 {
        return Err(Error::DomainError(format!("Re t < 0 is outside the supported half plane: {t}")));
    }
    Ok(())
}

fn check_a(a: Complex64) -> Result<Option<Complex64>> {
    if a == Complex64::new(0.0, 0.0) {
        return Ok(Some(Complex64::new(1.0, 0.0)));
    }
    if a.im == 0.0 && a.re < 0.0 && a.re == a.re.round() {
        return Err(Error::DomainError(format!("a = {a} is a negative integer")));
    }
    Ok(None)
}

/// U(a, 1, t) = −(1/Γ(a)) Σ_k (a)_k t^k/(k!)² [ln t + ψ(a+k) − 2ψ(k+1)],
/// summed in double-double.
pub fn tricomi_u_series(a: Complex64, t: Complex64) -> Result<Complex64> {
    check_t(t)?;
    if let Some(v) = check_a(a)? {
        return Ok(v);
    }
    let c0 = t.ln() + complex_digamma(a)? + 2.0 * EULER_GAMMA;
    let ad = Cdd::from(a);
    let td = Cdd::from(t);
    let c0d = Cdd::from(c0);
    let mut p = Cdd::ONE;
    let mut h = Cdd::ZERO; // ψ(a+k) − ψ(a)
    let mut harm = Dd::ZERO; // ψ(k+1) − ψ(1)
    let mut sum = c0d;
    let mut small = 0;
    for k in 0..super::kummer::MAX_TERMS {
        let kd = Dd::new(k as f64);
        let apk = ad + Cdd::new(kd, Dd::ZERO);
        h = h + Cdd::ONE / apk;
        let k1 = Dd::new(k as f64 + 1.0);
        harm = harm + k1.recip();
        p = (p * apk * td).scale((k1 * k1).recip());
        let bracket = c0d + h - Cdd::new(harm * 2.0, Dd::ZERO);
        let term = p * bracket;
        sum = sum + term;
        let tm = term.norm_f64();
        if tm == 0.0 {
            break;
        }
        if tm < 1e-18 * sum.norm_f64() {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
        if !sum.is_finite() {
            return Err(Error::OverflowGuard("logarithmic series overflowed".into()));
        }
        if k + 1 == super::kummer::MAX_TERMS {
            return Err(Error::NoConvergence("logarithmic series did not settle".into()));
        }
    }
    let g = complex_gamma(a)?;
    Ok(-sum.to_c64() / g)
}

pub(crate) fn ln1p_c(u: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * u.re + u.norm_sqr()).ln_1p();
    let im = u.im.atan2(1.0 + u.re);
    Complex64::new(re, im)
}

pub(crate) fn expm1_c(w: Complex64) -> Complex64 {
    let s = (0.5 * w.im).sin();
    let re = w.re.exp_m1() * w.im.cos() - 2.0 * s * s;
    let im = w.re.exp() * w.im.sin();
    Complex64::new(re, im)
}

/// Integral representation along the ray v = ρ e^{iφ}:
/// U(a,1,t) = t^{−a}/Γ(a) ∫ e^{−v} v^{a−1} (1 + v/t)^{−a} dv.
/// The v^{a−1} endpoint is handled by subtracting the leading behaviour on
/// ρ < 1 and adding its antiderivative e^{iφa}/a, which keeps purely
/// imaginary a usable.
pub fn tricomi_u_integral(a: Complex64, t: Complex64, phi: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    check_t(t)?;
    if let Some(v) = check_a(a)? {
        return Ok(v);
    }
    if a.re <= -1.0 {
        return Err(Error::DomainError(format!("integral representation needs Re a > −1, got {a}")));
    }
    let theta = t.arg();
    if (phi - theta).abs() >= PI - 1e-3 || phi.abs() >= 0.5 * PI {
        return Err(Error::BranchError(format!("ray angle {phi} meets the branch point of (1 + v/t)")));
    }
    let dir = Complex64::from_polar(1.0, phi);
    let tinv = t.inv();
    let log_h = |v: Complex64| -v - a * ln1p_c(v * tinv);
    // ρ ∈ (0, 1] in ρ = e^σ
    let lower = |sigma: f64| {
        let v = dir * sigma.exp();
        let va = (a * (Complex64::new(sigma, phi))).exp();
        va * expm1_c(log_h(v))
    };
    let upper = |rho: f64| {
        let v = dir * rho;
        let lv = Complex64::new(rho.ln(), phi);
        ((a - 1.0) * lv + log_h(v)).exp() * dir
    };
    let sigma_min = -40.0 / (a.re + 1.0);
    let rho_max = 45.0 / phi.cos();
    let lo = integrate_adaptive_best(lower, &[sigma_min, sigma_min * 0.5, -2.0, 0.0], cfg)?;
    let mut pts = vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0];
    pts.retain(|&p| p < rho_max);
    pts.push(rho_max);
    let hi = integrate_adaptive_best(upper, &pts, cfg)?;
    let head = (a * Complex64::new(0.0, phi)).exp() / a;
    let integral = head + lo.value + hi.value;
    // cancellation can stall refinement short of the requested tolerance;
    // accept anything well inside the physics budget
    let err = lo.abs_error + hi.abs_error;
    if !(lo.converged && hi.converged) && err > 1e-10 * integral.norm() {
        return Err(Error::NoConvergence(format!(
            "integral representation of U({a}, 1, {t}) reached only {:e} relative",
            err / integral.norm()
        )));
    }
    let g = complex_gamma(a)?;
    Ok((-a * t.ln()).exp() * integral / g)
}

/// U(a,1,t) ~ t^{−a} Σ_s ((a)_s)² / s! (−t)^{−s}. Returns the value and
/// the size of the first omitted term relative to it.
pub fn tricomi_u_asymptotic(a: Complex64, t: Complex64) -> Result<(Complex64, f64)> {
    check_t(t)?;
    if let Some(v) = check_a(a)? {
        return Ok((v, 0.0));
    }
    let (s, err) = asymptotic_sum(a, a, -t);
    let v = (-a * t.ln()).exp() * s;
    Ok((v, err / s.norm()))
}

/// One way of evaluating U(a, 1, t).
pub trait TricomiStrategy: Named + Send + Sync {
    fn eval(&self, a: Complex64, t: Complex64) -> Result<Complex64>;
    /// The regime this strategy would use at (a, t).
    fn regime(&self, a: Complex64, t: Complex64) -> RegimeTag;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SeriesStrategy;

impl Named for SeriesStrategy {
    fn name(&self) -> &'static str {
        "series"
    }
}

impl TricomiStrategy for SeriesStrategy {
    fn eval(&self, a: Complex64, t: Complex64) -> Result<Complex64> {
        tricomi_u_series(a, t)
    }
    fn regime(&self, _a: Complex64, _t: Complex64) -> RegimeTag {
        RegimeTag::NearZoneSeries
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IntegralStrategy {
    pub cfg: QuadratureConfig,
}

impl Default for IntegralStrategy {
    fn default() -> Self {
        IntegralStrategy { cfg: QuadratureConfig::with_tol(1e-13, 1e-300) }
    }
}

/// Ray angle for the integral: half of arg t, on the side of Im a. This
/// balances the growth of |v^{a−1}| against that of |(1 + v/t)^{−a}|.
fn ray_angle(a: Complex64, t: Complex64) -> f64 {
    if a.im == 0.0 {
        0.0
    } else {
        0.5 * a.im.signum() * t.arg()
    }
}

impl Named for IntegralStrategy {
    fn name(&self) -> &'static str {
        "integral"
    }
}

impl TricomiStrategy for IntegralStrategy {
    fn eval(&self, a: Complex64, t: Complex64) -> Result<Complex64> {
        tricomi_u_integral(a, t, ray_angle(a, t), &self.cfg)
    }
    fn regime(&self, _a: Complex64, _t: Complex64) -> RegimeTag {
        RegimeTag::IntegralRep
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AsymptoticStrategy;

impl Named for AsymptoticStrategy {
    fn name(&self) -> &'static str {
        "asymptotic"
    }
}

impl TricomiStrategy for AsymptoticStrategy {
    fn eval(&self, a: Complex64, t: Complex64) -> Result<Complex64> {
        let (v, rel) = tricomi_u_asymptotic(a, t)?;
        if rel > 1e-3 {
            return Err(Error::NoConvergence(format!(
                "asymptotic series for U({a}, 1, {t}) is not usable (error {rel:e})"
            )));
        }
        Ok(v)
    }
    fn regime(&self, _a: Complex64, _t: Complex64) -> RegimeTag {
        RegimeTag::Asymptotic
    }
}

/// Picks the regime from |t| and the switch points.
#[derive(Debug, Clone, Copy, Default)]
pub struct AutoStrategy {
    pub regimes: RegimeConfig,
    pub integral: IntegralStrategy,
}

impl AutoStrategy {
    pub fn new(regimes: RegimeConfig) -> Self {
        AutoStrategy { regimes, integral: IntegralStrategy::default() }
    }

    fn middle(&self, a: Complex64) -> RegimeTag {
        if a.im > self.regimes.series_xi_threshold {
            RegimeTag::NearZoneSeries
        } else {
            RegimeTag::IntegralRep
        }
    }
}

impl Named for AutoStrategy {
    fn name(&self) -> &'static str {
        "auto"
    }
}

impl TricomiStrategy for AutoStrategy {
    fn eval(&self, a: Complex64, t: Complex64) -> Result<Complex64> {
        match self.regime(a, t) {
            RegimeTag::NearZoneSeries => tricomi_u_series(a, t),
            RegimeTag::IntegralRep => match self.integral.eval(a, t) {
                // large Im a at small |t| can defeat the quadrature; the
                // series is still well conditioned there
                Err(_) if a.im > 0.0 && t.norm() <= 40.0 => tricomi_u_series(a, t),
                r => r,
            },
            RegimeTag::Asymptotic => {
                let (v, rel) = tricomi_u_asymptotic(a, t)?;
                if rel <= self.regimes.asymptotic_tol {
                    Ok(v)
                } else if self.middle(a) == RegimeTag::NearZoneSeries && t.norm() <= 60.0 {
                    tricomi_u_series(a, t)
                } else {
                    self.integral.eval(a, t)
                }
            }
        }
    }

    fn regime(&self, a: Complex64, t: Complex64) -> RegimeTag {
        let r = t.norm();
        if r < self.regimes.switch_z_low {
            RegimeTag::NearZoneSeries
        } else if r <= self.regimes.switch_z_high {
            self.middle(a)
        } else {
            RegimeTag::Asymptotic
        }
    }
}

/// All U strategies, with the switch points of `regimes` for "auto".
pub fn tricomi_registry(regimes: RegimeConfig) -> Registry<dyn TricomiStrategy> {
    let mut r: Registry<dyn TricomiStrategy> = Registry::new("evaluation regime");
    r.register(Arc::new(AutoStrategy::new(regimes)));
    r.register(Arc::new(SeriesStrategy));
    r.register(Arc::new(IntegralStrategy::default()));
    r.register(Arc::new(AsymptoticStrategy));
    r
}

/// U(a, 1, t) with the default regime switching.
pub fn tricomi_u(a: Complex64, t: Complex64) -> Result<Complex64> {
    AutoStrategy::default().eval(a, t)
}
