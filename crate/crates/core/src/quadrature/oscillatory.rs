use super::adaptive::integrate_adaptive_best;
use super::semi_infinite::integrate_semi_infinite;
use super::sum::NeumaierSum;
use super::{QuadValue, QuadratureConfig, QuadratureResult};
use crate::error::{Error, Result};
use crate::strategy::{Named, Registry};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

/// A way of computing ∫_a^∞ g(z) e^{−iωz} dz.
pub trait OscillatoryMethod: Named + Send + Sync {
    fn integrate(
        &self,
        envelope: &dyn Fn(Complex64) -> Complex64,
        omega: f64,
        a: f64,
        cfg: &QuadratureConfig,
    ) -> Result<QuadratureResult<Complex64>>;
}

/// Half-period partial sums smoothed by iterated averaging of the trailing
/// sums. Also sums Abel-summable integrals whose envelope does not decay.
#[derive(Debug, Clone, Copy)]
pub struct AccelerationMethod {
    pub initial_periods: usize,
    pub max_periods: usize,
    pub max_order: usize,
}

impl Default for AccelerationMethod {
    fn default() -> Self {
        AccelerationMethod { initial_periods: 24, max_periods: 1536, max_order: 16 }
    }
}

impl Named for AccelerationMethod {
    fn name(&self) -> &'static str {
        "acceleration"
    }
}

/// Estimate and error from the averaging table of the given partial sums.
fn averaged_estimate(sums: &[Complex64], max_order: usize) -> (Complex64, f64) {
    let mut row: Vec<Complex64> = sums.to_vec();
    let mut best = (*row.last().unwrap(), f64::INFINITY);
    let mut prev = *row.last().unwrap();
    for _ in 0..max_order.min(sums.len() - 1) {
        row = row.windows(2).map(|w| (w[0] + w[1]) * 0.5).collect();
        let cur = *row.last().unwrap();
        let diff = (cur - prev).norm();
        if diff < best.1 {
            best = (cur, diff);
        }
        prev = cur;
    }
    best
}

impl OscillatoryMethod for AccelerationMethod {
    fn integrate(
        &self,
        envelope: &dyn Fn(Complex64) -> Complex64,
        omega: f64,
        a: f64,
        cfg: &QuadratureConfig,
    ) -> Result<QuadratureResult<Complex64>> {
        if omega == 0.0 || !omega.is_finite() {
            return Err(Error::DomainError(format!("phase rate must be nonzero and finite, got {omega}")));
        }
        let h = PI / omega.abs();
        let f = |z: f64| envelope(Complex64::new(z, 0.0)) * Complex64::new(0.0, -omega * z).exp();
        // panels are integrated far below the target so the averaging, not
        // the panel error, limits the result
        let panel_cfg = QuadratureConfig { rel_tol: cfg.rel_tol * 1e-2, abs_tol: cfg.abs_tol * 1e-2, ..*cfg };
        let mut sums: Vec<Complex64> = Vec::new();
        let mut acc = NeumaierSum::new();
        let mut evals = 0;
        let mut panel_err = 0.0;
        let mut n_target = self.initial_periods;
        let mut last_err = f64::INFINITY;
        loop {
            while sums.len() < n_target {
                let k = sums.len() as f64;
                let r = integrate_adaptive_best(f, &[a + k * h, a + (k + 1.0) * h], &panel_cfg)?;
                evals += r.evaluations;
                panel_err += r.abs_error;
                acc.add(r.value);
                sums.push(acc.value());
            }
            let (est, diff) = averaged_estimate(&sums, self.max_order);
            let err = diff + panel_err;
            let target = cfg.abs_tol.max(cfg.rel_tol * est.magnitude());
            if err <= target {
                return Ok(QuadratureResult { value: est, abs_error: err, evaluations: evals, converged: true });
            }
            if n_target * 2 > self.max_periods || err >= last_err {
                return Err(Error::AccelerationStalled(format!(
                    "averaging table stopped contracting at {} half-periods (error {err:e}, target {target:e})",
                    sums.len()
                )));
            }
            last_err = err;
            n_target *= 2;
        }
    }
}

/// Rotates the ray to z = a − i·sgn(ω)·y, where the phase factor decays
/// exponentially. The envelope must be analytic in that quarter plane.
#[derive(Debug, Clone, Copy, Default)]
pub struct ContourRotation;

impl Named for ContourRotation {
    fn name(&self) -> &'static str {
        "contour"
    }
}

impl OscillatoryMethod for ContourRotation {
    fn integrate(
        &self,
        envelope: &dyn Fn(Complex64) -> Complex64,
        omega: f64,
        a: f64,
        cfg: &QuadratureConfig,
    ) -> Result<QuadratureResult<Complex64>> {
        if omega == 0.0 || !omega.is_finite() {
            return Err(Error::DomainError(format!("phase rate must be nonzero and finite, got {omega}")));
        }
        let s = omega.signum();
        let dir = Complex64::new(0.0, -s);
        let g = |y: f64| envelope(Complex64::new(a, 0.0) + dir * y) * (-omega.abs() * y).exp();
        let r = integrate_semi_infinite(g, 0.0, cfg)?;
        let pre = dir * Complex64::new(0.0, -omega * a).exp();
        Ok(QuadratureResult { value: r.value * pre, ..r })
    }
}

/// Abel summation: the integral with an extra e^{−ηz} factor, evaluated for
/// η = η₀, η₀/2, … and Richardson-extrapolated to η → 0.
#[derive(Debug, Clone, Copy)]
pub struct AbelRegularized {
    pub inner: AccelerationMethod,
    pub eta0: f64,
    pub steps: usize,
}

impl Default for AbelRegularized {
    fn default() -> Self {
        AbelRegularized { inner: AccelerationMethod { max_periods: 6144, ..Default::default() }, eta0: 0.05, steps: 5 }
    }
}

impl Named for AbelRegularized {
    fn name(&self) -> &'static str {
        "abel"
    }
}

impl OscillatoryMethod for AbelRegularized {
    fn integrate(
        &self,
        envelope: &dyn Fn(Complex64) -> Complex64,
        omega: f64,
        a: f64,
        cfg: &QuadratureConfig,
    ) -> Result<QuadratureResult<Complex64>> {
        if !(self.eta0 > 0.0) || self.steps < 2 {
            return Err(Error::DomainError("Abel regularization needs eta0 > 0 and at least two steps".into()));
        }
        let inner_cfg = QuadratureConfig { rel_tol: cfg.rel_tol * 0.1, abs_tol: cfg.abs_tol * 0.1, ..*cfg };
        let mut table: Vec<Vec<Complex64>> = Vec::new();
        let mut evals = 0;
        let mut eta = self.eta0;
        for j in 0..self.steps {
            let damped = |z: Complex64| envelope(z) * (-eta * (z - a)).exp();
            let r = self.inner.integrate(&damped, omega, a, &inner_cfg)?;
            evals += r.evaluations;
            let mut row = vec![r.value];
            for m in 1..=j {
                let f = (1u64 << m) as f64;
                let v = (row[m - 1] * f - table[j - 1][m - 1]) / (f - 1.0);
                row.push(v);
            }
            table.push(row);
            eta *= 0.5;
        }
        let n = self.steps - 1;
        let value = table[n][n];
        let err = (value - table[n - 1][n - 1]).norm();
        let target = cfg.abs_tol.max(cfg.rel_tol * value.magnitude());
        Ok(QuadratureResult { value, abs_error: err, evaluations: evals, converged: err <= target })
    }
}

pub fn oscillatory_registry() -> Registry<dyn OscillatoryMethod> {
    let mut r: Registry<dyn OscillatoryMethod> = Registry::new("oscillatory method");
    r.register(Arc::new(AccelerationMethod::default()));
    r.register(Arc::new(ContourRotation));
    r.register(Arc::new(AbelRegularized::default()));
    r
}

/// ∫_a^∞ envelope(z) e^{−iωz} dz with the named method.
pub fn integrate_oscillatory(
    envelope: &dyn Fn(Complex64) -> Complex64,
    omega: f64,
    a: f64,
    cfg: &QuadratureConfig,
    method: &str,
) -> Result<QuadratureResult<Complex64>> {
    oscillatory_registry().get(method)?.integrate(envelope, omega, a, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn damped_exponential_both_methods() {
        let env = |z: Complex64| (-z).exp();
        let expect = c(1.0, 0.0) / c(1.0, 1.0);
        for m in ["acceleration", "contour"] {
            let r = integrate_oscillatory(&env, 1.0, 0.0, &QuadratureConfig::default(), m).unwrap();
            assert!((r.value - expect).norm() < 1e-10, "{m}: {}", r.value);
        }
    }

    #[test]
    fn sinc_half_periods() {
        // the envelope cancels the phase, leaving sin z / z
        let env = |z: Complex64| {
            let s = if z.norm() < 1e-8 { c(1.0, 0.0) } else { z.sin() / z };
            s * (c(0.0, 1.0) * z).exp()
        };
        let cfg = QuadratureConfig::with_tol(1e-10, 1e-12);
        let r = AccelerationMethod::default().integrate(&env, 1.0, 0.0, &cfg).unwrap();
        assert!((r.value.re - PI / 2.0).abs() < 1e-9, "{}", r.value);
        assert!(r.value.im.abs() < 1e-9);
    }

    #[test]
    fn abel_sums_a_bare_phase() {
        // ∫₀^∞ e^{−iz} dz = −i in the Abel sense
        let env = |_z: Complex64| c(1.0, 0.0);
        let r = AbelRegularized::default().integrate(&env, 1.0, 0.0, &QuadratureConfig::default()).unwrap();
        assert!((r.value - c(0.0, -1.0)).norm() < 1e-8, "{}", r.value);
    }

    #[test]
    fn stalls_on_growing_envelope() {
        let env = |z: Complex64| z.exp();
        let cfg = QuadratureConfig::default();
        let e = AccelerationMethod { max_periods: 96, ..Default::default() }.integrate(&env, 1.0, 0.0, &cfg);
        assert!(matches!(e, Err(Error::AccelerationStalled(_))));
    }
}
