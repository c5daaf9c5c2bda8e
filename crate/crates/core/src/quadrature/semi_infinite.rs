use super::adaptive::integrate_adaptive_best;
use super::sum::NeumaierSum;
use super::{QuadValue, QuadratureConfig, QuadratureResult};
use crate::error::{Error, Result};

const MAX_PANELS: usize = 400;

/// ∫_a^∞ f(z) dz. The tail is mapped by z = a + t/(1−t) and integrated over
/// the panels t ∈ [1 − 2^{-k}, 1 − 2^{-k-1}], i.e. z-panels of doubling
/// width, until two consecutive panels fall below the tail threshold.
pub fn integrate_semi_infinite<T, F>(f: F, a: f64, cfg: &QuadratureConfig) -> Result<QuadratureResult<T>>
where
    T: QuadValue,
    F: Fn(f64) -> T,
{
    cfg.validate()?;
    if !a.is_finite() {
        return Err(Error::DomainError(format!("lower limit must be finite, got {a}")));
    }
    let g = |t: f64| {
        let s = 1.0 - t;
        f(a + t / s) * (1.0 / (s * s))
    };
    let mut acc = NeumaierSum::new();
    let mut err = 0.0;
    let mut evals = 0usize;
    let mut converged = true;
    let mut prev_mag = f64::INFINITY;
    let mut growing = 0;
    let mut quiet = 0;
    for k in 0..MAX_PANELS {
        let t0 = 1.0 - 0.5f64.powi(k as i32);
        let t1 = 1.0 - 0.5f64.powi(k as i32 + 1);
        if !(t1 > t0) {
            return Err(Error::TailNotDecaying(format!("panel {k} collapsed before the tail decayed")));
        }
        let r = integrate_adaptive_best(g, &[t0, t1], cfg)?;
        evals += r.evaluations;
        err += r.abs_error;
        converged &= r.converged;
        acc.add(r.value);
        let mag = r.value.magnitude();
        if k >= 3 && mag > prev_mag {
            growing += 1;
            if growing >= 4 {
                return Err(Error::TailNotDecaying(format!(
                    "panel contributions grew for {growing} panels up to z = {}",
                    a + t1 / (1.0 - t1)
                )));
            }
        } else {
            growing = 0;
        }
        prev_mag = mag;
        let floor = cfg.abs_tol.max(cfg.tail_threshold * acc.value().magnitude());
        if mag <= floor {
            quiet += 1;
            if quiet >= 2 {
                // geometric decay at least halves each panel
                err += mag;
                return Ok(QuadratureResult { value: acc.value(), abs_error: err, evaluations: evals, converged });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::TailNotDecaying(format!("no convergence after {MAX_PANELS} panels")))
}
