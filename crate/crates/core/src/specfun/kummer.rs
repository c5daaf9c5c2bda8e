//! Kummer's confluent hypergeometric function M(a, b, t) = F(a, b, t).

use super::dd::{Cdd, Dd};
use super::gamma::recip_gamma;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// |t| above which M is refused.
pub const OVERFLOW_GUARD: f64 = 1e4;
/// Three consecutive terms below this fraction of the sum end the series.
pub const SERIES_EPS: f64 = 1e-15;
pub const MAX_TERMS: usize = 1_000_000;
/// |t| − Re t up to which the Maclaurin series is summed directly; the
/// double-double sum absorbs the e^{|t| − Re t} cancellation.
const MACLAURIN_SPREAD: f64 = 36.0;

fn is_nonpositive_integer(b: Complex64) -> bool {
    b.im == 0.0 && b.re <= 0.0 && b.re == b.re.round()
}

/// F(a, b, t).
pub fn kummer_m(a: Complex64, b: Complex64, t: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(b) {
        return Err(Error::DomainError(format!("b = {b} is a nonpositive integer")));
    }
    if !(a.re.is_finite() && a.im.is_finite() && t.re.is_finite() && t.im.is_finite()) {
        return Err(Error::DomainError("non-finite argument".into()));
    }
    if t.norm() > OVERFLOW_GUARD {
        return Err(Error::OverflowGuard(format!("|t| = {} exceeds {OVERFLOW_GUARD}", t.norm())));
    }
    if a == Complex64::new(0.0, 0.0) || t == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if t.re < 0.0 {
        // Kummer's transformation keeps the series free of growth
        let m = kummer_m(b - a, b, -t)?;
        return finite(t.exp() * m);
    }
    let r = t.norm();
    if r - t.re <= MACLAURIN_SPREAD || r <= MACLAURIN_SPREAD {
        return finite(kummer_m_maclaurin(a, b, t)?.to_c64());
    }
    if let Some(v) = kummer_m_asymptotic(a, b, t)? {
        return finite(v);
    }
    if r <= 700.0 {
        return finite(kummer_m_maclaurin(a, b, t)?.to_c64());
    }
    Err(Error::NoConvergence(format!("no accurate regime for M({a}, {b}, {t})")))
}

fn finite(v: Complex64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::OverflowGuard("M overflowed".into()))
    }
}

/// Maclaurin series summed in double-double arithmetic.
pub fn kummer_m_maclaurin(a: Complex64, b: Complex64, t: Complex64) -> Result<Cdd> {
    let a = Cdd::from(a);
    let b = Cdd::from(b);
    let t = Cdd::from(t);
    let mut term = Cdd::ONE;
    let mut sum = Cdd::ONE;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kd = Cdd::new(Dd::new(k as f64), Dd::ZERO);
        let num = (a + kd) * t;
        let den = (b + kd).scale(Dd::new(k as f64 + 1.0));
        term = term * num / den;
        sum = sum + term;
        let tm = term.norm_f64();
        if tm == 0.0 {
            return Ok(sum);
        }
        if tm < SERIES_EPS * sum.norm_f64() {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        if !term.is_finite() {
            return Err(Error::OverflowGuard("series term overflowed".into()));
        }
    }
    Err(Error::NoConvergence(format!("Maclaurin series did not settle in {MAX_TERMS} terms")))
}

/// Asymptotic series Σ (p)_s (q)_s / s! w^{-s}, truncated at its smallest
/// term. Returns (sum, magnitude of the first omitted term).
pub(crate) fn asymptotic_sum(p: Complex64, q: Complex64, w: Complex64) -> (Complex64, f64) {
    let winv = w.inv();
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last = 1.0f64;
    for s in 0..400 {
        let sf = s as f64;
        let next = term * (p + sf) * (q + sf) * winv / (sf + 1.0);
        let nm = next.norm();
        if nm >= last && s > 0 {
            return (sum, last);
        }
        if nm == 0.0 {
            return (sum + next, 0.0);
        }
        term = next;
        sum += term;
        last = nm;
        if nm < 1e-17 * sum.norm() {
            return (sum, nm);
        }
    }
    (sum, last)
}

/// Large-|t| form from the connection formula with both U replaced by their
/// asymptotic series. None if the truncation error is above 1e-14 of the
/// parts' magnitude.
fn kummer_m_asymptotic(a: Complex64, b: Complex64, t: Complex64) -> Result<Option<Complex64>> {
    // upper half plane: e^{iπa} U(a,b,t) branch; lower: conjugate choice
    let s = if t.im >= 0.0 { 1.0 } else { -1.0 };
    let lt = t.ln();
    let (s1, e1) = asymptotic_sum(a, a - b + 1.0, -t);
    let (s2, e2) = asymptotic_sum(b - a, 1.0 - a, t);
    let i = Complex64::new(0.0, 1.0);
    let first = (i * PI * s * a).exp() * (-a * lt).exp() * recip_gamma(b - a)?;
    let second = (t + (a - b) * lt).exp() * recip_gamma(a)?;
    let v = first * s1 + second * s2;
    let err = first.norm() * e1 + second.norm() * e2;
    let gb = super::gamma::complex_gamma(b)?;
    // relative to the size of the two parts: near a zero of M they cancel,
    // which is conditioning rather than truncation
    let scale = (first * s1).norm() + (second * s2).norm();
    if err > 1e-14 * scale {
        return Ok(None);
    }
    Ok(Some(gb * v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_values() {
        assert_eq!(kummer_m(c(0.0, 0.0), c(1.5, 0.0), c(3.0, 2.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(kummer_m(c(0.3, 1.0), c(1.5, 0.0), c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn exponential_special_case() {
        // M(a, a, t) = e^t
        for t in [c(2.0, 0.0), c(-5.0, 3.0), c(0.0, 45.0), c(10.0, -60.0)] {
            let m = kummer_m(c(1.3, 0.2), c(1.3, 0.2), t).unwrap();
            assert!((m - t.exp()).norm() / t.exp().norm() < 1e-12, "{t}: {m}");
        }
    }

    #[test]
    fn guard_and_domain() {
        assert!(matches!(kummer_m(c(1.0, 0.0), c(1.0, 0.0), c(2e4, 0.0)), Err(Error::OverflowGuard(_))));
        assert!(matches!(kummer_m(c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)), Err(Error::DomainError(_))));
    }

    #[test]
    fn asymptotic_and_series_agree_at_handover() {
        for z in [37.0, 45.0] {
            let a = c(0.0, 1.0);
            let b = c(1.0, 0.0);
            let t = c(0.0, z);
            let ser = kummer_m_maclaurin(a, b, t).unwrap().to_c64();
            let asy = kummer_m_asymptotic(a, b, t).unwrap().unwrap();
            assert!((ser - asy).norm() / asy.norm() < 1e-11, "z = {z}: {ser} vs {asy}");
        }
    }
}
