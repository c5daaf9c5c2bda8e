//! Complex Γ and ψ: reflection into the right half plane, upward shift,
//! then the Stirling series.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// B_{2k} for k = 1..10.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// |w| below which the argument is shifted up before the asymptotic series.
const SHIFT_RADIUS: f64 = 18.0;
const POLE_TOL: f64 = 1e-14;

fn check_pole(w: Complex64) -> Result<()> {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::DomainError(format!("non-finite argument {w}")));
    }
    if w.re <= 0.5 && w.im.abs() <= POLE_TOL {
        let n = w.re.round();
        if n <= 0.0 && (w.re - n).abs() <= POLE_TOL {
            return Err(Error::PoleError(format!("argument {w} is a nonpositive integer")));
        }
    }
    Ok(())
}

/// Stirling series for ln Γ, valid for |w| ≥ SHIFT_RADIUS, Re w > 0.
fn stirling_ln_gamma(w: Complex64) -> Complex64 {
    let half_ln_2pi = 0.5 * (2.0 * PI).ln();
    let mut s = (w - 0.5) * w.ln() - w + half_ln_2pi;
    let w2 = (w * w).inv();
    let mut wp = w.inv();
    for (k, b) in BERNOULLI.iter().enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        s += wp * (b / (n * (n - 1.0)));
        wp *= w2;
    }
    s
}

/// One branch of ln Γ(w) for Re w ≥ 1/2 (not necessarily the principal one).
fn ln_gamma_right(w: Complex64) -> Complex64 {
    let mut shifted = w;
    let mut prod = Complex64::new(1.0, 0.0);
    let mut log_acc = Complex64::new(0.0, 0.0);
    while shifted.norm() < SHIFT_RADIUS {
        prod *= shifted;
        if prod.norm() > 1e200 {
            log_acc += prod.ln();
            prod = Complex64::new(1.0, 0.0);
        }
        shifted += 1.0;
    }
    stirling_ln_gamma(shifted) - log_acc - prod.ln()
}

/// A logarithm of Γ(w); equal to ln Γ up to a multiple of 2πi.
pub fn ln_gamma(w: Complex64) -> Result<Complex64> {
    check_pole(w)?;
    if w.re < 0.5 {
        let s = (w * PI).sin();
        let v = Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma_right(1.0 - w);
        return Ok(v);
    }
    Ok(ln_gamma_right(w))
}

/// Γ(w) for complex w.
pub fn complex_gamma(w: Complex64) -> Result<Complex64> {
    check_pole(w)?;
    if w.re < 0.5 {
        let g = complex_gamma(1.0 - w)?;
        let v = PI / ((w * PI).sin() * g);
        return finite(v, "complex_gamma");
    }
    if w.im == 0.0 && w.re == w.re.round() && w.re <= 171.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < w.re {
            f *= k;
            k += 1.0;
        }
        return Ok(Complex64::new(f, 0.0));
    }
    let mut shifted = w;
    let mut prod = Complex64::new(1.0, 0.0);
    while shifted.norm() < SHIFT_RADIUS {
        prod *= shifted;
        shifted += 1.0;
    }
    let v = stirling_ln_gamma(shifted).exp() / prod;
    finite(v, "complex_gamma")
}

/// 1/Γ(w), entire; zero at the poles of Γ.
pub fn recip_gamma(w: Complex64) -> Result<Complex64> {
    match complex_gamma(w) {
        Ok(g) => Ok(g.inv()),
        Err(Error::PoleError(_)) => Ok(Complex64::new(0.0, 0.0)),
        Err(e) => Err(e),
    }
}

/// ψ(w) = d ln Γ / dw.
pub fn complex_digamma(w: Complex64) -> Result<Complex64> {
    check_pole(w)?;
    if w.re < 0.5 {
        let p = complex_digamma(1.0 - w)?;
        let t = (w * PI).tan();
        return finite(p - PI / t, "complex_digamma");
    }
    Ok(digamma_shifted(w, SHIFT_RADIUS))
}

/// ψ via upward recurrence until |w| ≥ radius, then the asymptotic series.
/// Exposed so tests can compare two shift depths.
pub fn digamma_shifted(w: Complex64, radius: f64) -> Complex64 {
    let mut shifted = w;
    let mut acc = Complex64::new(0.0, 0.0);
    while shifted.norm() < radius {
        acc += shifted.inv();
        shifted += 1.0;
    }
    let inv = shifted.inv();
    let inv2 = inv * inv;
    let mut s = shifted.ln() - inv * 0.5;
    let mut wp = inv2;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        s -= wp * (b / n);
        wp *= inv2;
    }
    s - acc
}

fn finite(v: Complex64, what: &str) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::OverflowGuard(format!("{what} overflowed")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn integer_values() {
        assert_eq!(complex_gamma(c(1.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(complex_gamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0));
    }

    #[test]
    fn half_integer() {
        let g = complex_gamma(c(0.5, 0.0)).unwrap();
        assert!((g.re - PI.sqrt()).abs() < 1e-13);
        let g = complex_gamma(c(-1.5, 0.0)).unwrap();
        assert!((g.re - 4.0 * PI.sqrt() / 3.0).abs() < 1e-13);
    }

    #[test]
    fn poles_are_reported() {
        assert!(matches!(complex_gamma(c(0.0, 0.0)), Err(Error::PoleError(_))));
        assert!(matches!(complex_gamma(c(-3.0, 0.0)), Err(Error::PoleError(_))));
        assert!(matches!(complex_digamma(c(-1.0, 0.0)), Err(Error::PoleError(_))));
        assert!(complex_gamma(c(-3.0, 1e-6)).is_ok());
    }

    #[test]
    fn modulus_identity_on_imaginary_line() {
        let g = complex_gamma(c(1.0, 1.0)).unwrap();
        let expect = (PI / PI.sinh()).sqrt();
        assert!((g.norm() - expect).abs() / expect < 1e-13);
    }

    #[test]
    fn recurrence_far_from_origin() {
        let w = c(-7.3, 30.0);
        let lhs = complex_gamma(w + 1.0).unwrap();
        let rhs = w * complex_gamma(w).unwrap();
        assert!((lhs - rhs).norm() / lhs.norm() < 1e-12);
    }

    #[test]
    fn ln_gamma_exponentiates_to_gamma() {
        for w in [c(0.3, 2.0), c(-2.5, 0.7), c(12.0, -40.0)] {
            let a = ln_gamma(w).unwrap().exp();
            let b = complex_gamma(w).unwrap();
            assert!((a - b).norm() / b.norm() < 1e-12, "{w}");
        }
    }

    #[test]
    fn digamma_known_values() {
        let euler = 0.577_215_664_901_532_9;
        let p1 = complex_digamma(c(1.0, 0.0)).unwrap();
        assert!((p1.re + euler).abs() < 1e-15);
        let p2 = complex_digamma(c(2.0, 0.0)).unwrap();
        assert!((p2.re - (1.0 - euler)).abs() < 1e-14);
        // Im ψ(iy) = 1/(2y) + (π/2) coth(πy)
        let y = 0.7;
        let p = complex_digamma(c(0.0, y)).unwrap();
        let expect = 0.5 / y + 0.5 * PI / (PI * y).tanh();
        assert!((p.im - expect).abs() < 1e-13);
    }

    #[test]
    fn digamma_two_shift_depths_agree() {
        let w = c(1.0, 2.0);
        let a = digamma_shifted(w, 18.0);
        let b = digamma_shifted(w, 40.0);
        assert!((a - b).norm() / a.norm() < 1e-13);
    }
}
