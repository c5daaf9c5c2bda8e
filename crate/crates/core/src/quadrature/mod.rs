//! Numerical integration with error estimates: adaptive Gauss–Kronrod on
//! finite intervals, geometric tail panels on semi-infinite ones, and
//! oscillatory integrals by acceleration or contour rotation.

mod adaptive;
mod gk;
mod oscillatory;
mod semi_infinite;
mod sum;

pub use adaptive::{integrate_adaptive, integrate_adaptive_best, integrate_adaptive_points};
pub use gk::gk21;
pub use oscillatory::{
    integrate_oscillatory, oscillatory_registry, AbelRegularized, AccelerationMethod, ContourRotation,
    OscillatoryMethod,
};
pub use semi_infinite::integrate_semi_infinite;
pub use sum::NeumaierSum;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

/// Values that can be integrated: real or complex.
pub trait QuadValue:
    Copy + Debug + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum bisection depth of any subinterval.
    pub max_depth: u32,
    /// Tail panels below this magnitude (relative to the running sum) end
    /// semi-infinite and oscillatory summations.
    pub tail_threshold: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { rel_tol: 1e-10, abs_tol: 1e-14, max_depth: 60, tail_threshold: 1e-12 }
    }
}

impl QuadratureConfig {
    pub fn with_tol(rel_tol: f64, abs_tol: f64) -> Self {
        QuadratureConfig { rel_tol, abs_tol, ..Default::default() }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_depth >= 1) {
            return Err(crate::Error::DomainError(format!("invalid quadrature config {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub abs_error: f64,
    pub evaluations: usize,
    pub converged: bool,
}
