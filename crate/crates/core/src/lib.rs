//! Nonasymptotic Coulomb scattering at a finite observer distance and its
//! use in impurity-limited carrier mobility.

pub mod error;
pub mod integralxs;
pub mod optical;
pub mod quadrature;
pub mod scattering;
pub mod semiconductor;
pub mod specfun;
pub mod strategy;

pub use error::{Error, Result};
pub use specfun::Sign;
