//! Complex special functions for the Coulomb problem.

mod coulomb;
pub mod dd;
mod gamma;
mod kummer;
mod tricomi;

pub use coulomb::{
    g1, g1_from_u1, g2, g2_from_u2, kummer_m_imaginary, u1_from_g1, u1_u2, u1_u2_with, u2_from_g2, u_shifted,
    u_shifted_with, Sign,
};
pub use gamma::{complex_digamma, complex_gamma, digamma_shifted, ln_gamma, recip_gamma};
pub use kummer::{kummer_m, kummer_m_maclaurin, OVERFLOW_GUARD};
pub use tricomi::{
    tricomi_registry, tricomi_u, tricomi_u_asymptotic, tricomi_u_integral, tricomi_u_series, AsymptoticStrategy,
    AutoStrategy, EvalRegime, IntegralStrategy, RegimeConfig, RegimeTag, SeriesStrategy, TricomiStrategy,
};

/// Complex numbers throughout the library.
pub type ComplexValue = num_complex::Complex64;
