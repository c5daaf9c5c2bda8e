//! Per-sample interpolation table of ln σ′ over the thermal variable
//! x = E/(k_B T). For a given sample ξ·kr does not depend on E, so each
//! impurity kind needs only a one-dimensional table.

use super::{carrier_kinematics, ln_transport_primes, species_signs, SemiconductorSample};
use crate::error::{Error, Result};
use crate::Sign;
use rayon::prelude::*;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct SigmaPrimeTable {
    sample: SemiconductorSample,
    swap: bool,
    u0: f64,
    du: f64,
    /// ln σ′₁ − shift₁ at the nodes
    h1: Vec<f64>,
    h2: Option<Vec<f64>>,
}

/// e^{2πξ} grows out of any polynomial fit; it is taken out of repulsive
/// values before interpolating.
fn shift(sign: Sign, xi: f64) -> f64 {
    match sign {
        Sign::Attract => 0.0,
        Sign::Repel => 2.0 * PI * xi,
    }
}

impl SigmaPrimeTable {
    /// Nodes uniform in ln x over [x_lo, x_hi].
    pub fn build(sample: &SemiconductorSample, swap: bool, x_lo: f64, x_hi: f64, nodes: usize) -> Result<Self> {
        sample.validate()?;
        if !(x_lo > 0.0 && x_hi > x_lo && nodes >= 4) {
            return Err(Error::DomainError(format!("bad table range [{x_lo}, {x_hi}] with {nodes} nodes")));
        }
        let u0 = x_lo.ln();
        let du = (x_hi.ln() - u0) / (nodes - 1) as f64;
        let (s1, s2) = species_signs(swap);
        let kt = sample.kt();
        let rows: Vec<(f64, Option<f64>)> = (0..nodes)
            .into_par_iter()
            .map(|i| {
                let x = (u0 + du * i as f64).exp();
                let kin = carrier_kinematics(sample, x * kt)?;
                let (l1, l2) = ln_transport_primes(sample, x * kt, swap)?;
                Ok((l1 - shift(s1, kin.xi1), l2.map(|l| l - shift(s2, kin.xi2))))
            })
            .collect::<Result<_>>()?;
        let h1 = rows.iter().map(|r| r.0).collect();
        let h2 = if sample.k > 0.0 { Some(rows.iter().map(|r| r.1.unwrap_or(f64::NAN)).collect()) } else { None };
        Ok(SigmaPrimeTable { sample: *sample, swap, u0, du, h1, h2 })
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.u0.exp(), (self.u0 + self.du * (self.h1.len() - 1) as f64).exp())
    }

    /// Four-point Lagrange interpolation in ln x.
    fn interp(&self, h: &[f64], u: f64) -> f64 {
        let n = h.len();
        let t = (u - self.u0) / self.du;
        let i = (t.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let s = t - i as f64;
        let (y0, y1, y2, y3) = (h[i], h[i + 1], h[i + 2], h[i + 3]);
        -y0 * (s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0 + y1 * s * (s - 2.0) * (s - 3.0) / 2.0
            - y2 * s * (s - 1.0) * (s - 3.0) / 2.0
            + y3 * s * (s - 1.0) * (s - 2.0) / 6.0
    }

    /// Interpolated (ln σ′₁, ln σ′₂) at x inside the table range.
    pub fn ln_primes(&self, x: f64) -> Result<(f64, Option<f64>)> {
        let (lo, hi) = self.x_range();
        if !(x >= lo * (1.0 - 1e-12) && x <= hi * (1.0 + 1e-12)) {
            return Err(Error::DomainError(format!("x = {x} outside the table range [{lo}, {hi}]")));
        }
        let u = x.ln();
        let kin = carrier_kinematics(&self.sample, x * self.sample.kt())?;
        let (s1, s2) = species_signs(self.swap);
        let l1 = self.interp(&self.h1, u) + shift(s1, kin.xi1);
        let l2 = self.h2.as_ref().map(|h| self.interp(h, u) + shift(s2, kin.xi2));
        Ok((l1, l2))
    }
}
