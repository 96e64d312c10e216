// SPDX-License-Identifier: Apache-2.0

//! Complex-symmetric driven model with a cosine coupling.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::linalg::I;
use crate::numerics::ode::Hamiltonian;
use crate::numerics::CMat2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model2Params {
    pub mu: f64,
    pub omega: f64,
}

impl Model2Params {
    pub fn new(mu: f64, omega: f64) -> Result<Self> {
        if !(mu >= 0.0) || !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "model 2 needs mu >= 0 and omega > 0, got {mu}, {omega}"
            )));
        }
        Ok(Self { mu, omega })
    }

    /// Parameters for the drive with period `T`.
    pub fn with_period(mu: f64, period: f64) -> Result<Self> {
        Self::new(mu, TAU / period)
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }
}

/// `[[1, i mu (cos wt + i)], [i mu (cos wt + i), -1]]`.
pub fn h2(p: &Model2Params, t: f64) -> CMat2 {
    let off = I * p.mu * ((p.omega * t).cos() + I);
    CMat2::new(C64::new(1.0, 0.0), off, off, C64::new(-1.0, 0.0))
}

impl Hamiltonian for Model2Params {
    fn at(&self, t: f64) -> CMat2 {
        h2(self, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uncoupled_is_diagonal() {
        let p = Model2Params::new(0.0, 1.0).unwrap();
        assert_eq!(
            h2(&p, 0.7),
            CMat2::diag(C64::new(1.0, 0.0), C64::new(-1.0, 0.0))
        );
    }

    #[test]
    fn quarter_period_is_real_symmetric() {
        let p = Model2Params::with_period(0.3, 8.0).unwrap();
        let m = h2(&p, 2.0);
        assert!((m.m[0][1] + 0.3).norm() < 1e-15);
        assert!(m.m.iter().flatten().all(|x| x.im.abs() < 1e-15));
    }

    #[test]
    fn complex_symmetric() {
        let p = Model2Params::new(1.2, 0.06).unwrap();
        for t in [0.0, 13.0, 77.7] {
            assert_eq!(h2(&p, t), h2(&p, t).transpose());
        }
    }
}
