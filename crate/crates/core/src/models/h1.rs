// SPDX-License-Identifier: Apache-2.0

//! The rotating-field two-level model with complex detuning and its exact
//! cyclic solutions.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::floquet::{cyclic_orbits, order_by_multiplier, CyclicOrbit};
use crate::numerics::linalg::I;
use crate::numerics::ode::{Hamiltonian, Integrator};
use crate::numerics::{Branch, CMat2, CVec2};

/// `|Omega|` below which the model sits on an exceptional point.
pub const EXCEPTIONAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model1Params {
    pub epsilon: C64,
    pub omega: f64,
}

impl Model1Params {
    pub fn new(epsilon: C64, omega: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() || !epsilon.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "model 1 needs omega > 0, got {omega}"
            )));
        }
        Ok(Self { epsilon, omega })
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }
}

/// `[[eps, e^{-i w t}], [e^{i w t}, -eps]]`.
pub fn h1(p: &Model1Params, t: f64) -> CMat2 {
    CMat2::new(
        p.epsilon,
        (-I * (p.omega * t)).exp(),
        (I * (p.omega * t)).exp(),
        -p.epsilon,
    )
}

impl Hamiltonian for Model1Params {
    fn at(&self, t: f64) -> CMat2 {
        h1(self, t)
    }
}

/// Quantities parameterizing the two exact cyclic solutions. Arrays are
/// indexed by [`Branch::index`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Model1ClosedForm {
    /// `Omega = sqrt(1 + (eps - w/2)^2)`, principal root.
    pub big_omega: C64,
    /// `eps - w/2 +/- Omega`.
    pub a: [C64; 2],
    /// Bloch polar angles `2 arccot |eps - w/2 +/- Omega|`, in `(0, pi)`.
    pub theta: [f64; 2],
    /// `arg(eps - w/2 +/- Omega)`, in `(-pi, pi]`.
    pub gamma: [f64; 2],
    pub omega: f64,
}

impl Model1ClosedForm {
    /// Azimuth `Phi = w t - gamma`.
    pub fn phi(&self, branch: Branch, t: f64) -> f64 {
        self.omega * t - self.gamma[branch.index()]
    }
}

pub fn closed_form(p: &Model1Params) -> Result<Model1ClosedForm> {
    let delta = p.epsilon - 0.5 * p.omega;
    let big_omega = (1.0 + delta * delta).sqrt();
    if big_omega.norm() < EXCEPTIONAL_TOL {
        return Err(Error::ExceptionalPoint(big_omega.norm()));
    }
    let a = [delta + big_omega, delta - big_omega];
    // arccot on (0, pi/2] for a non-negative argument
    let theta = a.map(|x| 2.0 * (1.0 / x.norm()).atan());
    let gamma = a.map(|x| x.arg());
    Ok(Model1ClosedForm {
        big_omega,
        a,
        theta,
        gamma,
        omega: p.omega,
    })
}

/// Exact cyclic state
/// `e^{-/+ i Omega t - i w t/2 + i gamma} (cos(Theta/2), sin(Theta/2) e^{i Phi})`.
pub fn h1_cyclic_exact(p: &Model1Params, branch: Branch, t: f64) -> Result<CVec2> {
    let cf = closed_form(p)?;
    let i = branch.index();
    let phase =
        (-I * branch.sign() * cf.big_omega * t - I * (0.5 * p.omega * t) + I * cf.gamma[i]).exp();
    let (s, c) = (0.5 * cf.theta[i]).sin_cos();
    Ok(CVec2::new(C64::new(c, 0.0), C64::from_polar(s, cf.phi(branch, t))).scale(phase))
}

/// Floquet multiplier `e^{-/+ i Omega T - i pi}` of the exact cyclic state.
pub fn h1_multiplier(p: &Model1Params, branch: Branch) -> Result<C64> {
    let cf = closed_form(p)?;
    Ok((-I * branch.sign() * cf.big_omega * p.period() - I * PI).exp())
}

fn phase_from_modulus(m2: f64) -> f64 {
    TAU * m2 / (m2 + 1.0)
}

/// `2 pi |A|^2 / (|A|^2 + 1)` with `A = eps - w/2 +/- Omega`.
pub fn h1_aa_exact(p: &Model1Params, branch: Branch) -> Result<f64> {
    let cf = closed_form(p)?;
    Ok(phase_from_modulus(cf.a[branch.index()].norm_sqr()))
}

/// Limit of [`h1_aa_exact`] as `w -> 0`.
pub fn h1_aa_slow_limit(epsilon: C64, branch: Branch) -> Result<f64> {
    let q = 1.0 + epsilon * epsilon;
    if q.norm() < EXCEPTIONAL_TOL {
        return Err(Error::ExceptionalPoint(q.norm()));
    }
    Ok(phase_from_modulus(
        (epsilon + branch.sign() * q.sqrt()).norm_sqr(),
    ))
}

/// Complex comparison phase `pi (1 - eps / sqrt(1 + eps^2))`. Reported for
/// reference only.
pub fn gw_phase(epsilon: C64) -> C64 {
    PI * (1.0 - epsilon / (1.0 + epsilon * epsilon).sqrt())
}

/// Numerical cyclic orbits ordered and labelled like the exact branches
/// (nearest Floquet multiplier).
pub fn h1_cyclic_orbits(p: &Model1Params, integrator: &Integrator) -> Result<[CyclicOrbit; 2]> {
    let steps = integrator.step_propagators(p, p.period())?;
    let orbits = cyclic_orbits(&steps, 1e-9)?;
    let targets = [
        h1_multiplier(p, Branch::Plus)?,
        h1_multiplier(p, Branch::Minus)?,
    ];
    Ok(order_by_multiplier(orbits, targets))
}
