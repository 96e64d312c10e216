// SPDX-License-Identifier: Apache-2.0

//! Real Aharonov–Anandan phases of non-unitary cyclic evolutions, Berry
//! phases of eigenpaths, and Bloch-sphere coordinates.
//!
//! For a cyclic trajectory with `psi(T) = e^{i alpha} psi(0)` the phase is
//! `beta = alpha + i int <psi|psi'>/<psi|psi> dt`, whose imaginary part
//! vanishes identically. It is evaluated in the Pancharatnam form
//! `arg<phi_0|phi_N> - sum_k arg<phi_k|phi_{k+1}>`, which is gauge invariant
//! sample by sample.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::adiabatic::EigenPath;
use crate::error::{Error, Result};
use crate::numerics::linalg::I;
use crate::numerics::ode::{Hamiltonian, Trajectory};
use crate::numerics::CVec2;

/// Relative deviation of `psi(T)` from a multiple of `psi(0)` tolerated by
/// the cyclicity check.
pub const CLOSURE_TOL: f64 = 1e-6;
/// Consecutive normalized overlaps below this are rejected.
pub const OVERLAP_TOL: f64 = 1e-3;
/// Agreement expected between the two phase formulas.
pub const FORM_TOL: f64 = 1e-5;

/// Reduces to `[0, 2 pi)`.
pub fn wrap_phase(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Distance between two phases on the circle, in `[0, pi]`.
pub fn phase_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseResult {
    /// Geometric phase in `[0, 2 pi)`.
    pub beta: f64,
    /// Overall phase, `psi(T) = e^{i alpha} psi(0)`.
    pub alpha: C64,
    /// `int_0^T <psi|psi'>/<psi|psi> dt`.
    pub dynamical_integral: C64,
    /// `|Im beta|` before it is discarded.
    pub imag_residual: f64,
}

/// `<psi_0|psi_N> / <psi_0|psi_0>` after checking that the trajectory closes.
fn closure_factor(traj: &Trajectory) -> Result<C64> {
    let (first, last) = (traj.first(), traj.last());
    if first.norm() == 0.0 || !first.is_finite() || !last.is_finite() {
        return Err(Error::NotCyclic(f64::INFINITY));
    }
    let c = first.dot(&last) / first.norm_sqr();
    let defect = (last - first.scale(c)).norm() / last.norm().max(f64::MIN_POSITIVE);
    if !(defect < CLOSURE_TOL) || c.norm() == 0.0 {
        return Err(Error::NotCyclic(defect));
    }
    Ok(c)
}

/// Sum of `arg <v_k|v_{k+1}>` over a sampled curve.
fn connection_sum(states: &[CVec2]) -> Result<f64> {
    let mut sum = 0.0;
    for (k, w) in states.windows(2).enumerate() {
        let o = w[0].dot(&w[1]);
        let n = w[0].norm() * w[1].norm();
        if !(o.norm() > OVERLAP_TOL * n) {
            return Err(Error::ZeroOverlap(k));
        }
        sum += o.arg();
    }
    Ok(sum)
}

/// Geometric phase of a cyclic trajectory.
pub fn aa_phase(traj: &Trajectory) -> Result<PhaseResult> {
    let c = closure_factor(traj)?;
    let arg_sum = connection_sum(&traj.states)?;
    let norm_log = (traj.last().norm() / traj.first().norm()).ln();
    let dynamical_integral = I * arg_sum + norm_log;
    let alpha = -I * c.ln();
    let raw = alpha + I * dynamical_integral;
    Ok(PhaseResult {
        beta: wrap_phase(raw.re),
        alpha,
        dynamical_integral,
        imag_residual: raw.im.abs(),
    })
}

/// Composite Simpson on a uniform grid with an even number of intervals,
/// trapezoid otherwise.
fn integrate_uniform(values: &[C64], h: f64) -> C64 {
    let n = values.len() - 1;
    if n >= 2 && n.is_multiple_of(2) {
        let mut s = values[0] + values[n];
        for (k, v) in values.iter().enumerate().take(n).skip(1) {
            s += v * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * (h / 3.0)
    } else {
        let inner: C64 = values[1..n].iter().sum();
        (inner + 0.5 * (values[0] + values[n])) * h
    }
}

fn is_uniform(times: &[f64]) -> bool {
    let h = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h)
}

/// The phase from `Re alpha + Re int <psi|H|psi>/<psi|psi> dt`, cross-checked
/// against [`aa_phase`].
pub fn aa_phase_energy_form(traj: &Trajectory, h: &dyn Hamiltonian) -> Result<PhaseResult> {
    let c = closure_factor(traj)?;
    let energies: Vec<C64> = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, s)| h.at(t).expectation(s) / s.norm_sqr())
        .collect();
    let integral = if is_uniform(&traj.times) {
        integrate_uniform(&energies, traj.times[1] - traj.times[0])
    } else {
        traj.times
            .windows(2)
            .zip(energies.windows(2))
            .map(|(t, e)| (e[0] + e[1]) * (0.5 * (t[1] - t[0])))
            .sum()
    };
    let alpha = -I * c.ln();
    let raw = alpha + integral;
    let result = PhaseResult {
        beta: wrap_phase(raw.re),
        alpha,
        dynamical_integral: -I * integral,
        imag_residual: raw.im.abs(),
    };
    let reference = aa_phase(traj)?;
    let gap = phase_distance(result.beta, reference.beta);
    if gap > 100.0 * FORM_TOL {
        return Err(Error::InconsistentDynamics(gap));
    }
    Ok(result)
}

/// Berry phase of a closed eigenpath, in `[0, 2 pi)`.
pub fn berry_phase(path: &EigenPath) -> Result<f64> {
    let (first, last) = match (path.vectors.first(), path.vectors.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(Error::InvalidArgument("empty eigenpath".into())),
    };
    let defect = first.ray_distance(&last);
    if !(defect < CLOSURE_TOL) {
        return Err(Error::NotClosed(defect));
    }
    let arg_sum = connection_sum(&path.vectors)?;
    Ok(wrap_phase(first.dot(&last).arg() - arg_sum))
}

/// Polar angle `Theta` in `[0, pi]` and azimuth `Phi` in `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    pub theta: f64,
    pub phi: f64,
}

/// `Theta = 2 atan2(|b|, |a|)`, `Phi = arg b - arg a`; `Phi = 0` at the
/// poles.
pub fn bloch_coords(state: &CVec2) -> Result<BlochPoint> {
    if state.norm() == 0.0 {
        return Err(Error::ZeroState);
    }
    let theta = 2.0 * state.b.norm().atan2(state.a.norm());
    let phi = if state.a.norm() == 0.0 || state.b.norm() == 0.0 {
        0.0
    } else {
        wrap_phase(state.b.arg() - state.a.arg())
    };
    Ok(BlochPoint { theta, phi })
}

/// Half the solid angle enclosed by a latitude circle: `pi (1 + cos Theta)`.
pub fn solid_angle_phase(theta: f64) -> f64 {
    PI * (1.0 + theta.cos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{h1_aa_exact, h1_cyclic_exact, Model1Params, Model2Params};
    use crate::numerics::linalg::{CMat2, ONE};
    use crate::numerics::ode::propagate;
    use crate::numerics::Branch;

    fn h1_params() -> Model1Params {
        Model1Params::new(C64::new(0.5, 0.0), 1.0).unwrap()
    }

    #[test]
    fn model1_branch_matches_closed_form() {
        let p = h1_params();
        for b in [Branch::Plus, Branch::Minus] {
            let u = h1_cyclic_exact(&p, b, 0.0).unwrap();
            let traj = propagate(&p, u, p.period(), 1 << 14).unwrap();
            let res = aa_phase(&traj).unwrap();
            let exact = h1_aa_exact(&p, b).unwrap();
            assert!(
                phase_distance(res.beta, exact) < 1e-6,
                "{b}: {} vs {exact}",
                res.beta
            );
            assert!(res.imag_residual < 1e-8);
            let energy = aa_phase_energy_form(&traj, &p).unwrap();
            assert!(phase_distance(energy.beta, res.beta) < 1e-5);
        }
    }

    #[test]
    fn constant_state_has_no_phase() {
        let zero = |_t: f64| CMat2::zero();
        let traj = propagate(&zero, CVec2::from_re(0.6, 0.8), 5.0, 64).unwrap();
        assert!(phase_distance(aa_phase(&traj).unwrap().beta, 0.0) < 1e-15);
        assert!(phase_distance(aa_phase_energy_form(&traj, &zero).unwrap().beta, 0.0) < 1e-15);
    }

    #[test]
    fn stationary_pole_state() {
        let p = Model2Params::with_period(0.0, 10.0).unwrap();
        let traj = propagate(&p, CVec2::basis(0), p.period(), 1 << 12).unwrap();
        assert!(phase_distance(aa_phase_energy_form(&traj, &p).unwrap().beta, 0.0) < 1e-10);
    }

    #[test]
    fn gauge_factor_leaves_phase_unchanged() {
        let p = h1_params();
        let u = h1_cyclic_exact(&p, Branch::Plus, 0.0).unwrap();
        let traj = propagate(&p, u, p.period(), 1 << 12).unwrap();
        let period = p.period();
        let gauged = traj.regauged(|t| (C64::new(3.0, 2.0) * (TAU * t / period).sin()).exp());
        let (a, b) = (aa_phase(&traj).unwrap(), aa_phase(&gauged).unwrap());
        assert!(phase_distance(a.beta, b.beta) < 1e-8);
    }

    #[test]
    fn mismatched_dynamics_are_detected() {
        let p = h1_params();
        let u = h1_cyclic_exact(&p, Branch::Plus, 0.0).unwrap();
        let traj = propagate(&p, u, p.period(), 1 << 12).unwrap();
        // an energy shift moves the dynamical phase but not the trajectory
        let shifted = move |t: f64| p.at(t) + CMat2::identity().scale(C64::new(0.3, 0.0));
        let r = aa_phase_energy_form(&traj, &shifted);
        assert!(matches!(r, Err(Error::InconsistentDynamics(_))), "{r:?}");
    }

    #[test]
    fn open_trajectory_is_rejected() {
        let h = |_t: f64| CMat2::new(ONE, ONE, ONE, -ONE);
        let traj = propagate(&h, CVec2::basis(0), 1.0, 64).unwrap();
        assert!(matches!(aa_phase(&traj), Err(Error::NotCyclic(_))));
    }

    #[test]
    fn bloch_examples() {
        assert_eq!(
            bloch_coords(&CVec2::basis(0)).unwrap(),
            BlochPoint {
                theta: 0.0,
                phi: 0.0
            }
        );
        let p = bloch_coords(&CVec2::from_re(1.0, 1.0)).unwrap();
        assert!((p.theta - PI / 2.0).abs() < 1e-15 && p.phi == 0.0);
        let q = bloch_coords(&CVec2::new(ONE, I)).unwrap();
        assert!((q.theta - PI / 2.0).abs() < 1e-15 && (q.phi - PI / 2.0).abs() < 1e-15);
        assert!(matches!(
            bloch_coords(&CVec2::from_re(0.0, 0.0)),
            Err(Error::ZeroState)
        ));
    }

    #[test]
    fn solid_angle_identity() {
        assert!((solid_angle_phase(PI / 2.0) - PI).abs() < 1e-15);
        assert!(phase_distance(solid_angle_phase(0.0), 0.0) < 1e-15);
        let p = h1_params();
        let cf = crate::models::closed_form(&p).unwrap();
        for b in [Branch::Plus, Branch::Minus] {
            let exact = h1_aa_exact(&p, b).unwrap();
            assert!((solid_angle_phase(cf.theta[b.index()]) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn wrapping() {
        assert_eq!(wrap_phase(-1e-20), 0.0);
        assert!((wrap_phase(7.0) - (7.0 - TAU)).abs() < 1e-15);
        assert!((phase_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
    }
}
