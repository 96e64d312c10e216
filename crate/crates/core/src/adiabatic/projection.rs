// SPDX-License-Identifier: Apache-2.0

//! Expansion of evolving states in the instantaneous eigenbasis.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::eigenpath::EigenPath;
use crate::error::{Error, Result};
use crate::numerics::ode::Trajectory;
use crate::numerics::{Branch, CMat2, CVec2};

/// `|a| / ||state||` below which `b/a` is treated as a pole.
pub const POLE_TOL: f64 = 1e-12;

/// Coefficients `(a+, a-)` with `a+ e+ + a- e- = state`.
pub fn project(state: &CVec2, e_plus: &CVec2, e_minus: &CVec2) -> Result<(C64, C64)> {
    let basis = CMat2::from_columns(*e_plus, *e_minus);
    let scale = e_plus.norm() * e_minus.norm();
    if !(basis.det().norm() > 1e-12 * scale) {
        return Err(Error::DegenerateBasis);
    }
    let inv = basis.inverse().ok_or(Error::DegenerateBasis)?;
    let c = inv * *state;
    Ok((c.a, c.b))
}

/// `b / a`.
pub fn component_ratio(state: &CVec2) -> Result<C64> {
    if !(state.a.norm() > POLE_TOL * state.norm()) {
        return Err(Error::PoleCrossing);
    }
    Ok(state.b / state.a)
}

/// Eigenbasis coefficients along a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionSeries {
    pub grid: Vec<f64>,
    pub a_plus: Vec<C64>,
    pub a_minus: Vec<C64>,
    /// The eigenpath the state is meant to follow.
    pub reference: Branch,
}

impl ProjectionSeries {
    /// `R = a_other / a_own` per sample.
    pub fn ratios(&self) -> Vec<C64> {
        self.a_plus
            .iter()
            .zip(&self.a_minus)
            .map(|(&p, &m)| match self.reference {
                Branch::Plus => m / p,
                Branch::Minus => p / m,
            })
            .collect()
    }

    /// Largest `||a+ e+ + a- e- - psi|| / ||psi||` over the samples.
    pub fn reconstruction_error(&self, traj: &Trajectory, paths: &[EigenPath; 2]) -> f64 {
        (0..self.grid.len())
            .map(|k| {
                let psi = traj.states[k];
                let rec = paths[0].vectors[k].scale(self.a_plus[k])
                    + paths[1].vectors[k].scale(self.a_minus[k]);
                (rec - psi).norm() / psi.norm()
            })
            .fold(0.0, f64::max)
    }
}

pub(crate) fn check_shared_grid(traj: &Trajectory, paths: &[EigenPath; 2]) -> Result<()> {
    if paths.iter().any(|p| p.len() != traj.len()) {
        return Err(Error::InvalidArgument(format!(
            "trajectory has {} samples, eigenpaths {} and {}",
            traj.len(),
            paths[0].len(),
            paths[1].len()
        )));
    }
    Ok(())
}

/// Projects every sample of `traj` on `paths = [E+, E-]`.
pub fn ratio_series(
    traj: &Trajectory,
    paths: &[EigenPath; 2],
    reference: Branch,
) -> Result<ProjectionSeries> {
    check_shared_grid(traj, paths)?;
    let mut a_plus = Vec::with_capacity(traj.len());
    let mut a_minus = Vec::with_capacity(traj.len());
    for (k, psi) in traj.states.iter().enumerate() {
        let (p, m) = project(psi, &paths[0].vectors[k], &paths[1].vectors[k])?;
        a_plus.push(p);
        a_minus.push(m);
    }
    Ok(ProjectionSeries {
        grid: traj.times.clone(),
        a_plus,
        a_minus,
        reference,
    })
}

/// Angular width of a hop: the distance between the points where the
/// weight `p = |R|^2 / (1 + |R|^2)` passes 0.1 and 0.9 around the
/// half-weight crossing nearest to `near`.
pub fn transition_width(grid: &[f64], ratios: &[C64], near: f64) -> Option<f64> {
    let p: Vec<f64> = ratios
        .iter()
        .map(|r| r.norm_sqr() / (1.0 + r.norm_sqr()))
        .collect();
    let level_at = |k: usize, level: f64| {
        grid[k] + (grid[k + 1] - grid[k]) * (level - p[k]) / (p[k + 1] - p[k])
    };
    let k0 = (0..p.len() - 1)
        .filter(|&k| (p[k] - 0.5) * (p[k + 1] - 0.5) <= 0.0 && p[k] != p[k + 1])
        .min_by(|&a, &b| (grid[a] - near).abs().total_cmp(&(grid[b] - near).abs()))?;
    let rising = p[k0 + 1] > p[k0];
    let (lo_level, hi_level) = if rising { (0.1, 0.9) } else { (0.9, 0.1) };
    let crosses =
        |k: usize, level: f64| (p[k] - level) * (p[k + 1] - level) <= 0.0 && p[k] != p[k + 1];
    let left = (0..=k0).rev().find(|&k| crosses(k, lo_level))?;
    let right = (k0..p.len() - 1).find(|&k| crosses(k, hi_level))?;
    Some((level_at(right, hi_level) - level_at(left, lo_level)).abs())
}
