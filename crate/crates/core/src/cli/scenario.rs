// SPDX-License-Identifier: Apache-2.0

//! Model instances and initial-state trajectories for one period.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use super::config::{InitialState, ModelKind, ScenarioConfig};
use crate::adiabatic::{eigen_track, EigenPath};
use crate::error::Result;
use crate::models::{
    bu_cyclic_orbits, bu_instantaneous, h1_cyclic_orbits, BUParams, Model1Params, Model2Params,
};
use crate::numerics::ode::{uniform_grid, RunInfo};
use crate::numerics::{cyclic_orbits, CMat2, CyclicOrbit, Hamiltonian, Integrator, Trajectory};

/// Relative tolerance passed to the multiplier clustering of generic shooting.
const SHOOTING_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    H1(Model1Params),
    H2(Model2Params),
    Bu(BUParams),
}

impl Hamiltonian for Model {
    fn at(&self, t: f64) -> CMat2 {
        match self {
            Model::H1(p) => p.at(t),
            Model::H2(p) => p.at(t),
            Model::Bu(p) => p.at(t),
        }
    }
}

impl Model {
    /// The model of `cfg` at period `period`. For `h1` and `h2` the driving
    /// frequency becomes `2 pi / period`.
    pub fn build(cfg: &ScenarioConfig, period: f64) -> Result<Model> {
        let kind = cfg.model.unwrap_or(ModelKind::H2);
        Ok(match kind {
            ModelKind::H1 => Model::H1(Model1Params::new(cfg.epsilon, TAU / period)?),
            ModelKind::H2 => Model::H2(Model2Params::with_period(cfg.mu, period)?),
            ModelKind::Bu => Model::Bu(BUParams::new(cfg.rho, cfg.r, period)?),
        })
    }

    pub fn period(&self) -> f64 {
        match self {
            Model::H1(p) => p.period(),
            Model::H2(p) => p.period(),
            Model::Bu(p) => p.period,
        }
    }

    pub fn info(&self, steps: usize) -> RunInfo {
        let (model, params) = match self {
            Model::H1(p) => (
                "h1",
                vec![
                    ("epsilon_re", p.epsilon.re),
                    ("epsilon_im", p.epsilon.im),
                    ("omega", p.omega),
                ],
            ),
            Model::H2(p) => ("h2", vec![("mu", p.mu), ("omega", p.omega)]),
            Model::Bu(p) => ("bu", vec![("rho", p.rho), ("r", p.r)]),
        };
        let mut params: Vec<(String, f64)> = params
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        params.push(("period".into(), self.period()));
        RunInfo {
            model: model.into(),
            params,
            steps,
        }
    }

    /// Both cyclic orbits, ordered `[+, -]`.
    pub fn cyclic_orbits(&self, integrator: &Integrator) -> Result<[CyclicOrbit; 2]> {
        match self {
            Model::H1(p) => h1_cyclic_orbits(p, integrator),
            Model::Bu(p) => bu_cyclic_orbits(p, integrator),
            Model::H2(p) => {
                cyclic_orbits(&integrator.step_propagators(p, p.period())?, SHOOTING_TOL)
            }
        }
    }

    /// Instantaneous eigenpaths on the integrator grid. For the BU model with
    /// `rho < |r|` these are the analytic `+/- i sqrt z` branches.
    pub fn eigenpaths(&self, integrator: &Integrator) -> Result<[EigenPath; 2]> {
        match self {
            Model::Bu(p) if p.rho < p.r.abs() => {
                let thetas: Vec<f64> = uniform_grid(p.period, integrator.steps)
                    .iter()
                    .map(|&t| p.theta(t))
                    .collect();
                bu_instantaneous(p, &thetas)
            }
            _ => eigen_track(self, self.period(), integrator.steps),
        }
    }
}

/// The trajectory of the selected initial state.
pub fn initial_trajectory(
    model: &Model,
    initial: &InitialState,
    integrator: &Integrator,
    paths: &[EigenPath; 2],
) -> Result<Trajectory> {
    let traj = match *initial {
        InitialState::Cyclic(b) => model.cyclic_orbits(integrator)?[b.index()]
            .trajectory
            .clone(),
        InitialState::Mix(wp, wm) => {
            let [plus, minus] = model.cyclic_orbits(integrator)?;
            plus.trajectory
                .superpose(C64::new(wp, 0.0), &minus.trajectory, C64::new(wm, 0.0))?
        }
        InitialState::Eigen(b) => {
            integrator.propagate(model, paths[b.index()].vectors[0], model.period())?
        }
        InitialState::Custom(v) => integrator.propagate(model, v.normalized(), model.period())?,
    };
    Ok(traj.with_info(model.info(integrator.steps)))
}
