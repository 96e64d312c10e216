// SPDX-License-Identifier: Apache-2.0

//! Fixed-step RK4 propagation of `i dpsi/dt = H(t) psi` (hbar = 1).
//!
//! The equation is linear, so one RK4 step is itself a 2x2 matrix. Besides
//! propagating single states, [`StepPropagators`] stores those per-step
//! matrices so the Floquet machinery can reuse one integration for many
//! initial states, and run it backwards.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::linalg::{CMat2, CVec2, I};
use crate::error::{Error, Result};

/// Default number of RK4 steps per period.
pub const DEFAULT_STEPS: usize = 1 << 14;
/// Smallest accepted number of steps.
pub const MIN_STEPS: usize = 16;
/// Default cap on the magnitude of any state component.
pub const DEFAULT_OVERFLOW_CAP: f64 = 1e15;

/// A time-dependent 2x2 generator `H(t)`.
pub trait Hamiltonian: Sync {
    fn at(&self, t: f64) -> CMat2;
}

impl<F> Hamiltonian for F
where
    F: Fn(f64) -> CMat2 + Sync,
{
    fn at(&self, t: f64) -> CMat2 {
        self(t)
    }
}

/// Model name and parameter record attached to a trajectory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub model: String,
    pub params: Vec<(String, f64)>,
    pub steps: usize,
}

/// Time-ordered samples of a state over one period `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CVec2>,
    pub period: f64,
    pub info: RunInfo,
}

impl Trajectory {
    /// Validates the grid: strictly increasing, from 0 to `period`, one
    /// state per time.
    pub fn new(times: Vec<f64>, states: Vec<CVec2>, period: f64) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::InvalidArgument(format!(
                "{} times but {} states",
                times.len(),
                states.len()
            )));
        }
        if times.len() < 2 || !(period > 0.0) {
            return Err(Error::InvalidArgument(
                "trajectory needs >= 2 samples and T > 0".into(),
            ));
        }
        if times[0] != 0.0 || (times[times.len() - 1] - period).abs() > 1e-12 * period {
            return Err(Error::InvalidArgument(
                "trajectory grid must run from 0 to T".into(),
            ));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument(
                "trajectory times must increase strictly".into(),
            ));
        }
        Ok(Self {
            times,
            states,
            period,
            info: RunInfo::default(),
        })
    }

    pub fn with_info(mut self, info: RunInfo) -> Self {
        self.info = info;
        self
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn first(&self) -> CVec2 {
        self.states[0]
    }

    pub fn last(&self) -> CVec2 {
        self.states[self.states.len() - 1]
    }

    /// Rescaled time `theta = 2 pi t / T`.
    pub fn thetas(&self) -> Vec<f64> {
        self.times
            .iter()
            .map(|t| std::f64::consts::TAU * t / self.period)
            .collect()
    }

    /// Multiplies sample `k` by `gauge(t_k)`.
    pub fn regauged(&self, gauge: impl Fn(f64) -> C64) -> Trajectory {
        let states = self
            .times
            .iter()
            .zip(&self.states)
            .map(|(&t, s)| s.scale(gauge(t)))
            .collect();
        Trajectory {
            states,
            ..self.clone()
        }
    }

    /// `wa * self + wb * other` on a shared grid.
    pub fn superpose(&self, wa: C64, other: &Trajectory, wb: C64) -> Result<Trajectory> {
        if self.times != other.times {
            return Err(Error::InvalidArgument(
                "superposed trajectories must share a grid".into(),
            ));
        }
        let states = self
            .states
            .iter()
            .zip(&other.states)
            .map(|(x, y)| x.scale(wa) + y.scale(wb))
            .collect();
        Ok(Trajectory {
            states,
            ..self.clone()
        })
    }
}

/// Uniform grid `t_k = k T / steps`, `k = 0..=steps`.
pub fn uniform_grid(period: f64, steps: usize) -> Vec<f64> {
    let h = period / steps as f64;
    let mut g: Vec<f64> = (0..=steps).map(|k| k as f64 * h).collect();
    g[steps] = period;
    g
}

/// Fixed-step RK4 integrator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub steps: usize,
    pub overflow_cap: f64,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            steps: DEFAULT_STEPS,
            overflow_cap: DEFAULT_OVERFLOW_CAP,
        }
    }
}

impl Integrator {
    pub fn new(steps: usize) -> Self {
        Self {
            steps,
            ..Self::default()
        }
    }

    fn check(&self, period: f64) -> Result<()> {
        if self.steps < MIN_STEPS {
            return Err(Error::InvalidArgument(format!(
                "steps must be >= {MIN_STEPS}, got {}",
                self.steps
            )));
        }
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "period must be positive, got {period}"
            )));
        }
        Ok(())
    }

    /// Propagates `psi0` over one period. No renormalization is applied.
    pub fn propagate(&self, h: &dyn Hamiltonian, psi0: CVec2, period: f64) -> Result<Trajectory> {
        self.check(period)?;
        let times = uniform_grid(period, self.steps);
        let dt = period / self.steps as f64;
        let rhs = |t: f64, y: CVec2| (h.at(t) * y).scale(-I);
        let mut states = Vec::with_capacity(self.steps + 1);
        let mut y = psi0;
        states.push(y);
        for &t in &times[..self.steps] {
            let k1 = rhs(t, y);
            let k2 = rhs(t + 0.5 * dt, y + k1 * (0.5 * dt));
            let k3 = rhs(t + 0.5 * dt, y + k2 * (0.5 * dt));
            let k4 = rhs(t + dt, y + k3 * dt);
            y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
            self.guard(t + dt, y.max_abs())?;
            states.push(y);
        }
        Trajectory::new(times, states, period)
    }

    /// Per-step RK4 matrices and the trace integral on the same nodes.
    pub fn step_propagators(&self, h: &dyn Hamiltonian, period: f64) -> Result<StepPropagators> {
        self.check(period)?;
        let dt = period / self.steps as f64;
        let id = CMat2::identity();
        let mut steps = Vec::with_capacity(self.steps);
        let mut trace_integral = C64::new(0.0, 0.0);
        for k in 0..self.steps {
            let t = k as f64 * dt;
            let (h0, hm, h1) = (h.at(t), h.at(t + 0.5 * dt), h.at(t + dt));
            let a0 = h0.scale(-I);
            let am = hm.scale(-I);
            let a1 = h1.scale(-I);
            let k1 = a0;
            let k2 = am * (id + k1.scale((0.5 * dt).into()));
            let k3 = am * (id + k2.scale((0.5 * dt).into()));
            let k4 = a1 * (id + k3.scale(dt.into()));
            let sum = k1 + k2.scale(2.0.into()) + k3.scale(2.0.into()) + k4;
            let m = id + sum.scale((dt / 6.0).into());
            if !m.is_finite() {
                return Err(Error::Overflow {
                    time: t,
                    magnitude: f64::INFINITY,
                    cap: self.overflow_cap,
                });
            }
            steps.push(m);
            trace_integral += (h0.trace() + hm.trace() * 4.0 + h1.trace()) * (dt / 6.0);
        }
        Ok(StepPropagators {
            period,
            steps,
            trace_integral,
            overflow_cap: self.overflow_cap,
        })
    }

    fn guard(&self, t: f64, magnitude: f64) -> Result<()> {
        if !(magnitude <= self.overflow_cap) {
            return Err(Error::Overflow {
                time: t,
                magnitude,
                cap: self.overflow_cap,
            });
        }
        Ok(())
    }
}

/// Propagates with default settings apart from the step count.
pub fn propagate(
    h: &dyn Hamiltonian,
    psi0: CVec2,
    period: f64,
    steps: usize,
) -> Result<Trajectory> {
    Integrator::new(steps).propagate(h, psi0, period)
}

/// The RK4 step matrices `M_k` with `psi_{k+1} = M_k psi_k`.
#[derive(Debug, Clone)]
pub struct StepPropagators {
    pub period: f64,
    pub steps: Vec<CMat2>,
    /// `int_0^T tr H dt` by Simpson's rule on the RK4 nodes.
    pub trace_integral: C64,
    pub overflow_cap: f64,
}

impl StepPropagators {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.period / self.steps.len() as f64
    }

    pub fn times(&self) -> Vec<f64> {
        uniform_grid(self.period, self.steps.len())
    }

    /// Ordered product `M_{end-1} ... M_{start}`.
    pub fn product(&self, start: usize, end: usize) -> Result<CMat2> {
        let mut p = CMat2::identity();
        for (k, m) in self.steps[start..end].iter().enumerate() {
            p = *m * p;
            let mag = p.max_abs();
            if !(mag <= self.overflow_cap) {
                let time = (start + k + 1) as f64 * self.dt();
                return Err(Error::Overflow {
                    time,
                    magnitude: mag,
                    cap: self.overflow_cap,
                });
            }
        }
        Ok(p)
    }

    /// States `M_{k-1} ... M_0 u` for `k = 0..=N`.
    pub fn forward(&self, u: CVec2) -> Result<Vec<CVec2>> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut y = u;
        out.push(y);
        for (k, m) in self.steps.iter().enumerate() {
            y = *m * y;
            self.check_magnitude(k + 1, y.max_abs())?;
            out.push(y);
        }
        Ok(out)
    }

    /// States obtained by integrating backwards from `v` at `t = T`;
    /// element `k` approximates the state at `t_k`.
    pub fn backward(&self, v: CVec2) -> Result<Vec<CVec2>> {
        let n = self.steps.len();
        let mut out = vec![v; n + 1];
        let mut y = v;
        for k in (0..n).rev() {
            let inv = self.steps[k].inverse().ok_or_else(|| Error::Overflow {
                time: k as f64 * self.dt(),
                magnitude: f64::INFINITY,
                cap: self.overflow_cap,
            })?;
            y = inv * y;
            self.check_magnitude(k, y.max_abs())?;
            out[k] = y;
        }
        Ok(out)
    }

    fn check_magnitude(&self, k: usize, magnitude: f64) -> Result<()> {
        if !(magnitude <= self.overflow_cap) {
            return Err(Error::Overflow {
                time: k as f64 * self.dt(),
                magnitude,
                cap: self.overflow_cap,
            });
        }
        Ok(())
    }
}
