// SPDX-License-Identifier: Apache-2.0

//! One-period operator, cyclic states and their orbits.
//!
//! For long periods the monodromy matrix of a non-Hermitian drive is a
//! product of factors with wildly different growth rates and a single
//! shot loses the decaying direction to roundoff. [`cyclic_orbits`] cuts
//! the period wherever the running product becomes ill-conditioned and
//! solves the periodic boundary problem on the resulting segments as one
//! block-cyclic eigenproblem.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::linalg::{eig2, phase_of_multiplier, CMat2, CVec2, I};
use super::ode::{Hamiltonian, Integrator, StepPropagators, Trajectory};
use super::Branch;
use crate::error::{Error, Result};

/// Segment condition number `||P||_F^2 / |det P|` at which a new shooting
/// segment is started.
const SEGMENT_CONDITION: f64 = 1e4;

/// Monodromy matrix together with the trace integral used for the
/// Liouville self-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloquetOperator {
    pub matrix: CMat2,
    /// `int_0^T tr H dt` on the integration grid.
    pub trace_integral: C64,
    /// `det U(T)` as the product of the determinants of well-conditioned
    /// segments. `matrix.det()` loses all digits once the propagator grows
    /// by many orders of magnitude inside the period.
    pub determinant: C64,
}

impl FloquetOperator {
    pub fn from_steps(steps: &StepPropagators) -> Result<Self> {
        let mut determinant = C64::new(1.0, 0.0);
        for w in segment_bounds(steps).windows(2) {
            determinant *= steps.product(w[0], w[1])?.det();
        }
        Ok(Self {
            matrix: steps.product(0, steps.len())?,
            trace_integral: steps.trace_integral,
            determinant,
        })
    }

    /// `|det U(T) - exp(-i int tr H dt)|`.
    pub fn liouville_residual(&self) -> f64 {
        (self.determinant - (-I * self.trace_integral).exp()).norm()
    }
}

/// `U(T)` from RK4 with `steps` steps.
pub fn floquet_operator(h: &dyn Hamiltonian, period: f64, steps: usize) -> Result<FloquetOperator> {
    FloquetOperator::from_steps(&Integrator::new(steps).step_propagators(h, period)?)
}

/// Eigenvector of `U(T)` with `U(T) u = e^{i alpha} u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CyclicState {
    pub u: CVec2,
    pub alpha: C64,
    pub label: Branch,
}

impl CyclicState {
    pub fn multiplier(&self) -> C64 {
        (I * self.alpha).exp()
    }
}

/// Assigns `+` to the larger `Re alpha`, then the larger `Im alpha`.
fn label_pair(x: (CVec2, C64), y: (CVec2, C64), tol: f64) -> [CyclicState; 2] {
    let (ax, ay) = (phase_of_multiplier(x.1), phase_of_multiplier(y.1));
    let x_first = if (ax.re - ay.re).abs() > tol {
        ax.re > ay.re
    } else {
        ax.im >= ay.im
    };
    let (p, m) = if x_first {
        ((x.0, ax), (y.0, ay))
    } else {
        ((y.0, ay), (x.0, ax))
    };
    [
        CyclicState {
            u: p.0,
            alpha: p.1,
            label: Branch::Plus,
        },
        CyclicState {
            u: m.0,
            alpha: m.1,
            label: Branch::Minus,
        },
    ]
}

/// Both cyclic states of `u`, ordered `[+, -]`.
pub fn cyclic_states(u: &CMat2, tol: f64) -> Result<[CyclicState; 2]> {
    if u.det().norm() == 0.0 {
        return Err(Error::InvalidArgument(
            "Floquet operator is singular".into(),
        ));
    }
    let [p, q] = eig2(u, tol)?;
    Ok(label_pair(
        (p.vector.canonical(), p.value),
        (q.vector.canonical(), q.value),
        tol,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilityKind {
    Stable,
    Unstable,
    Marginal,
}

/// Stability verdict with the moduli of both Floquet multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityClass {
    pub kind: StabilityKind,
    pub moduli: [f64; 2],
}

/// `Stable` iff both multipliers lie on the unit circle within `tol`.
/// A defective `U` (Floquet exceptional point) is `Marginal`.
pub fn classify_stability(u: &CMat2, tol: f64) -> StabilityClass {
    match eig2(u, tol) {
        Ok([p, q]) => {
            let moduli = [p.value.norm(), q.value.norm()];
            let kind = if moduli.iter().all(|m| (m - 1.0).abs() <= tol) {
                StabilityKind::Stable
            } else {
                StabilityKind::Unstable
            };
            StabilityClass { kind, moduli }
        }
        Err(_) => {
            let m = u.det().norm().sqrt();
            StabilityClass {
                kind: StabilityKind::Marginal,
                moduli: [m, m],
            }
        }
    }
}

/// A cyclic state together with its sampled orbit over one period.
#[derive(Debug, Clone)]
pub struct CyclicOrbit {
    pub state: CyclicState,
    pub multiplier: C64,
    /// Starts at `state.u`, or at a positive multiple of it when the orbit
    /// from the unit state would exceed the overflow cap. The last sample is
    /// `multiplier` times the first up to integration error.
    pub trajectory: Trajectory,
}

impl CyclicOrbit {
    /// `||psi(T) - lambda psi(0)|| / ||psi(0)||`.
    pub fn closure_residual(&self) -> f64 {
        let t = &self.trajectory;
        (t.last() - t.first().scale(self.multiplier)).norm() / t.first().norm()
    }
}

/// Indices where shooting segments start, plus the end index.
fn segment_bounds(steps: &StepPropagators) -> Vec<usize> {
    let mut bounds = vec![0];
    let mut p = CMat2::identity();
    for (k, m) in steps.steps.iter().enumerate() {
        p = *m * p;
        let det = p.det().norm();
        if k + 1 < steps.len() && (det == 0.0 || p.norm().powi(2) / det > SEGMENT_CONDITION) {
            bounds.push(k + 1);
            p = CMat2::identity();
        }
    }
    bounds.push(steps.len());
    bounds
}

/// Unit-norm, canonical-phase orbit starting from the segment states.
fn assemble(
    steps: &StepPropagators,
    bounds: &[usize],
    starts: &[CVec2],
) -> Result<(Trajectory, C64)> {
    let mut states = Vec::with_capacity(steps.len() + 1);
    let mut y = starts[0];
    for (seg, w) in bounds.windows(2).enumerate() {
        if seg > 0 {
            y = starts[seg];
        }
        for m in &steps.steps[w[0]..w[1]] {
            states.push(y);
            y = *m * y;
        }
    }
    states.push(y);
    let y0 = states[0];
    let n = y0.norm();
    if !(n > 0.0) || states.iter().any(|s| !s.is_finite()) {
        return Err(Error::Overflow {
            time: 0.0,
            magnitude: f64::INFINITY,
            cap: steps.overflow_cap,
        });
    }
    let canon = y0.canonical();
    // canon = y0 * g for a complex g of modulus 1/n
    let g = if y0.a.norm() >= y0.b.norm() {
        canon.a / y0.a
    } else {
        canon.b / y0.b
    };
    for s in &mut states {
        *s = s.scale(g);
    }
    let first = states[0];
    let last = states[states.len() - 1];
    let lambda = first.dot(&last) / first.norm_sqr();
    fit_under_cap(&mut states, steps.overflow_cap)?;
    Ok((
        Trajectory::new(steps.times(), states, steps.period)?,
        lambda,
    ))
}

/// Scales an orbit down by one positive factor when its unit start would
/// put a later sample above `cap`. A cyclic state is defined only up to a
/// factor, so every projective quantity is unchanged.
fn fit_under_cap(states: &mut [CVec2], cap: f64) -> Result<()> {
    if states.iter().any(|s| !s.is_finite()) {
        return Err(Error::Overflow {
            time: f64::NAN,
            magnitude: f64::INFINITY,
            cap,
        });
    }
    let max = states.iter().map(CVec2::max_abs).fold(0.0, f64::max);
    if max > cap {
        let s = C64::new(1.0 / max, 0.0);
        for x in states.iter_mut() {
            *x = x.scale(s);
        }
    }
    Ok(())
}

/// `|ln(x / y)|`, a scale-free distance between multipliers.
fn log_distance(x: C64, y: C64) -> f64 {
    (x / y).ln().norm()
}

/// Both cyclic orbits by periodic multiple shooting, ordered `[+, -]`.
///
/// Within a segment the propagation is stable; the periodic coupling is
/// the block-cyclic matrix `C` with `C[k+1, k] = P_k`, whose eigenvalues
/// are the m-th roots of the two Floquet multipliers. One eigenvector per
/// multiplier is obtained by inverse iteration and the orbit is rebuilt
/// from it. `tol` is the relative multiplier gap below which the pair is
/// reported as degenerate.
pub fn cyclic_orbits(steps: &StepPropagators, tol: f64) -> Result<[CyclicOrbit; 2]> {
    let bounds = segment_bounds(steps);
    let starts: Vec<Vec<CVec2>> = if bounds.len() == 2 {
        let states = cyclic_states(&steps.product(0, steps.len())?, tol)?;
        states.iter().map(|s| vec![s.u]).collect()
    } else {
        shoot(steps, &bounds, tol)?
    };
    let a = assemble(steps, &bounds, &starts[0])?;
    let b = assemble(steps, &bounds, &starts[1])?;
    let ua = a.0.first().normalized();
    let [p, m] = label_pair((ua, a.1), (b.0.first().normalized(), b.1), tol);
    let (pt, mt) = if p.u == ua { (a.0, b.0) } else { (b.0, a.0) };
    Ok([
        CyclicOrbit {
            state: p,
            multiplier: p.multiplier(),
            trajectory: pt,
        },
        CyclicOrbit {
            state: m,
            multiplier: m.multiplier(),
            trajectory: mt,
        },
    ])
}

/// Segment start states of both orbits from the block-cyclic eigenproblem.
fn shoot(steps: &StepPropagators, bounds: &[usize], tol: f64) -> Result<Vec<Vec<CVec2>>> {
    let m = bounds.len() - 1;
    let n = 2 * m;
    let mut c = DMatrix::<C64>::zeros(n, n);
    for k in 0..m {
        let p = steps.product(bounds[k], bounds[k + 1])?;
        let row = 2 * ((k + 1) % m);
        for i in 0..2 {
            for j in 0..2 {
                c[(row + i, 2 * k + j)] = p.m[i][j];
            }
        }
    }
    let schur = nalgebra::linalg::Schur::try_new(c.clone(), f64::EPSILON, 100 * n)
        .ok_or(Error::NonConvergence(100 * n))?;
    let mu: Vec<C64> = schur
        .eigenvalues()
        .ok_or(Error::NonConvergence(100 * n))?
        .iter()
        .copied()
        .collect();
    let lambda: Vec<C64> = mu.iter().map(|x| x.powu(m as u32)).collect();
    if lambda.iter().any(|l| !(l.norm() > 0.0) || !l.is_finite()) {
        return Err(Error::Overflow {
            time: steps.period,
            magnitude: f64::INFINITY,
            cap: steps.overflow_cap,
        });
    }

    // the two multipliers: the farthest-apart pair anchors the clusters
    let (mut ia, mut ib, mut far) = (0, 0, -1.0);
    for i in 0..n {
        for j in i + 1..n {
            let d = log_distance(lambda[i], lambda[j]);
            if d > far {
                (ia, ib, far) = (i, j, d);
            }
        }
    }
    if far < tol {
        return Err(Error::DegenerateMatrix);
    }
    let mut clusters: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for j in 0..n {
        let side =
            usize::from(log_distance(lambda[j], lambda[ib]) < log_distance(lambda[j], lambda[ia]));
        clusters[side].push(j);
    }

    let mut out = Vec::with_capacity(2);
    for cluster in &clusters {
        // representative: the member closest to the cluster mean
        let mean = cluster.iter().map(|&j| lambda[j]).sum::<C64>() / cluster.len() as f64;
        let rep = *cluster
            .iter()
            .min_by(|&&x, &&y| {
                (lambda[x] - mean)
                    .norm()
                    .total_cmp(&(lambda[y] - mean).norm())
            })
            .expect("non-empty cluster");
        let mu_k = mu[rep];
        let shift = mu_k * C64::new(1.0 + 1e-12, 1e-12);
        let a = &c - DMatrix::<C64>::identity(n, n) * shift;
        let lu = a.lu();
        let mut x = DVector::<C64>::from_element(n, C64::new(1.0, 0.0));
        for _ in 0..3 {
            x = lu.solve(&x).ok_or(Error::DegenerateMatrix)?;
            let nx = x.norm();
            if !(nx > 0.0) || !nx.is_finite() {
                return Err(Error::NonConvergence(3));
            }
            x /= C64::new(nx, 0.0);
        }
        let mut power = C64::new(1.0, 0.0);
        let starts = (0..m)
            .map(|k| {
                let s = CVec2::new(x[2 * k], x[2 * k + 1]).scale(power);
                power *= mu_k;
                s
            })
            .collect();
        out.push(starts);
    }
    Ok(out)
}

/// Puts the orbit whose multiplier is nearest `targets[0]` first and
/// relabels the pair `[+, -]` accordingly.
pub fn order_by_multiplier(orbits: [CyclicOrbit; 2], targets: [C64; 2]) -> [CyclicOrbit; 2] {
    let [x, y] = orbits;
    let keep = (x.multiplier - targets[0]).norm() + (y.multiplier - targets[1]).norm();
    let swap = (x.multiplier - targets[1]).norm() + (y.multiplier - targets[0]).norm();
    let [mut p, mut m] = if keep <= swap { [x, y] } else { [y, x] };
    p.state.label = Branch::Plus;
    m.state.label = Branch::Minus;
    [p, m]
}

/// Orbit from a known cyclic vector, integrated forward from `u` and
/// backward from `multiplier * u`, each half used where it is the better
/// approximation (the two agree best as rays in the middle of the period).
pub fn anchored_orbit(steps: &StepPropagators, u: CVec2, multiplier: C64) -> Result<Trajectory> {
    let n = steps.len();
    // rays only: the discarded ends of both sweeps may grow without bound
    let mut fw_rays = Vec::with_capacity(n + 1);
    let mut y = u.normalized();
    fw_rays.push(y);
    for m in &steps.steps {
        y = (*m * y).normalized();
        fw_rays.push(y);
    }
    let mut bw_rays = vec![u; n + 1];
    let mut y = u.normalized();
    for k in (0..n).rev() {
        let inv = steps.steps[k].inverse().ok_or(Error::DegenerateMatrix)?;
        y = (inv * y).normalized();
        bw_rays[k] = y;
    }
    let dist: Vec<f64> = fw_rays
        .iter()
        .zip(&bw_rays)
        .map(|(x, y)| x.ray_distance(y))
        .collect();
    let best = dist.iter().copied().fold(f64::INFINITY, f64::min);
    let near: Vec<usize> = (0..dist.len())
        .filter(|&k| dist[k] <= best + 1e-14)
        .collect();
    let split = near[near.len() / 2];

    let mut states = vec![u; n + 1];
    let mut y = u;
    for (state, m) in states.iter_mut().zip(&steps.steps[..split]) {
        *state = y;
        y = *m * y;
    }
    let mut y = u.scale(multiplier);
    states[n] = y;
    for k in (split..n).rev() {
        y = steps.steps[k].inverse().ok_or(Error::DegenerateMatrix)? * y;
        states[k] = y;
    }
    fit_under_cap(&mut states, steps.overflow_cap)?;
    Trajectory::new(steps.times(), states, steps.period)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linalg::{ONE, ZERO};
    use std::f64::consts::{PI, TAU};

    fn bu(rho: f64, r: f64, period: f64) -> impl Fn(f64) -> CMat2 + Sync {
        move |t: f64| {
            let z = C64::from_polar(rho, TAU * t / period) - r;
            CMat2::new(ZERO, I, I * z, ZERO)
        }
    }

    fn wrap(x: f64) -> f64 {
        (x + PI).rem_euclid(TAU) - PI
    }

    #[test]
    fn zero_hamiltonian_gives_identity() {
        let op = floquet_operator(&|_t: f64| CMat2::zero(), 3.0, 64).unwrap();
        assert_eq!(op.matrix, CMat2::identity());
        assert!(op.liouville_residual() < 1e-15);
    }

    #[test]
    fn constant_diagonal_operator() {
        let t = 7.3;
        let op = floquet_operator(&|_t: f64| CMat2::diag(ONE, -ONE), t, 4096).unwrap();
        let expected = CMat2::diag((-I * t).exp(), (I * t).exp());
        assert!((op.matrix - expected).norm() < 1e-10);
    }

    #[test]
    fn diagonal_cyclic_states() {
        let u = CMat2::diag(C64::from_polar(1.0, 0.3), C64::from_polar(1.0, -0.3));
        let [p, m] = cyclic_states(&u, 1e-12).unwrap();
        assert!((p.alpha - 0.3).norm() < 1e-14 && (m.alpha + 0.3).norm() < 1e-14);
        assert_eq!(p.u, CVec2::basis(0));
        assert_eq!(m.u, CVec2::basis(1));
        assert_eq!((p.label, m.label), (Branch::Plus, Branch::Minus));
    }

    #[test]
    fn bu_multipliers_are_unimodular() {
        let op = floquet_operator(&bu(0.5, 1.0, 50.0), 50.0, 1 << 14).unwrap();
        assert!(op.liouville_residual() < 1e-6);
        let [p, m] = cyclic_states(&op.matrix, 1e-10).unwrap();
        assert!(p.alpha.im.abs() < 1e-6 && m.alpha.im.abs() < 1e-6);
        let mut phases = [wrap(p.alpha.re), wrap(m.alpha.re)];
        phases.sort_by(f64::total_cmp);
        let mut expected = [wrap(50.0), wrap(-50.0)];
        expected.sort_by(f64::total_cmp);
        assert!(
            (phases[0] - expected[0]).abs() < 1e-6 && (phases[1] - expected[1]).abs() < 1e-6,
            "{phases:?}"
        );
    }

    #[test]
    fn stability_classes() {
        let stable = floquet_operator(&bu(0.5, 1.0, 30.0), 30.0, 1 << 13).unwrap();
        assert_eq!(
            classify_stability(&stable.matrix, 1e-6).kind,
            StabilityKind::Stable
        );
        let unstable = floquet_operator(&bu(0.5, -1.0, 30.0), 30.0, 1 << 13).unwrap();
        assert_eq!(
            classify_stability(&unstable.matrix, 1e-6).kind,
            StabilityKind::Unstable
        );
        assert_eq!(
            classify_stability(&CMat2::identity(), 1e-12).kind,
            StabilityKind::Stable
        );
        let jordan = CMat2::new(ONE, ONE, ZERO, ONE);
        assert_eq!(
            classify_stability(&jordan, 1e-12).kind,
            StabilityKind::Marginal
        );
    }

    #[test]
    fn shooting_matches_single_shot_when_both_work() {
        let steps = Integrator::new(1 << 13)
            .step_propagators(&bu(0.5, 1.0, 20.0), 20.0)
            .unwrap();
        let op = FloquetOperator::from_steps(&steps).unwrap();
        let direct = cyclic_states(&op.matrix, 1e-10).unwrap();
        let orbits = cyclic_orbits(&steps, 1e-8).unwrap();
        for (d, o) in direct.iter().zip(&orbits) {
            assert!(o.state.u.ray_distance(&d.u) < 1e-9);
            assert!((o.state.alpha - d.alpha).norm() < 1e-8);
            assert!(o.closure_residual() < 1e-7);
        }
    }

    #[test]
    fn shooting_survives_long_periods() {
        let period = 250.0;
        let steps = Integrator::new(1 << 14)
            .step_propagators(&bu(0.5, 1.0, period), period)
            .unwrap();
        let orbits = cyclic_orbits(&steps, 1e-8).unwrap();
        for o in &orbits {
            assert!(
                (o.multiplier.norm() - 1.0).abs() < 1e-6,
                "{}",
                o.multiplier.norm()
            );
            assert!((o.state.u.norm() - 1.0).abs() < 1e-14);
        }
        let target = [(I * period).exp(), (-I * period).exp()];
        for t in target {
            assert!(orbits.iter().any(|o| (o.multiplier - t).norm() < 1e-6));
        }
    }

    #[test]
    fn anchored_orbit_closes() {
        let steps = Integrator::new(1 << 12)
            .step_propagators(&bu(0.5, 1.0, 10.0), 10.0)
            .unwrap();
        let op = FloquetOperator::from_steps(&steps).unwrap();
        let [p, _] = cyclic_states(&op.matrix, 1e-10).unwrap();
        let traj = anchored_orbit(&steps, p.u, p.multiplier()).unwrap();
        let fw = steps.forward(p.u).unwrap();
        for (x, y) in traj.states.iter().zip(&fw) {
            assert!((*x - *y).norm() < 1e-9);
        }
    }
}
