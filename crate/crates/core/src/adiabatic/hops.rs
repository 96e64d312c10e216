// SPDX-License-Identifier: Apache-2.0

//! Non-adiabatic hops: changes of the eigenpath nearest to the evolving ray.

use serde::{Deserialize, Serialize};

use super::eigenpath::EigenPath;
use super::projection::{check_shared_grid, component_ratio};
use crate::error::Result;
use crate::numerics::ode::Trajectory;
use crate::numerics::Branch;

/// Default clustering window as a fraction of the samples per period.
pub const HOP_WINDOW: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingKind {
    /// Located at a zero of `Im(b/a)`.
    ImZero,
    /// Located at the label switch itself.
    DominanceSwitch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopEvent {
    pub t_star: f64,
    /// `t_star / T`.
    pub relative: f64,
    pub from: Branch,
    pub to: Branch,
    pub kind: CrossingKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopOptions {
    pub window: f64,
    /// Drop label changes with no `Im(b/a)` zero inside the window.
    pub require_im_zero: bool,
}

impl Default for HopOptions {
    fn default() -> Self {
        Self {
            window: HOP_WINDOW,
            require_im_zero: true,
        }
    }
}

/// Hops of `traj` between `paths = [E+, E-]` with default options.
pub fn detect_hops(traj: &Trajectory, paths: &[EigenPath; 2]) -> Result<Vec<HopEvent>> {
    detect_hops_with(traj, paths, &HopOptions::default())
}

/// Every net change of the nearest eigenpath, located at the switch.
pub fn dominance_switches(traj: &Trajectory, paths: &[EigenPath; 2]) -> Result<Vec<HopEvent>> {
    let mut events = scan(
        traj,
        paths,
        &HopOptions {
            window: HOP_WINDOW,
            require_im_zero: false,
        },
        false,
    )?;
    for e in &mut events {
        e.kind = CrossingKind::DominanceSwitch;
    }
    Ok(events)
}

pub fn detect_hops_with(
    traj: &Trajectory,
    paths: &[EigenPath; 2],
    opts: &HopOptions,
) -> Result<Vec<HopEvent>> {
    scan(traj, paths, opts, true)
}

struct Sample {
    index: usize,
    label: Branch,
    im: f64,
}

fn scan(
    traj: &Trajectory,
    paths: &[EigenPath; 2],
    opts: &HopOptions,
    locate: bool,
) -> Result<Vec<HopEvent>> {
    check_shared_grid(traj, paths)?;
    let n = traj.len();
    if n < 3 {
        return Ok(Vec::new());
    }
    let (rp, rm) = (paths[0].ratios(), paths[1].ratios());
    let samples: Vec<Sample> = (0..n)
        .filter_map(|k| {
            let psi = component_ratio(&traj.states[k]).ok()?;
            let (p, m) = (rp[k]?, rm[k]?);
            let label = if (psi - p).norm() <= (psi - m).norm() {
                Branch::Plus
            } else {
                Branch::Minus
            };
            Some(Sample {
                index: k,
                label,
                im: psi.im,
            })
        })
        .collect();
    if samples.len() < 2 {
        return Ok(Vec::new());
    }
    let window = (opts.window * (n - 1) as f64).max(1.0);

    // switch positions: (position in `samples`, fractional grid index)
    let switches: Vec<(usize, f64)> = (1..samples.len())
        .filter(|&j| samples[j].label != samples[j - 1].label)
        .map(|j| (j, 0.5 * (samples[j - 1].index + samples[j].index) as f64))
        .collect();
    let crossings: Vec<f64> = samples
        .windows(2)
        .filter(|w| w[0].im.signum() != w[1].im.signum() && w[0].im != w[1].im)
        .map(|w| {
            let (k0, k1) = (w[0].index as f64, w[1].index as f64);
            k0 + (k1 - k0) * w[0].im / (w[0].im - w[1].im)
        })
        .collect();

    let time_at = |x: f64| {
        let k = (x.floor() as usize).min(n - 2);
        traj.times[k] + (traj.times[k + 1] - traj.times[k]) * (x - k as f64)
    };
    let mut events = Vec::new();
    let mut i = 0;
    while i < switches.len() {
        let mut j = i;
        while j + 1 < switches.len() && switches[j + 1].1 - switches[j].1 <= window {
            j += 1;
        }
        let from = samples[switches[i].0 - 1].label;
        let to = samples[switches[j].0].label;
        if from != to {
            let centre = 0.5 * (switches[i].1 + switches[j].1);
            let nearest = if locate {
                crossings
                    .iter()
                    .copied()
                    .filter(|c| (c - centre).abs() <= window)
                    .min_by(|a, b| (a - centre).abs().total_cmp(&(b - centre).abs()))
            } else {
                None
            };
            let located = match nearest {
                Some(c) => Some((c, CrossingKind::ImZero)),
                None if !opts.require_im_zero => Some((centre, CrossingKind::DominanceSwitch)),
                None => None,
            };
            if let Some((x, kind)) = located {
                let t_star = time_at(x);
                if t_star > 0.0 && t_star < traj.period {
                    events.push(HopEvent {
                        t_star,
                        relative: t_star / traj.period,
                        from,
                        to,
                        kind,
                    });
                }
            }
        }
        i = j + 1;
    }
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adiabatic::{eigen_track, ratio_series};
    use crate::models::{bu_cyclic_orbits, h2, BUParams, Model2Params};
    use crate::numerics::{cyclic_orbits, Integrator};

    #[test]
    fn slow_pt_symmetric_drive_has_no_hops() {
        let p = Model2Params::with_period(0.2, 200.0).unwrap();
        let h = move |t: f64| h2(&p, t);
        let steps = 8192;
        let sp = Integrator::new(steps)
            .step_propagators(&h, p.period())
            .unwrap();
        let orbits = cyclic_orbits(&sp, 1e-10).unwrap();
        let paths = eigen_track(&h, p.period(), steps).unwrap();
        for o in &orbits {
            assert!(detect_hops(&o.trajectory, &paths).unwrap().is_empty());
            let s = ratio_series(&o.trajectory, &paths, Branch::Plus).unwrap();
            assert!(s.reconstruction_error(&o.trajectory, &paths) < 1e-8);
        }
    }

    #[test]
    fn bu_minus_orbit_first_hop() {
        for (period, expected) in [(100.0, 0.2973), (250.0, 0.3015)] {
            let p = BUParams::new(0.5, 1.0, period).unwrap();
            let steps = 16384;
            let orbits = bu_cyclic_orbits(&p, &Integrator::new(steps)).unwrap();
            let paths = eigen_track(&p, period, steps).unwrap();
            let hops = detect_hops(&orbits[1].trajectory, &paths).unwrap();
            assert!(!hops.is_empty(), "T = {period}");
            assert!(
                (hops[0].relative - expected).abs() < 2e-3,
                "T = {period}: {:?}",
                hops[0]
            );
        }
    }
}
