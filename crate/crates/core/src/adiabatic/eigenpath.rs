// SPDX-License-Identifier: Apache-2.0

//! Instantaneous eigenpairs followed continuously around one period.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::linalg::eig2;
use crate::numerics::ode::{uniform_grid, Hamiltonian};
use crate::numerics::{Branch, CVec2};

/// Minimal ray overlap between consecutive eigenvectors.
pub const CONTINUITY_OVERLAP: f64 = 0.99;

/// Relative eigenvalue gap below which `H(t)` counts as degenerate.
const DEGENERACY_TOL: f64 = 1e-9;

/// Eigenvalue and unit eigenvector samples of one instantaneous branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPath {
    /// Times or angles, as supplied by the constructor.
    pub grid: Vec<f64>,
    pub values: Vec<C64>,
    pub vectors: Vec<CVec2>,
    pub label: Branch,
}

impl EigenPath {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `||v_N - v_0||` of the unit end vectors.
    pub fn closure_defect(&self) -> f64 {
        match (self.vectors.first(), self.vectors.last()) {
            (Some(a), Some(b)) => (*b - *a).norm(),
            _ => 0.0,
        }
    }

    /// True when the path ends on its own starting ray.
    pub fn returns_to_itself(&self, tol: f64) -> bool {
        match (self.vectors.first(), self.vectors.last()) {
            (Some(a), Some(b)) => a.ray_distance(b) < tol,
            _ => true,
        }
    }

    /// Component ratios `b/a`; `None` where `a` vanishes.
    pub fn ratios(&self) -> Vec<Option<C64>> {
        self.vectors
            .iter()
            .map(|v| {
                if v.a.norm() > 1e-300 {
                    Some(v.b / v.a)
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Fixes the phase of consecutive eigenvectors: the pivot component (the
/// larger one at the first sample) is made real and positive while it stays
/// well away from zero, otherwise the phase is transported from the
/// previous sample.
pub(crate) struct Gauge {
    pivot: usize,
}

impl Gauge {
    pub(crate) fn new(first: &CVec2) -> Self {
        Self {
            pivot: usize::from(first.b.norm() > first.a.norm()),
        }
    }

    pub(crate) fn apply(&self, v: CVec2, prev: Option<&CVec2>) -> CVec2 {
        let v = v.normalized();
        let p = if self.pivot == 0 { v.a } else { v.b };
        if p.norm() > 0.1 {
            return v.scale(p.conj() / p.norm());
        }
        match prev {
            Some(prev) => {
                let o = prev.dot(&v);
                if o.norm() > 0.0 {
                    v.scale(o.conj() / o.norm())
                } else {
                    v
                }
            }
            None => v,
        }
    }
}

/// Follows both eigenpairs of `H(t)` on `samples + 1` uniform times over
/// `[0, T]`.
///
/// At `t = 0` the path with the larger `Re E` (then larger `Im E`) is
/// labelled `+`; afterwards each path continues with the eigenvector of
/// maximal overlap with its previous sample.
pub fn eigen_track(h: &dyn Hamiltonian, period: f64, samples: usize) -> Result<[EigenPath; 2]> {
    if samples < 2 || !(period > 0.0) {
        return Err(Error::InvalidArgument(
            "eigen_track needs >= 2 samples and T > 0".into(),
        ));
    }
    let grid = uniform_grid(period, samples);
    let mut vals: [Vec<C64>; 2] = [
        Vec::with_capacity(grid.len()),
        Vec::with_capacity(grid.len()),
    ];
    let mut vecs: [Vec<CVec2>; 2] = [
        Vec::with_capacity(grid.len()),
        Vec::with_capacity(grid.len()),
    ];
    let mut gauges: Option<[Gauge; 2]> = None;
    for (k, &t) in grid.iter().enumerate() {
        let m = h.at(t);
        let pairs = match eig2(&m, DEGENERACY_TOL) {
            Ok(p) => p,
            Err(Error::DegenerateMatrix) => return Err(Error::DegeneracyOnPath(t)),
            Err(e) => return Err(e),
        };
        if (pairs[0].value - pairs[1].value).norm() <= DEGENERACY_TOL * m.norm().max(1.0) {
            return Err(Error::DegeneracyOnPath(t));
        }
        let ordered = if k == 0 {
            let (p, q) = (pairs[0].value, pairs[1].value);
            let first = if (p.re - q.re).abs() > 1e-14 * m.norm().max(1.0) {
                p.re > q.re
            } else {
                p.im >= q.im
            };
            if first {
                pairs
            } else {
                [pairs[1], pairs[0]]
            }
        } else {
            let prev = [vecs[0][k - 1], vecs[1][k - 1]];
            let keep = prev[0].dot(&pairs[0].vector).norm() + prev[1].dot(&pairs[1].vector).norm();
            let swap = prev[0].dot(&pairs[1].vector).norm() + prev[1].dot(&pairs[0].vector).norm();
            let ordered = if keep >= swap {
                pairs
            } else {
                [pairs[1], pairs[0]]
            };
            for j in 0..2 {
                let overlap = prev[j].dot(&ordered[j].vector).norm();
                if overlap < CONTINUITY_OVERLAP {
                    return Err(Error::DiscontinuousPath { index: k, overlap });
                }
            }
            ordered
        };
        let g = gauges.get_or_insert_with(|| {
            [
                Gauge::new(&ordered[0].vector),
                Gauge::new(&ordered[1].vector),
            ]
        });
        for j in 0..2 {
            let prev = vecs[j].last().copied();
            vecs[j].push(g[j].apply(ordered[j].vector, prev.as_ref()));
            vals[j].push(ordered[j].value);
        }
    }
    let [v0, v1] = vecs;
    let [e0, e1] = vals;
    Ok([
        EigenPath {
            grid: grid.clone(),
            values: e0,
            vectors: v0,
            label: Branch::Plus,
        },
        EigenPath {
            grid,
            values: e1,
            vectors: v1,
            label: Branch::Minus,
        },
    ])
}
