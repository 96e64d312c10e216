// SPDX-License-Identifier: Apache-2.0

//! Branch-continuous k-th roots along a sampled loop.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Continues `z^(1/k)` along the samples, starting from the principal root
/// at the first sample.
///
/// At every sample the candidate roots are the principal root times the
/// k-th roots of unity; the one nearest the previous output is kept. The
/// choice is ambiguous once the phase jump between consecutive outputs
/// reaches `pi / k` (the midpoint between two candidates), which is reported
/// as [`Error::BranchAmbiguity`]. A vanishing sample is ambiguous too.
pub fn track_root(values: &[C64], k: u32) -> Result<Vec<C64>> {
    if k == 0 {
        return Err(Error::InvalidArgument("root order must be positive".into()));
    }
    let inv_k = 1.0 / k as f64;
    let mut out = Vec::with_capacity(values.len());
    let Some(&z0) = values.first() else {
        return Ok(out);
    };
    if z0.norm() == 0.0 {
        return Err(Error::BranchAmbiguity { index: 0 });
    }
    out.push(z0.powf(inv_k));
    let limit = PI * inv_k * (1.0 - 1e-9);
    for (index, &z) in values.iter().enumerate().skip(1) {
        if z.norm() == 0.0 || !z.is_finite() {
            return Err(Error::BranchAmbiguity { index });
        }
        let prev = out[index - 1];
        let principal = z.powf(inv_k);
        let best = (0..k)
            .map(|j| principal * C64::from_polar(1.0, TAU * j as f64 * inv_k))
            .min_by(|x, y| (x - prev).norm().total_cmp(&(y - prev).norm()))
            .expect("k >= 1 candidates");
        let jump = (best / prev).arg().abs();
        if jump >= limit {
            return Err(Error::BranchAmbiguity { index });
        }
        out.push(best);
    }
    Ok(out)
}
