// SPDX-License-Identifier: Apache-2.0

//! The Stokes exponent of the Berry–Uzdin Floquet states, the asymptotic
//! amplitude ratios in each wedge, and the critical ratio.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `|Re exponent|` below which a point is classified as on the boundary.
pub const WEDGE_TOL: f64 = 1e-10;

/// Lower and upper ends of the bracket for the critical ratio.
const CRITICAL_BRACKET: (f64, f64) = (0.01, 0.99);

/// `ln((1 + sqrt(1 - x^2)) / x) - sqrt(1 - x^2)` with the logarithm split
/// so that it stays continuous while `arg x` runs over `[0, pi]`.
pub(crate) fn exponent_of_x(x: C64) -> C64 {
    let w = (1.0 - x * x).sqrt();
    (1.0 + w).ln() - x.ln() - w
}

fn check_regime(rho: f64, r: f64) -> Result<()> {
    if !(rho > 0.0 && rho < r) {
        return Err(Error::Domain(format!(
            "need 0 < rho < r, got rho = {rho}, r = {r}"
        )));
    }
    Ok(())
}

/// `sqrt(r - rho e^{i theta})`. For `rho < r` the radicand stays in the right
/// half-plane, so the principal root is already the continuation from the
/// real positive value at `theta = 0`.
fn root_s(rho: f64, r: f64, theta: f64) -> C64 {
    (r - C64::from_polar(rho, theta)).sqrt()
}

/// The exponent `(2/3) xi^{3/2}` at `theta`:
/// `ln[(sqrt r + s) / (sqrt rho e^{i theta/2})] - s / sqrt r` with
/// `s = sqrt(r - rho e^{i theta})`.
pub fn xi_exponent(rho: f64, r: f64, theta: f64) -> Result<C64> {
    check_regime(rho, r)?;
    let s = root_s(rho, r, theta);
    let num = r.sqrt() + s;
    Ok(C64::new(num.norm().ln() - 0.5 * rho.ln(), num.arg() - 0.5 * theta) - s / r.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Wedge {
    /// `Re exponent > 0`: the decaying exponential of `J_nu` dominates.
    Plus,
    /// `Re exponent < 0`.
    Minus,
    Boundary,
}

impl Wedge {
    pub fn of(exponent: C64) -> Wedge {
        if exponent.re.abs() < WEDGE_TOL {
            Wedge::Boundary
        } else if exponent.re > 0.0 {
            Wedge::Plus
        } else {
            Wedge::Minus
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StokesPoint {
    pub theta: f64,
    pub exponent: C64,
    pub wedge: Wedge,
}

pub fn stokes_point(rho: f64, r: f64, theta: f64) -> Result<StokesPoint> {
    let exponent = xi_exponent(rho, r, theta)?;
    Ok(StokesPoint {
        theta,
        exponent,
        wedge: Wedge::of(exponent),
    })
}

/// Zeros of `Re exponent` in `(0, 2 pi)`, located on a uniform scan of
/// `samples` intervals and refined by bisection.
pub fn wedge_boundaries(rho: f64, r: f64, samples: usize) -> Result<Vec<f64>> {
    check_regime(rho, r)?;
    let f = |t: f64| xi_exponent(rho, r, t).map(|e| e.re);
    let mut out = Vec::new();
    let h = TAU / samples as f64;
    let mut prev = f(0.0)?;
    for k in 1..=samples {
        let t = k as f64 * h;
        let cur = f(t)?;
        if prev.signum() != cur.signum() {
            let (mut lo, mut hi, mut flo) = (t - h, t, prev);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = f(mid)?;
                if fm.signum() == flo.signum() {
                    (lo, flo) = (mid, fm);
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        prev = cur;
    }
    Ok(out)
}

/// Small-ratio branch `(pi / 4T) rho e^{i theta} / (r - rho e^{i theta})^{3/2}`.
fn small_branch(rho: f64, r: f64, period: f64, theta: f64) -> C64 {
    let s = root_s(rho, r, theta);
    PI / (4.0 * period) * C64::from_polar(rho, theta) / (s * s * s)
}

/// Asymptotic `R+` for large `T`.
pub fn r_plus_asymptotic(rho: f64, r: f64, period: f64, theta: f64) -> Result<C64> {
    check_regime(rho, r)?;
    Ok(small_branch(rho, r, period, theta))
}

/// Both wedge formulas of `R-`: `(small, large)`. Their product is `-1`.
pub fn r_minus_branches(rho: f64, r: f64, period: f64, theta: f64) -> Result<(C64, C64)> {
    check_regime(rho, r)?;
    let small = small_branch(rho, r, period, theta);
    let s = root_s(rho, r, theta);
    let large = -(4.0 * period / PI) * s * s * s / C64::from_polar(rho, theta);
    Ok((small, large))
}

/// Asymptotic `R-` with the formula selected by the wedge of `theta`.
pub fn r_minus_asymptotic(rho: f64, r: f64, period: f64, theta: f64) -> Result<(C64, Wedge)> {
    let wedge = stokes_point(rho, r, theta)?.wedge;
    let (small, large) = r_minus_branches(rho, r, period, theta)?;
    match wedge {
        Wedge::Plus => Ok((small, wedge)),
        Wedge::Minus => Ok((large, wedge)),
        Wedge::Boundary => Err(Error::OnStokesLine(theta)),
    }
}

/// `ln((1 + sqrt(1 + c)) / sqrt c) - sqrt(1 + c)`; its root is the
/// critical ratio.
pub fn critical_equation(c: f64) -> f64 {
    let q = (1.0 + c).sqrt();
    ((1.0 + q) / c.sqrt()).ln() - q
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalSolve {
    pub c: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Root of [`critical_equation`]: bisection until the bracket is narrower
/// than `tol`, then three secant steps.
pub fn critical_ratio(tol: f64) -> Result<CriticalSolve> {
    critical_ratio_in(CRITICAL_BRACKET.0, CRITICAL_BRACKET.1, tol)
}

/// [`critical_ratio`] on a caller-supplied bracket.
pub fn critical_ratio_in(lo: f64, hi: f64, tol: f64) -> Result<CriticalSolve> {
    if !(tol > 0.0) || !(lo > 0.0 && hi > lo) {
        return Err(Error::InvalidArgument(format!(
            "critical_ratio: bracket [{lo}, {hi}], tol {tol}"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (critical_equation(a), critical_equation(b));
    if fa.signum() == fb.signum() {
        return Err(Error::NoRootInBracket { lo, hi });
    }
    let mut iterations = 0;
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = critical_equation(m);
        if fm.signum() == fa.signum() {
            (a, fa) = (m, fm);
        } else {
            b = m;
        }
        iterations += 1;
    }
    let (mut x0, mut x1) = (a, b);
    let (mut f0, mut f1) = (critical_equation(x0), critical_equation(x1));
    for _ in 0..3 {
        if f1 == f0 {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        (x0, f0) = (x1, f1);
        x1 = x2;
        f1 = critical_equation(x1);
        iterations += 1;
    }
    Ok(CriticalSolve {
        c: x1,
        residual: f1.abs(),
        iterations,
    })
}

/// Predicted hop angles `pi -/+ 2 (sqrt(1+c)/c) sqrt(rho/r - c)` just above
/// the critical ratio.
pub fn hop_theta_estimate(rho: f64, r: f64) -> Result<(f64, f64)> {
    let c = critical_ratio(1e-8)?.c;
    let ratio = rho / r;
    if !(ratio > c) || !(r > 0.0) {
        return Err(Error::Domain(format!(
            "hop estimate needs rho/r > {c}, got {ratio}"
        )));
    }
    let half = 2.0 * (1.0 + c).sqrt() / c * (ratio - c).sqrt();
    Ok((PI - half, PI + half))
}

/// Angular width `pi / (T sqrt r)` over which a hop completes.
pub fn hop_window_width(r: f64, period: f64) -> f64 {
    PI / (period * r.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_on_real_axis() {
        let e = xi_exponent(0.5, 1.0, 0.0).unwrap();
        let h = 0.5f64.sqrt();
        let expected = ((1.0 + h) / h).ln() - h;
        assert!((e.re - expected).abs() < 1e-15 && e.im.abs() < 1e-15);
        assert!((e.re - 0.174_266_805_832_995_36).abs() < 1e-14);
    }

    #[test]
    fn exponent_agrees_with_x_form() {
        for theta in [0.0, 1.0, 3.0, 5.5, 6.2] {
            let (rho, r) = (0.6f64, 1.7);
            let x = C64::from_polar((rho / r).sqrt(), 0.5 * theta);
            let a = xi_exponent(rho, r, theta).unwrap();
            let b = exponent_of_x(x);
            assert!((a - b).norm() < 1e-13, "{theta}: {a} {b}");
        }
    }

    #[test]
    fn principal_root_is_the_continuation() {
        let (rho, r) = (0.95, 1.0);
        let thetas: Vec<f64> = (0..=512).map(|k| TAU * k as f64 / 512.0).collect();
        let zs: Vec<C64> = thetas
            .iter()
            .map(|&t| r - C64::from_polar(rho, t))
            .collect();
        let tracked = crate::numerics::track_root(&zs, 2).unwrap();
        for (s, &t) in tracked.iter().zip(&thetas) {
            assert!((s - root_s(rho, r, t)).norm() < 1e-14);
        }
    }

    #[test]
    fn conjugate_symmetry() {
        // continuing from theta = 0 picks up -i pi by theta = 2 pi, so the
        // mirror image is conjugate only up to that constant
        for theta in [0.3, 1.7, 2.9] {
            let a = xi_exponent(0.5, 1.0, theta).unwrap();
            let b = xi_exponent(0.5, 1.0, TAU - theta).unwrap();
            assert!((a.re - b.re).abs() < 1e-13);
            assert!((a.conj() - b - C64::new(0.0, PI)).norm() < 1e-13);
        }
    }

    #[test]
    fn regime_is_checked() {
        assert!(matches!(xi_exponent(1.0, 1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(xi_exponent(0.0, 1.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn critical_value() {
        let s = critical_ratio(1e-8).unwrap();
        assert!((s.c - 0.439229).abs() < 1e-6);
        assert!(s.residual < 1e-12);
        assert!(critical_equation(0.1) > 0.0 && critical_equation(0.9) < 0.0);
        for r in [0.5, 1.0, 2.0] {
            assert!(xi_exponent(s.c * r, r, PI).unwrap().re.abs() < 1e-9);
        }
    }

    #[test]
    fn r_plus_value_and_scaling() {
        let v = r_plus_asymptotic(0.5, 1.0, 100.0, 0.0).unwrap();
        assert!((v.re - PI / 400.0 * 0.5 / 0.5f64.powf(1.5)).abs() < 1e-15);
        assert!((v.re - 0.01111).abs() < 1e-5);
        let w = r_plus_asymptotic(0.5, 1.0, 200.0, 0.0).unwrap();
        assert!((w * 2.0 - v).norm() < 1e-16);
    }

    #[test]
    fn wedges_and_product() {
        let (_, w) = r_minus_asymptotic(0.5, 1.0, 100.0, PI).unwrap();
        assert_eq!(w, Wedge::Minus);
        for k in 0..64 {
            let theta = TAU * k as f64 / 64.0;
            let (_, w) = r_minus_asymptotic(0.3, 1.0, 100.0, theta).unwrap();
            assert_eq!(w, Wedge::Plus);
            let (s, l) = r_minus_branches(0.5, 1.0, 77.0, theta).unwrap();
            assert!((s * l + 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn boundaries_exist_only_above_critical() {
        assert!(wedge_boundaries(0.35, 1.0, 2000).unwrap().is_empty());
        let b = wedge_boundaries(0.55, 1.0, 2000).unwrap();
        assert_eq!(b.len(), 2);
        assert!((b[0] + b[1] - TAU).abs() < 1e-9);
    }

    #[test]
    fn hop_estimate() {
        let c = critical_ratio(1e-8).unwrap().c;
        let (lo, hi) = hop_theta_estimate(c + 1e-4, 1.0).unwrap();
        assert!(((hi - lo) / 2.0 - 0.0546).abs() < 1e-3);
        assert!(hop_theta_estimate(0.3, 1.0).is_err());
        assert!((hop_window_width(1.0, 200.0) - 0.015708).abs() < 1e-6);
    }
}
