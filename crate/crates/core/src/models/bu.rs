// SPDX-License-Identifier: Apache-2.0

//! The Berry–Uzdin model `H = i [[0, 1], [z, 0]]`, `z = rho e^{i theta} - r`,
//! driven linearly in `theta = 2 pi t / T`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::adiabatic::eigenpath::{EigenPath, Gauge};
use crate::asymptotics::bessel::{
    bessel_ratio, bessel_series_polar, INTEGER_ORDER_TOL, NU_MAX, SERIES_MAX_MODULUS,
};
use crate::error::{Error, Result};
use crate::numerics::floquet::{anchored_orbit, cyclic_orbits, order_by_multiplier, CyclicOrbit};
use crate::numerics::linalg::{I, ZERO};
use crate::numerics::ode::{Hamiltonian, Integrator};
use crate::numerics::roots::track_root;
use crate::numerics::{Branch, CMat2, CVec2};

/// `|z|` below which the instantaneous spectrum counts as degenerate.
const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BUParams {
    pub rho: f64,
    pub r: f64,
    pub period: f64,
}

impl BUParams {
    pub fn new(rho: f64, r: f64, period: f64) -> Result<Self> {
        if !(rho >= 0.0) || !r.is_finite() || r == 0.0 || !(period > 0.0) || !period.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "BU model needs rho >= 0, r != 0, T > 0; got {rho}, {r}, {period}"
            )));
        }
        Ok(Self { rho, r, period })
    }

    /// `theta = 2 pi t / T`.
    pub fn theta(&self, t: f64) -> f64 {
        TAU * t / self.period
    }

    pub fn z(&self, theta: f64) -> C64 {
        C64::from_polar(self.rho, theta) - self.r
    }

    /// `nu = T sqrt(r) / pi`; defined for `r > 0`.
    pub fn nu(&self) -> Result<f64> {
        if self.r <= 0.0 {
            return Err(Error::Domain(format!(
                "Bessel order needs r > 0, got {}",
                self.r
            )));
        }
        Ok(self.period * self.r.sqrt() / PI)
    }

    /// `x(theta) = sqrt(rho / r) e^{i theta / 2}`.
    pub fn x(&self, theta: f64) -> C64 {
        C64::from_polar((self.rho / self.r).abs().sqrt(), 0.5 * theta)
    }
}

/// `i [[0, 1], [z(theta(t)), 0]]`.
pub fn hbu(p: &BUParams, t: f64) -> CMat2 {
    CMat2::new(ZERO, I, I * p.z(p.theta(t)), ZERO)
}

impl Hamiltonian for BUParams {
    fn at(&self, t: f64) -> CMat2 {
        hbu(self, t)
    }
}

/// Exact Floquet multiplier `e^{+/- i T sqrt r}` of `F+/-`.
pub fn bu_multiplier(p: &BUParams, branch: Branch) -> Result<C64> {
    Ok((I * branch.sign() * PI * p.nu()?).exp())
}

/// Unnormalized instantaneous eigenvector `(z^{-1/4}, +/- z^{1/4})` on the
/// principal branch.
pub fn bu_eigenvector_principal(p: &BUParams, branch: Branch, theta: f64) -> Result<CVec2> {
    let z = p.z(theta);
    if z.norm() < DEGENERACY_TOL {
        return Err(Error::DegeneracyOnPath(theta));
    }
    let q = z.powf(0.25);
    Ok(CVec2::new(q.inv(), branch.sign() * q))
}

/// Analytic eigenpaths over `theta_grid`, ordered `[+, -]`:
/// `E = +/- i sqrt z` and `(z^{-1/4}, +/- z^{1/4})` normalized, with both
/// roots continued from the principal branch at the first angle.
pub fn bu_instantaneous(p: &BUParams, theta_grid: &[f64]) -> Result<[EigenPath; 2]> {
    if !(p.rho < p.r.abs()) {
        return Err(Error::Domain(format!(
            "eigenpaths need rho < |r|, got rho = {}, r = {}",
            p.rho, p.r
        )));
    }
    if theta_grid.is_empty() {
        return Err(Error::InvalidArgument("empty angle grid".into()));
    }
    let zs: Vec<C64> = theta_grid.iter().map(|&th| p.z(th)).collect();
    if let Some(k) = zs.iter().position(|z| z.norm() < DEGENERACY_TOL) {
        return Err(Error::DegeneracyOnPath(theta_grid[k]));
    }
    let sq = track_root(&zs, 2)?;
    let qr = track_root(&zs, 4)?;
    let mut out = Vec::with_capacity(2);
    for branch in [Branch::Plus, Branch::Minus] {
        let s = branch.sign();
        let raw: Vec<CVec2> = qr.iter().map(|q| CVec2::new(q.inv(), s * q)).collect();
        let gauge = Gauge::new(&raw[0].normalized());
        let mut vectors: Vec<CVec2> = Vec::with_capacity(raw.len());
        for v in raw {
            let g = gauge.apply(v, vectors.last());
            vectors.push(g);
        }
        out.push(EigenPath {
            grid: theta_grid.to_vec(),
            values: sq.iter().map(|w| s * I * w).collect(),
            vectors,
            label: branch,
        });
    }
    let m = out.pop().expect("two paths");
    let pl = out.pop().expect("two paths");
    Ok([pl, m])
}

fn check_order(p: &BUParams) -> Result<f64> {
    let nu = p.nu()?;
    if (nu - nu.round()).abs() < INTEGER_ORDER_TOL {
        return Err(Error::IntegerOrder(nu));
    }
    Ok(nu)
}

/// `(J_{+/-nu}(nu x), d/dt J_{+/-nu}(nu x))` by the power series, with
/// `d/dt = (i pi / T) x d/dx` and `(nu x)^{+/-nu}` followed continuously in
/// `theta`.
pub fn bu_floquet_bessel(p: &BUParams, branch: Branch, t: f64) -> Result<CVec2> {
    let nu = check_order(p)?;
    if nu > NU_MAX {
        return Err(Error::Domain(format!(
            "nu = {nu} above the series cap {NU_MAX}"
        )));
    }
    let theta = p.theta(t);
    let x = p.x(theta);
    let modulus = nu * x.norm();
    if modulus > SERIES_MAX_MODULUS {
        return Err(Error::SeriesDomain {
            modulus,
            limit: SERIES_MAX_MODULUS,
        });
    }
    let (j, dj) = bessel_series_polar(branch.sign() * nu, modulus, 0.5 * theta)?;
    let w = C64::from_polar(modulus, 0.5 * theta);
    Ok(CVec2::new(j, I * (PI / p.period) * w * dj))
}

/// Unit, canonical-phase `F+(0)` from `psi = (i pi / T)(nu - w J_{nu+1}(w) / J_nu(w))`,
/// `w = nu sqrt(rho / r)`; the Bessel ratio comes from its continued
/// fraction, so there is no limit on `nu`.
pub fn bu_plus_anchor(p: &BUParams) -> Result<CVec2> {
    let nu = p.nu()?;
    let w = nu * (p.rho / p.r).sqrt();
    let tail = if w == 0.0 {
        ZERO
    } else {
        w * bessel_ratio(nu, C64::new(w, 0.0))?
    };
    let psi = I * (PI / p.period) * (nu - tail);
    Ok(CVec2::new(C64::new(1.0, 0.0), psi).canonical())
}

/// Cyclic orbits ordered `[F+, F-]` by their exact multipliers.
///
/// Both come from periodic multiple shooting; for `r > 0` the `F+` orbit is
/// then rebuilt from its analytic initial vector by two-sided integration,
/// which removes the error the decaying direction picks up near `theta = 0`
/// at long periods.
pub fn bu_cyclic_orbits(p: &BUParams, integrator: &Integrator) -> Result<[CyclicOrbit; 2]> {
    let steps = integrator.step_propagators(p, p.period)?;
    let orbits = cyclic_orbits(&steps, 1e-9)?;
    if p.r < 0.0 {
        return Ok(orbits);
    }
    let targets = [
        bu_multiplier(p, Branch::Plus)?,
        bu_multiplier(p, Branch::Minus)?,
    ];
    let [mut plus, minus] = order_by_multiplier(orbits, targets);
    let u = bu_plus_anchor(p)?;
    plus.trajectory = anchored_orbit(&steps, u, plus.multiplier)?;
    plus.state.u = u;
    Ok([plus, minus])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::floquet::floquet_operator;
    use crate::numerics::ode::uniform_grid;

    #[test]
    fn matrix_values() {
        let p = BUParams::new(0.0, 1.0, 10.0).unwrap();
        assert_eq!(hbu(&p, 3.0), CMat2::new(ZERO, I, -I, ZERO));
        let p = BUParams::new(0.5, 1.0, 10.0).unwrap();
        assert!((hbu(&p, 0.0) - CMat2::new(ZERO, I, I * -0.5, ZERO)).norm() < 1e-16);
        assert!((hbu(&p, 2.5) - hbu(&p, 12.5)).norm() < 1e-14);
    }

    #[test]
    fn instantaneous_at_origin() {
        let p = BUParams::new(0.5, 1.0, 10.0).unwrap();
        let [plus, minus] = bu_instantaneous(&p, &uniform_grid(TAU, 512)).unwrap();
        assert!((plus.values[0] + 0.5f64.sqrt()).norm() < 1e-15);
        assert!((minus.values[0] - 0.5f64.sqrt()).norm() < 1e-15);
        for path in [&plus, &minus] {
            assert!(path.closure_defect() < 1e-10);
            for (k, v) in path.vectors.iter().enumerate() {
                let h = CMat2::new(ZERO, I, I * p.z(path.grid[k]), ZERO);
                assert!((h * *v - v.scale(path.values[k])).norm() < 1e-10);
            }
        }
        let flat = BUParams::new(0.0, 2.0, 10.0).unwrap();
        let [fp, _] = bu_instantaneous(&flat, &uniform_grid(TAU, 8)).unwrap();
        assert!(fp.values.iter().all(|e| (e + 2f64.sqrt()).norm() < 1e-15));
    }

    #[test]
    fn bessel_state_is_cyclic_and_matches_floquet_operator() {
        let p = BUParams::new(0.5, 1.0, 8.0).unwrap();
        let op = floquet_operator(&p, p.period, 1 << 13).unwrap();
        for b in [Branch::Plus, Branch::Minus] {
            let f0 = bu_floquet_bessel(&p, b, 0.0).unwrap();
            let f1 = bu_floquet_bessel(&p, b, p.period).unwrap();
            let lam = bu_multiplier(&p, b).unwrap();
            assert!((f1 - f0.scale(lam)).norm() < 1e-10 * f0.norm());
            assert!(
                (op.matrix * f0 - f0.scale(lam)).norm() < 1e-8 * f0.norm(),
                "{b}"
            );
        }
    }

    #[test]
    fn bessel_state_solves_schroedinger() {
        let p = BUParams::new(0.5, 1.0, 12.0).unwrap();
        let dt = 1e-5;
        for t in [1.0, 6.3, 11.0] {
            for b in [Branch::Plus, Branch::Minus] {
                let f = |t| bu_floquet_bessel(&p, b, t).unwrap();
                let deriv = (f(t + dt) - f(t - dt)).scale(C64::new(0.0, 0.5 / dt));
                let rhs = hbu(&p, t) * f(t);
                assert!((deriv - rhs).norm() < 1e-7 * rhs.norm());
            }
        }
    }

    #[test]
    fn bessel_state_guards() {
        let p = BUParams::new(0.5, 1.0, PI * 3.0).unwrap();
        assert!(matches!(
            bu_floquet_bessel(&p, Branch::Minus, 0.0),
            Err(Error::IntegerOrder(_))
        ));
        let big = BUParams::new(0.5, 1.0, 200.0).unwrap();
        assert!(bu_floquet_bessel(&big, Branch::Plus, 0.0).is_err());
    }

    #[test]
    fn anchor_matches_series() {
        let p = BUParams::new(0.5, 1.0, 20.0).unwrap();
        let series = bu_floquet_bessel(&p, Branch::Plus, 0.0).unwrap();
        assert!(bu_plus_anchor(&p).unwrap().ray_distance(&series) < 1e-14);
    }

    #[test]
    fn long_period_orbits_are_unimodular() {
        let p = BUParams::new(0.5, 1.0, 100.0).unwrap();
        let [plus, minus] = bu_cyclic_orbits(&p, &Integrator::new(1 << 13)).unwrap();
        assert!((plus.multiplier - bu_multiplier(&p, Branch::Plus).unwrap()).norm() < 1e-6);
        assert!((minus.multiplier - bu_multiplier(&p, Branch::Minus).unwrap()).norm() < 1e-6);
        assert!(
            plus.trajectory
                .first()
                .ray_distance(&plus.trajectory.last())
                < 1e-8
        );
    }
}
