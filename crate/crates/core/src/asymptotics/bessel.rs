// SPDX-License-Identifier: Apache-2.0

//! Bessel functions of complex argument: power series, the `J_{nu+1}/J_nu`
//! continued fraction, and leading-order large-order forms.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64 as C64;
use statrs::function::gamma::ln_gamma;

use super::stokes::exponent_of_x;
use crate::error::{Error, Result};

/// Largest `|z|` accepted by the power series.
pub const SERIES_MAX_MODULUS: f64 = 25.0;
/// Term cap of the power series.
pub const SERIES_MAX_TERMS: usize = 200;
/// Largest order handled by the series in double precision.
pub const NU_MAX: f64 = 30.0;
/// Below this order the uniform forms are flagged as inaccurate.
pub const NU_MIN_UNIFORM: f64 = 10.0;
/// Distance from a negative integer below which the series is refused.
pub const INTEGER_ORDER_TOL: f64 = 1e-8;

/// `(ln |Gamma(x)|, sign Gamma(x))` for real `x` off the poles.
fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (ln_gamma(x), 1.0);
    }
    // Gamma(x) Gamma(1 - x) = pi / sin(pi x)
    let s = (PI * x).sin();
    (PI.ln() - s.abs().ln() - ln_gamma(1.0 - x), s.signum())
}

/// `J_nu(z)` and `J_nu'(z)` with `z = modulus * e^{i arg}`; `z^nu` uses the
/// supplied argument, so callers can follow `z` continuously across the
/// negative real axis.
pub fn bessel_series_polar(nu: f64, modulus: f64, arg: f64) -> Result<(C64, C64)> {
    if !nu.is_finite() || !modulus.is_finite() || !arg.is_finite() || modulus < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "bessel_series: nu = {nu}, |z| = {modulus}"
        )));
    }
    if modulus > SERIES_MAX_MODULUS {
        return Err(Error::SeriesDomain {
            modulus,
            limit: SERIES_MAX_MODULUS,
        });
    }
    if nu < 0.0 && (nu - nu.round()).abs() < INTEGER_ORDER_TOL {
        return Err(Error::IntegerOrder(nu));
    }
    if modulus == 0.0 {
        return match nu {
            0.0 => Ok((C64::new(1.0, 0.0), C64::new(0.0, 0.0))),
            1.0 => Ok((C64::new(0.0, 0.0), C64::new(0.5, 0.0))),
            n if n > 1.0 => Ok((C64::new(0.0, 0.0), C64::new(0.0, 0.0))),
            _ => Err(Error::Domain(format!("J_{nu} is singular at z = 0"))),
        };
    }
    let z = C64::from_polar(modulus, arg);
    let (lg, sign) = ln_gamma_signed(nu + 1.0);
    // (z/2)^nu / Gamma(nu + 1)
    let log_pref = C64::new(nu * (0.5 * modulus).ln() - lg, nu * arg);
    let pref = log_pref.exp() * sign;
    let q = -0.25 * z * z;
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = term * nu;
    let mut peak = 1.0f64;
    for k in 1..=SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum += term;
        dsum += term * (nu + 2.0 * kf);
        peak = peak.max(term.norm());
        if kf > modulus && term.norm() <= 1e-17 * sum.norm().max(1e-300) {
            return Ok((pref * sum, pref * dsum / z));
        }
        if term.norm() < 1e-300 * peak {
            return Ok((pref * sum, pref * dsum / z));
        }
    }
    Err(Error::NonConvergence(SERIES_MAX_TERMS))
}

/// `J_nu(z)` and `J_nu'(z)` on the principal branch of `z^nu`.
pub fn bessel_series(nu: f64, z: C64) -> Result<(C64, C64)> {
    bessel_series_polar(nu, z.norm(), z.arg())
}

/// `J_{nu+1}(w) / J_nu(w)` from the continued fraction
/// `r_nu = 1 / (2(nu+1)/w - r_{nu+1})`, evaluated by the modified Lentz
/// method. Valid for `nu > -1` at any `w` that is not a zero of `J_nu`.
pub fn bessel_ratio(nu: f64, w: C64) -> Result<C64> {
    const TINY: f64 = 1e-300;
    const MAX_ITER: usize = 100_000;
    if !(nu > -1.0) || w.norm() == 0.0 || !w.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "bessel_ratio: nu = {nu}, w = {w}"
        )));
    }
    let tiny = C64::new(TINY, 0.0);
    let b = |j: usize| 2.0 * (nu + j as f64) / w;
    // denominator g = b_1 - 1/(b_2 - 1/(b_3 - ...)), then r = 1/g
    let mut g = b(1);
    let mut c = g;
    let mut d = C64::new(0.0, 0.0);
    for j in 2..=MAX_ITER {
        d = b(j) - d;
        if d.norm() < TINY {
            d = tiny;
        }
        c = b(j) - c.inv();
        if c.norm() < TINY {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        g *= delta;
        if (delta - 1.0).norm() < 4.0 * f64::EPSILON {
            return Ok(g.inv());
        }
    }
    Err(Error::NonConvergence(MAX_ITER))
}

/// Leading-order values of `J_nu(nu x)`, `J_nu'(nu x)`, `J_{-nu}(nu x)` and
/// `J_{-nu}'(nu x)` for large `nu` at fixed `|x| < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformBessel {
    pub j_plus: C64,
    pub dj_plus: C64,
    pub j_minus: C64,
    pub dj_minus: C64,
    /// The exponent `(2/3) xi^{3/2}` the forms were built from.
    pub exponent: C64,
    /// Set when `nu` is below [`NU_MIN_UNIFORM`].
    pub accuracy_warning: bool,
}

/// Debye-type leading terms with the cosine/sine mixing of `J_{-nu}`.
pub fn uniform_bessel(nu: f64, x: C64) -> Result<UniformBessel> {
    if !(x.norm() < 1.0) || x.norm() == 0.0 {
        return Err(Error::Domain(format!(
            "uniform_bessel needs 0 < |x| < 1, got {}",
            x.norm()
        )));
    }
    if !(nu > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "uniform_bessel needs nu > 0, got {nu}"
        )));
    }
    let one_minus = 1.0 - x * x;
    let q = one_minus.powf(0.25);
    let zeta = exponent_of_x(x);
    let norm = (TAU * nu).sqrt();
    let decay = (-nu * zeta).exp();
    let grow = (nu * zeta).exp();
    let (s, c) = (nu * PI).sin_cos();
    Ok(UniformBessel {
        j_plus: decay / (norm * q),
        dj_plus: decay * q / (norm * x),
        j_minus: (c * decay + 2.0 * s * grow) / (norm * q),
        dj_minus: q * (c * decay - 2.0 * s * grow) / (x * norm),
        exponent: zeta,
        accuracy_warning: nu < NU_MIN_UNIFORM,
    })
}
