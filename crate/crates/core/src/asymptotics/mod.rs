// SPDX-License-Identifier: Apache-2.0

//! Bessel series and large-order forms, the Stokes exponent, asymptotic
//! amplitude ratios and the critical ratio.

pub mod bessel;
pub mod stokes;

pub use bessel::{
    bessel_ratio, bessel_series, bessel_series_polar, uniform_bessel, UniformBessel, NU_MAX,
    NU_MIN_UNIFORM, SERIES_MAX_MODULUS,
};
pub use stokes::{
    critical_equation, critical_ratio, critical_ratio_in, hop_theta_estimate, hop_window_width,
    r_minus_asymptotic, r_minus_branches, r_plus_asymptotic, stokes_point, wedge_boundaries,
    xi_exponent, CriticalSolve, StokesPoint, Wedge,
};
