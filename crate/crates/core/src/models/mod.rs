// SPDX-License-Identifier: Apache-2.0

//! The three driven Hamiltonians and their exact solutions.

pub mod bu;
pub mod h1;
pub mod h2;

pub use bu::{
    bu_cyclic_orbits, bu_eigenvector_principal, bu_floquet_bessel, bu_instantaneous, bu_multiplier,
    bu_plus_anchor, hbu, BUParams,
};
pub use h1::{
    closed_form, gw_phase, h1, h1_aa_exact, h1_aa_slow_limit, h1_cyclic_exact, h1_cyclic_orbits,
    h1_multiplier, Model1ClosedForm, Model1Params,
};
pub use h2::{h2, Model2Params};
