// SPDX-License-Identifier: Apache-2.0

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adiabatic;
pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod geophase;
pub mod models;
pub mod numerics;

pub use error::{Error, Result};
