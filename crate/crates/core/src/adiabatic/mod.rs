// SPDX-License-Identifier: Apache-2.0

//! Instantaneous eigenbasis, projections and hop detection.

pub mod eigenpath;
pub mod hops;
pub mod projection;

pub use eigenpath::{eigen_track, EigenPath};
pub use hops::{
    detect_hops, detect_hops_with, dominance_switches, CrossingKind, HopEvent, HopOptions,
    HOP_WINDOW,
};
pub use projection::{
    component_ratio, project, ratio_series, transition_width, ProjectionSeries, POLE_TOL,
};
