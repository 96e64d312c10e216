// SPDX-License-Identifier: Apache-2.0

//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by the numerical pipeline.
///
/// Variants name the physical or numerical condition that stopped a
/// computation; several of them (exceptional points, degeneracies,
/// overflow in the unstable regime) are legitimate outcomes in this
/// domain rather than programming faults.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate matrix: eigenvalues coincide and the eigenspace is defective (exceptional point)")]
    DegenerateMatrix,

    #[error(
        "overflow: state component magnitude {magnitude:e} exceeded cap {cap:e} at t = {time}"
    )]
    Overflow { time: f64, magnitude: f64, cap: f64 },

    #[error("branch ambiguity at sample {index}: root phase jump reached pi/k")]
    BranchAmbiguity { index: usize },

    #[error("exceptional point: |Omega| = {0:e} below tolerance")]
    ExceptionalPoint(f64),

    #[error("series domain exceeded: |z| = {modulus} above envelope {limit}")]
    SeriesDomain { modulus: f64, limit: f64 },

    #[error("Bessel order {0} is within tolerance of an integer")]
    IntegerOrder(f64),

    #[error("series did not converge within {0} terms")]
    NonConvergence(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("trajectory is not cyclic: relative closure defect {0:e}")]
    NotCyclic(f64),

    #[error("consecutive overlap vanished at sample {0}")]
    ZeroOverlap(usize),

    #[error("eigenpath is not closed: endpoint defect {0:e}")]
    NotClosed(f64),

    #[error("zero state has no Bloch coordinates")]
    ZeroState,

    #[error("eigenvalues degenerate on the path at t = {0}")]
    DegeneracyOnPath(f64),

    #[error("eigenpath discontinuous at sample {index}: overlap {overlap}")]
    DiscontinuousPath { index: usize, overlap: f64 },

    #[error("projection basis is degenerate")]
    DegenerateBasis,

    #[error("first component vanishes (pole of b/a)")]
    PoleCrossing,

    #[error("theta = {0} lies on a Stokes line")]
    OnStokesLine(f64),

    #[error("no sign change of the target function on [{lo}, {hi}]")]
    NoRootInBracket { lo: f64, hi: f64 },

    #[error("phase forms disagree by {0:e}: trajectory was not generated by this Hamiltonian")]
    InconsistentDynamics(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that stem from the physics or the integrator rather
    /// than from bad input.
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::InvalidArgument(_) | Error::Domain(_))
    }
}
