// SPDX-License-Identifier: Apache-2.0

//! Complex 2x2 algebra, root continuation, RK4 propagation and Floquet
//! analysis.

pub mod floquet;
pub mod linalg;
pub mod ode;
pub mod roots;

use serde::{Deserialize, Serialize};

pub use floquet::{
    anchored_orbit, classify_stability, cyclic_orbits, cyclic_states, floquet_operator,
    order_by_multiplier, CyclicOrbit, CyclicState, FloquetOperator, StabilityClass, StabilityKind,
};
pub use linalg::{eig2, phase_of_multiplier, CMat2, CVec2, EigenPair};
pub use ode::{
    propagate, uniform_grid, Hamiltonian, Integrator, RunInfo, StepPropagators, Trajectory,
};
pub use roots::track_root;

/// Branch tag of a two-fold family (cyclic states, eigenpaths).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Branch {
    pub fn other(self) -> Branch {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }

    /// `+1.0` or `-1.0`.
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    /// Array slot: `Plus` is 0, `Minus` is 1.
    pub fn index(self) -> usize {
        match self {
            Branch::Plus => 0,
            Branch::Minus => 1,
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::Plus => "+",
            Branch::Minus => "-",
        })
    }
}
