//! Simulation and combinatorial optimization for the two-dimensional q-state
//! random-field Potts model.
//!
//! The crate is organized bottom-up:
//!
//! * [`lattice`]: boxes of `Z²`, lattice animals, edge boundaries and
//!   exhaustive enumeration of simply connected animals through the origin.
//! * [`field`]: seeded quenched Gaussian fields and animal weights.
//! * [`gla`]: greedy lattice animal maximization (exact, greedy, annealed),
//!   disorder averages and empirical tail probabilities.
//! * [`polygon`]: iterative polygon growth by outward isosceles triangles.
//! * [`potts`]: Hamiltonian, exact Gibbs tables, heat-bath sampling, ground
//!   states and the spontaneous magnetization estimator.
//! * [`scaling`]: correlation-length search and power-law exponent fits.
//!
//! All randomness flows from explicit `u64` seeds through counter-keyed
//! ChaCha streams (see [`rng`]), so every result is reproducible regardless
//! of how the work is scheduled across threads.

pub mod field;
pub mod gla;
pub mod lattice;
pub mod polygon;
pub mod potts;
pub mod rng;
pub mod scaling;
pub mod stats;

mod occupancy;

pub use field::{FieldConvention, FieldRealization, WeightMode};
pub use gla::{GlaMethod, GlaResult, Optimizer};
pub use lattice::{BoxSpec, Grid, LatticeAnimal, Site};
pub use polygon::{Polygon, Variant};
pub use potts::{BoundaryCondition, GibbsParams, PottsSystem, SpinConfig};
pub use scaling::{AxisMap, PowerFit, ScalingPoint, ScalingSeries};

use serde::{Deserialize, Serialize};

/// How the ambiguous parts of the model definition were read. Every
/// experiment report carries one of these so outputs are self-describing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpretationFlags {
    pub field_convention: FieldConvention,
    /// Colors run over `0..=q-1`.
    pub color_range: String,
    /// The random field couples at every site of the box.
    pub boundary_field: String,
}

impl InterpretationFlags {
    pub fn new(field_convention: FieldConvention) -> Self {
        Self {
            field_convention,
            color_range: "0..=q-1".to_string(),
            boundary_field: "every-site".to_string(),
        }
    }
}
