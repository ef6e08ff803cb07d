//! Bar frameworks and generic rigidity.
//!
//! Generic local rigidity is decided by the rank of the rigidity matrix at a
//! random integer configuration, generic global rigidity by the rank of a
//! random equilibrium stress matrix. Both are one-sided: reaching the target
//! rank certifies rigidity, missing it after every trial is only probable
//! evidence against it. Exact combinatorial characterizations for `d = 1`
//! and local `d = 2` live alongside as independent routes.

mod cjt;
mod framework;
mod generic;
mod pebble;

use thiserror::Error;

use crate::graph::GraphError;

pub use cjt::{cjt_globally_rigid_predicate, CjtOutcome};
pub use framework::{are_congruent, are_equivalent, rigidity_matrix, Framework, RigidityMatrix};
pub use generic::{
    equilibrium_stress_basis, generic_rank_target, is_globally_1_rigid, is_globally_rigid_generic,
    is_locally_1_rigid, is_locally_rigid_generic, sample_configuration, stress_matrix, trial_seed,
    Certainty, Method, Property, RigidityVerdict, Verdict, DEFAULT_TRIALS, SAMPLE_BOUND,
};
pub use pebble::{geiringer_locally_2_rigid, pebble_rank_2_3};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RigidityError {
    #[error("frameworks differ in {0}")]
    Mismatch(&'static str),
    #[error("configuration has {found} points for a graph of order {order}")]
    ConfigLength { order: usize, found: usize },
    #[error("point {vertex} has {found} coordinates, expected {dim}")]
    PointDimension {
        vertex: usize,
        dim: usize,
        found: usize,
    },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("graph of order {0} is too small (need at least 2 vertices)")]
    OrderTooSmall(usize),
    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
