//! (m,k)-stars, l-dependent blocks and the Laplacian-family eigenvalue
//! multiplicities they force.
//!
//! An (m,k)-star of a graph is a set `v1` of `m >= 2` vertices that share
//! exactly the same open neighborhood `v2` (`|v2| = k >= 1`). When the `v1`
//! vertices also carry identical weight vectors toward `v2`, their common
//! strength `w` is an eigenvalue of the Laplacian and of the signless
//! Laplacian with multiplicity at least `m - 1`, and the normalized
//! Laplacian has eigenvalue 1 with multiplicity at least the sum of `m - 1`
//! over all such stars.
//!
//! An l-dependent block generalizes this: `l` vertices whose adjacency rows
//! are linear combinations of the rows of an independent set `v1`, all of
//! common strength `w̃`, force eigenvalue `w̃` with multiplicity `>= l`.

mod ldep;
mod planted;
mod predict;
mod stars;

use thiserror::Error;

pub use ldep::{
    certify_star_as_ldependent, detect_proportional_ldependent, verify_ldependent,
    LDependentCandidate, LDependentPartition,
};
pub use planted::{
    plant_ldependent_graph, plant_star_graph, PlantedLDependent, PlantedStars, StarSpec,
};
pub use predict::{
    predict_multiplicities, verify_ldependent_predictions, verify_star_predictions, Prediction,
    PredictionReport,
};
pub use stars::{detect_stars, group_by_weight, star_weight, MkStar, StarClass};

use crate::eigen::EigenError;
use crate::graph::GraphError;

/// Relative tolerance for comparing user-supplied edge weights.
pub const WEIGHT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error("weight vectors of star with v1 starting at {first} differ at vertex {vertex}")]
    UnequalWeightVectors { first: usize, vertex: usize },
    #[error("l-dependent condition {condition} violated at vertex {vertex}")]
    ConditionViolated { condition: u8, vertex: usize },
    #[error("vertex {vertex} has strength {strength}, expected common strength {expected}")]
    NoCommonStrength {
        vertex: usize,
        strength: f64,
        expected: f64,
    },
    #[error("invalid vertex partition: {0}")]
    InvalidPartition(&'static str),
    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}
