//! Builders for the concrete polyhedra of the workbench.
//!
//! * [`build_t1`]: a tetrahedron with one face split at an interior vertex
//!   `V`, carrying the flex that pushes `V` along the face normal.
//! * [`build_t2`]: the face `CVA` replaced by the lateral surface of a
//!   pyramid with apex `B1`; the flex extends to `B1`.
//! * [`bricard_type1`]: the octahedron symmetric under the half-turn about
//!   the z-axis, with opposite vertices swapped pairwise.
//! * [`build_counterexample`]: Bricard octahedra glued onto `T2` so that no
//!   vertex star is planar and no three edges at a vertex are coplanar,
//!   while the flex keeps its nonzero flux.
//! * [`delta_k_mesh`] / [`delta_k_closed_form`]: the tetrahedron with base
//!   edges 1 and lateral edges `l`, optionally subdivided, and the closed
//!   form of its total mean curvature.

mod bricard;
mod counterexample;
mod delta_k;
mod tetra;

use thiserror::Error;

use crate::mesh::MeshError;
use crate::rigidity::RigidityError;

pub use bricard::{bricard_type1, glue_bricard, BricardSeed, GlueRoles};
pub use counterexample::{
    assemble_counterexample, build_counterexample, Counterexample, CounterexampleParams,
    VertexPredicates,
};
pub use delta_k::{
    closed_form_slope, delta_k_closed_form, delta_k_mesh, DeltaKClosedForm, DeltaKParams,
};
pub use tetra::{build_t1, build_t2, tetrahedron_mesh};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
    #[error("the four tetrahedron vertices are coplanar")]
    DegenerateTetrahedron,
    #[error("apex lies in the plane ABC (distance {distance:.3e})")]
    CoplanarApex { distance: f64 },
    #[error("faces to glue along were not found: {0}")]
    MissingFace(String),
    #[error("axis direction is parallel to the swapped vertex pair")]
    InvalidAxis,
    #[error("no sampled axis direction satisfied the vertex predicates after {tried} attempts")]
    PredicateFailureExhausted { tried: usize },
    #[error("invalid parameter l = {l}: need l > 1/sqrt(3)")]
    InvalidParameter { l: f64 },
    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),
}
