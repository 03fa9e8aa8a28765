//! Rigidity workbench for closed oriented triangulated polyhedra.
//!
//! The crate is split along the lines of what a polyhedron goes through:
//!
//! * [`mesh`] holds the validated surface, its metric quantities (edge
//!   lengths, interior dihedral angles, total mean curvature, oriented
//!   volume), vertex predicates and file I/O.
//! * [`rigidity`] builds the rigidity matrix, the trivial motions, the
//!   space of nontrivial infinitesimal flexes, and the flux / volume
//!   derivative functionals of a vertex field.
//! * [`constructions`] builds the concrete polyhedra: a subdivided
//!   tetrahedron carrying a normal flex, its pyramid extension, the
//!   line-symmetric Bricard octahedron, the glued polyhedron carrying an
//!   infinitesimal flex with nonzero flux, and the one-parameter
//!   tetrahedral family whose total mean curvature has a closed form.
//! * [`flexpath`] follows a flex numerically with a predictor-corrector
//!   continuation and samples invariants along it.
//!
//! Self-intersecting surfaces are allowed everywhere; only the
//! combinatorics and face nondegeneracy are validated.

#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constructions;
pub mod flexpath;
pub mod linalg;
pub mod mesh;
pub mod rigidity;

pub use constructions::{
    bricard_type1, build_counterexample, build_t1, build_t2, delta_k_closed_form, delta_k_mesh,
    BricardSeed, ConstructionError, Counterexample, CounterexampleParams, DeltaKClosedForm,
    DeltaKParams,
};
pub use flexpath::{resample_invariants, trace_flex, Trace, TraceConfig, TraceError, TraceReport, TraceRow};
pub use mesh::{
    cayley_menger_volume, EdgeRecord, Mesh, MeshError, MetricSummary, Vec3,
};
pub use rigidity::{
    extend_field, flex_space, flux, rigidity_matrix, tmc_directional_derivative,
    trivial_motion_basis, volume_derivative, FlexBasis, RigidityError, VertexField,
};

/// Default relative threshold on singular values for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Default coplanarity tolerance, as a fraction of the mesh diameter.
pub const DEFAULT_COPLANAR_TOL: f64 = 1e-9;
