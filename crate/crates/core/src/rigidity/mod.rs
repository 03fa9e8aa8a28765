//! First-order rigidity: the rigidity matrix, trivial motions, the space of
//! nontrivial infinitesimal flexes, field extension, and the flux, volume
//! derivative and mean-curvature derivative of a vertex field.
//!
//! A vertex field `w` is an infinitesimal flex when every edge satisfies
//! `(p_i - p_j) . (w_i - w_j) = 0`. On a triangulated surface this is the
//! same as every curve keeping its length stationary to first order, since
//! a field that is linear on a triangle does so iff its three edges do.

mod extend;
mod field;
mod flux;
mod space;

use thiserror::Error;

use crate::mesh::MeshError;

pub use extend::extend_field;
pub use field::VertexField;
pub use flux::{default_fd_step, flux, tmc_directional_derivative, volume_derivative};
pub use space::{flex_space, rigidity_matrix, subtract_rigid_fit, trivial_motion_basis, FlexBasis};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RigidityError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("vertices are collinear; trivial motions are not six-dimensional")]
    DegenerateVertexSet,
    #[error("rank decision is ambiguous: kept/dropped singular value ratio {ratio:.3e} < 100")]
    RankGapAmbiguous { ratio: f64 },
    #[error("field extension is inconsistent: residual {residual:.3e} exceeds {limit:.3e}")]
    ExtensionInconsistent { residual: f64, limit: f64 },
    #[error("field extension is not unique: unknown block has nullity {nullity}")]
    UnderdeterminedExtension { nullity: usize },
    #[error("field has {got} vectors but the mesh has {expected} vertices")]
    FieldLength { expected: usize, got: usize },
    #[error("no known vertex values were supplied")]
    NothingKnown,
}
