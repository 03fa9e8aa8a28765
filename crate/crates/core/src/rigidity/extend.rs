use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use super::{RigidityError, VertexField};
use crate::linalg::{pinv_solve, FullSvd};
use crate::mesh::{Mesh, Vec3};
use crate::DEFAULT_RANK_TOL;

/// Extends known vertex values to an infinitesimal flex of the whole mesh.
///
/// Unknown vertices are solved from the edge constraints
/// `(p_i - p_j) . (w_i - w_j) = 0` in least squares with the known values
/// held fixed. The extension must be unique (full column rank in the
/// unknowns) and every edge constraint, including those between known
/// vertices, must hold to `1e-8 * diameter * field scale`.
pub fn extend_field(
    mesh: &Mesh,
    known: &BTreeMap<usize, Vec3>,
) -> Result<VertexField, RigidityError> {
    if known.is_empty() {
        return Err(RigidityError::NothingKnown);
    }
    let n = mesh.vertex_count();
    let p = mesh.vertices();
    // column slot for each unknown vertex
    let mut slot = vec![None; n];
    let mut unknowns = 0;
    for (v, s) in slot.iter_mut().enumerate() {
        if !known.contains_key(&v) {
            *s = Some(unknowns);
            unknowns += 1;
        }
    }

    let m = mesh.edge_count();
    let mut a = DMatrix::zeros(m, 3 * unknowns);
    let mut b = DVector::zeros(m);
    for (row, e) in mesh.edges().iter().enumerate() {
        let d = p[e.a] - p[e.b];
        for (v, sign) in [(e.a, 1.0), (e.b, -1.0)] {
            match slot[v] {
                Some(s) => {
                    for k in 0..3 {
                        a[(row, 3 * s + k)] = sign * d[k];
                    }
                }
                None => b[row] -= sign * d.dot(&known[&v]),
            }
        }
    }

    let mut field = VertexField::zeros(n);
    for (&v, w) in known {
        field.0[v] = *w;
    }
    if unknowns > 0 {
        let svd = FullSvd::new(&a);
        let rank = svd.rank(DEFAULT_RANK_TOL);
        if rank < 3 * unknowns {
            return Err(RigidityError::UnderdeterminedExtension {
                nullity: 3 * unknowns - rank,
            });
        }
        let (x, _) = pinv_solve(&a, &b, DEFAULT_RANK_TOL);
        for (w, s) in field.0.iter_mut().zip(&slot) {
            if let Some(s) = *s {
                *w = Vec3::new(x[3 * s], x[3 * s + 1], x[3 * s + 2]);
            }
        }
    }

    let scale = known.values().map(|w| w.norm()).fold(0.0, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let limit = 1e-8 * mesh.diameter() * scale;
    let residual = edge_residual(mesh, &field);
    if residual > limit {
        return Err(RigidityError::ExtensionInconsistent { residual, limit });
    }
    Ok(field)
}

/// Largest `|(p_i - p_j) . (w_i - w_j)|` over the edges.
pub(crate) fn edge_residual(mesh: &Mesh, w: &VertexField) -> f64 {
    let p = mesh.vertices();
    mesh.edges()
        .iter()
        .map(|e| (p[e.a] - p[e.b]).dot(&(w[e.a] - w[e.b])).abs())
        .fold(0.0, f64::max)
}
