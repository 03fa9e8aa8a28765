use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{RigidityError, VertexField};
use crate::linalg::FullSvd;
use crate::mesh::{Mesh, Vec3};

/// `|E| x 3|V|` Jacobian of the half squared edge lengths.
///
/// The row of edge `(i, j)` holds `(p_i - p_j)` in the block of vertex `i`
/// and `(p_j - p_i)` in the block of vertex `j`; rows follow the mesh's
/// sorted edge order.
pub fn rigidity_matrix(mesh: &Mesh) -> DMatrix<f64> {
    let n = mesh.vertex_count();
    let p = mesh.vertices();
    let mut r = DMatrix::zeros(mesh.edge_count(), 3 * n);
    for (row, e) in mesh.edges().iter().enumerate() {
        let d = p[e.a] - p[e.b];
        for k in 0..3 {
            r[(row, 3 * e.a + k)] = d[k];
            r[(row, 3 * e.b + k)] = -d[k];
        }
    }
    r
}

/// Orthonormal basis of the six first-order rigid motions: three
/// translations and three rotations about the vertex centroid.
pub fn trivial_motion_basis(mesh: &Mesh) -> Result<[VertexField; 6], RigidityError> {
    trivial_motions_of(mesh.vertices())
}

pub(crate) fn trivial_motions_of(points: &[Vec3]) -> Result<[VertexField; 6], RigidityError> {
    let n = points.len();
    let centroid = points.iter().sum::<Vec3>() / n as f64;
    let mut raw: Vec<DVector<f64>> = Vec::with_capacity(6);
    for k in 0..3 {
        let axis = Vec3::ith(k, 1.0);
        raw.push(VertexField(vec![axis; n]).to_dvector());
    }
    for k in 0..3 {
        let axis = Vec3::ith(k, 1.0);
        raw.push(
            VertexField(points.iter().map(|p| axis.cross(&(p - centroid))).collect()).to_dvector(),
        );
    }

    // modified Gram-Schmidt, run twice for stability
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(6);
    for v in raw {
        let scale = v.norm();
        let mut w = v;
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&w);
                w.axpy(-c, b, 1.0);
            }
        }
        let norm = w.norm();
        if scale == 0.0 || norm < 1e-10 * scale {
            return Err(RigidityError::DegenerateVertexSet);
        }
        basis.push(w / norm);
    }
    Ok(basis
        .into_iter()
        .map(|b| VertexField::from_slice(b.as_slice()))
        .collect::<Vec<_>>()
        .try_into()
        .expect("six fields"))
}

/// Nontrivial infinitesimal flexes of a mesh.
#[derive(Clone, Debug, Serialize)]
pub struct FlexBasis {
    /// Orthonormal in the flattened `3|V|` inner product and orthogonal to
    /// the trivial motions.
    #[serde(skip)]
    pub basis: Vec<VertexField>,
    /// Singular values of the rigidity matrix, descending, padded with zeros
    /// to `3|V|` entries.
    pub singular_values: Vec<f64>,
    pub rank_tolerance: f64,
    pub rank: usize,
    /// Dimension of the full kernel, trivial motions included.
    pub kernel_dim: usize,
}

impl FlexBasis {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The basis as columns of a `3|V| x dim` matrix.
    pub fn matrix(&self) -> DMatrix<f64> {
        let cols: Vec<_> = self.basis.iter().map(VertexField::to_dvector).collect();
        if cols.is_empty() {
            return DMatrix::zeros(self.singular_values.len(), 0);
        }
        DMatrix::from_columns(&cols)
    }
}

/// Kernel of the rigidity matrix modulo trivial motions.
///
/// Singular values below `rank_tol * sigma_max` count as null directions.
/// If the smallest kept value is within a factor 100 of the largest dropped
/// one the rank decision is refused.
pub fn flex_space(mesh: &Mesh, rank_tol: f64) -> Result<FlexBasis, RigidityError> {
    let trivial = trivial_motion_basis(mesh)?;
    let r = rigidity_matrix(mesh);
    let svd = FullSvd::new(&r);
    if let Some(ratio) = svd.gap_ratio(rank_tol) {
        if ratio < 100.0 {
            return Err(RigidityError::RankGapAmbiguous { ratio });
        }
    }
    let rank = svd.rank(rank_tol);
    let kernel = svd.null_space(rank_tol);
    let kernel_dim = kernel.ncols();
    let basis = project_out_trivial(&kernel, &trivial);
    Ok(FlexBasis {
        basis,
        singular_values: svd.singular_values,
        rank_tolerance: rank_tol,
        rank,
        kernel_dim,
    })
}

fn project_out_trivial(kernel: &DMatrix<f64>, trivial: &[VertexField; 6]) -> Vec<VertexField> {
    if kernel.ncols() == 0 {
        return Vec::new();
    }
    let t = DMatrix::from_columns(&trivial.iter().map(VertexField::to_dvector).collect::<Vec<_>>());
    let projected = kernel - &t * (t.transpose() * kernel);
    // The kernel contains the trivial motions, so the projection has
    // singular values near 1 (nontrivial directions) and near 0.
    let svd = FullSvd::new(&projected);
    let mut dirs: Vec<(f64, DVector<f64>)> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 0.5)
        .map(|(k, &s)| (s, &projected * svd.v.column(k) / s))
        .collect();
    dirs.sort_by(|a, b| b.0.total_cmp(&a.0));
    dirs.into_iter()
        .map(|(_, mut v)| {
            // deterministic sign: largest component positive
            let imax = v.iamax();
            if v[imax] < 0.0 {
                v.neg_mut();
            }
            VertexField::from_slice(v.as_slice())
        })
        .collect()
}

/// Subtracts the rigid motion that best matches `field` on `anchors`
/// (least squares over translation and rotation about the origin).
pub fn subtract_rigid_fit(mesh: &Mesh, field: &VertexField, anchors: &[usize]) -> VertexField {
    let p = mesh.vertices();
    // unknowns: translation t and angular velocity omega, w ~ t + omega x p
    let mut a = DMatrix::zeros(3 * anchors.len(), 6);
    let mut b = DVector::zeros(3 * anchors.len());
    for (row, &i) in anchors.iter().enumerate() {
        let q = p[i];
        for k in 0..3 {
            a[(3 * row + k, k)] = 1.0;
            b[3 * row + k] = field[i][k];
        }
        // omega x q as a matrix acting on omega
        let cross = [
            [0.0, q.z, -q.y],
            [-q.z, 0.0, q.x],
            [q.y, -q.x, 0.0],
        ];
        for r in 0..3 {
            for c in 0..3 {
                a[(3 * row + r, 3 + c)] = cross[r][c];
            }
        }
    }
    let (x, _) = crate::linalg::pinv_solve(&a, &b, 1e-12);
    let t = Vec3::new(x[0], x[1], x[2]);
    let omega = Vec3::new(x[3], x[4], x[5]);
    VertexField(
        field
            .0
            .iter()
            .zip(p)
            .map(|(w, q)| w - t - omega.cross(q))
            .collect(),
    )
}
