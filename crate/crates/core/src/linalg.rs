//! Thin helpers over nalgebra's SVD: sorted spectra, full right singular
//! bases for wide matrices, numerical rank, and pseudoinverse solves.
//!
//! nalgebra's SVD occasionally returns a wrong singular pair on inputs
//! with many exactly repeated zero singular values. Every decomposition
//! here is checked against `|A v_k| = sigma_k` and recomputed on a
//! reflected input when the check fails.

use nalgebra::{DMatrix, DVector};

/// Singular value decomposition with a complete right singular basis.
///
/// `singular_values` has one entry per column of the input, sorted in
/// descending order; columns beyond the row count carry an implicit zero.
/// `v` holds the matching right singular vectors as columns.
#[derive(Clone, Debug)]
pub struct FullSvd {
    pub singular_values: Vec<f64>,
    pub v: DMatrix<f64>,
    /// Number of genuine singular values (`min(rows, cols)` of the input).
    pub genuine: usize,
}

impl FullSvd {
    pub fn new(matrix: &DMatrix<f64>) -> Self {
        let (rows, cols) = matrix.shape();
        let genuine = rows.min(cols);
        // Pad wide matrices with zero rows so the SVD yields all `cols`
        // right singular vectors.
        let square;
        let input = if rows < cols {
            let mut padded = DMatrix::zeros(cols, cols);
            padded.view_mut((0, 0), (rows, cols)).copy_from(matrix);
            square = padded;
            &square
        } else {
            matrix
        };
        let (singular_values, v) = right_svd(input);
        Self {
            singular_values,
            v,
            genuine,
        }
    }

    pub fn max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values at or above `rel_tol * sigma_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let cutoff = rel_tol * self.max();
        if self.max() == 0.0 {
            return 0;
        }
        self.singular_values.iter().take_while(|&&s| s >= cutoff).count()
    }

    /// Columns of `v` spanning the numerical null space.
    pub fn null_space(&self, rel_tol: f64) -> DMatrix<f64> {
        let r = self.rank(rel_tol);
        self.v.columns(r, self.v.ncols() - r).into_owned()
    }

    /// Ratio between the smallest kept and the largest dropped singular value.
    /// `None` when nothing is dropped or the largest dropped value is zero.
    pub fn gap_ratio(&self, rel_tol: f64) -> Option<f64> {
        let r = self.rank(rel_tol);
        if r == 0 || r == self.singular_values.len() {
            return None;
        }
        let dropped = self.singular_values[r];
        if dropped == 0.0 {
            None
        } else {
            Some(self.singular_values[r - 1] / dropped)
        }
    }
}

/// Sorted singular values and right singular vectors, unchecked.
fn sorted_svd(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let sigma = svd.singular_values;
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let mut v = DMatrix::zeros(a.ncols(), a.ncols());
    let mut values = Vec::with_capacity(a.ncols());
    for (dst, &src) in order.iter().enumerate() {
        values.push(sigma[src]);
        v.set_column(dst, &v_t.row(src).transpose());
    }
    (values, v)
}

/// Largest `| |A v_k| - sigma_k |` and departure of `v` from orthogonality.
fn svd_defect(a: &DMatrix<f64>, sigma: &[f64], v: &DMatrix<f64>) -> f64 {
    let av = a * v;
    let pairs = sigma
        .iter()
        .enumerate()
        .map(|(k, s)| (av.column(k).norm() - s).abs())
        .fold(0.0, f64::max);
    let ortho = (v.transpose() * v - DMatrix::identity(v.ncols(), v.ncols())).amax();
    let smax = sigma.first().copied().unwrap_or(0.0);
    pairs.max(ortho * smax)
}

/// Householder reflection `I - 2 u u^T` with a fixed irregular `u`.
fn reflection(n: usize, attempt: usize) -> DMatrix<f64> {
    let u = DVector::from_fn(n, |i, _| ((i + 1) as f64 * (0.7548776662 + attempt as f64)).sin() + 0.1);
    let u = u.normalize();
    DMatrix::identity(n, n) - &u * u.transpose() * 2.0
}

/// `a` (at least as many rows as columns) decomposed as
/// `a = U diag(sigma) V^T`; returns `sigma` sorted descending and `V`.
fn right_svd(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.ncols();
    let (sigma, v) = sorted_svd(a);
    let scale = sigma.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let limit = 1e-11 * scale;
    let mut best_defect = svd_defect(a, &sigma, &v);
    let mut best = (sigma, v);
    // a H has right singular vectors H^T V' for those V' of a H
    for attempt in 0..4 {
        if best_defect <= limit {
            break;
        }
        let h = reflection(n, attempt);
        let (sigma, v) = sorted_svd(&(a * &h));
        let v = &h * v;
        let defect = svd_defect(a, &sigma, &v);
        if defect < best_defect {
            best_defect = defect;
            best = (sigma, v);
        }
    }
    best
}

/// Minimum-norm least-squares solution of `a x = b`, discarding singular
/// values below `rel_tol * sigma_max`. Also returns the numerical rank.
pub fn pinv_solve(a: &DMatrix<f64>, b: &DVector<f64>, rel_tol: f64) -> (DVector<f64>, usize) {
    let svd = FullSvd::new(a);
    let rank = svd.rank(rel_tol);
    let mut x = DVector::zeros(a.ncols());
    // u_k = A v_k / sigma_k, so each kept term is v_k (A v_k . b) / sigma_k^2
    for k in 0..rank {
        let (v, s) = (svd.v.column(k), svd.singular_values[k]);
        if s > 0.0 {
            x += v * ((a * v).dot(b) / (s * s));
        }
    }
    (x, rank)
}
