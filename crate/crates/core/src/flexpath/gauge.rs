use nalgebra::{DMatrix, DVector};

use super::{flatten, TraceError};
use crate::mesh::Mesh;

/// Six linear pins that remove rigid motions.
///
/// With `e` the unit direction of `v1 - v0` and `n` the unit normal of the
/// triangle `v0 v1 v2` (both taken from the initial positions): `v0` is
/// fixed, `v1` may only slide along `e`, and `v2` stays in the initial
/// plane through `n`.
#[derive(Clone, Debug)]
pub struct Gauge {
    pins: [usize; 3],
    rows: DMatrix<f64>,
    reference: DVector<f64>,
}

impl Gauge {
    pub fn new(mesh: &Mesh, pins: [usize; 3]) -> Result<Self, TraceError> {
        let n = mesh.vertex_count();
        let [v0, v1, v2] = pins;
        if pins.iter().any(|&v| v >= n) || v0 == v1 || v1 == v2 || v0 == v2 {
            return Err(TraceError::GaugeConflict { pins });
        }
        let p = mesh.vertices();
        let e = (p[v1] - p[v0]).normalize();
        let normal = match (p[v1] - p[v0]).cross(&(p[v2] - p[v0])).try_normalize(1e-12) {
            Some(nrm) => nrm,
            None => return Err(TraceError::GaugeConflict { pins }),
        };
        let side = normal.cross(&e);

        let mut rows = DMatrix::zeros(6, 3 * n);
        for k in 0..3 {
            rows[(k, 3 * v0 + k)] = 1.0;
            rows[(3, 3 * v1 + k)] = side[k];
            rows[(4, 3 * v1 + k)] = normal[k];
            rows[(5, 3 * v2 + k)] = normal[k];
        }
        Ok(Self {
            pins,
            rows,
            reference: flatten(p),
        })
    }

    pub fn pins(&self) -> [usize; 3] {
        self.pins
    }

    /// Pinned-coordinate offsets from the reference positions.
    pub fn residual(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.rows * (x - &self.reference)
    }

    /// `jac` with the six pin rows appended.
    pub fn stack(&self, jac: &DMatrix<f64>) -> DMatrix<f64> {
        let (m, c) = jac.shape();
        let mut out = DMatrix::zeros(m + 6, c);
        out.view_mut((0, 0), (m, c)).copy_from(jac);
        out.view_mut((m, 0), (6, c)).copy_from(&self.rows);
        out
    }
}
