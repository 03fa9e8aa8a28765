use std::f64::consts::PI;

use nalgebra::{Matrix4, Matrix5};
use serde::{Deserialize, Serialize};

use super::{Mesh, MeshError};

/// Metric view of one edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EdgeRecord {
    pub endpoints: [usize; 2],
    pub faces: [usize; 2],
    pub length: f64,
    /// Interior dihedral angle in `[0, 2pi)`; `pi` for a flat edge.
    pub dihedral: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub total_mean_curvature: f64,
    pub oriented_volume: f64,
    pub euler_characteristic: i64,
}

impl Mesh {
    pub fn edge_length(&self, edge: usize) -> f64 {
        let e = self.edges[edge];
        (self.vertices[e.a] - self.vertices[e.b]).norm()
    }

    /// Interior dihedral angle at an edge.
    ///
    /// With outward unit normals `n1`, `n2` of the two incident faces and `e`
    /// the unit edge vector as traversed by the first face, the bending angle
    /// is `theta = atan2((n1 x n2) . e, n1 . n2)` and the interior angle is
    /// `pi - theta`. Convex edges bend positively, so their interior angle is
    /// below `pi`.
    pub fn dihedral_angle(&self, edge: usize) -> Result<f64, MeshError> {
        let e = self.edges[edge];
        let n1 = self.face_normal(e.faces[0])?;
        let n2 = self.face_normal(e.faces[1])?;
        let dir = (self.vertices[e.b] - self.vertices[e.a]).normalize();
        let theta = n1.cross(&n2).dot(&dir).atan2(n1.dot(&n2));
        Ok(PI - theta)
    }

    pub fn edge_records(&self) -> Result<Vec<EdgeRecord>, MeshError> {
        (0..self.edges.len())
            .map(|i| {
                let e = self.edges[i];
                Ok(EdgeRecord {
                    endpoints: [e.a, e.b],
                    faces: e.faces,
                    length: self.edge_length(i),
                    dihedral: self.dihedral_angle(i)?,
                })
            })
            .collect()
    }

    /// `1/2 * sum over edges of |l| (pi - alpha(l))`.
    pub fn total_mean_curvature(&self) -> Result<f64, MeshError> {
        let mut sum = 0.0;
        for i in 0..self.edges.len() {
            sum += self.edge_length(i) * (PI - self.dihedral_angle(i)?);
        }
        Ok(0.5 * sum)
    }

    /// Signed enclosed volume, `1/6 * sum over faces of det(p_a, p_b, p_c)`.
    pub fn oriented_volume(&self) -> f64 {
        self.faces
            .iter()
            .map(|&[a, b, c]| {
                self.vertices[a].dot(&self.vertices[b].cross(&self.vertices[c]))
            })
            .sum::<f64>()
            / 6.0
    }

    pub fn summary(&self) -> Result<MetricSummary, MeshError> {
        Ok(MetricSummary {
            total_mean_curvature: self.total_mean_curvature()?,
            oriented_volume: self.oriented_volume(),
            euler_characteristic: self.euler_characteristic(),
        })
    }
}

/// Unsigned tetrahedron volume from its six edge lengths via the
/// Cayley-Menger determinant (`288 V^2 = det CM`).
///
/// `lengths` is `[d01, d02, d03, d12, d13, d23]` for vertices `0..4`.
pub fn cayley_menger_volume(lengths: [f64; 6]) -> Result<f64, MeshError> {
    if lengths.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(MeshError::NotRealizable);
    }
    let [d01, d02, d03, d12, d13, d23] = lengths.map(|l| l * l);
    let scale = lengths.iter().copied().fold(0.0f64, f64::max).powi(2);

    // every face must satisfy the triangle inequality: -det(CM_3) = 16 A^2
    for [x, y, z] in [[d01, d02, d12], [d01, d03, d13], [d02, d03, d23], [d12, d13, d23]] {
        let cm3 = Matrix4::new(
            0.0, 1.0, 1.0, 1.0, //
            1.0, 0.0, x, y, //
            1.0, x, 0.0, z, //
            1.0, y, z, 0.0,
        );
        if -cm3.determinant() < -1e-10 * scale * scale {
            return Err(MeshError::NotRealizable);
        }
    }

    let cm = Matrix5::new(
        0.0, 1.0, 1.0, 1.0, 1.0, //
        1.0, 0.0, d01, d02, d03, //
        1.0, d01, 0.0, d12, d13, //
        1.0, d02, d12, 0.0, d23, //
        1.0, d03, d13, d23, 0.0,
    );
    let det = cm.determinant();
    if det < -1e-10 * scale * scale * scale {
        return Err(MeshError::NotRealizable);
    }
    Ok((det.max(0.0) / 288.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    // Dihedral of the regular tetrahedron computed directly from the half-planes
    // through edge BC with B=(0,0,0), C=(1,0,0), D=(1/2,sqrt3/2,0) and apex A.
    fn regular_dihedral_oracle() -> f64 {
        let s3 = 3.0f64.sqrt();
        let apex = nalgebra::Vector3::new(0.5, s3 / 6.0, (2.0f64 / 3.0).sqrt());
        let foot = nalgebra::Vector3::new(0.5, 0.0, 0.0);
        let d = nalgebra::Vector3::new(0.5, s3 / 2.0, 0.0);
        let u = (apex - foot).normalize();
        let w = (d - foot).normalize();
        u.dot(&w).acos()
    }

    #[test]
    fn regular_tetrahedron_dihedrals() {
        let m = regular_tetrahedron();
        let oracle = regular_dihedral_oracle();
        assert!((oracle - (1.0f64 / 3.0).acos()).abs() < 1e-15);
        for i in 0..m.edge_count() {
            let a = m.dihedral_angle(i).unwrap();
            assert!((a - 1.230_959_417_340_774_7).abs() < 1e-12, "{a}");
        }
    }

    #[test]
    fn cube_edges_and_diagonals() {
        let m = unit_cube();
        let mut right = 0;
        let mut flat = 0;
        for r in m.edge_records().unwrap() {
            if (r.dihedral - PI / 2.0).abs() < 1e-12 {
                right += 1;
            } else if (r.dihedral - PI).abs() < 1e-12 {
                flat += 1;
            }
        }
        assert_eq!((right, flat), (12, 6));
        assert!((m.total_mean_curvature().unwrap() - 3.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn volumes() {
        let cube = unit_cube();
        assert!((cube.oriented_volume() - 1.0).abs() < 1e-15);
        assert!((cube.reversed().oriented_volume() + 1.0).abs() < 1e-15);
        let t = regular_tetrahedron();
        assert!((t.oriented_volume() - 2f64.sqrt() / 12.0).abs() < 1e-15);
        assert!(
            (t.total_mean_curvature().unwrap() - 3.0 * (PI - (1.0f64 / 3.0).acos())).abs() < 1e-12
        );
    }

    #[test]
    fn reversal_reflects_dihedrals() {
        let m = regular_tetrahedron();
        let r = m.reversed();
        for i in 0..m.edge_count() {
            let a = m.dihedral_angle(i).unwrap();
            let b = r.dihedral_angle(i).unwrap();
            assert!((a + b - 2.0 * PI).abs() < 1e-12);
        }
        let mm = m.total_mean_curvature().unwrap();
        assert!((r.total_mean_curvature().unwrap() + mm).abs() < 1e-12);
    }

    #[test]
    fn cayley_menger_cases() {
        let v = cayley_menger_volume([1.0; 6]).unwrap();
        assert!((v - 2f64.sqrt() / 12.0).abs() < 1e-15);

        let r2 = 2f64.sqrt();
        // unit square 0-1-2-3 with diagonals 02 and 13
        let flat = cayley_menger_volume([1.0, r2, 1.0, 1.0, r2, 1.0]).unwrap();
        assert!(flat.abs() < 1e-12);

        assert_eq!(
            cayley_menger_volume([10.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
            Err(MeshError::NotRealizable)
        );
        assert_eq!(
            cayley_menger_volume([1.0, 1.0, 0.0, 1.0, 1.0, 1.0]),
            Err(MeshError::NotRealizable)
        );
    }
}
