use std::collections::BTreeMap;

use super::ConstructionError;
use crate::mesh::{Mesh, Vec3};
use crate::rigidity::{extend_field, VertexField};

/// Boundary of the tetrahedron `p[0..4]`, oriented with outward normals.
pub fn tetrahedron_mesh(p: [Vec3; 4]) -> Result<Mesh, ConstructionError> {
    let det = (p[1] - p[0]).dot(&(p[2] - p[0]).cross(&(p[3] - p[0])));
    let scale = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .map(|(i, j)| (p[i] - p[j]).norm())
        .fold(0.0, f64::max);
    if det.abs() <= 1e-12 * scale.powi(3) {
        return Err(ConstructionError::DegenerateTetrahedron);
    }
    let mut faces = vec![[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]];
    if det < 0.0 {
        for f in &mut faces {
            f.swap(1, 2);
        }
    }
    Ok(Mesh::new(p.to_vec(), faces)?)
}

/// Tetrahedron `ABCD` with face `ABC` split at the barycentric point `V`.
///
/// Vertices are `A, B, C, D, V` in that order. The field vanishes at
/// `A..D` and equals the outward unit normal of `ABC` at `V`.
pub fn build_t1(
    tetra: [Vec3; 4],
    v_barycentric: [f64; 3],
) -> Result<(Mesh, VertexField), ConstructionError> {
    let base = tetrahedron_mesh(tetra)?;
    let abc = base.find_face(0, 1, 2).expect("tetrahedron has face ABC");
    let normal = base.face_normal(abc)?;
    let mesh = base.subdivide_face(abc, v_barycentric)?;
    let mut field = VertexField::zeros(5);
    field.0[4] = normal;
    Ok((mesh, field))
}

/// Replaces face `CVA` of `T1` with the pyramid over it with apex `B1`
/// (appended as vertex 5) and extends the field to `B1`.
pub fn build_t2(
    t1: &Mesh,
    w1: &VertexField,
    apex: Vec3,
) -> Result<(Mesh, VertexField), ConstructionError> {
    let p = t1.vertices();
    let normal = (p[1] - p[0]).cross(&(p[2] - p[0])).normalize();
    let distance = (apex - p[0]).dot(&normal).abs();
    if distance <= 1e-9 * t1.diameter() {
        return Err(ConstructionError::CoplanarApex { distance });
    }
    let cva = t1
        .find_face(2, 4, 0)
        .ok_or_else(|| ConstructionError::MissingFace("CVA".into()))?;
    let mesh = t1.cone_face(cva, apex)?;
    let known: BTreeMap<usize, Vec3> = w1.0.iter().copied().enumerate().collect();
    let field = extend_field(&mesh, &known)?;
    Ok((mesh, field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigidity::{flex_space, flux, volume_derivative};

    fn regular() -> [Vec3; 4] {
        let s3 = 3.0f64.sqrt();
        [
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.5, s3 / 2.0, 0.0),
            Vec3::new(0.5, s3 / 6.0, (2.0f64 / 3.0).sqrt()),
        ]
    }

    #[test]
    fn tetrahedron_orientation_follows_handedness() {
        let mut p = regular();
        assert!(tetrahedron_mesh(p).unwrap().oriented_volume() > 0.0);
        p.swap(0, 1);
        assert!(tetrahedron_mesh(p).unwrap().oriented_volume() > 0.0);
        p[3] = Vec3::new(0.3, 0.3, 0.0);
        assert_eq!(tetrahedron_mesh(p).unwrap_err(), ConstructionError::DegenerateTetrahedron);
    }

    #[test]
    fn t1_counts_and_flux() {
        let third = 1.0 / 3.0;
        let (m, w) = build_t1(regular(), [third, third, third]).unwrap();
        assert_eq!((m.vertex_count(), m.face_count(), m.euler_characteristic()), (5, 6, 2));
        let area = 3.0f64.sqrt() / 4.0;
        assert!((flux(&m, &w).unwrap() - area / 3.0).abs() < 1e-15);
        assert!((volume_derivative(&m, &w).unwrap() - area / 3.0).abs() < 1e-15);
        assert_eq!(flex_space(&m, 1e-8).unwrap().dimension(), 1);
    }

    #[test]
    fn t2_keeps_flux() {
        let (t1, w1) = build_t1(regular(), [0.2, 0.3, 0.5]).unwrap();
        let (t2, w2) = build_t2(&t1, &w1, Vec3::new(0.3, 0.2, -0.6)).unwrap();
        assert_eq!((t2.vertex_count(), t2.face_count(), t2.euler_characteristic()), (6, 8, 2));
        let (f1, f2) = (flux(&t1, &w1).unwrap(), flux(&t2, &w2).unwrap());
        assert!((f1 - f2).abs() <= 1e-10 * f1.abs());
        assert!(w2[5].norm() > 0.0);
    }

    #[test]
    fn coplanar_apex_is_rejected() {
        let (t1, w1) = build_t1(regular(), [0.2, 0.3, 0.5]).unwrap();
        let err = build_t2(&t1, &w1, Vec3::new(0.2, -0.3, 0.0)).unwrap_err();
        assert!(matches!(err, ConstructionError::CoplanarApex { .. }));
    }
}
