use super::{RigidityError, VertexField};
use crate::mesh::{Mesh, Vec3};

fn check_len(mesh: &Mesh, w: &VertexField) -> Result<(), RigidityError> {
    if w.len() != mesh.vertex_count() {
        return Err(RigidityError::FieldLength {
            expected: mesh.vertex_count(),
            got: w.len(),
        });
    }
    Ok(())
}

/// Exact surface integral of the face-linear interpolant of `w` against the
/// outward normal: `sum over faces of (1/6) [(p_b - p_a) x (p_c - p_a)] . (w_a + w_b + w_c)`.
pub fn flux(mesh: &Mesh, w: &VertexField) -> Result<f64, RigidityError> {
    check_len(mesh, w)?;
    Ok(mesh
        .faces()
        .iter()
        .enumerate()
        .map(|(f, &[a, b, c])| mesh.face_cross(f).dot(&(w[a] + w[b] + w[c])))
        .sum::<f64>()
        / 6.0)
}

/// Exact derivative at `t = 0` of the oriented volume of `p + t w`,
/// expanded trilinearly face by face.
pub fn volume_derivative(mesh: &Mesh, w: &VertexField) -> Result<f64, RigidityError> {
    check_len(mesh, w)?;
    let p = mesh.vertices();
    let det = |x: &Vec3, y: &Vec3, z: &Vec3| x.dot(&y.cross(z));
    Ok(mesh
        .faces()
        .iter()
        .map(|&[a, b, c]| {
            det(&w[a], &p[b], &p[c]) + det(&p[a], &w[b], &p[c]) + det(&p[a], &p[b], &w[c])
        })
        .sum::<f64>()
        / 6.0)
}

/// Finite-difference step `1e-5 * diameter / max |w_i|`.
pub fn default_fd_step(mesh: &Mesh, w: &VertexField) -> f64 {
    let scale = w.max_norm();
    if scale == 0.0 {
        1e-5 * mesh.diameter()
    } else {
        1e-5 * mesh.diameter() / scale
    }
}

/// Central difference `[M(p + h w) - M(p - h w)] / (2h)` of the total mean
/// curvature along `w`.
pub fn tmc_directional_derivative(
    mesh: &Mesh,
    w: &VertexField,
    h: f64,
) -> Result<f64, RigidityError> {
    check_len(mesh, w)?;
    let shifted = |sign: f64| -> Result<f64, RigidityError> {
        let pts = mesh
            .vertices()
            .iter()
            .zip(&w.0)
            .map(|(p, v)| p + v * (sign * h))
            .collect();
        Ok(mesh.with_positions(pts)?.total_mean_curvature()?)
    };
    Ok((shifted(1.0)? - shifted(-1.0)?) / (2.0 * h))
}
