use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::mesh::{Mesh, MeshError, Vec3};
use crate::rigidity::{extend_field, VertexField};

/// Seed of a Bricard octahedron of the first type. The half-turn is about
/// the z-axis, `(x, y, z) -> (-x, -y, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BricardSeed {
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub v: [f64; 3],
}

impl Default for BricardSeed {
    fn default() -> Self {
        Self {
            a: [1.2, 0.0, 0.3],
            b: [0.0, 1.0, -0.4],
            v: [0.3, -0.5, 1.1],
        }
    }
}

/// Faces of an octahedron with poles `p`, `p1` and equator `a, b, a1, b1`,
/// consistently oriented. The first and fourth faces are `(a, b, p)` and
/// `(b1, a, p)`.
fn octahedron_faces(a: usize, b: usize, p: usize, a1: usize, b1: usize, p1: usize) -> [[usize; 3]; 8] {
    [
        [a, b, p],
        [b, a1, p],
        [a1, b1, p],
        [b1, a, p],
        [b, a, p1],
        [a1, b, p1],
        [b1, a1, p1],
        [a, b1, p1],
    ]
}

/// Octahedron on `A, B, V` and their images `A1, B1, V1` under the z-axis
/// half-turn, with vertex order `A, B, V, A1, B1, V1`.
///
/// The half-turn negates coordinates exactly, so `|AB| = |A1B1|` and
/// `|B1A| = |BA1|` hold bitwise.
pub fn bricard_type1(seed: BricardSeed) -> Result<Mesh, ConstructionError> {
    let pts = [seed.a, seed.b, seed.v].map(|p| Vec3::new(p[0], p[1], p[2]));
    let scale = pts.iter().map(|p| p.norm()).fold(0.0, f64::max);
    // A point on the axis is its own image and the octahedron collapses.
    if let Some(k) = pts.iter().position(|p| p.x.hypot(p.y) <= 1e-9 * scale) {
        let faces = octahedron_faces(0, 1, 2, 3, 4, 5);
        let face = faces.iter().position(|f| f.contains(&k)).unwrap_or(0);
        return Err(MeshError::DegenerateFace { face }.into());
    }
    let half_turn = |p: Vec3| Vec3::new(-p.x, -p.y, p.z);
    let vertices = vec![
        pts[0],
        pts[1],
        pts[2],
        half_turn(pts[0]),
        half_turn(pts[1]),
        half_turn(pts[2]),
    ];
    Ok(Mesh::new(vertices, octahedron_faces(0, 1, 2, 3, 4, 5).to_vec())?)
}

/// Vertices of two adjacent faces `(a, b, pole)` and `(b1, a, pole)` along
/// which a Bricard octahedron is glued. The half-turn swaps `b` and `b1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueRoles {
    pub pole: usize,
    pub a: usize,
    pub b: usize,
    pub b1: usize,
}

/// Half-turn about the line through `center` with unit direction `dir`.
fn half_turn_about(center: Vec3, dir: Vec3) -> impl Fn(Vec3) -> Vec3 {
    move |p| {
        let q = p - center;
        center + dir * (2.0 * q.dot(&dir)) - q
    }
}

/// Glues a Bricard octahedron of the first type onto `mesh` along the faces
/// `(a, b, pole)` and `(b1, a, pole)`.
///
/// The octahedron's symmetry is the half-turn about the line through the
/// midpoint of `b b1` with direction `axis` (projected to be orthogonal to
/// `b1 - b`); it is built from the mesh's own vertices, so the shared faces
/// coincide exactly. The two shared faces are removed from both surfaces,
/// the new vertices `sigma(a)` and `sigma(pole)` are appended in that order,
/// and `field` is extended over them as an infinitesimal flex.
pub fn glue_bricard(
    mesh: &Mesh,
    field: &VertexField,
    roles: GlueRoles,
    axis: Vec3,
) -> Result<(Mesh, VertexField), ConstructionError> {
    let GlueRoles { pole, a, b, b1 } = roles;
    let p = mesh.vertices();
    let f_abp = mesh
        .find_face(a, b, pole)
        .ok_or_else(|| ConstructionError::MissingFace(format!("({a}, {b}, {pole})")))?;
    let f_bap = mesh
        .find_face(b1, a, pole)
        .ok_or_else(|| ConstructionError::MissingFace(format!("({b1}, {a}, {pole})")))?;

    let swap = (p[b1] - p[b]).normalize();
    let dir = (axis - swap * axis.dot(&swap))
        .try_normalize(1e-9 * axis.norm())
        .ok_or(ConstructionError::InvalidAxis)?;
    let sigma = half_turn_about((p[b] + p[b1]) * 0.5, dir);

    let n = mesh.vertex_count();
    let (a1, pole1) = (n, n + 1);
    let mut vertices = p.to_vec();
    vertices.push(sigma(p[a]));
    vertices.push(sigma(p[pole]));

    let mut oct = octahedron_faces(a, b, pole, a1, b1, pole1);
    // The octahedron must traverse the shared faces opposite to the mesh so
    // that the remaining pieces close up consistently.
    if same_cycle(mesh.faces()[f_abp], oct[0]) {
        for f in &mut oct {
            f.swap(1, 2);
        }
    }
    let faces: Vec<[usize; 3]> = mesh
        .faces()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != f_abp && *i != f_bap)
        .map(|(_, f)| *f)
        .chain(oct.iter().enumerate().filter(|(i, _)| *i != 0 && *i != 3).map(|(_, f)| *f))
        .collect();
    let glued = Mesh::new(vertices, faces)?;

    let known: BTreeMap<usize, Vec3> = field.0.iter().copied().enumerate().collect();
    let extended = extend_field(&glued, &known)?;
    Ok((glued, extended))
}

fn same_cycle(f: [usize; 3], g: [usize; 3]) -> bool {
    (0..3).any(|k| f[k] == g[0] && f[(k + 1) % 3] == g[1] && f[(k + 2) % 3] == g[2])
}
