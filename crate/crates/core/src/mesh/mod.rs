//! Closed, consistently oriented triangle meshes.
//!
//! A [`Mesh`] is immutable once built. Every edge is shared by exactly two
//! faces that traverse it in opposite directions, every face has positive
//! area, and every vertex is used by at least three faces. The embedding
//! may self-intersect; nothing here checks for that.

mod edit;
pub mod io;
mod metrics;
mod predicates;

use std::collections::BTreeMap;

use nalgebra::Vector3;
use thiserror::Error;

pub use metrics::{cayley_menger_volume, EdgeRecord, MetricSummary};

pub type Vec3 = Vector3<f64>;

/// Relative area threshold below which a face is degenerate.
pub const DEGENERATE_AREA_REL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("mesh has no faces")]
    Empty,
    #[error("face {face} references vertex {index}, but the mesh has {count} vertices")]
    IndexOutOfRange { face: usize, index: usize, count: usize },
    #[error("edge ({a}, {b}) is used by {count} faces, expected 2")]
    NonManifoldEdge { a: usize, b: usize, count: usize },
    #[error("edge ({a}, {b}) is traversed twice in the same direction")]
    InconsistentOrientation { a: usize, b: usize },
    #[error("face {face} is degenerate")]
    DegenerateFace { face: usize },
    #[error("vertex {vertex} is used by {count} faces, expected at least 3")]
    LowValence { vertex: usize, count: usize },
    #[error("invalid barycentric weights {weights:?}: need three positive weights summing to 1")]
    InvalidBarycentric { weights: [f64; 3] },
    #[error("lengths are not realizable as a tetrahedron")]
    NotRealizable,
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("unsupported face at line {line}: only triangles are accepted")]
    UnsupportedFace { line: usize },
    #[error("i/o error: {0}")]
    Io(String),
}

/// Undirected edge with its two incident faces.
///
/// `a < b`; `faces[0]` traverses the edge as `a -> b`, `faces[1]` as `b -> a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub faces: [usize; 2],
}

#[derive(Clone, Debug)]
pub struct Mesh {
    vertices: Vec<Vec3>,
    faces: Vec<[usize; 3]>,
    edges: Vec<Edge>,
    diameter: f64,
}

impl Mesh {
    /// Validates the face list and vertex positions.
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        if faces.is_empty() {
            return Err(MeshError::Empty);
        }
        let count = vertices.len();
        let mut valence = vec![0usize; count];
        for (f, face) in faces.iter().enumerate() {
            for &index in face {
                if index >= count {
                    return Err(MeshError::IndexOutOfRange { face: f, index, count });
                }
                valence[index] += 1;
            }
            if face[0] == face[1] || face[1] == face[2] || face[0] == face[2] {
                return Err(MeshError::DegenerateFace { face: f });
            }
        }

        // directed half-edges keyed by the unordered pair
        // (face traversing u -> v, face traversing v -> u, occurrences)
        type Slot = (Option<usize>, Option<usize>, usize);
        let mut slots: BTreeMap<(usize, usize), Slot> = BTreeMap::new();
        for (f, face) in faces.iter().enumerate() {
            for k in 0..3 {
                let (u, v) = (face[k], face[(k + 1) % 3]);
                let key = (u.min(v), u.max(v));
                let slot = slots.entry(key).or_insert((None, None, 0));
                slot.2 += 1;
                let target = if u < v { &mut slot.0 } else { &mut slot.1 };
                if target.is_some() {
                    return Err(MeshError::InconsistentOrientation { a: key.0, b: key.1 });
                }
                *target = Some(f);
            }
        }
        let mut edges = Vec::with_capacity(slots.len());
        for ((a, b), (fwd, bwd, n)) in slots {
            match (fwd, bwd) {
                (Some(f0), Some(f1)) if n == 2 => edges.push(Edge { a, b, faces: [f0, f1] }),
                _ => return Err(MeshError::NonManifoldEdge { a, b, count: n }),
            }
        }
        if let Some((vertex, &n)) = valence.iter().enumerate().find(|(_, &n)| n < 3) {
            return Err(MeshError::LowValence { vertex, count: n });
        }

        let diameter = diameter_of(&vertices);
        let mesh = Self {
            vertices,
            faces,
            edges,
            diameter,
        };
        mesh.check_areas()?;
        Ok(mesh)
    }

    /// Convenience constructor from plain coordinate arrays.
    pub fn from_arrays(vertices: &[[f64; 3]], faces: &[[usize; 3]]) -> Result<Self, MeshError> {
        Self::new(
            vertices.iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect(),
            faces.to_vec(),
        )
    }

    /// Same combinatorics at new vertex positions; only face areas are rechecked.
    pub fn with_positions(&self, vertices: Vec<Vec3>) -> Result<Self, MeshError> {
        assert_eq!(vertices.len(), self.vertices.len(), "vertex count mismatch");
        let diameter = diameter_of(&vertices);
        let mesh = Self {
            vertices,
            faces: self.faces.clone(),
            edges: self.edges.clone(),
            diameter,
        };
        mesh.check_areas()?;
        Ok(mesh)
    }

    fn check_areas(&self) -> Result<(), MeshError> {
        let min_area = DEGENERATE_AREA_REL * self.diameter * self.diameter;
        for f in 0..self.faces.len() {
            let area = self.face_area(f);
            if !(area > min_area) {
                return Err(MeshError::DegenerateFace { face: f });
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Edges in lexicographic order of their sorted endpoint pairs.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Index of the edge joining `u` and `v`, if any.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search_by(|e| (e.a, e.b).cmp(&key)).ok()
    }

    /// Index of the face with the given vertex set, in any order.
    pub fn find_face(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        let mut key = [a, b, c];
        key.sort_unstable();
        self.faces.iter().position(|f| {
            let mut s = *f;
            s.sort_unstable();
            s == key
        })
    }

    /// Area vector `(p_b - p_a) x (p_c - p_a)`, twice the vector area.
    pub fn face_cross(&self, face: usize) -> Vec3 {
        let [a, b, c] = self.faces[face];
        let (pa, pb, pc) = (self.vertices[a], self.vertices[b], self.vertices[c]);
        (pb - pa).cross(&(pc - pa))
    }

    pub fn face_area(&self, face: usize) -> f64 {
        0.5 * self.face_cross(face).norm()
    }

    /// Outward unit normal, following the face's vertex order.
    pub fn face_normal(&self, face: usize) -> Result<Vec3, MeshError> {
        self.face_cross(face)
            .try_normalize(0.0)
            .ok_or(MeshError::DegenerateFace { face })
    }

    /// Sorted list of vertices sharing an edge with `v`.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.a == v {
                    Some(e.b)
                } else if e.b == v {
                    Some(e.a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Faces incident to `v`.
    pub fn incident_faces(&self, v: usize) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&f| self.faces[f].contains(&v))
            .collect()
    }

    /// The same surface with every face reversed.
    pub fn reversed(&self) -> Self {
        let faces = self.faces.iter().map(|&[a, b, c]| [a, c, b]).collect();
        Self::new(self.vertices.clone(), faces).expect("reversal preserves validity")
    }

    /// Mesh with every vertex multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self, MeshError> {
        self.with_positions(self.vertices.iter().map(|p| p * s).collect())
    }
}

fn diameter_of(vertices: &[Vec3]) -> f64 {
    let mut best = 0.0f64;
    for (i, p) in vertices.iter().enumerate() {
        for q in &vertices[i + 1..] {
            best = best.max((p - q).norm());
        }
    }
    best
}
