use super::{Mesh, MeshError, Vec3};

impl Mesh {
    /// Splits a face at an interior barycentric point into three faces.
    ///
    /// The new vertex is appended and its index is `vertex_count()` of the
    /// input. Face `(a, b, c)` becomes `(a, b, v)`, `(b, c, v)`, `(c, a, v)`;
    /// the first takes the old face's slot, the other two are appended.
    pub fn subdivide_face(&self, face: usize, weights: [f64; 3]) -> Result<Mesh, MeshError> {
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|&w| !(w > 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(MeshError::InvalidBarycentric { weights });
        }
        let [a, b, c] = self.faces[face];
        let p = self.vertices[a] * weights[0]
            + self.vertices[b] * weights[1]
            + self.vertices[c] * weights[2];
        self.cone_face(face, p)
    }

    /// Replaces a face with the three lateral faces of the pyramid over it
    /// with apex `apex`, keeping the orientation of the face's boundary.
    pub fn cone_face(&self, face: usize, apex: Vec3) -> Result<Mesh, MeshError> {
        let [a, b, c] = self.faces[face];
        let v = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.push(apex);
        let mut faces = self.faces.clone();
        faces[face] = [a, b, v];
        faces.push([b, c, v]);
        faces.push([c, a, v]);
        Mesh::new(vertices, faces)
    }

    /// Inserts `point` on the edge `(u, v)`, splitting both incident faces.
    pub fn split_edge(&self, u: usize, v: usize, point: Vec3) -> Result<Mesh, MeshError> {
        let Some(edge) = self.edge_index(u, v) else {
            return Err(MeshError::NonManifoldEdge { a: u.min(v), b: u.max(v), count: 0 });
        };
        let q = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.push(point);
        let mut faces = self.faces.clone();
        for f in self.edges[edge].faces {
            let face = self.faces[f];
            // rotate so the split edge is face[0] -> face[1]
            let k = (0..3)
                .find(|&k| {
                    let (x, y) = (face[k], face[(k + 1) % 3]);
                    (x == u && y == v) || (x == v && y == u)
                })
                .expect("edge belongs to face");
            let (x, y, z) = (face[k], face[(k + 1) % 3], face[(k + 2) % 3]);
            faces[f] = [x, q, z];
            faces.push([q, y, z]);
        }
        Mesh::new(vertices, faces)
    }
}
