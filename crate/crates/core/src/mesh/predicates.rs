use nalgebra::DMatrix;

use super::Mesh;

impl Mesh {
    /// True when `v` and every vertex of its incident faces lie within `tol`
    /// of one plane (the best-fit plane through their centroid).
    pub fn vertex_star_coplanar(&self, v: usize, tol: f64) -> bool {
        let mut ids = self.neighbors(v);
        ids.push(v);
        let pts: Vec<_> = ids.iter().map(|&i| self.vertices[i]).collect();
        let centroid = pts.iter().sum::<super::Vec3>() / pts.len() as f64;
        let centered = DMatrix::from_fn(pts.len(), 3, |r, c| pts[r][c] - centroid[c]);
        let svd = centered.svd(false, true);
        let v_t = svd.v_t.expect("v_t requested");
        let (k, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("three singular values");
        let normal = v_t.row(k).transpose();
        pts.iter()
            .all(|p| (p - centroid).dot(&normal).abs() <= tol)
    }

    /// True when some three edges at `v` are coplanar: for some triple, the
    /// endpoint of one edge lies within `tol` of the plane of the other two.
    /// The smallest of those distances is `|det| / max |e_i x e_j|`.
    pub fn three_incident_edges_coplanar(&self, v: usize, tol: f64) -> bool {
        let edges: Vec<_> = self
            .neighbors(v)
            .into_iter()
            .map(|u| self.vertices[u] - self.vertices[v])
            .collect();
        for (i, a) in edges.iter().enumerate() {
            for (j, b) in edges.iter().enumerate().skip(i + 1) {
                for c in &edges[j + 1..] {
                    let det = a.cross(b).dot(c).abs();
                    let widest = a.cross(b).norm().max(b.cross(c).norm()).max(c.cross(a).norm());
                    if det <= tol * widest {
                        return true;
                    }
                }
            }
        }
        false
    }
}
