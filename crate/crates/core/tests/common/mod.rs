//! Test-side oracles and random mesh generators. Nothing here calls the
//! crate's metric code; meshes are only built through `Mesh::new`.
#![allow(dead_code)]

use std::f64::consts::PI;

use polyflex::{Mesh, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut impl Rng, scale: f64) -> Vec3 {
    Vec3::new(
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
    )
}

pub fn random_unit(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = random_vec(rng, 1.0);
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Oriented volume as a sum of signed tetrahedra against the first vertex.
pub fn volume(mesh: &Mesh) -> f64 {
    let p = mesh.vertices();
    let o = p[0];
    mesh.faces()
        .iter()
        .map(|&[a, b, c]| (p[a] - o).dot(&(p[b] - o).cross(&(p[c] - o))))
        .sum::<f64>()
        / 6.0
}

/// Interior dihedral angle at the edge shared by faces `(u, v, x)` and
/// `(v, u, y)`: the unsigned angle between the two half-planes, reflected
/// to `2pi - angle` when `y` lies on the outer side of the first face.
fn interior_angle(p: &[Vec3], u: usize, v: usize, x: usize, y: usize) -> f64 {
    let e = (p[v] - p[u]).normalize();
    let perp = |q: Vec3| {
        let d = q - p[u];
        d - e * d.dot(&e)
    };
    let (hx, hy) = (perp(p[x]), perp(p[y]));
    let angle = hx.cross(&hy).norm().atan2(hx.dot(&hy));
    let n1 = (p[v] - p[u]).cross(&(p[x] - p[u]));
    if n1.dot(&hy) > 0.0 {
        2.0 * PI - angle
    } else {
        angle
    }
}

/// Total mean curvature from face adjacency found by brute force.
pub fn total_mean_curvature(mesh: &Mesh) -> f64 {
    let p = mesh.vertices();
    let f = mesh.faces();
    let mut total = 0.0;
    for (i, fi) in f.iter().enumerate() {
        for k in 0..3 {
            let (u, v, x) = (fi[k], fi[(k + 1) % 3], fi[(k + 2) % 3]);
            if u > v {
                continue;
            }
            let y = f
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .find_map(|(_, g)| {
                    (0..3).find_map(|m| (g[m] == v && g[(m + 1) % 3] == u).then_some(g[(m + 2) % 3]))
                })
                .expect("closed mesh");
            total += (p[v] - p[u]).norm() * (PI - interior_angle(p, u, v, x, y));
        }
    }
    0.5 * total
}

/// Flux of the face-linear interpolant: each face integrates the mean of
/// its corner values against its area vector.
pub fn flux(mesh: &Mesh, w: &[Vec3]) -> f64 {
    let p = mesh.vertices();
    mesh.faces()
        .iter()
        .map(|&[a, b, c]| {
            let area_vec = 0.5 * (p[b] - p[a]).cross(&(p[c] - p[a]));
            area_vec.dot(&((w[a] + w[b] + w[c]) / 3.0))
        })
        .sum()
}

/// Central difference of the oriented volume along `w`.
pub fn volume_fd(mesh: &Mesh, w: &[Vec3], h: f64) -> f64 {
    let moved = |s: f64| {
        let pts = mesh.vertices().iter().zip(w).map(|(p, v)| p + v * s).collect();
        volume(&mesh.with_positions(pts).unwrap())
    };
    (moved(h) - moved(-h)) / (2.0 * h)
}

/// Convex hull of points in general position, by testing every triple.
pub fn hull(points: Vec<Vec3>) -> Mesh {
    let n = points.len();
    let mut faces = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let normal = (points[b] - points[a]).cross(&(points[c] - points[a]));
                let side: Vec<f64> = (0..n)
                    .filter(|&i| i != a && i != b && i != c)
                    .map(|i| normal.dot(&(points[i] - points[a])))
                    .collect();
                if side.iter().all(|&s| s < 0.0) {
                    faces.push([a, b, c]);
                } else if side.iter().all(|&s| s > 0.0) {
                    faces.push([a, c, b]);
                }
            }
        }
    }
    Mesh::new(points, faces).expect("hull of points in general position")
}

/// Star-shaped mesh: hull of random directions, then each vertex pushed
/// radially by a random factor in `[0.6, 1.4]`.
pub fn random_star_mesh(rng: &mut impl Rng, n: usize) -> Mesh {
    let dirs: Vec<Vec3> = (0..n).map(|_| random_unit(rng)).collect();
    let convex = hull(dirs.clone());
    let radial = dirs
        .iter()
        .map(|d| d * rng.random_range(0.6..1.4))
        .collect();
    convex.with_positions(radial).expect("nondegenerate faces")
}

pub fn octahedron(noise: f64, rng: &mut impl Rng) -> Mesh {
    let mut pts = vec![
        Vec3::x(),
        Vec3::y(),
        -Vec3::x(),
        -Vec3::y(),
        Vec3::z(),
        -Vec3::z(),
    ];
    for p in &mut pts {
        *p += random_vec(rng, noise);
    }
    let faces = vec![
        [0, 1, 4],
        [1, 2, 4],
        [2, 3, 4],
        [3, 0, 4],
        [1, 0, 5],
        [2, 1, 5],
        [3, 2, 5],
        [0, 3, 5],
    ];
    Mesh::new(pts, faces).unwrap()
}

pub fn random_field(rng: &mut impl Rng, n: usize) -> Vec<Vec3> {
    (0..n).map(|_| random_vec(rng, 1.0)).collect()
}

/// Sum of the absolute face terms of the flux, the natural size of
/// rounding errors in it.
pub fn flux_scale(mesh: &Mesh, w: &[Vec3]) -> f64 {
    let p = mesh.vertices();
    mesh.faces()
        .iter()
        .map(|&[a, b, c]| (p[b] - p[a]).cross(&(p[c] - p[a])).norm() * (w[a].norm() + w[b].norm() + w[c].norm()))
        .sum::<f64>()
        / 6.0
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}
