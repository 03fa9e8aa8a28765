use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::bricard::{glue_bricard, GlueRoles};
use super::tetra::{build_t1, build_t2};
use super::ConstructionError;
use crate::mesh::{Mesh, Vec3};
use crate::rigidity::{flex_space, flux, VertexField};
use crate::{DEFAULT_COPLANAR_TOL, DEFAULT_RANK_TOL};

// Vertex slots fixed by the construction order.
const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;
const V: usize = 4;
const B1: usize = 5;

/// Free choices of the glued polyhedron. Every field has a default, so a
/// partial JSON object is accepted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CounterexampleParams {
    /// Vertices `A, B, C, D` of the base tetrahedron.
    pub tetrahedron: [[f64; 3]; 4],
    /// Position of `V` in face `ABC`.
    pub v_barycentric: [f64; 3],
    /// Apex `B1` of the pyramid over `ACV`; must be off the plane `ABC`.
    pub apex: [f64; 3],
    /// Preferred half-turn axis direction for the first octahedron; sampled
    /// directions are tried after it.
    pub axis: Option<[f64; 3]>,
    /// Length `s` of the field at `V`.
    pub flex_magnitude: f64,
    /// Glue a second octahedron along the faces `BCV`, `BCD` so that edge
    /// `BC` disappears. Without it `B` and `C` keep three edges in the
    /// plane `ABC`.
    pub clear_base_plane: bool,
    /// Number of sampled axis directions per octahedron.
    pub axis_samples: usize,
    /// Coplanarity tolerance relative to the diameter.
    pub coplanar_tol: f64,
}

impl Default for CounterexampleParams {
    fn default() -> Self {
        Self {
            tetrahedron: [
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [0.25, 0.9, 0.0],
                [0.4, 0.35, 0.85],
            ],
            v_barycentric: [0.3, 0.33, 0.37],
            apex: [0.2, 0.45, -0.5],
            axis: None,
            flex_magnitude: 1.0,
            clear_base_plane: true,
            axis_samples: 24,
            coplanar_tol: DEFAULT_COPLANAR_TOL,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VertexPredicates {
    pub vertex: usize,
    pub star_coplanar: bool,
    pub three_edges_coplanar: bool,
}

/// The glued polyhedron together with its intermediate stages.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub t1: (Mesh, VertexField),
    pub t2: (Mesh, VertexField),
    pub mesh: Mesh,
    pub field: VertexField,
    /// Axis directions actually used, one per glued octahedron.
    pub axes: Vec<Vec3>,
    pub area_abc: f64,
    pub predicates: Vec<VertexPredicates>,
}

impl Counterexample {
    pub fn satisfies_predicates(&self) -> bool {
        self.predicates
            .iter()
            .all(|p| !p.star_coplanar && !p.three_edges_coplanar)
    }

    pub fn labels(&self) -> Vec<&'static str> {
        const NAMES: [&str; 10] = ["A", "B", "C", "D", "V", "B1", "A1", "V1", "B'", "C'"];
        NAMES[..self.mesh.vertex_count()].to_vec()
    }
}

fn to_vec3(p: [f64; 3]) -> Vec3 {
    Vec3::new(p[0], p[1], p[2])
}

/// Directions orthogonal to `normal`, spread by the golden angle over a
/// half-turn (a line and its reverse are the same axis).
fn axis_samples(normal: Vec3, count: usize) -> Vec<Vec3> {
    let n = normal.normalize();
    let seed = if n.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = (seed - n * seed.dot(&n)).normalize();
    let e2 = n.cross(&e1);
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            // offset keeps the first sample away from the frame vectors
            let theta = (0.37 + k as f64 * golden) % PI;
            e1 * theta.cos() + e2 * theta.sin()
        })
        .collect()
}

/// Builds `T1`, `T2` and the glued polyhedron for fixed axis directions,
/// without checking the vertex predicates.
pub fn assemble_counterexample(
    params: &CounterexampleParams,
    first_axis: Vec3,
    second_axis: Option<Vec3>,
) -> Result<Counterexample, ConstructionError> {
    let tetra = params.tetrahedron.map(to_vec3);
    let (t1, w1) = build_t1(tetra, params.v_barycentric)?;
    let w1 = w1.scaled(params.flex_magnitude);
    let (t2, w2) = build_t2(&t1, &w1, to_vec3(params.apex))?;

    let mut axes = vec![first_axis];
    let roles = GlueRoles { pole: V, a: A, b: B, b1: B1 };
    let (mut mesh, mut field) = glue_bricard(&t2, &w2, roles, first_axis)?;
    if let Some(axis) = second_axis {
        let roles = GlueRoles { pole: C, a: B, b: V, b1: D };
        (mesh, field) = glue_bricard(&mesh, &field, roles, axis)?;
        axes.push(axis);
    }

    let tol = params.coplanar_tol * mesh.diameter();
    let predicates = (0..mesh.vertex_count())
        .map(|v| VertexPredicates {
            vertex: v,
            star_coplanar: mesh.vertex_star_coplanar(v, tol),
            three_edges_coplanar: mesh.three_incident_edges_coplanar(v, tol),
        })
        .collect();
    let area_abc = 0.5 * (tetra[1] - tetra[0]).cross(&(tetra[2] - tetra[0])).norm();
    Ok(Counterexample {
        t1: (t1, w1),
        t2: (t2, w2),
        mesh,
        field,
        axes,
        area_abc,
        predicates,
    })
}

/// Glued polyhedron carrying an infinitesimal flex with nonzero flux, no
/// vertex with a planar star and no vertex with three coplanar edges.
///
/// Axis directions are taken from `params.axis` (if set) and then from a
/// deterministic sample; the first combination whose field extends, whose
/// flux is bounded away from zero and whose vertices pass both predicates
/// is returned.
pub fn build_counterexample(
    params: &CounterexampleParams,
) -> Result<Counterexample, ConstructionError> {
    let tetra = params.tetrahedron.map(to_vec3);
    let apex = to_vec3(params.apex);
    // V's position is needed for the second axis family
    let v = tetra[0] * params.v_barycentric[0]
        + tetra[1] * params.v_barycentric[1]
        + tetra[2] * params.v_barycentric[2];

    // axis-independent stages fail fast
    let (t1, w1) = build_t1(tetra, params.v_barycentric)?;
    build_t2(&t1, &w1, apex)?;

    let mut first: Vec<Vec3> = params.axis.map(to_vec3).into_iter().collect();
    first.extend(axis_samples(apex - tetra[B], params.axis_samples));
    let second: Vec<Option<Vec3>> = if params.clear_base_plane {
        axis_samples(tetra[D] - v, params.axis_samples)
            .into_iter()
            .map(Some)
            .collect()
    } else {
        vec![None]
    };

    let mut tried = 0;
    let mut last_err = None;
    let mut reached_predicates = false;
    for &d1 in &first {
        for &d2 in &second {
            tried += 1;
            let candidate = match assemble_counterexample(params, d1, d2) {
                Ok(c) => c,
                Err(e) => {
                    last_err = Some(e);
                    continue;
                }
            };
            reached_predicates = true;
            if !candidate.satisfies_predicates() {
                continue;
            }
            let f = flux(&candidate.mesh, &candidate.field)?;
            if f.abs() < 1e-6 * candidate.area_abc * params.flex_magnitude.abs() {
                continue;
            }
            if flex_space(&candidate.mesh, DEFAULT_RANK_TOL)?.dimension() == 0 {
                continue;
            }
            return Ok(candidate);
        }
    }
    match last_err {
        Some(e) if !reached_predicates => Err(e),
        _ => Err(ConstructionError::PredicateFailureExhausted { tried }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_polyhedron_passes() {
        let c = build_counterexample(&CounterexampleParams::default()).unwrap();
        assert_eq!(c.mesh.vertex_count(), 10);
        assert_eq!(c.mesh.euler_characteristic(), 2);
        assert!(c.satisfies_predicates());
        let expected = c.area_abc / 3.0;
        let f = flux(&c.mesh, &c.field).unwrap();
        assert!((f - expected).abs() <= 1e-9 * expected, "{f} vs {expected}");
    }

    #[test]
    fn single_gluing_leaves_planar_triples_at_b_and_c() {
        let params = CounterexampleParams::default();
        let d = axis_samples(to_vec3(params.apex) - to_vec3(params.tetrahedron[1]), 1)[0];
        let c = assemble_counterexample(&params, d, None).unwrap();
        assert_eq!(c.mesh.vertex_count(), 8);
        assert_eq!(c.mesh.euler_characteristic(), 2);
        let bad: Vec<usize> = c
            .predicates
            .iter()
            .filter(|p| p.star_coplanar || p.three_edges_coplanar)
            .map(|p| p.vertex)
            .collect();
        assert_eq!(bad, vec![B, C]);
        let (t2, w2) = &c.t2;
        let (a, b) = (flux(&c.mesh, &c.field).unwrap(), flux(t2, w2).unwrap());
        assert!((a - b).abs() <= 1e-9 * b.abs());

        let literal = CounterexampleParams { clear_base_plane: false, ..params };
        assert!(matches!(
            build_counterexample(&literal).unwrap_err(),
            ConstructionError::PredicateFailureExhausted { .. }
        ));
    }

    #[test]
    fn coplanar_apex_surfaces_immediately() {
        let params = CounterexampleParams { apex: [0.3, 0.3, 0.0], ..Default::default() };
        assert!(matches!(
            build_counterexample(&params).unwrap_err(),
            ConstructionError::CoplanarApex { .. }
        ));
    }

    #[test]
    fn params_accept_partial_json() {
        let p: CounterexampleParams = serde_json::from_str(r#"{"flex_magnitude": 2.5}"#).unwrap();
        assert_eq!(p.flex_magnitude, 2.5);
        assert_eq!(p.tetrahedron, CounterexampleParams::default().tetrahedron);
        assert!(serde_json::from_str::<CounterexampleParams>(r#"{"bogus": 1}"#).is_err());
    }
}
