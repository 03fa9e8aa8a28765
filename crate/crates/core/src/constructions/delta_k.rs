use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::mesh::{Mesh, Vec3};

const A: usize = 0;
const B: usize = 1;
const C: usize = 2;
const D: usize = 3;

/// Tetrahedron with `|BC| = |CD| = |BD| = 1` and `|AB| = |AC| = |AD| = l`,
/// plus optional flat subdivision points.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeltaKParams {
    pub l: f64,
    /// Points on the open segment `BD`, as fractions from `B` towards `D`.
    pub bd_points: Vec<f64>,
    /// Interior points of triangle `ABD`, barycentric in `(A, B, D)`.
    pub abd_points: Vec<[f64; 3]>,
    /// Interior points of triangle `BCD`, barycentric in `(B, C, D)`.
    pub bcd_points: Vec<[f64; 3]>,
}

impl DeltaKParams {
    pub fn new(l: f64) -> Self {
        Self {
            l,
            ..Default::default()
        }
    }
}

fn check_l(l: f64) -> Result<(), ConstructionError> {
    if !(l > 1.0 / 3f64.sqrt()) || !l.is_finite() {
        return Err(ConstructionError::InvalidParameter { l });
    }
    Ok(())
}

/// Builds the member of the family for `params`.
///
/// Vertices `A, B, C, D` come first with `B = (0,0,0)`, `C = (1,0,0)`,
/// `D = (1/2, sqrt3/2, 0)` and `A` above the centroid of `BCD`. Points on
/// `BD` are inserted first (splitting both faces along the segment), then
/// the interior points of `ABD` and `BCD`, each splitting the sub-face that
/// contains it. All extra edges are flat or lie along `BD`.
pub fn delta_k_mesh(params: &DeltaKParams) -> Result<Mesh, ConstructionError> {
    let l = params.l;
    check_l(l)?;
    let s3 = 3f64.sqrt();
    let p = [
        Vec3::new(0.5, s3 / 6.0, (l * l - 1.0 / 3.0).sqrt()),
        Vec3::zeros(),
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.5, s3 / 2.0, 0.0),
    ];
    let mut mesh = Mesh::new(p.to_vec(), vec![[A, B, C], [A, C, D], [A, D, B], [B, D, C]])?;

    let mut ts = params.bd_points.clone();
    if let Some(&t) = ts.iter().find(|&&t| !(t > 0.0 && t < 1.0)) {
        return Err(ConstructionError::InvalidSubdivision(format!(
            "BD fraction {t} is not in (0, 1)"
        )));
    }
    ts.sort_by(f64::total_cmp);
    if ts.windows(2).any(|w| w[1] - w[0] < 1e-9) {
        return Err(ConstructionError::InvalidSubdivision("repeated BD point".into()));
    }
    let mut prev = B;
    for t in ts {
        let q = mesh.vertex_count();
        mesh = mesh.split_edge(prev, D, p[B] * (1.0 - t) + p[D] * t)?;
        prev = q;
    }

    for (corners, points) in [([A, B, D], &params.abd_points), ([B, C, D], &params.bcd_points)] {
        for w in points {
            let sum: f64 = w.iter().sum();
            if w.iter().any(|&x| !(x > 0.0)) || (sum - 1.0).abs() > 1e-12 {
                return Err(ConstructionError::InvalidSubdivision(format!(
                    "barycentric weights {w:?} are not strictly interior"
                )));
            }
            let point = p[corners[0]] * w[0] + p[corners[1]] * w[1] + p[corners[2]] * w[2];
            let face = containing_face(&mesh, point).ok_or_else(|| {
                ConstructionError::InvalidSubdivision(format!(
                    "point {point:?} is not strictly inside a face"
                ))
            })?;
            mesh = mesh.cone_face(face, point)?;
        }
    }
    Ok(mesh)
}

/// Face whose plane contains `point` and whose interior contains it with a
/// margin.
fn containing_face(mesh: &Mesh, point: Vec3) -> Option<usize> {
    let tol = 1e-12 * mesh.diameter();
    (0..mesh.face_count()).find(|&f| {
        let [a, b, c] = mesh.faces()[f];
        let (pa, pb, pc) = (mesh.vertices()[a], mesh.vertices()[b], mesh.vertices()[c]);
        let n = (pb - pa).cross(&(pc - pa));
        let area2 = n.norm_squared();
        if (point - pa).dot(&n).abs() > tol * n.norm() {
            return false;
        }
        let wa = (pb - point).cross(&(pc - point)).dot(&n) / area2;
        let wb = (pc - point).cross(&(pa - point)).dot(&n) / area2;
        let wc = 1.0 - wa - wb;
        wa > 1e-9 && wb > 1e-9 && wc > 1e-9
    })
}

/// Closed form of the total mean curvature of the family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeltaKClosedForm {
    pub l: f64,
    pub m: f64,
    /// Interior dihedral at a base edge, `arccos(1 / (sqrt3 sqrt(4l^2 - 1)))`.
    pub phi: f64,
    /// Interior dihedral at a lateral edge, `arccos((2l^2 - 1) / (4l^2 - 1))`.
    pub psi: f64,
    /// Base dihedral with the extra factor 2 in the denominator,
    /// `arccos(1 / (2 sqrt3 sqrt(4l^2 - 1)))`, which disagrees with the
    /// coordinates (it gives `arccos(1/6)` at `l = 1`). Reported only.
    pub phi_printed: f64,
    /// `m` evaluated with `phi_printed`.
    pub m_printed: f64,
}

pub fn delta_k_closed_form(l: f64) -> Result<DeltaKClosedForm, ConstructionError> {
    check_l(l)?;
    let root = (4.0 * l * l - 1.0).sqrt();
    let phi = (1.0 / (3f64.sqrt() * root)).acos();
    let psi = ((2.0 * l * l - 1.0) / (4.0 * l * l - 1.0)).acos();
    let phi_printed = (1.0 / (2.0 * 3f64.sqrt() * root)).acos();
    let m_of = |phi: f64| 1.5 * (PI - phi) + 1.5 * l * (PI - psi);
    Ok(DeltaKClosedForm {
        l,
        m: m_of(phi),
        phi,
        psi,
        phi_printed,
        m_printed: m_of(phi_printed),
    })
}

/// Central difference of the closed-form `M` in `l` with step `dl`.
pub fn closed_form_slope(l: f64, dl: f64) -> Result<f64, ConstructionError> {
    Ok((delta_k_closed_form(l + dl)?.m - delta_k_closed_form(l - dl)?.m) / (2.0 * dl))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_parameter_is_regular() {
        let m = delta_k_mesh(&DeltaKParams::new(1.0)).unwrap();
        for e in 0..m.edge_count() {
            assert!((m.edge_length(e) - 1.0).abs() < 1e-15);
        }
        assert!(m.oriented_volume() > 0.0);
        let cf = delta_k_closed_form(1.0).unwrap();
        let third = (1.0f64 / 3.0).acos();
        assert!((cf.phi - third).abs() < 1e-15);
        assert!((cf.psi - third).abs() < 1e-15);
        assert!((cf.phi_printed - (1.0f64 / 6.0).acos()).abs() < 1e-15);
        assert!((cf.m - 3.0 * (PI - third)).abs() < 1e-14);
    }

    #[test]
    fn dihedrals_match_closed_form() {
        for l in [0.7, 1.3, 4.0] {
            let m = delta_k_mesh(&DeltaKParams::new(l)).unwrap();
            let cf = delta_k_closed_form(l).unwrap();
            let bc = m.edge_index(B, C).unwrap();
            let ac = m.edge_index(A, C).unwrap();
            assert!((m.dihedral_angle(bc).unwrap() - cf.phi).abs() < 1e-12);
            assert!((m.dihedral_angle(ac).unwrap() - cf.psi).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_parameters() {
        for l in [0.5, 1.0 / 3f64.sqrt(), -2.0, f64::NAN] {
            assert!(matches!(
                delta_k_mesh(&DeltaKParams::new(l)).unwrap_err(),
                ConstructionError::InvalidParameter { .. }
            ));
        }
        let bad = DeltaKParams { l: 1.0, bd_points: vec![1.2], ..Default::default() };
        assert!(matches!(delta_k_mesh(&bad), Err(ConstructionError::InvalidSubdivision(_))));
        let bad = DeltaKParams { l: 1.0, abd_points: vec![[0.5, 0.5, 0.0]], ..Default::default() };
        assert!(matches!(delta_k_mesh(&bad), Err(ConstructionError::InvalidSubdivision(_))));
    }

    #[test]
    fn subdivided_member_keeps_curvature() {
        let params = DeltaKParams {
            l: 1.4,
            bd_points: vec![0.6, 0.25],
            abd_points: vec![[0.2, 0.5, 0.3], [0.6, 0.1, 0.3]],
            bcd_points: vec![[0.3, 0.3, 0.4]],
        };
        let m = delta_k_mesh(&params).unwrap();
        assert_eq!(m.vertex_count(), 9);
        assert_eq!(m.euler_characteristic(), 2);
        let base = delta_k_mesh(&DeltaKParams::new(1.4)).unwrap();
        let (a, b) = (m.total_mean_curvature().unwrap(), base.total_mean_curvature().unwrap());
        assert!((a - b).abs() <= 1e-12 * b);
    }
}
