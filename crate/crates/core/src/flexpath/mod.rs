//! Numerical continuation of a flex.
//!
//! Starting from a mesh with at least one nontrivial infinitesimal flex,
//! [`trace_flex`] walks along the set of vertex positions that keep every
//! edge at its initial length. Each step predicts along a unit flex and
//! corrects with Gauss-Newton on the squared-length constraints, with six
//! coordinates pinned to remove rigid motions. Total mean curvature and
//! oriented volume are sampled at every accepted frame.

mod gauge;
mod report;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{pinv_solve, FullSvd};
use crate::mesh::{Mesh, MeshError, Vec3};
use crate::rigidity::{flex_space, rigidity_matrix, RigidityError};
use crate::DEFAULT_RANK_TOL;

pub use gauge::Gauge;
pub use report::{resample_invariants, TraceReport, TraceRow};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TraceConfig {
    pub steps: usize,
    /// Predictor step as a fraction of the mesh diameter.
    pub step_size: f64,
    /// Corrector stops once every `|p_i - p_j|^2 - L^2` is below
    /// `newton_tol * diameter^2`.
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    /// Largest accepted relative edge-length drift.
    pub drift_tol: f64,
    pub rank_tol: f64,
    /// Step halvings allowed before giving up on a step.
    pub max_halvings: usize,
    /// Pinned vertices `[v0, v1, v2]`; defaults to the first face.
    pub gauge: Option<[usize; 3]>,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            steps: 200,
            step_size: 0.01,
            newton_tol: 1e-12,
            max_newton_iters: 25,
            drift_tol: 1e-10,
            rank_tol: DEFAULT_RANK_TOL,
            max_halvings: 8,
            gauge: None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraceError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Rigidity(#[from] RigidityError),
    #[error("mesh has no nontrivial infinitesimal flex")]
    NoFlexDirection,
    #[error("corrector failed at step {step} after {halvings} step halvings")]
    NewtonDivergence { step: usize, halvings: usize },
    #[error("pinned vertices {pins:?} do not leave the flex free")]
    GaugeConflict { pins: [usize; 3] },
    #[error("invalid trace configuration: {0}")]
    InvalidConfig(String),
}

/// Accepted frames and the sampled invariants.
#[derive(Clone, Debug)]
pub struct Trace {
    pub frames: Vec<Mesh>,
    pub report: TraceReport,
    /// Gauge used for the trace, after any automatic repin.
    pub gauge: [usize; 3],
}

fn flatten(points: &[Vec3]) -> DVector<f64> {
    DVector::from_iterator(points.len() * 3, points.iter().flat_map(|p| [p.x, p.y, p.z]))
}

fn unflatten(x: &DVector<f64>) -> Vec<Vec3> {
    x.as_slice()
        .chunks_exact(3)
        .map(|c| Vec3::new(c[0], c[1], c[2]))
        .collect()
}

/// Squared-length residuals `|p_i - p_j|^2 - L^2` in edge order.
fn length_residuals(mesh: &Mesh, x: &DVector<f64>, rest: &[f64]) -> DVector<f64> {
    DVector::from_iterator(
        rest.len(),
        mesh.edges().iter().zip(rest).map(|(e, l2)| {
            let d = x.fixed_rows::<3>(3 * e.a) - x.fixed_rows::<3>(3 * e.b);
            d.norm_squared() - l2
        }),
    )
}

fn max_relative_drift(mesh: &Mesh, rest: &[f64]) -> f64 {
    (0..mesh.edge_count())
        .map(|i| (mesh.edge_length(i) - rest[i].sqrt()).abs() / rest[i].sqrt())
        .fold(0.0, f64::max)
}

struct Tracer<'a> {
    base: &'a Mesh,
    config: &'a TraceConfig,
    rest: Vec<f64>,
    diameter: f64,
    gauge: Gauge,
}

impl Tracer<'_> {
    /// Unit tangent of the constraint set at `mesh` with the gauge applied.
    fn tangent(
        &self,
        mesh: &Mesh,
        previous: Option<&DVector<f64>>,
        flex_dim: usize,
    ) -> Result<DVector<f64>, TraceError> {
        let jac = self.gauge.stack(&rigidity_matrix(mesh));
        let svd = FullSvd::new(&jac);
        let kernel = svd.null_space(self.config.rank_tol);
        if kernel.ncols() == 0 || kernel.ncols() < flex_dim {
            return Err(TraceError::GaugeConflict { pins: self.gauge.pins() });
        }
        let t = match previous {
            Some(prev) => {
                let coeffs = kernel.transpose() * prev;
                let t = &kernel * coeffs;
                if t.norm() < 1e-8 {
                    kernel.column(0).into_owned()
                } else {
                    t
                }
            }
            None => {
                let mut t = kernel.column(0).into_owned();
                if t[t.iamax()] < 0.0 {
                    t.neg_mut();
                }
                t
            }
        };
        let mut t = t.normalize();
        if let Some(prev) = previous {
            if t.dot(prev) < 0.0 {
                t.neg_mut();
            }
        }
        Ok(t)
    }

    /// Gauss-Newton from `x` onto the constraint set; returns the corrected
    /// positions and the iteration count.
    fn correct(&self, mut x: DVector<f64>) -> Option<(DVector<f64>, usize)> {
        let len_tol = self.config.newton_tol * self.diameter * self.diameter;
        let gauge_tol = self.config.newton_tol * self.diameter;
        let mut last = f64::INFINITY;
        for iter in 0..=self.config.max_newton_iters {
            let g = length_residuals(self.base, &x, &self.rest);
            let gauge_res = self.gauge.residual(&x);
            let err = g.amax();
            if !err.is_finite() {
                return None;
            }
            if err <= len_tol && gauge_res.amax() <= gauge_tol {
                return Some((x, iter));
            }
            if iter == self.config.max_newton_iters || (iter > 2 && err > 10.0 * last) {
                return None;
            }
            last = err;
            let mesh = self.base.with_positions(unflatten(&x)).ok()?;
            let jac = self.gauge.stack(&(rigidity_matrix(&mesh) * 2.0));
            let mut rhs = DVector::zeros(g.len() + gauge_res.len());
            rhs.rows_mut(0, g.len()).copy_from(&(-&g));
            rhs.rows_mut(g.len(), gauge_res.len()).copy_from(&(-gauge_res));
            let (dx, _) = pinv_solve(&jac, &rhs, self.config.rank_tol);
            x += dx;
        }
        None
    }
}

/// Follows a flex of `mesh` for `config.steps` accepted steps.
pub fn trace_flex(mesh: &Mesh, config: &TraceConfig) -> Result<Trace, TraceError> {
    if config.steps == 0 || !(config.step_size > 0.0) || !(config.newton_tol > 0.0) {
        return Err(TraceError::InvalidConfig(
            "need steps >= 1, step_size > 0 and newton_tol > 0".into(),
        ));
    }
    let flex_dim = flex_space(mesh, config.rank_tol)?.dimension();
    if flex_dim == 0 {
        return Err(TraceError::NoFlexDirection);
    }

    let pins = match config.gauge {
        Some(p) => p,
        None => mesh.faces()[0],
    };
    let mut tracer = Tracer {
        base: mesh,
        config,
        rest: (0..mesh.edge_count())
            .map(|i| mesh.edge_length(i).powi(2))
            .collect(),
        diameter: mesh.diameter(),
        gauge: Gauge::new(mesh, pins)?,
    };

    let mut tangent = match tracer.tangent(mesh, None, flex_dim) {
        Ok(t) => t,
        Err(TraceError::GaugeConflict { .. }) => {
            // repin once: the first face that leaves the flex free, trying
            // faces disjoint from the old pins first
            let (disjoint, touching): (Vec<[usize; 3]>, Vec<[usize; 3]>) = mesh
                .faces()
                .iter()
                .partition(|f| f.iter().all(|v| !pins.contains(v)));
            let mut found = None;
            for face in disjoint.into_iter().chain(touching).filter(|f| *f != pins) {
                tracer.gauge = Gauge::new(mesh, face)?;
                if let Ok(t) = tracer.tangent(mesh, None, flex_dim) {
                    found = Some(t);
                    break;
                }
            }
            found.ok_or(TraceError::GaugeConflict { pins })?
        }
        Err(e) => return Err(e),
    };

    let mut frames = vec![mesh.clone()];
    let mut rows = vec![TraceRow {
        step: 0,
        t: 0.0,
        m: mesh.total_mean_curvature()?,
        v: mesh.oriented_volume(),
        max_edge_drift: 0.0,
        newton_iters: 0,
    }];
    let mut x = flatten(mesh.vertices());
    let mut arc = 0.0;

    for step in 1..=config.steps {
        if step > 1 {
            let current = frames.last().expect("nonempty");
            tangent = tracer.tangent(current, Some(&tangent), flex_dim)?;
        }
        let mut h = config.step_size * tracer.diameter;
        let mut accepted = None;
        for _ in 0..=config.max_halvings {
            let predicted = &x + &tangent * h;
            if let Some((corrected, iters)) = tracer.correct(predicted) {
                let moved = &corrected - &x;
                // the corrector must not undo the predictor: on a rigid
                // framework with a flat vertex it pulls the step back to ~0
                if moved.dot(&tangent) >= 0.5 * h {
                    if let Ok(frame) = mesh.with_positions(unflatten(&corrected)) {
                        let drift = max_relative_drift(&frame, &tracer.rest);
                        if drift <= config.drift_tol {
                            accepted = Some((corrected, frame, iters, drift, moved.norm()));
                            break;
                        }
                    }
                }
            }
            h *= 0.5;
        }
        let Some((corrected, frame, iters, drift, moved)) = accepted else {
            return Err(TraceError::NewtonDivergence {
                step,
                halvings: config.max_halvings,
            });
        };
        arc += moved / tracer.diameter;
        rows.push(TraceRow {
            step,
            t: arc,
            m: frame.total_mean_curvature()?,
            v: frame.oriented_volume(),
            max_edge_drift: drift,
            newton_iters: iters,
        });
        x = corrected;
        frames.push(frame);
    }

    Ok(Trace {
        frames,
        report: TraceReport {
            initial: mesh.summary()?,
            rows,
        },
        gauge: tracer.gauge.pins(),
    })
}
