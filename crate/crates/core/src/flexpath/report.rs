use std::fmt::Write as _;

use serde::Serialize;

use crate::mesh::{Mesh, MeshError, MetricSummary};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceRow {
    pub step: usize,
    /// Accumulated displacement norm divided by the initial diameter.
    pub t: f64,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "V")]
    pub v: f64,
    pub max_edge_drift: f64,
    pub newton_iters: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceReport {
    pub initial: MetricSummary,
    pub rows: Vec<TraceRow>,
}

impl TraceReport {
    pub fn max_m_deviation(&self) -> f64 {
        let m0 = self.initial.total_mean_curvature;
        self.rows.iter().map(|r| (r.m - m0).abs()).fold(0.0, f64::max)
    }

    pub fn max_v_deviation(&self) -> f64 {
        let v0 = self.initial.oriented_volume;
        self.rows.iter().map(|r| (r.v - v0).abs()).fold(0.0, f64::max)
    }

    pub fn max_drift(&self) -> f64 {
        self.rows.iter().map(|r| r.max_edge_drift).fold(0.0, f64::max)
    }

    /// `step,t,M,V,max_edge_drift,newton_iters`, floats with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,t,M,V,max_edge_drift,newton_iters\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                r.step, r.t, r.m, r.v, r.max_edge_drift, r.newton_iters
            )
            .unwrap();
        }
        out
    }
}

/// Recomputes `M`, `V`, arc length and drift for each frame directly from
/// the meshes. Newton iteration counts are not recoverable and are zero.
pub fn resample_invariants(frames: &[Mesh]) -> Result<TraceReport, MeshError> {
    let first = frames.first().ok_or(MeshError::Empty)?;
    let diameter = first.diameter();
    let rest: Vec<f64> = (0..first.edge_count()).map(|i| first.edge_length(i)).collect();
    let mut rows = Vec::with_capacity(frames.len());
    let mut arc = 0.0;
    for (step, frame) in frames.iter().enumerate() {
        if step > 0 {
            let prev = &frames[step - 1];
            let moved: f64 = frame
                .vertices()
                .iter()
                .zip(prev.vertices())
                .map(|(a, b)| (a - b).norm_squared())
                .sum::<f64>()
                .sqrt();
            arc += moved / diameter;
        }
        let drift = (0..frame.edge_count())
            .map(|i| (frame.edge_length(i) - rest[i]).abs() / rest[i])
            .fold(0.0, f64::max);
        rows.push(TraceRow {
            step,
            t: arc,
            m: frame.total_mean_curvature()?,
            v: frame.oriented_volume(),
            max_edge_drift: drift,
            newton_iters: 0,
        });
    }
    Ok(TraceReport {
        initial: first.summary()?,
        rows,
    })
}
