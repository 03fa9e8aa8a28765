use std::fs;
use std::io::Write as _;
use std::path::Path;

use polyflex::mesh::io::{load_mesh, save_mesh, to_json, to_obj};
use polyflex::{
    bricard_type1, build_counterexample, delta_k_closed_form, delta_k_mesh, flex_space, flux,
    trace_flex, BricardSeed, CounterexampleParams, DeltaKParams, Mesh, TraceConfig,
};
use serde::{Deserialize, Serialize};

use crate::config::merge;
use crate::error::CliError;
use crate::{AnalyzeArgs, BricardArgs, CounterexampleArgs, DeltaKArgs, TraceArgs};

/// Writes `text` to `out`, or to stdout when no path is given.
fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct Predicates {
    vertex: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'static str>,
    star_coplanar: bool,
    three_edges_coplanar: bool,
}

fn predicates(mesh: &Mesh, tol_fraction: f64, labels: Option<&[&'static str]>) -> Vec<Predicates> {
    let tol = tol_fraction * mesh.diameter();
    (0..mesh.vertex_count())
        .map(|v| Predicates {
            vertex: v,
            label: labels.map(|l| l[v]),
            star_coplanar: mesh.vertex_star_coplanar(v, tol),
            three_edges_coplanar: mesh.three_incident_edges_coplanar(v, tol),
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalyzeOptions {
    tol_rank: f64,
    tol_coplanar: f64,
}

#[derive(Serialize)]
struct AnalyzeReport {
    vertices: usize,
    edges: usize,
    faces: usize,
    euler_characteristic: i64,
    total_mean_curvature: f64,
    oriented_volume: f64,
    rank: usize,
    rank_tolerance: f64,
    flex_dimension: usize,
    /// Flux of each orthonormal flex basis field.
    flux: Vec<f64>,
    /// Orthonormal basis of the nontrivial flexes, one vector per vertex.
    flex_basis: Vec<Vec<[f64; 3]>>,
    predicates: Vec<Predicates>,
}

pub fn analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let options = merge(
        AnalyzeOptions { tol_rank: args.tol_rank, tol_coplanar: args.tol_coplanar },
        args.config.as_deref(),
    )?;
    let mesh = load_mesh(&args.mesh)?;
    let summary = mesh.summary()?;
    let basis = flex_space(&mesh, options.tol_rank)?;
    let fluxes = basis
        .basis
        .iter()
        .map(|w| flux(&mesh, w))
        .collect::<Result<Vec<_>, _>>()?;
    let report = AnalyzeReport {
        vertices: mesh.vertex_count(),
        edges: mesh.edge_count(),
        faces: mesh.face_count(),
        euler_characteristic: summary.euler_characteristic,
        total_mean_curvature: summary.total_mean_curvature,
        oriented_volume: summary.oriented_volume,
        rank: basis.rank,
        rank_tolerance: basis.rank_tolerance,
        flex_dimension: basis.dimension(),
        flux: fluxes,
        flex_basis: basis
            .basis
            .iter()
            .map(|w| w.0.iter().map(|p| [p.x, p.y, p.z]).collect())
            .collect(),
        predicates: predicates(&mesh, options.tol_coplanar, None),
    };
    emit(args.out.as_deref(), &pretty(&report))
}

#[derive(Serialize)]
struct BricardSummary {
    path: String,
    vertices: usize,
    edges: usize,
    faces: usize,
    total_mean_curvature: f64,
    oriented_volume: f64,
    flex_dimension: usize,
}

pub fn bricard(args: &BricardArgs) -> Result<(), CliError> {
    let defaults = BricardSeed::default();
    let seed = merge(
        BricardSeed {
            a: args.a.unwrap_or(defaults.a),
            b: args.b.unwrap_or(defaults.b),
            v: args.v.unwrap_or(defaults.v),
        },
        args.config.as_deref(),
    )?;
    let mesh = bricard_type1(seed)?;
    let Some(path) = args.out.as_deref() else {
        let text = if args.obj { to_obj(&mesh) } else { to_json(&mesh) };
        return emit(None, &text);
    };
    if args.obj {
        fs::write(path, to_obj(&mesh))?;
    } else if args.json {
        fs::write(path, to_json(&mesh))?;
    } else {
        save_mesh(&mesh, path)?;
    }
    let summary = mesh.summary()?;
    let report = BricardSummary {
        path: path.display().to_string(),
        vertices: mesh.vertex_count(),
        edges: mesh.edge_count(),
        faces: mesh.face_count(),
        total_mean_curvature: summary.total_mean_curvature,
        oriented_volume: summary.oriented_volume,
        flex_dimension: flex_space(&mesh, args.tol_rank)?.dimension(),
    };
    emit(None, &pretty(&report))
}

#[derive(Serialize)]
struct CounterexampleReport {
    vertices: usize,
    edges: usize,
    faces: usize,
    flex_dimension: usize,
    flux: f64,
    /// Area of `ABC` times the field length at `V`, over 3.
    expected_flux: f64,
    flux_t1: f64,
    flux_t2: f64,
    area_abc: f64,
    axes: Vec<[f64; 3]>,
    satisfies_predicates: bool,
    predicates: Vec<Predicates>,
}

pub fn counterexample(args: &CounterexampleArgs) -> Result<(), CliError> {
    let base = CounterexampleParams { coplanar_tol: args.tol_coplanar, ..Default::default() };
    let params = merge(base, args.config.as_deref())?;
    let c = build_counterexample(&params)?;
    let labels = c.labels();
    let predicates = predicates(&c.mesh, params.coplanar_tol, Some(&labels));
    let report = CounterexampleReport {
        vertices: c.mesh.vertex_count(),
        edges: c.mesh.edge_count(),
        faces: c.mesh.face_count(),
        flex_dimension: flex_space(&c.mesh, args.tol_rank)?.dimension(),
        flux: flux(&c.mesh, &c.field)?,
        expected_flux: c.area_abc * params.flex_magnitude / 3.0,
        flux_t1: flux(&c.t1.0, &c.t1.1)?,
        flux_t2: flux(&c.t2.0, &c.t2.1)?,
        area_abc: c.area_abc,
        axes: c.axes.iter().map(|a| [a.x, a.y, a.z]).collect(),
        satisfies_predicates: predicates.iter().all(|p| !p.star_coplanar && !p.three_edges_coplanar),
        predicates,
    };
    let text = pretty(&report);
    if let Some(dir) = args.out.as_deref() {
        fs::create_dir_all(dir)?;
        if args.obj {
            fs::write(dir.join("mesh.obj"), to_obj(&c.mesh))?;
        } else {
            fs::write(dir.join("mesh.json"), to_json(&c.mesh))?;
        }
        fs::write(dir.join("field.json"), c.field.to_json())?;
        fs::write(dir.join("report.json"), &text)?;
    }
    emit(None, &text)
}

pub fn trace(args: &TraceArgs) -> Result<(), CliError> {
    let base = TraceConfig {
        steps: args.steps,
        step_size: args.step_size,
        newton_tol: args.tol_newton,
        rank_tol: args.tol_rank,
        ..Default::default()
    };
    let config = merge(base, args.config.as_deref())?;
    let mesh = load_mesh(&args.mesh)?;
    let trace = trace_flex(&mesh, &config)?;
    if let Some(dir) = args.obj.as_deref() {
        fs::create_dir_all(dir)?;
        for (k, frame) in trace.frames.iter().enumerate() {
            fs::write(dir.join(format!("frame_{k:04}.obj")), to_obj(frame))?;
        }
    }
    emit(args.out.as_deref(), &trace.report.to_csv())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaKOptions {
    l: Vec<f64>,
}

/// Expands `start:step:stop` into `start + i step` for every `i` whose
/// value does not pass `stop` by more than a rounding margin.
fn parse_range(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::args(format!("invalid range `{text}`: expected start:step:stop with step > 0"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [start, step, stop] = parts[..] else {
        return Err(bad());
    };
    let valid = step > 0.0 && start.is_finite() && stop.is_finite() && stop >= start;
    if !valid {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

pub fn deltak(args: &DeltaKArgs) -> Result<(), CliError> {
    let values = match &args.range {
        Some(text) => parse_range(text)?,
        None => args.l.clone(),
    };
    let values = merge(DeltaKOptions { l: values }, args.config.as_deref())?.l;
    if values.is_empty() {
        return Err(CliError::args("no parameter values: pass --l or --range"));
    }
    let mut csv = String::from("l,M_mesh,M_closed,phi,psi,abs_diff,phi_printed\n");
    for l in values {
        let closed = delta_k_closed_form(l)?;
        let m_mesh = delta_k_mesh(&DeltaKParams::new(l))?.total_mean_curvature()?;
        let row = [l, m_mesh, closed.m, closed.phi, closed.psi, (m_mesh - closed.m).abs(), closed.phi_printed];
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    emit(args.out.as_deref(), &csv)
}
