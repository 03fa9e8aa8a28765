use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn polyflex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyflex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

const TETRA: &str = r#"{"vertices": [[0.5, 0.28867513459481287, 0.816496580927726], [0, 0, 0], [1, 0, 0], [0.5, 0.8660254037844386, 0]],
"faces": [[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]}"#;

/// T1 over a regular base: centroid V of ABC joined to A, B, C.
const T1: &str = r#"{"vertices": [[0, 0, 0], [1, 0, 0], [0.5, 0.8660254037844386, 0], [0.5, 0.28867513459481287, 0.816496580927726], [0.5, 0.28867513459481287, 0]],
"faces": [[0, 4, 1], [1, 4, 2], [2, 4, 0], [0, 1, 3], [1, 2, 3], [2, 0, 3]]}"#;

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn analyze_regular_tetrahedron() {
    let dir = TempDir::new().unwrap();
    let mesh = write(&dir, "tetra.json", TETRA);
    let report = json(&polyflex(&["analyze", &mesh]));
    let m = 3.0 * (PI - (1.0f64 / 3.0).acos());
    assert_eq!(report["flex_dimension"], 0);
    assert_eq!(report["euler_characteristic"], 2);
    assert!((report["total_mean_curvature"].as_f64().unwrap() - m).abs() < 1e-12);
    assert!((report["total_mean_curvature"].as_f64().unwrap() - 5.731899).abs() < 1e-6);
    let v = report["oriented_volume"].as_f64().unwrap();
    assert!((v - 2f64.sqrt() / 12.0).abs() < 1e-15 && (v - 0.117851).abs() < 1e-6);
    assert_eq!(report["flux"].as_array().unwrap().len(), 0);
    for p in report["predicates"].as_array().unwrap() {
        assert_eq!(p["star_coplanar"], false);
        assert_eq!(p["three_edges_coplanar"], false);
    }
}

#[test]
fn analyze_t1_flux_is_a_third_of_the_base() {
    let dir = TempDir::new().unwrap();
    let mesh = write(&dir, "t1.json", T1);
    let out = path(&dir, "report.json");
    let run = polyflex(&["analyze", &mesh, "--out", &out]);
    assert_eq!(code(&run), 0, "{}", stderr(&run));
    assert!(run.stdout.is_empty());
    let report: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["flex_dimension"], 1);
    let area = 3f64.sqrt() / 4.0;
    let flux = report["flux"][0].as_f64().unwrap();
    // ABCD moves rigidly and V is the centroid of ABC, so the rigid part
    // at V is the mean of the fields at A, B, C; the rest is normal.
    let w: Vec<Vec<f64>> = report["flex_basis"][0]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect())
        .collect();
    let normal_offset = w[4][2] - (w[0][2] + w[1][2] + w[2][2]) / 3.0;
    let tangential = (0..2).map(|k| (w[4][k] - (w[0][k] + w[1][k] + w[2][k]) / 3.0).abs()).fold(0.0, f64::max);
    assert!(tangential < 1e-10 && normal_offset.abs() > 1e-3);
    assert!((flux.abs() / normal_offset.abs() - area / 3.0).abs() < 1e-12, "{flux}");
    assert_eq!(report["predicates"][4]["star_coplanar"], true);
}

#[test]
fn analyze_rejects_malformed_files() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\"vertices\": [[0, 0");
    let run = polyflex(&["analyze", &bad]);
    assert_eq!(code(&run), 1);
    assert!(stderr(&run).contains("ParseError"));
    let open = write(&dir, "open.json", r#"{"vertices": [[0,0,0],[1,0,0],[0,1,0]], "faces": [[0,1,2]]}"#);
    assert_eq!(code(&polyflex(&["analyze", &open])), 1);
    assert_eq!(code(&polyflex(&["analyze", &path(&dir, "missing.json")])), 1);
}

#[test]
fn config_overrides_flags() {
    let dir = TempDir::new().unwrap();
    let mesh = write(&dir, "t1.json", T1);
    let config = write(&dir, "c.json", r#"{"tol_coplanar": 1e-30}"#);
    let loose = json(&polyflex(&["analyze", &mesh, "--tol-coplanar", "2"]));
    assert_eq!(loose["predicates"][3]["three_edges_coplanar"], true);
    let strict = json(&polyflex(&["analyze", &mesh, "--tol-coplanar", "2", "--config", &config]));
    assert_eq!(strict["predicates"][3]["three_edges_coplanar"], false);
    let unknown = write(&dir, "u.json", r#"{"tol_typo": 1}"#);
    assert_eq!(code(&polyflex(&["analyze", &mesh, "--config", &unknown])), 3);
    let broken = write(&dir, "b.json", "[1,");
    assert_eq!(code(&polyflex(&["analyze", &mesh, "--config", &broken])), 3);
}

#[test]
fn counterexample_defaults_and_output_directory() {
    let report = json(&polyflex(&["counterexample"]));
    let flux = report["flux"].as_f64().unwrap();
    assert!(flux.abs() > 1e-3);
    assert!((flux - report["expected_flux"].as_f64().unwrap()).abs() < 1e-9);
    assert!(report["flex_dimension"].as_u64().unwrap() >= 1);
    assert_eq!(report["satisfies_predicates"], true);
    let table = report["predicates"].as_array().unwrap();
    assert_eq!(table.len(), report["vertices"].as_u64().unwrap() as usize);
    assert_eq!(table[0]["label"], "A");

    let dir = TempDir::new().unwrap();
    let out = path(&dir, "p");
    let run = polyflex(&["counterexample", "--out", &out]);
    assert_eq!(code(&run), 0);
    for name in ["mesh.json", "field.json", "report.json"] {
        assert!(Path::new(&out).join(name).is_file(), "{name}");
    }
    assert_eq!(fs::read(Path::new(&out).join("report.json")).unwrap(), run.stdout);
    let analyzed = json(&polyflex(&["analyze", Path::new(&out).join("mesh.json").to_str().unwrap()]));
    assert_eq!(analyzed["vertices"], report["vertices"]);
}

#[test]
fn counterexample_apex_in_base_plane_is_numerical_failure() {
    let dir = TempDir::new().unwrap();
    let config = write(&dir, "c.json", r#"{"apex": [0.2, 0.45, 0.0]}"#);
    let run = polyflex(&["counterexample", "--config", &config]);
    assert_eq!(code(&run), 2);
    assert!(stderr(&run).contains("CoplanarApex"));
    assert!(run.stdout.is_empty());
}

#[test]
fn bricard_trace_keeps_invariants() {
    let dir = TempDir::new().unwrap();
    let mesh = path(&dir, "b.json");
    let summary = json(&polyflex(&["bricard", "--out", &mesh]));
    assert_eq!(summary["flex_dimension"], 1);
    let frames = path(&dir, "frames");
    let run = polyflex(&["trace", &mesh, "--steps", "40", "--obj", &frames]);
    assert_eq!(code(&run), 0, "{}", stderr(&run));
    let text = String::from_utf8(run.stdout).unwrap();
    assert!(text.starts_with("step,t,M,V,max_edge_drift,newton_iters\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 41);
    let (m0, v0) = (rows[0][2], rows[0][3]);
    for row in &rows {
        assert!((row[2] - m0).abs() < 1e-8 && (row[3] - v0).abs() < 1e-8);
        assert!(row[4] <= 1e-10);
    }
    assert!(Path::new(&frames).join("frame_0040.obj").is_file());
    assert!(!Path::new(&frames).join("frame_0041.obj").exists());
}

#[test]
fn trace_failures_are_numerical() {
    let dir = TempDir::new().unwrap();
    let rigid = write(&dir, "tetra.json", TETRA);
    let run = polyflex(&["trace", &rigid]);
    assert_eq!(code(&run), 2);
    assert!(stderr(&run).contains("NoFlexDirection"));

    let mesh = path(&dir, "b.json");
    assert_eq!(code(&polyflex(&["bricard", "--out", &mesh])), 0);
    let run = polyflex(&["trace", &mesh, "--step-size", "5", "--steps", "3"]);
    assert_eq!(code(&run), 2);
    assert!(stderr(&run).contains("NewtonDivergence"));
    assert_eq!(code(&polyflex(&["trace", &mesh, "--step-size", "-1"])), 3);
}

#[test]
fn deltak_grid_and_bad_parameter() {
    let run = polyflex(&["deltak", "--range", "0.7:0.1:2.0"]);
    assert_eq!(code(&run), 0);
    let text = String::from_utf8(run.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "l,M_mesh,M_closed,phi,psi,abs_diff,phi_printed");
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 14);
    assert!((rows[13][0] - 2.0).abs() < 1e-12);

    let one = csv_rows(&String::from_utf8(polyflex(&["deltak", "--l", "1"]).stdout).unwrap());
    let expected = 3.0 * (PI - (1.0f64 / 3.0).acos());
    assert!((one[0][1] - expected).abs() < 1e-13 && (one[0][2] - expected).abs() < 1e-13);

    let run = polyflex(&["deltak", "--l", "1,0.5"]);
    assert_eq!(code(&run), 3);
    assert!(stderr(&run).contains("InvalidParameter"));
    assert_eq!(code(&polyflex(&["deltak", "--range", "2:-0.1:1"])), 3);
    assert_eq!(code(&polyflex(&["deltak"])), 3);
}

#[test]
fn bricard_formats_and_degenerate_seed() {
    let plain = polyflex(&["bricard"]);
    assert_eq!(code(&plain), 0);
    let mesh: Value = serde_json::from_slice(&plain.stdout).unwrap();
    assert_eq!(mesh["vertices"].as_array().unwrap().len(), 6);

    let dir = TempDir::new().unwrap();
    let obj = path(&dir, "b.obj");
    assert_eq!(code(&polyflex(&["bricard", "--out", &obj])), 0);
    assert!(fs::read_to_string(&obj).unwrap().lines().any(|l| l.starts_with("f ")));
    let forced = path(&dir, "b.mesh");
    assert_eq!(code(&polyflex(&["bricard", "--out", &forced, "--obj"])), 0);
    assert!(fs::read_to_string(&forced).unwrap().lines().any(|l| l.starts_with("v ")));
    let as_json = path(&dir, "c.obj");
    assert_eq!(code(&polyflex(&["bricard", "--out", &as_json, "--json"])), 0);
    assert!(serde_json::from_str::<Value>(&fs::read_to_string(&as_json).unwrap()).is_ok());
    let report = json(&polyflex(&["analyze", &obj]));
    assert_eq!(report["flex_dimension"], 1);

    let run = polyflex(&["bricard", "--v", "0,0,1"]);
    assert_eq!(code(&run), 1);
    assert!(stderr(&run).contains("DegenerateFace"));
    assert_eq!(code(&polyflex(&["bricard", "--a", "1,2"])), 3);
    assert_eq!(code(&polyflex(&["bricard", "--json", "--obj"])), 3);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let mesh = path(&dir, "b.json");
    assert_eq!(code(&polyflex(&["bricard", "--out", &mesh])), 0);
    for args in [
        vec!["counterexample"],
        vec!["analyze", &mesh],
        vec!["trace", &mesh, "--steps", "10"],
        vec!["deltak", "--range", "0.7:0.1:2.0"],
        vec!["bricard"],
    ] {
        let (a, b) = (polyflex(&args), polyflex(&args));
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn help_and_unknown_arguments() {
    assert_eq!(code(&polyflex(&["--help"])), 0);
    assert_eq!(code(&polyflex(&["--version"])), 0);
    assert_eq!(code(&polyflex(&["frobnicate"])), 3);
    assert_eq!(code(&polyflex(&[])), 3);
}
