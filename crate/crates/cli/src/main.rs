//! `polyflex` command-line front end.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use polyflex::{DEFAULT_COPLANAR_TOL, DEFAULT_RANK_TOL};

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "polyflex", version, about = "Rigidity workbench for triangulated polyhedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Metrics, flex space, flux and vertex predicates of a mesh file.
    Analyze(AnalyzeArgs),
    /// Writes a Bricard octahedron of the first type.
    Bricard(BricardArgs),
    /// Builds the glued polyhedron carrying a flex with nonzero flux.
    Counterexample(CounterexampleArgs),
    /// Follows a flex of a mesh and samples its invariants.
    Trace(TraceArgs),
    /// Tabulates the closed-form curvature of the tetrahedral family.
    Deltak(DeltaKArgs),
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Mesh file, `.obj` or JSON.
    pub mesh: PathBuf,
    /// Report path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Relative singular value threshold for the rank.
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    pub tol_rank: f64,
    /// Coplanarity tolerance as a fraction of the mesh diameter.
    #[arg(long, default_value_t = DEFAULT_COPLANAR_TOL)]
    pub tol_coplanar: f64,
    /// JSON object overriding `tol_rank` and `tol_coplanar`.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BricardArgs {
    /// Vertex A as `x,y,z`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub a: Option<[f64; 3]>,
    /// Vertex B as `x,y,z`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub b: Option<[f64; 3]>,
    /// Pole V as `x,y,z`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub v: Option<[f64; 3]>,
    /// Mesh path; the mesh goes to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write JSON regardless of the extension.
    #[arg(long, conflicts_with = "obj")]
    pub json: bool,
    /// Write OBJ regardless of the extension.
    #[arg(long)]
    pub obj: bool,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    pub tol_rank: f64,
    /// JSON seed object with keys `a`, `b`, `v`.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CounterexampleArgs {
    /// Directory receiving the mesh, the field and the report.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the mesh as OBJ instead of JSON.
    #[arg(long)]
    pub obj: bool,
    /// Coplanarity tolerance as a fraction of the mesh diameter.
    #[arg(long, default_value_t = DEFAULT_COPLANAR_TOL)]
    pub tol_coplanar: f64,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    pub tol_rank: f64,
    /// JSON construction parameters; missing keys keep their defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    /// Mesh file, `.obj` or JSON.
    pub mesh: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    /// Predictor step as a fraction of the mesh diameter.
    #[arg(long, default_value_t = 0.01)]
    pub step_size: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol_newton: f64,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    pub tol_rank: f64,
    /// CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory receiving one OBJ file per accepted frame.
    #[arg(long)]
    pub obj: Option<PathBuf>,
    /// JSON trace configuration; missing keys keep the flag values.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DeltaKArgs {
    /// Comma-separated parameter values.
    #[arg(long, value_delimiter = ',', conflicts_with = "range")]
    pub l: Vec<f64>,
    /// Inclusive grid `start:step:stop`.
    #[arg(long)]
    pub range: Option<String>,
    /// CSV path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON object with a key `l` holding the parameter list.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn parse_point(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z, got `{s}`"));
    }
    let mut p = [0.0; 3];
    for (slot, part) in p.iter_mut().zip(parts) {
        *slot = part.trim().parse().map_err(|e| format!("`{part}`: {e}"))?;
    }
    Ok(p)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze(args) => commands::analyze(&args),
        Command::Bricard(args) => commands::bricard(&args),
        Command::Counterexample(args) => commands::counterexample(&args),
        Command::Trace(args) => commands::trace(&args),
        Command::Deltak(args) => commands::deltak(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(error::ARGUMENTS),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
