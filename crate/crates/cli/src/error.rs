use std::fmt;

use polyflex::{ConstructionError, MeshError, RigidityError, TraceError};

/// Error with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

pub const VALIDATION: u8 = 1;
pub const NUMERICAL: u8 = 2;
pub const ARGUMENTS: u8 = 3;

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn args(message: impl Into<String>) -> Self {
        Self::new(ARGUMENTS, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn named(kind: &str, err: &dyn fmt::Display) -> String {
    format!("{kind}: {err}")
}

fn mesh_kind(e: &MeshError) -> &'static str {
    match e {
        MeshError::Empty => "Empty",
        MeshError::IndexOutOfRange { .. } => "IndexOutOfRange",
        MeshError::NonManifoldEdge { .. } => "NonManifoldEdge",
        MeshError::InconsistentOrientation { .. } => "InconsistentOrientation",
        MeshError::DegenerateFace { .. } => "DegenerateFace",
        MeshError::LowValence { .. } => "LowValence",
        MeshError::InvalidBarycentric { .. } => "InvalidBarycentric",
        MeshError::NotRealizable => "NotRealizable",
        MeshError::Parse { .. } => "ParseError",
        MeshError::UnsupportedFace { .. } => "UnsupportedFace",
        MeshError::Io(_) => "Io",
    }
}

impl From<MeshError> for CliError {
    fn from(e: MeshError) -> Self {
        Self::new(VALIDATION, named(mesh_kind(&e), &e))
    }
}

impl From<RigidityError> for CliError {
    fn from(e: RigidityError) -> Self {
        let (code, kind) = match &e {
            RigidityError::Mesh(inner) => return inner.clone().into(),
            RigidityError::DegenerateVertexSet => (NUMERICAL, "DegenerateVertexSet"),
            RigidityError::RankGapAmbiguous { .. } => (NUMERICAL, "RankGapAmbiguous"),
            RigidityError::ExtensionInconsistent { .. } => (NUMERICAL, "ExtensionInconsistent"),
            RigidityError::UnderdeterminedExtension { .. } => (NUMERICAL, "UnderdeterminedExtension"),
            RigidityError::FieldLength { .. } => (VALIDATION, "FieldLength"),
            RigidityError::NothingKnown => (VALIDATION, "NothingKnown"),
        };
        Self::new(code, named(kind, &e))
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        let (code, kind) = match &e {
            ConstructionError::Mesh(inner) => return inner.clone().into(),
            ConstructionError::Rigidity(inner) => return inner.clone().into(),
            ConstructionError::DegenerateTetrahedron => (VALIDATION, "DegenerateTetrahedron"),
            ConstructionError::CoplanarApex { .. } => (NUMERICAL, "CoplanarApex"),
            ConstructionError::MissingFace(_) => (VALIDATION, "MissingFace"),
            ConstructionError::InvalidAxis => (ARGUMENTS, "InvalidAxis"),
            ConstructionError::PredicateFailureExhausted { .. } => {
                (NUMERICAL, "PredicateFailureExhausted")
            }
            ConstructionError::InvalidParameter { .. } => (ARGUMENTS, "InvalidParameter"),
            ConstructionError::InvalidSubdivision(_) => (ARGUMENTS, "InvalidSubdivision"),
        };
        Self::new(code, named(kind, &e))
    }
}

impl From<TraceError> for CliError {
    fn from(e: TraceError) -> Self {
        let (code, kind) = match &e {
            TraceError::Mesh(inner) => return inner.clone().into(),
            TraceError::Rigidity(inner) => return inner.clone().into(),
            TraceError::NoFlexDirection => (NUMERICAL, "NoFlexDirection"),
            TraceError::NewtonDivergence { .. } => (NUMERICAL, "NewtonDivergence"),
            TraceError::GaugeConflict { .. } => (NUMERICAL, "GaugeConflict"),
            TraceError::InvalidConfig(_) => (ARGUMENTS, "InvalidConfig"),
        };
        Self::new(code, named(kind, &e))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::new(VALIDATION, named("Io", &e))
    }
}
