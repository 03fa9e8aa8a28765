//! Mesh files: JSON (`{"vertices": [[x,y,z],...], "faces": [[i,j,k],...]}`,
//! zero-based) and triangle-only Wavefront OBJ.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Mesh, MeshError, Vec3};

#[derive(Serialize, Deserialize)]
struct MeshFile {
    vertices: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
}

impl From<std::io::Error> for MeshError {
    fn from(e: std::io::Error) -> Self {
        MeshError::Io(e.to_string())
    }
}

pub fn to_json(mesh: &Mesh) -> String {
    let file = MeshFile {
        vertices: mesh.vertices().iter().map(|p| [p.x, p.y, p.z]).collect(),
        faces: mesh.faces().to_vec(),
    };
    serde_json::to_string_pretty(&file).expect("mesh serializes")
}

pub fn from_json(text: &str) -> Result<Mesh, MeshError> {
    let file: MeshFile = serde_json::from_str(text).map_err(|e| MeshError::Parse {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let count = file.vertices.len();
    for (f, face) in file.faces.iter().enumerate() {
        for (k, &i) in face.iter().enumerate() {
            if i >= count {
                return Err(MeshError::Parse {
                    location: format!("faces[{f}][{k}]"),
                    message: format!("vertex index {i} out of range (have {count} vertices)"),
                });
            }
        }
    }
    Mesh::from_arrays(&file.vertices, &file.faces)
}

pub fn to_obj(mesh: &Mesh) -> String {
    let mut out = String::new();
    for p in mesh.vertices() {
        writeln!(out, "v {} {} {}", p.x, p.y, p.z).unwrap();
    }
    for f in mesh.faces() {
        writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1).unwrap();
    }
    out
}

pub fn from_obj(text: &str) -> Result<Mesh, MeshError> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let parse_err = |message: String| MeshError::Parse {
            location: format!("line {line}"),
            message,
        };
        let mut tokens = raw.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let coords: Vec<f64> = tokens
                    .take(3)
                    .map(|t| t.parse::<f64>().map_err(|e| parse_err(e.to_string())))
                    .collect::<Result<_, _>>()?;
                if coords.len() != 3 {
                    return Err(parse_err("vertex needs three coordinates".into()));
                }
                vertices.push(Vec3::new(coords[0], coords[1], coords[2]));
            }
            Some("f") => {
                let refs: Vec<&str> = tokens.collect();
                if refs.len() != 3 {
                    return Err(MeshError::UnsupportedFace { line });
                }
                let mut face = [0usize; 3];
                for (slot, r) in face.iter_mut().zip(&refs) {
                    let head = r.split('/').next().unwrap_or("");
                    let idx: i64 = head.parse().map_err(|_| parse_err(format!("bad index {r:?}")))?;
                    let resolved = if idx > 0 {
                        idx - 1
                    } else {
                        vertices.len() as i64 + idx
                    };
                    if idx == 0 || resolved < 0 || resolved as usize >= vertices.len() {
                        return Err(parse_err(format!("vertex index {idx} out of range")));
                    }
                    *slot = resolved as usize;
                }
                faces.push(face);
            }
            _ => {}
        }
    }
    Mesh::new(vertices, faces)
}

/// Loads `.obj` files as OBJ and everything else as JSON.
pub fn load_mesh(path: impl AsRef<Path>) -> Result<Mesh, MeshError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    if is_obj(path) {
        from_obj(&text)
    } else {
        from_json(&text)
    }
}

/// Writes OBJ for `.obj` paths and JSON otherwise.
pub fn save_mesh(mesh: &Mesh, path: impl AsRef<Path>) -> Result<(), MeshError> {
    let path = path.as_ref();
    let text = if is_obj(path) { to_obj(mesh) } else { to_json(mesh) };
    fs::write(path, text)?;
    Ok(())
}

fn is_obj(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("obj"))
}
