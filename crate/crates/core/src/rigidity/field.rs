use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::mesh::{MeshError, Vec3};

/// One velocity vector per mesh vertex, interpolated linearly on faces.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexField(pub Vec<Vec3>);

#[derive(Serialize, Deserialize)]
struct FieldFile {
    field: Vec<[f64; 3]>,
}

impl VertexField {
    pub fn zeros(n: usize) -> Self {
        Self(vec![Vec3::zeros(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Flattened `[x0, y0, z0, x1, ...]` coordinates.
    pub fn to_dvector(&self) -> DVector<f64> {
        DVector::from_iterator(self.0.len() * 3, self.0.iter().flat_map(|v| [v.x, v.y, v.z]))
    }

    pub fn from_slice(flat: &[f64]) -> Self {
        assert_eq!(flat.len() % 3, 0);
        Self(
            flat.chunks_exact(3)
                .map(|c| Vec3::new(c[0], c[1], c[2]))
                .collect(),
        )
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.dot(b)).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Largest per-vertex vector length.
    pub fn max_norm(&self) -> f64 {
        self.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.iter().map(|v| v * s).collect())
    }

    pub fn to_json(&self) -> String {
        let file = FieldFile {
            field: self.0.iter().map(|v| [v.x, v.y, v.z]).collect(),
        };
        serde_json::to_string_pretty(&file).expect("field serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, MeshError> {
        let file: FieldFile = serde_json::from_str(text).map_err(|e| MeshError::Parse {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        Ok(Self(file.field.iter().map(|v| Vec3::new(v[0], v[1], v[2])).collect()))
    }
}

impl std::ops::Index<usize> for VertexField {
    type Output = Vec3;
    fn index(&self, i: usize) -> &Vec3 {
        &self.0[i]
    }
}
