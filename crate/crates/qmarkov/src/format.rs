//! JSON file formats for models, states, and subspaces, plus the
//! machine-readable report types the CLI emits.
//!
//! Complex entries are `[re, im]` pairs. Serialization goes through
//! `serde_json`, whose float output is the shortest representation that
//! round-trips bit-exactly.

use serde::{Deserialize, Serialize};

use crate::channel::{Channel, DensityOperator};
use crate::error::QmcError;
use crate::mat::{c64, CMatrix, CVector};
use crate::spaces::Subspace;
use crate::tolerance::ToleranceConfig;

type ComplexEntry = [f64; 2];
type MatrixData = Vec<Vec<ComplexEntry>>;

fn matrix_to_data(m: &CMatrix) -> MatrixData {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn matrix_from_data(data: &MatrixData, rows: usize, cols: usize) -> Result<CMatrix, QmcError> {
    if data.len() != rows || data.iter().any(|row| row.len() != cols) {
        return Err(QmcError::Parse(format!(
            "expected a {rows}x{cols} matrix of [re, im] pairs"
        )));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        c64(data[i][j][0], data[i][j][1])
    }))
}

fn vector_from_data(data: &[ComplexEntry]) -> CVector {
    CVector::from_iterator(data.len(), data.iter().map(|e| c64(e[0], e[1])))
}

/// A channel on disk: its dimension and Kraus operators as row-major
/// matrices of `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub dimension: usize,
    pub kraus: Vec<MatrixData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl ModelFile {
    pub fn from_channel(channel: &Channel) -> Self {
        Self {
            dimension: channel.dim(),
            kraus: channel.kraus().iter().map(matrix_to_data).collect(),
            labels: None,
        }
    }

    /// Validate and build the channel; the Kraus family must be
    /// trace-preserving.
    pub fn to_channel(&self, tol: &ToleranceConfig) -> Result<Channel, QmcError> {
        if self.dimension == 0 {
            return Err(QmcError::InvalidModel("dimension must be positive".into()));
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.dimension {
                return Err(QmcError::InvalidModel(format!(
                    "{} labels for dimension {}",
                    labels.len(),
                    self.dimension
                )));
            }
        }
        let kraus = self
            .kraus
            .iter()
            .map(|data| matrix_from_data(data, self.dimension, self.dimension))
            .collect::<Result<Vec<_>, _>>()?;
        Channel::new(kraus, tol)
    }

    pub fn from_json(text: &str) -> Result<Self, QmcError> {
        serde_json::from_str(text).map_err(|e| QmcError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }
}

/// A state on disk: either a `pure` vector (normalized on load, with a flag
/// reporting whether renormalization moved it) or a full `density` matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pure: Option<Vec<ComplexEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<MatrixData>,
}

impl StateFile {
    pub fn from_density(rho: &DensityOperator) -> Self {
        Self {
            pure: None,
            density: Some(matrix_to_data(rho.matrix())),
        }
    }

    /// Build the state; returns the density operator and whether a pure
    /// vector needed renormalization beyond 1e-6.
    pub fn to_density(
        &self,
        expected_dim: usize,
        tol: &ToleranceConfig,
    ) -> Result<(DensityOperator, bool), QmcError> {
        match (&self.pure, &self.density) {
            (Some(pure), None) => {
                if pure.len() != expected_dim {
                    return Err(QmcError::dims(format!(
                        "state vector has length {}, expected {}",
                        pure.len(),
                        expected_dim
                    )));
                }
                let v = vector_from_data(pure);
                let renormalized = (v.norm() - 1.0).abs() > 1e-6;
                Ok((DensityOperator::pure(&v, tol)?, renormalized))
            }
            (None, Some(density)) => {
                let m = matrix_from_data(density, expected_dim, expected_dim)?;
                Ok((DensityOperator::new(m, tol)?, false))
            }
            _ => Err(QmcError::Parse(
                "a state file needs exactly one of `pure` or `density`".into(),
            )),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, QmcError> {
        serde_json::from_str(text).map_err(|e| QmcError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state serialization cannot fail")
    }
}

/// A subspace on disk: spanning vectors (not necessarily orthonormal; an
/// empty list is the zero subspace).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceFile {
    pub vectors: Vec<Vec<ComplexEntry>>,
}

impl SubspaceFile {
    pub fn from_subspace(s: &Subspace) -> Self {
        Self {
            vectors: (0..s.dim())
                .map(|k| {
                    s.basis()
                        .column(k)
                        .iter()
                        .map(|z| [z.re, z.im])
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_subspace(
        &self,
        ambient_dim: usize,
        tol: &ToleranceConfig,
    ) -> Result<Subspace, QmcError> {
        if self.vectors.is_empty() {
            return Ok(Subspace::zero(ambient_dim));
        }
        if let Some(bad) = self.vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(QmcError::dims(format!(
                "spanning vector has length {}, expected {}",
                bad.len(),
                ambient_dim
            )));
        }
        let mut m = CMatrix::zeros(ambient_dim, self.vectors.len());
        for (col, v) in self.vectors.iter().enumerate() {
            m.set_column(col, &vector_from_data(v));
        }
        Ok(Subspace::from_spanning(&m, tol))
    }

    pub fn from_json(text: &str) -> Result<Self, QmcError> {
        serde_json::from_str(text).map_err(|e| QmcError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("subspace serialization cannot fail")
    }
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// A subspace in a report: dimension plus an orthonormal basis rounded to 12
/// digits for stable, readable output.
#[derive(Debug, Clone, Serialize)]
pub struct SubspaceReport {
    pub dimension: usize,
    pub basis: Vec<Vec<ComplexEntry>>,
}

impl SubspaceReport {
    pub fn new(s: &Subspace) -> Self {
        Self {
            dimension: s.dim(),
            basis: (0..s.dim())
                .map(|k| {
                    s.basis()
                        .column(k)
                        .iter()
                        .map(|z| [round12(z.re), round12(z.im)])
                        .collect()
                })
                .collect(),
        }
    }
}

/// Machine-readable decomposition result.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub bscc_dimensions: Vec<usize>,
    pub bsccs: Vec<SubspaceReport>,
    pub transient_dimension: usize,
    pub transient: SubspaceReport,
    pub seed: u64,
    pub tolerance: ToleranceConfig,
}

/// Machine-readable probability result.
#[derive(Debug, Clone, Serialize)]
pub struct ProbabilityReport {
    pub kind: String,
    pub probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SubspaceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub effective_target_dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_value: Option<f64>,
    pub tolerance: ToleranceConfig,
}

/// Machine-readable yes/no result.
#[derive(Debug, Clone, Serialize)]
pub struct BooleanReport {
    pub result: bool,
    pub tolerance: ToleranceConfig,
}

/// Machine-readable subspace result.
#[derive(Debug, Clone, Serialize)]
pub struct SubspaceOnlyReport {
    pub subspace: SubspaceReport,
    pub tolerance: ToleranceConfig,
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}
