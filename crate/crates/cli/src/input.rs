//! JSON inputs: model files (or reports echoing one) and observable lists.

use std::fmt;
use std::path::Path;

use liouville_fock::fock::{identity_op, number_op, parity_op};
use liouville_fock::lindblad::{LindbladOp, QuadraticLindbladModel};
use liouville_fock::{HilbertOp, ModeSystem, Statistics, C64};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// A rejected input, always mapped to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

impl From<liouville_fock::Error> for InputError {
    fn from(e: liouville_fock::Error) -> Self {
        InputError(e.to_string())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LindbladOpFile {
    pub u: Vec<C64>,
    pub v: Vec<C64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub statistics: Statistics,
    pub n_modes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(rename = "H_hop")]
    pub h_hop: Vec<Vec<C64>>,
    #[serde(rename = "H_pair", default, skip_serializing_if = "Option::is_none")]
    pub h_pair: Option<Vec<Vec<C64>>>,
    pub lindblad_ops: Vec<LindbladOpFile>,
}

impl ModelFile {
    pub fn system(&self) -> Result<ModeSystem, InputError> {
        if self.statistics == Statistics::Fermionic && self.cutoff.is_some() {
            return Err(InputError(
                "cutoff: only bosonic models take a cutoff".into(),
            ));
        }
        Ok(ModeSystem::new(self.statistics, self.n_modes, self.cutoff)?)
    }

    pub fn to_model(&self) -> Result<QuadraticLindbladModel, InputError> {
        let ops = self
            .lindblad_ops
            .iter()
            .map(|op| LindbladOp::new(op.u.clone(), op.v.clone()))
            .collect();
        Ok(QuadraticLindbladModel::new(
            self.system()?,
            self.h_hop.clone(),
            self.h_pair.clone(),
            ops,
        )?)
    }
}

/// An observable requested in a `ness` run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObservableSpec {
    /// `a_j^dag a_j`, 1-based mode.
    Number {
        name: String,
        mode: usize,
    },
    /// Total parity `(-1)^N`.
    Parity {
        name: String,
    },
    Identity {
        name: String,
    },
    /// `sum_jk m_jk a_j^dag a_k`.
    Bilinear {
        name: String,
        matrix: Vec<Vec<C64>>,
    },
    /// Explicit Hilbert-space matrix.
    Matrix {
        name: String,
        matrix: Vec<Vec<C64>>,
    },
}

impl ObservableSpec {
    pub fn name(&self) -> &str {
        match self {
            Self::Number { name, .. }
            | Self::Parity { name }
            | Self::Identity { name }
            | Self::Bilinear { name, .. }
            | Self::Matrix { name, .. } => name,
        }
    }

    pub fn build(&self, sys: &ModeSystem) -> Result<HilbertOp, InputError> {
        let err = |msg: String| InputError(format!("observable {:?}: {msg}", self.name()));
        match self {
            Self::Number { mode, .. } => number_op(sys, *mode).map_err(|e| err(e.to_string())),
            Self::Parity { .. } => Ok(parity_op(sys)),
            Self::Identity { .. } => Ok(identity_op(sys)),
            Self::Bilinear { matrix, .. } => {
                let n = sys.n_modes();
                if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
                    return Err(err(format!("matrix must be {n}x{n}")));
                }
                let lower: Vec<HilbertOp> = (1..=n)
                    .map(|j| liouville_fock::fock::annihilation_op(sys, j))
                    .collect::<Result<_, _>>()?;
                let mut out = HilbertOp::zeros(sys.dim());
                for (j, row) in matrix.iter().enumerate() {
                    for (k, &m) in row.iter().enumerate() {
                        if m != C64::new(0.0, 0.0) {
                            out = &out + &(&lower[j].adjoint() * &lower[k]).scale(m);
                        }
                    }
                }
                Ok(out)
            }
            Self::Matrix { matrix, .. } => {
                let op = HilbertOp::from_rows(matrix).map_err(|e| err(e.to_string()))?;
                if op.dim() != sys.dim() {
                    return Err(err(format!(
                        "matrix is {0}x{0}, Hilbert space dimension is {1}",
                        op.dim(),
                        sys.dim()
                    )));
                }
                Ok(op)
            }
        }
    }
}

pub fn read_file(path: &Path) -> Result<Vec<u8>, InputError> {
    std::fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn parse_value(path: &Path, bytes: &[u8]) -> Result<Value, InputError> {
    serde_json::from_slice(bytes)
        .map_err(|e| InputError(format!("{}: malformed JSON: {e}", path.display())))
}

fn typed<T: DeserializeOwned>(path: &Path, value: Value) -> Result<T, InputError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let field = e.path().to_string();
        InputError(format!(
            "{}: field `{field}`: {}",
            path.display(),
            e.inner()
        ))
    })
}

/// Parses a model file. A report produced by this tool is accepted too:
/// its echoed `model` section is used.
pub fn parse_model(path: &Path, bytes: &[u8]) -> Result<ModelFile, InputError> {
    let value = parse_value(path, bytes)?;
    let value = match value {
        Value::Object(mut map) if map.contains_key("command") && map.contains_key("model") => {
            map.remove("model").expect("checked")
        }
        other => other,
    };
    typed(path, value)
}

pub fn parse_observables(path: &Path, bytes: &[u8]) -> Result<Vec<ObservableSpec>, InputError> {
    typed(path, parse_value(path, bytes)?)
}
