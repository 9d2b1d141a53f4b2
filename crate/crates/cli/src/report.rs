//! Report envelope and the per-command result sections.

use std::path::Path;
use std::time::Instant;

use liouville_fock::supermaps::AlgebraReport;
use liouville_fock::{Statistics, C64};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::input::ModelFile;

pub type Matrix = Vec<Vec<C64>>;

#[derive(Serialize)]
pub struct Report<R: Serialize> {
    pub command: &'static str,
    pub arguments: Value,
    pub tool_version: &'static str,
    pub input_hash: String,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelFile>,
    pub result: R,
}

impl<R: Serialize> Report<R> {
    pub fn new(
        command: &'static str,
        arguments: Value,
        input: &[u8],
        started: Instant,
        model: Option<ModelFile>,
        result: R,
    ) -> Self {
        Self {
            command,
            arguments,
            tool_version: env!("CARGO_PKG_VERSION"),
            input_hash: hex::encode(Sha256::digest(input)),
            wall_time_s: started.elapsed().as_secs_f64(),
            model,
            result,
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn write_or_print(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
pub struct VerifyResult {
    pub statistics: Statistics,
    pub n_modes: usize,
    pub cutoff: usize,
    pub tolerance: f64,
    pub passed: bool,
    pub max_residual: f64,
    pub basis_max_index: usize,
    pub basis_size: usize,
    pub gram_deviation: f64,
    pub algebra: AlgebraReport,
}

#[derive(Serialize)]
pub struct BasisResult {
    pub statistics: Statistics,
    pub n_modes: usize,
    pub cutoff: usize,
    pub max_index: usize,
    pub size: usize,
    pub tolerance: f64,
    pub passed: bool,
    pub gram_deviation: f64,
    pub min_ket_singular_value: f64,
    pub files: Vec<String>,
}

#[derive(Serialize)]
pub struct Expectation {
    pub name: String,
    pub value: C64,
}

#[derive(Serialize)]
pub struct NessSection {
    pub null_dim: usize,
    pub degenerate: bool,
    pub spectral_gap: f64,
    pub near_degenerate: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<C64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hermiticity_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_eigenvalue: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho_ness: Option<Matrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub null_basis: Option<Vec<Matrix>>,
    pub occupations: Vec<C64>,
    pub expectations: Vec<Expectation>,
    pub spectrum_head: Vec<C64>,
}

#[derive(Serialize)]
pub struct SpectrumSection {
    pub dimension: usize,
    pub zero_modes: usize,
    pub max_real_part: f64,
    pub tolerance: f64,
    pub dissipative: bool,
    pub eigenvalues: Vec<C64>,
}
