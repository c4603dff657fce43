use std::fs;
use std::path::{Path, PathBuf};

use dxz_core::matcore::{from_cmat_json, to_cmat_json};
use dxz_core::sinkhorn::VerificationReport;
use dxz_core::structure::ConjugateReport;
use dxz_core::{BlockPartition, ComplexMatrix, DxzDecomposition, IterationConfig};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TracePoint {
    pub t: usize,
    pub psi: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub partition: BlockPartition,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<IterationConfig>,
    pub psi_trace: Vec<TracePoint>,
    pub residuals: VerificationReport,
    pub converged: bool,
    pub iterations_used: usize,
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugate: Option<ConjugateReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub biunitary_residual: Option<f64>,
}

impl RunReport {
    pub fn new(
        command: &[String],
        inputs: Vec<InputDigest>,
        dec: &DxzDecomposition,
        config: Option<IterationConfig>,
        residuals: VerificationReport,
        wall_time_s: f64,
    ) -> Self {
        Self {
            command: command.to_vec(),
            inputs,
            partition: dec.partition,
            config,
            psi_trace: dec.psi_trace.iter().map(|&(t, psi)| TracePoint { t, psi }).collect(),
            residuals,
            converged: dec.converged,
            iterations_used: dec.iterations_used,
            wall_time_s,
            outputs: Vec::new(),
            conjugate: None,
            biunitary_residual: None,
        }
    }
}

/// Verification tolerance for freshly decomposed factors.
///
/// Line-sum residuals of `X` shrink like `√Ψ`, so the bound is
/// `max(1e−8, 10·√Ψ_final)`.
pub fn round_trip_tol(psi_final: f64) -> f64 {
    (10.0 * psi_final.max(0.0).sqrt()).max(1e-8)
}

/// Reads a CMAT-JSON file and records its digest.
pub fn read_matrix(path: &Path) -> Result<(ComplexMatrix, InputDigest), CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let digest = InputDigest {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
    };
    let text = String::from_utf8(bytes).map_err(|_| CliError::Data(format!("{} is not UTF-8", path.display())))?;
    let m = from_cmat_json(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok((m, digest))
}

/// Writes `name.json` files into `dir` (created if missing).
pub fn write_matrices(dir: &Path, items: &[(&str, &ComplexMatrix)]) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    for (name, m) in items {
        let path = dir.join(format!("{name}.json"));
        write_text(&path, &to_cmat_json(m))?;
        written.push(path);
    }
    Ok(written)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}
