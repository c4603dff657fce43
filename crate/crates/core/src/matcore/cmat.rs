//! CMAT-JSON: `{"rows": R, "cols": C, "data": [[[re, im], ...], ...]}` with
//! `data` in row-major order.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use crate::error::{DxzError, Result};

#[derive(Serialize, Deserialize)]
struct CmatJson {
    rows: usize,
    cols: usize,
    data: Vec<Vec<[f64; 2]>>,
}

pub fn to_cmat_json(m: &ComplexMatrix) -> String {
    let doc = CmatJson {
        rows: m.rows(),
        cols: m.cols(),
        data: (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect(),
    };
    serde_json::to_string(&doc).expect("finite matrices always serialize")
}

pub fn from_cmat_json(text: &str) -> Result<ComplexMatrix> {
    let doc: CmatJson = serde_json::from_str(text)?;
    if doc.rows == 0 || doc.cols == 0 {
        return Err(DxzError::InvalidInput(format!(
            "CMAT-JSON declares an empty {}x{} matrix",
            doc.rows, doc.cols
        )));
    }
    if doc.data.len() != doc.rows || doc.data.iter().any(|row| row.len() != doc.cols) {
        return Err(DxzError::InvalidInput(format!(
            "CMAT-JSON data does not match declared shape {}x{}",
            doc.rows, doc.cols
        )));
    }
    let flat: Vec<Complex64> = doc
        .data
        .iter()
        .flatten()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    ComplexMatrix::from_row_major(doc.rows, doc.cols, &flat)
}

pub fn read_cmat(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    from_cmat_json(&fs::read_to_string(path)?)
}

pub fn write_cmat(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    let mut text = to_cmat_json(m);
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}
