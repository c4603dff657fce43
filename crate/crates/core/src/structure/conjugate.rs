use serde::Serialize;

use crate::error::{DxzError, Result};
use crate::matcore::{block_fourier, BlockPartition, ComplexMatrix};
use crate::sinkhorn::{decompose, DxzDecomposition, IterationConfig};

use super::fourier::circulant_residual;

/// `U ≈ C·(I ⊕ A)·Y` with `C`, `Y` block-circulant, obtained by decomposing
/// `T⁻¹UT` and conjugating the factors back.
#[derive(Clone, Debug)]
pub struct ConjugateDecomposition {
    pub c: ComplexMatrix,
    /// Trailing `q×q` block of `T·x·T⁻¹`.
    pub a: ComplexMatrix,
    pub y: ComplexMatrix,
    pub partition: BlockPartition,
    /// Decomposition `d·x·z` of `T⁻¹UT`.
    pub inner: DxzDecomposition,
    /// `‖T·x·T⁻¹ − I ⊕ A‖_F`
    pub middle_residual: f64,
}

impl ConjugateDecomposition {
    pub fn converged(&self) -> bool {
        self.inner.converged
    }

    /// `C·(I ⊕ A)·Y`.
    pub fn product(&self) -> ComplexMatrix {
        let middle = ComplexMatrix::identity(self.partition.m()).direct_sum(&self.a);
        &(&self.c * &middle) * &self.y
    }
}

pub fn conjugate_decompose(u: &ComplexMatrix, m: usize, cfg: &IterationConfig) -> Result<ConjugateDecomposition> {
    u.require_square()?;
    let p = BlockPartition::new(u.rows(), m)?;
    if p.q() == 0 {
        return Err(DxzError::InvalidInput("m = n leaves no intermediate block".into()));
    }
    let t = block_fourier(&p);
    let ta = t.adjoint();
    let conj = |a: &ComplexMatrix| &(&t * a) * &ta;
    let inner = decompose(&(&(&ta * u) * &t), m, cfg)?;
    let middle = conj(&inner.x);
    let a = middle.submatrix(p.m(), p.m(), p.q(), p.q());
    let middle_residual = middle.frobenius_distance(&ComplexMatrix::identity(p.m()).direct_sum(&a))?;
    Ok(ConjugateDecomposition {
        c: conj(&inner.d),
        a,
        y: conj(&inner.z),
        partition: p,
        inner,
        middle_residual,
    })
}

/// Residuals of a conjugate decomposition against its source matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConjugateReport {
    /// `‖C·(I ⊕ A)·Y − U‖_F`
    pub reconstruction: f64,
    pub c_circulant: f64,
    pub y_circulant: f64,
    /// Largest `‖block row sum of Y − I‖_F`.
    pub y_row_sum: f64,
    pub middle_residual: f64,
    pub unitarity_c: f64,
    pub unitarity_a: f64,
    pub unitarity_y: f64,
    pub converged: bool,
}

impl ConjugateReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.reconstruction,
            self.c_circulant,
            self.y_circulant,
            self.y_row_sum,
            self.middle_residual,
            self.unitarity_c,
            self.unitarity_a,
            self.unitarity_y,
        ]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn conjugate_report(u: &ComplexMatrix, cd: &ConjugateDecomposition) -> Result<ConjugateReport> {
    let p = &cd.partition;
    let eye = ComplexMatrix::identity(p.m());
    let mut y_row_sum = 0.0f64;
    for j in 0..p.r() {
        y_row_sum = y_row_sum.max(cd.y.row_sum0(p, j).frobenius_distance(&eye)?);
    }
    Ok(ConjugateReport {
        reconstruction: cd.product().frobenius_distance(u)?,
        c_circulant: circulant_residual(&cd.c, p)?,
        y_circulant: circulant_residual(&cd.y, p)?,
        y_row_sum,
        middle_residual: cd.middle_residual,
        unitarity_c: cd.c.unitarity_residual()?,
        unitarity_a: cd.a.unitarity_residual()?,
        unitarity_y: cd.y.unitarity_residual()?,
        converged: cd.converged(),
    })
}
