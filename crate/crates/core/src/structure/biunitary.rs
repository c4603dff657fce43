use crate::error::{DxzError, Result};
use crate::matcore::{block_diagonal, BlockPartition, ComplexMatrix};
use crate::sinkhorn::{DxzDecomposition, INPUT_UNITARY_TOL};

use super::groups::{membership_residual, Group};

/// `r` unitary `m×m` blocks stacked into an `n×m` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct BiunitaryVector {
    blocks: Vec<ComplexMatrix>,
}

impl BiunitaryVector {
    /// Rejects an empty list, unequal or non-square blocks, and blocks that
    /// are not unitary within `1e−8`.
    pub fn new(blocks: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Err(DxzError::InvalidInput("biunitary vector needs at least one block".into()));
        };
        let m = first.rows();
        for b in &blocks {
            if b.shape() != (m, m) {
                return Err(DxzError::DimensionMismatch {
                    op: "BiunitaryVector::new",
                    left: b.shape(),
                    right: (m, m),
                });
            }
            b.require_unitary(INPUT_UNITARY_TOL)?;
        }
        Ok(Self { blocks })
    }

    /// `E`: `r` stacked identities.
    pub fn identity(p: &BlockPartition) -> Self {
        Self {
            blocks: vec![ComplexMatrix::identity(p.m()); p.r()],
        }
    }

    pub fn from_stacked(v: &ComplexMatrix, m: usize) -> Result<Self> {
        let p = BlockPartition::new(v.rows(), m)?;
        if v.cols() != m {
            return Err(DxzError::DimensionMismatch {
                op: "BiunitaryVector::from_stacked",
                left: v.shape(),
                right: (p.n(), m),
            });
        }
        Self::new((0..p.r()).map(|j| v.submatrix(j * m, 0, m, m)).collect())
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn m(&self) -> usize {
        self.blocks[0].rows()
    }

    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn n(&self) -> usize {
        self.m() * self.r()
    }

    pub fn stacked(&self) -> ComplexMatrix {
        let m = self.m();
        ComplexMatrix::from_fn(self.n(), m, |i, j| self.blocks[i / m][(i % m, j)])
    }

    /// `‖V†V − r·I‖_F`.
    pub fn gram_residual(&self) -> f64 {
        let v = self.stacked();
        let target = ComplexMatrix::identity(self.m()).scale((self.r() as f64).into());
        (&v.adjoint() * &v).frobenius_distance(&target).unwrap_or(f64::INFINITY)
    }
}

/// `V_j = Z_jj⁻¹`, `W_j = D_jj`, so that `U·V = W`.
pub fn biunitary_from_dxz(dec: &DxzDecomposition) -> Result<(BiunitaryVector, BiunitaryVector)> {
    let p = &dec.partition;
    let v = (0..p.r()).map(|j| dec.z.block0(p, j, j).adjoint()).collect();
    let w = (0..p.r()).map(|j| dec.d.block0(p, j, j)).collect();
    Ok((BiunitaryVector::new(v)?, BiunitaryVector::new(w)?))
}

/// Right-multiplies every block of both vectors by `V₁⁻¹`; the leading block
/// of the result is exactly `I`.
pub fn normalize_biunitary(v: &BiunitaryVector, w: &BiunitaryVector) -> (BiunitaryVector, BiunitaryVector) {
    let g = v.blocks[0].adjoint();
    let mut vb: Vec<ComplexMatrix> = v.blocks.iter().map(|b| b * &g).collect();
    vb[0] = ComplexMatrix::identity(v.m());
    let wb = w.blocks.iter().map(|b| b * &g).collect();
    (BiunitaryVector { blocks: vb }, BiunitaryVector { blocks: wb })
}

/// `A = diag(W_j⁻¹)·U·diag(I, V₂, …, V_r)`, checked to lie in XU.
///
/// With `U·V = W` and `V₁ = I` this is the placement of inverses for which
/// `A·E = E`. Membership is checked at `2·tol + 1e−9·n`, the bound implied by
/// the two preconditions.
pub fn xu_from_biunitary(
    u: &ComplexMatrix,
    v: &BiunitaryVector,
    w: &BiunitaryVector,
    tol: f64,
) -> Result<ComplexMatrix> {
    u.require_square()?;
    let n = u.rows();
    for (vec, op) in [(v, "xu_from_biunitary V"), (w, "xu_from_biunitary W")] {
        if vec.n() != n || vec.m() != v.m() {
            return Err(DxzError::DimensionMismatch {
                op,
                left: (vec.n(), vec.m()),
                right: (n, v.m()),
            });
        }
    }
    let p = BlockPartition::new(n, v.m())?;
    let lead = v.blocks[0].frobenius_distance(&ComplexMatrix::identity(p.m()))?;
    if lead > tol {
        return Err(DxzError::InvalidInput(format!("leading block of V differs from I by {lead:e}")));
    }
    let mismatch = (u * &v.stacked()).frobenius_distance(&w.stacked())?;
    if mismatch > tol {
        return Err(DxzError::InvalidInput(format!("‖U·V − W‖_F = {mismatch:e} exceeds {tol:e}")));
    }

    let left = block_diagonal(&w.blocks.iter().map(ComplexMatrix::adjoint).collect::<Vec<_>>());
    let mut right_blocks = v.blocks.clone();
    right_blocks[0] = ComplexMatrix::identity(p.m());
    let a = &(&left * u) * &block_diagonal(&right_blocks);

    let bound = 2.0 * tol + 1e-9 * n as f64;
    let residual = membership_residual(&a, &p, Group::Xu).unwrap_or(f64::INFINITY);
    if residual > bound {
        return Err(DxzError::Inconsistent(format!(
            "reconstructed core has XU residual {residual:e} above {bound:e}"
        )));
    }
    Ok(a)
}
