use crate::error::{DxzError, Result};
use crate::matcore::{block_fourier, BlockPartition, ComplexMatrix};

use super::groups::{membership, Group};

/// `T⁻¹·X·T` split into its leading `m×m` block, the two off blocks and the
/// trailing `q×q` block.
#[derive(Clone, Debug)]
pub struct FourierSplit {
    /// `‖leading block − I‖_F`
    pub leading_residual: f64,
    /// Frobenius norm of the two off blocks taken together.
    pub off_block: f64,
    pub core: ComplexMatrix,
}

fn require_intermediate(p: &BlockPartition) -> Result<()> {
    if p.q() == 0 {
        return Err(DxzError::InvalidInput(
            "m = n leaves no intermediate block".into(),
        ));
    }
    Ok(())
}

/// Conjugates by `T = F_r ⊗ I_m` and splits; no membership check.
pub fn fourier_split(x: &ComplexMatrix, p: &BlockPartition) -> Result<FourierSplit> {
    require_intermediate(p)?;
    if x.shape() != (p.n(), p.n()) {
        return Err(DxzError::DimensionMismatch {
            op: "fourier_split",
            left: x.shape(),
            right: (p.n(), p.n()),
        });
    }
    let t = block_fourier(p);
    let g = &(&t.adjoint() * x) * &t;
    let (m, q) = (p.m(), p.q());
    let lead = g.submatrix(0, 0, m, m);
    let upper = g.submatrix(0, m, m, q).frobenius_norm();
    let lower = g.submatrix(m, 0, q, m).frobenius_norm();
    Ok(FourierSplit {
        leading_residual: lead.frobenius_distance(&ComplexMatrix::identity(m))?,
        off_block: upper.hypot(lower),
        core: g.submatrix(m, m, q, q),
    })
}

/// The trailing block `G` of `T⁻¹XT = I ⊕ G` for `X` in XU.
pub fn xu_to_core(x: &ComplexMatrix, p: &BlockPartition, tol: f64) -> Result<ComplexMatrix> {
    require_intermediate(p)?;
    if !membership(x, p, Group::Xu, tol) {
        return Err(DxzError::InvalidInput(format!("matrix is not in XU within {tol:e}")));
    }
    let split = fourier_split(x, p)?;
    let worst = split.leading_residual.max(split.off_block);
    if worst > tol {
        return Err(DxzError::Inconsistent(format!(
            "Fourier form deviates from I ⊕ G by {worst:e}"
        )));
    }
    let unitary = split.core.unitarity_residual()?;
    if unitary > tol {
        return Err(DxzError::Inconsistent(format!("core block unitarity residual {unitary:e}")));
    }
    Ok(split.core)
}

/// `X = T·(I ⊕ G)·T⁻¹`.
pub fn core_to_xu(g: &ComplexMatrix, p: &BlockPartition) -> Result<ComplexMatrix> {
    require_intermediate(p)?;
    if g.shape() != (p.q(), p.q()) {
        return Err(DxzError::DimensionMismatch {
            op: "core_to_xu",
            left: g.shape(),
            right: (p.q(), p.q()),
        });
    }
    g.require_unitary(crate::sinkhorn::INPUT_UNITARY_TOL)?;
    let t = block_fourier(p);
    let middle = ComplexMatrix::identity(p.m()).direct_sum(g);
    Ok(&(&t * &middle) * &t.adjoint())
}

/// Largest `‖M_jk − M_j'k'‖_F` over block pairs with `j − k ≡ j' − k' (mod r)`.
pub fn circulant_residual(m: &ComplexMatrix, p: &BlockPartition) -> Result<f64> {
    if m.shape() != (p.n(), p.n()) {
        return Err(DxzError::DimensionMismatch {
            op: "circulant_residual",
            left: m.shape(),
            right: (p.n(), p.n()),
        });
    }
    let r = p.r();
    let mut worst = 0.0f64;
    for shift in 0..r {
        let class: Vec<ComplexMatrix> = (0..r).map(|k| m.block0(p, (k + shift) % r, k)).collect();
        for a in 0..r {
            for b in a + 1..r {
                worst = worst.max(class[a].frobenius_distance(&class[b])?);
            }
        }
    }
    Ok(worst)
}

pub fn is_block_circulant(m: &ComplexMatrix, p: &BlockPartition, tol: f64) -> bool {
    circulant_residual(m, p).is_ok_and(|r| r <= tol)
}

/// `1e−8 · ‖M‖_F`.
pub fn default_circulant_tol(m: &ComplexMatrix) -> f64 {
    1e-8 * m.frobenius_norm()
}
