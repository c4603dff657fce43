//! Block Sinkhorn iteration towards `U = D·X·Z`.
//!
//! Starting from `X₀ = U`, each step left-multiplies by the block-diagonal
//! inverse of the unitary polar factors of the block row sums, then
//! right-multiplies by `diag(Υ_k⁻¹·Υ₁)` built from the block column sums.
//! The accumulated left and right factors give `D = L†` and `Z = R†`.
//! Progress is monitored by `Ψ(X) = n² − |Btr(X)|²`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{DxzError, Result};
use crate::matcore::{BlockPartition, ComplexMatrix};
use crate::polar::{polar_unitary, PolarConfig, Side};

/// Unitarity tolerance for inputs to [`decompose`].
pub const INPUT_UNITARY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IterationConfig {
    pub max_iter: usize,
    /// Stop as soon as `Ψ(X_t) ≤ psi_tol`.
    pub psi_tol: f64,
    pub polar: PolarConfig,
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self {
            max_iter: 200,
            psi_tol: 1e-6,
            polar: PolarConfig::default(),
        }
    }
}

impl IterationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(DxzError::InvalidInput("max_iter must be at least 1".into()));
        }
        if !(self.psi_tol > 0.0) {
            return Err(DxzError::InvalidInput("psi_tol must be positive".into()));
        }
        self.polar.validate()
    }
}

/// Block trace `Σ_j Σ_k Tr(M_jk)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BtrValue {
    pub value: Complex64,
}

impl BtrValue {
    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }
}

fn check_square_partition(m: &ComplexMatrix, p: &BlockPartition, op: &'static str) -> Result<()> {
    if m.shape() != (p.n(), p.n()) {
        return Err(DxzError::DimensionMismatch {
            op,
            left: m.shape(),
            right: (p.n(), p.n()),
        });
    }
    Ok(())
}

pub fn block_trace(m: &ComplexMatrix, p: &BlockPartition) -> Result<BtrValue> {
    check_square_partition(m, p, "block_trace")?;
    let bs = p.m();
    let mut value = Complex64::new(0.0, 0.0);
    for a in 0..p.n() {
        for b in 0..p.n() {
            if a % bs == b % bs {
                value += m[(a, b)];
            }
        }
    }
    Ok(BtrValue { value })
}

/// `Ψ(M) = n² − |Btr(M)|²`; zero exactly on phase multiples of XU(n, m)
/// among unitaries.
pub fn psi(m: &ComplexMatrix, p: &BlockPartition) -> Result<f64> {
    let n = p.n() as f64;
    Ok(n * n - block_trace(m, p)?.value.norm_sqr())
}

/// Block-diagonal matrix kept as its `r` diagonal blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockDiagonal {
    blocks: Vec<ComplexMatrix>,
}

impl BlockDiagonal {
    pub fn identity(p: &BlockPartition) -> Self {
        Self {
            blocks: vec![ComplexMatrix::identity(p.m()); p.r()],
        }
    }

    pub fn from_blocks(blocks: Vec<ComplexMatrix>) -> Self {
        assert!(!blocks.is_empty(), "no blocks");
        let m = blocks[0].rows();
        assert!(blocks.iter().all(|b| b.shape() == (m, m)), "blocks must be equal-size squares");
        Self { blocks }
    }

    /// Reads the diagonal blocks of a dense matrix.
    pub fn from_dense(a: &ComplexMatrix, p: &BlockPartition) -> Result<Self> {
        check_square_partition(a, p, "BlockDiagonal::from_dense")?;
        Ok(Self {
            blocks: (0..p.r()).map(|j| a.block0(p, j, j)).collect(),
        })
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].rows()
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        crate::matcore::block_diagonal(&self.blocks)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            blocks: self.blocks.iter().map(ComplexMatrix::adjoint).collect(),
        }
    }

    /// `self · other`.
    pub fn compose(&self, other: &BlockDiagonal) -> Self {
        assert_eq!(self.blocks.len(), other.blocks.len());
        Self {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        }
    }

    /// `self · x`.
    pub fn apply_left(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let m = self.block_size();
        let n = m * self.blocks.len();
        assert_eq!(x.rows(), n);
        let xs = x.as_nalgebra();
        let mut out = DMatrix::zeros(n, x.cols());
        for (j, b) in self.blocks.iter().enumerate() {
            let prod = b.as_nalgebra() * xs.rows(j * m, m);
            out.rows_mut(j * m, m).copy_from(&prod);
        }
        ComplexMatrix::from_inner(out)
    }

    /// `x · self`.
    pub fn apply_right(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let m = self.block_size();
        let n = m * self.blocks.len();
        assert_eq!(x.cols(), n);
        let xs = x.as_nalgebra();
        let mut out = DMatrix::zeros(x.rows(), n);
        for (k, b) in self.blocks.iter().enumerate() {
            let prod = xs.columns(k * m, m) * b.as_nalgebra();
            out.columns_mut(k * m, m).copy_from(&prod);
        }
        ComplexMatrix::from_inner(out)
    }
}

/// One bilateral normalization `X_t = L_t·X_{t−1}·R_t`.
#[derive(Clone, Debug)]
pub struct SinkhornStep {
    /// `L_t = diag(Φ_j⁻¹)`.
    pub left: BlockDiagonal,
    /// `R_t = diag(Υ_k⁻¹·Υ₁)`; its leading block is `I`.
    pub right: BlockDiagonal,
    /// `L_t·X_{t−1}`.
    pub row_normalized: ComplexMatrix,
    /// `X_t`.
    pub next: ComplexMatrix,
    /// `Υ₁`, the factor that pins `(R_t)₁₁ = I`.
    pub column_gauge: ComplexMatrix,
    /// Block line sums that were singular and replaced by `I`.
    pub singular_sums: usize,
}

pub fn sinkhorn_step(x_prev: &ComplexMatrix, p: &BlockPartition, cfg: &PolarConfig) -> Result<SinkhornStep> {
    check_square_partition(x_prev, p, "sinkhorn_step")?;
    let mut singular_sums = 0;

    let mut left_blocks = Vec::with_capacity(p.r());
    for j in 0..p.r() {
        let res = polar_unitary(&x_prev.row_sum0(p, j), Side::Left, cfg)?;
        singular_sums += usize::from(res.singular);
        left_blocks.push(res.unitary_factor.adjoint());
    }
    let left = BlockDiagonal::from_blocks(left_blocks);
    let row_normalized = left.apply_left(x_prev);

    let mut upsilons = Vec::with_capacity(p.r());
    for k in 0..p.r() {
        let res = polar_unitary(&row_normalized.col_sum0(p, k), Side::Right, cfg)?;
        singular_sums += usize::from(res.singular);
        upsilons.push(res);
    }
    // A singular first column sum leaves Υ₁ = I, which keeps (R_t)₁₁ = I.
    let gauge = upsilons[0].unitary_factor.clone();
    let right_blocks = upsilons
        .iter()
        .enumerate()
        .map(|(k, res)| {
            if k == 0 || res.singular {
                ComplexMatrix::identity(p.m())
            } else {
                &res.unitary_factor.adjoint() * &gauge
            }
        })
        .collect();
    let right = BlockDiagonal::from_blocks(right_blocks);
    let next = right.apply_right(&row_normalized);

    Ok(SinkhornStep {
        left,
        right,
        row_normalized,
        next,
        column_gauge: gauge,
        singular_sums,
    })
}

/// Result of [`decompose`]: `U ≈ D·X·Z`.
#[derive(Clone, Debug)]
pub struct DxzDecomposition {
    pub d: ComplexMatrix,
    pub x: ComplexMatrix,
    pub z: ComplexMatrix,
    pub partition: BlockPartition,
    /// `(t, Ψ(X_t))` from `t = 0` through the returned iterate.
    pub psi_trace: Vec<(usize, f64)>,
    pub converged: bool,
    pub iterations_used: usize,
}

impl DxzDecomposition {
    pub fn final_psi(&self) -> f64 {
        self.psi_trace.last().map_or(f64::NAN, |&(_, v)| v)
    }

    /// Record for factors known to be exact, e.g. from a closed form.
    pub(crate) fn exact(d: ComplexMatrix, x: ComplexMatrix, z: ComplexMatrix, partition: BlockPartition) -> Result<Self> {
        let psi0 = psi(&x, &partition)?;
        Ok(Self {
            d,
            x,
            z,
            partition,
            psi_trace: vec![(0, psi0)],
            converged: true,
            iterations_used: 0,
        })
    }
}

/// Runs [`sinkhorn_step`] from `X₀ = U` until `Ψ ≤ psi_tol` or `max_iter`.
///
/// Not converging is a status (`converged = false`), not an error; the
/// reconstruction `D·X·Z = U` holds either way.
pub fn decompose(u: &ComplexMatrix, m: usize, cfg: &IterationConfig) -> Result<DxzDecomposition> {
    cfg.validate()?;
    u.require_square()?;
    let p = BlockPartition::new(u.rows(), m)?;
    u.require_unitary(INPUT_UNITARY_TOL)?;

    let n = p.n();
    if m == n {
        return DxzDecomposition::exact(u.clone(), ComplexMatrix::identity(n), ComplexMatrix::identity(n), p);
    }

    let mut x = u.clone();
    let mut left = BlockDiagonal::identity(&p);
    let mut right = BlockDiagonal::identity(&p);
    let mut current = psi(&x, &p)?;
    let mut psi_trace = vec![(0, current)];
    let mut t = 0;
    while current > cfg.psi_tol && t < cfg.max_iter {
        let step = sinkhorn_step(&x, &p, &cfg.polar)?;
        left = step.left.compose(&left);
        right = right.compose(&step.right);
        x = step.next;
        t += 1;
        current = psi(&x, &p)?;
        psi_trace.push((t, current));
    }

    Ok(DxzDecomposition {
        d: left.adjoint().to_dense(),
        x,
        z: right.adjoint().to_dense(),
        partition: p,
        psi_trace,
        converged: current <= cfg.psi_tol,
        iterations_used: t,
    })
}

/// Residuals of a claimed factorization `U = D·X·Z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    /// `‖D·X·Z − U‖_F`
    pub reconstruction: f64,
    pub unitarity_d: f64,
    pub unitarity_x: f64,
    pub unitarity_z: f64,
    pub d_off_block: f64,
    pub z_off_block: f64,
    /// `‖Z₁₁ − I‖_F`
    pub z11_residual: f64,
    /// Largest `‖line sum − I‖_F` over the `2r` block line sums of `X`.
    pub line_sum_residual: f64,
    pub psi: f64,
    pub tol: f64,
    pub pass: bool,
}

impl VerificationReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.reconstruction,
            self.unitarity_d,
            self.unitarity_x,
            self.unitarity_z,
            self.d_off_block,
            self.z_off_block,
            self.z11_residual,
            self.line_sum_residual,
            self.psi,
        ]
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn verify_factors(
    u: &ComplexMatrix,
    d: &ComplexMatrix,
    x: &ComplexMatrix,
    z: &ComplexMatrix,
    p: &BlockPartition,
    tol: f64,
) -> Result<VerificationReport> {
    for a in [u, d, x, z] {
        if a.shape() != (p.n(), p.n()) {
            return Err(DxzError::DimensionMismatch {
                op: "verify_factors",
                left: a.shape(),
                right: (p.n(), p.n()),
            });
        }
    }
    let product = &(d * x) * z;
    let z11 = z.block0(p, 0, 0);
    let mut report = VerificationReport {
        reconstruction: product.frobenius_distance(u)?,
        unitarity_d: d.unitarity_residual()?,
        unitarity_x: x.unitarity_residual()?,
        unitarity_z: z.unitarity_residual()?,
        d_off_block: d.off_block_diagonal_norm(p)?,
        z_off_block: z.off_block_diagonal_norm(p)?,
        z11_residual: z11.frobenius_distance(&ComplexMatrix::identity(p.m()))?,
        line_sum_residual: x.max_line_sum_residual(p)?,
        psi: psi(x, p)?,
        tol,
        pass: false,
    };
    report.pass = report.max_residual() <= tol;
    Ok(report)
}

pub fn verify_decomposition(u: &ComplexMatrix, dec: &DxzDecomposition, tol: f64) -> Result<VerificationReport> {
    verify_factors(u, &dec.d, &dec.x, &dec.z, &dec.partition, tol)
}
