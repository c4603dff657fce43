use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::partition::BlockPartition;
use crate::error::{DxzError, Result};

/// Dense complex matrix with at least one row and one column and only
/// finite entries.
///
/// Entry access is zero-based (`m[(i, j)]`). Block access follows the
/// one-based `(j, k)` numbering of the block grid, see [`ComplexMatrix::block`].
///
/// The arithmetic operators on `&ComplexMatrix` panic on shape mismatch;
/// [`ComplexMatrix::multiply`] is the checked product.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "empty matrix");
        Self {
            inner: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "empty matrix");
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    /// Builds a matrix entry by entry.
    ///
    /// Panics if `f` produces a non-finite value; use
    /// [`ComplexMatrix::from_row_major`] for untrusted data.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(rows >= 1 && cols >= 1, "empty matrix");
        let inner = DMatrix::from_fn(rows, cols, |i, j| {
            let z = f(i, j);
            assert!(z.is_finite(), "non-finite entry at ({i}, {j})");
            z
        });
        Self { inner }
    }

    /// Builds a matrix from a flat row-major slice.
    pub fn from_row_major(rows: usize, cols: usize, data: &[Complex64]) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(DxzError::DimensionMismatch {
                op: "from_row_major",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.is_finite()) {
            return Err(DxzError::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(rows, cols, data),
        })
    }

    /// Builds a matrix from nested rows, all of equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(DxzError::DimensionMismatch {
                op: "from_rows",
                left: (r, c),
                right: (1, bad.len()),
            });
        }
        let flat: Vec<Complex64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(r, c, &flat)
    }

    /// Real-valued convenience constructor.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { Complex64::new(0.0, 0.0) })
    }

    /// Wraps an nalgebra matrix, rejecting empty or non-finite input.
    pub fn from_nalgebra(inner: DMatrix<Complex64>) -> Result<Self> {
        if inner.nrows() == 0 || inner.ncols() == 0 {
            return Err(DxzError::DimensionMismatch {
                op: "from_nalgebra",
                left: inner.shape(),
                right: (1, 1),
            });
        }
        for j in 0..inner.ncols() {
            for i in 0..inner.nrows() {
                if !inner[(i, j)].is_finite() {
                    return Err(DxzError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self { inner })
    }

    pub(crate) fn from_inner(inner: DMatrix<Complex64>) -> Self {
        debug_assert!(inner.iter().all(|z| z.is_finite()));
        Self { inner }
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Complex64> {
        self.inner.get((i, j)).copied()
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        (0..self.rows())
            .flat_map(|i| (0..self.cols()).map(move |j| (i, j)))
            .map(|(i, j)| self.inner[(i, j)])
            .collect()
    }

    /// Checked product `self * rhs`.
    pub fn multiply(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols() != rhs.rows() {
            return Err(DxzError::DimensionMismatch {
                op: "multiply",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Self::from_inner(&self.inner * &rhs.inner))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        Self::from_inner(self.inner.adjoint())
    }

    pub fn scale(&self, factor: Complex64) -> ComplexMatrix {
        Self::from_inner(&self.inner * factor)
    }

    pub fn trace(&self) -> Complex64 {
        self.inner.diagonal().iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    /// `‖self - other‖_F`.
    pub fn frobenius_distance(&self, other: &ComplexMatrix) -> Result<f64> {
        if self.shape() != other.shape() {
            return Err(DxzError::DimensionMismatch {
                op: "frobenius_distance",
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(self
            .inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// `‖A†A − I‖_F`.
    pub fn unitarity_residual(&self) -> Result<f64> {
        self.require_square()?;
        let gram = self.inner.adjoint() * &self.inner;
        let n = self.rows();
        let mut acc = 0.0;
        for j in 0..n {
            for i in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                acc += (gram[(i, j)] - target).norm_sqr();
            }
        }
        Ok(acc.sqrt())
    }

    /// True iff the matrix is square and `‖A†A − I‖_F ≤ tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual().is_ok_and(|res| res <= tol)
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(DxzError::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            })
        }
    }

    pub(crate) fn require_unitary(&self, tol: f64) -> Result<()> {
        let residual = self.unitarity_residual()?;
        if residual <= tol {
            Ok(())
        } else {
            Err(DxzError::NotUnitary { residual, tol })
        }
    }

    /// Inverse by LU decomposition; `None` if the matrix is singular or the
    /// result is not finite.
    pub fn inverse(&self) -> Option<ComplexMatrix> {
        if !self.is_square() {
            return None;
        }
        let inv = self.inner.clone().try_inverse()?;
        inv.iter().all(|z| z.is_finite()).then(|| Self::from_inner(inv))
    }

    /// Copy of the `rows x cols` window whose top-left corner is `(row0, col0)`
    /// (zero-based).
    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> ComplexMatrix {
        Self::from_inner(self.inner.view((row0, col0), (rows, cols)).into_owned())
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        let mut out = DMatrix::zeros(r1 + r2, c1 + c2);
        out.view_mut((0, 0), (r1, c1)).copy_from(&self.inner);
        out.view_mut((r1, c1), (r2, c2)).copy_from(&other.inner);
        Self::from_inner(out)
    }

    fn check_partition(&self, p: &BlockPartition, op: &'static str) -> Result<()> {
        if self.shape() != (p.n(), p.n()) {
            return Err(DxzError::DimensionMismatch {
                op,
                left: self.shape(),
                right: (p.n(), p.n()),
            });
        }
        Ok(())
    }

    fn check_block_index(p: &BlockPartition, j: usize, k: usize) -> Result<()> {
        if j == 0 || k == 0 || j > p.r() || k > p.r() {
            return Err(DxzError::BlockIndex { j, k, r: p.r() });
        }
        Ok(())
    }

    /// Block `(j, k)`, one-based: global rows `(j-1)m .. jm` and columns
    /// `(k-1)m .. km`.
    pub fn block(&self, p: &BlockPartition, j: usize, k: usize) -> Result<ComplexMatrix> {
        self.check_partition(p, "block")?;
        Self::check_block_index(p, j, k)?;
        Ok(self.block0(p, j - 1, k - 1))
    }

    /// Sum of the blocks in block row `j` (one-based).
    pub fn block_row_sum(&self, p: &BlockPartition, j: usize) -> Result<ComplexMatrix> {
        self.check_partition(p, "block_row_sum")?;
        Self::check_block_index(p, j, 1)?;
        Ok(self.row_sum0(p, j - 1))
    }

    /// Sum of the blocks in block column `k` (one-based).
    pub fn block_col_sum(&self, p: &BlockPartition, k: usize) -> Result<ComplexMatrix> {
        self.check_partition(p, "block_col_sum")?;
        Self::check_block_index(p, 1, k)?;
        Ok(self.col_sum0(p, k - 1))
    }

    pub(crate) fn block0(&self, p: &BlockPartition, j: usize, k: usize) -> ComplexMatrix {
        self.submatrix(j * p.m(), k * p.m(), p.m(), p.m())
    }

    pub(crate) fn row_sum0(&self, p: &BlockPartition, j: usize) -> ComplexMatrix {
        let m = p.m();
        let mut acc = DMatrix::zeros(m, m);
        for k in 0..p.r() {
            acc += self.inner.view((j * m, k * m), (m, m));
        }
        Self::from_inner(acc)
    }

    pub(crate) fn col_sum0(&self, p: &BlockPartition, k: usize) -> ComplexMatrix {
        let m = p.m();
        let mut acc = DMatrix::zeros(m, m);
        for j in 0..p.r() {
            acc += self.inner.view((j * m, k * m), (m, m));
        }
        Self::from_inner(acc)
    }

    /// Assembles an `n x n` matrix from its `r^2` blocks; `f` receives
    /// zero-based block indices.
    pub fn from_blocks(
        p: &BlockPartition,
        mut f: impl FnMut(usize, usize) -> ComplexMatrix,
    ) -> Result<ComplexMatrix> {
        let m = p.m();
        let mut out = DMatrix::zeros(p.n(), p.n());
        for j in 0..p.r() {
            for k in 0..p.r() {
                let b = f(j, k);
                if b.shape() != (m, m) {
                    return Err(DxzError::DimensionMismatch {
                        op: "from_blocks",
                        left: b.shape(),
                        right: (m, m),
                    });
                }
                out.view_mut((j * m, k * m), (m, m)).copy_from(&b.inner);
            }
        }
        Ok(Self::from_inner(out))
    }

    /// Frobenius mass of everything outside the diagonal blocks.
    pub fn off_block_diagonal_norm(&self, p: &BlockPartition) -> Result<f64> {
        self.check_partition(p, "off_block_diagonal_norm")?;
        let mut acc = 0.0;
        for j in 0..p.r() {
            for k in (0..p.r()).filter(|&k| k != j) {
                acc += self
                    .inner
                    .view((j * p.m(), k * p.m()), (p.m(), p.m()))
                    .iter()
                    .map(Complex64::norm_sqr)
                    .sum::<f64>();
            }
        }
        Ok(acc.sqrt())
    }

    /// Largest `‖line sum − I‖_F` over all `2r` block row and column sums.
    pub fn max_line_sum_residual(&self, p: &BlockPartition) -> Result<f64> {
        self.check_partition(p, "max_line_sum_residual")?;
        let eye = ComplexMatrix::identity(p.m());
        let mut worst = 0.0f64;
        for j in 0..p.r() {
            worst = worst.max(self.row_sum0(p, j).frobenius_distance(&eye)?);
            worst = worst.max(self.col_sum0(p, j).frobenius_distance(&eye)?);
        }
        Ok(worst)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.inner[idx]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols(), rhs.rows(), "matrix product shape mismatch");
        ComplexMatrix::from_inner(&self.inner * &rhs.inner)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        ComplexMatrix::from_inner(&self.inner + &rhs.inner)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        ComplexMatrix::from_inner(&self.inner - &rhs.inner)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(4);
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let z = self.inner[(i, j)];
                let sign = if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
                    '-'
                } else {
                    '+'
                };
                if j > 0 {
                    f.write_str("  ")?;
                }
                write!(f, "{:>w$.prec$} {sign} {:.prec$}i", z.re, z.im.abs(), w = prec + 3)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
