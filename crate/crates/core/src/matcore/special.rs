use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::partition::BlockPartition;

/// Unitary `r x r` DFT: entry `(j, k)` is `ω^{jk} / √r` with `ω = e^{−2πi/r}`
/// and zero-based exponents.
pub fn dft_matrix(r: usize) -> ComplexMatrix {
    assert!(r >= 1, "DFT of size zero");
    let norm = 1.0 / (r as f64).sqrt();
    ComplexMatrix::from_fn(r, r, |j, k| {
        // Reduce the exponent first so large products keep full accuracy.
        let e = (j * k) % r;
        Complex64::from_polar(norm, -2.0 * PI * e as f64 / r as f64)
    })
}

/// Kronecker product; block `(j, k)` of the result is `a[(j, k)] · b`.
pub fn kronecker(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_inner(a.as_nalgebra().kronecker(b.as_nalgebra()))
}

/// The block Fourier transform `F_r ⊗ I_m` for the given partition.
pub fn block_fourier(p: &BlockPartition) -> ComplexMatrix {
    kronecker(&dft_matrix(p.r()), &ComplexMatrix::identity(p.m()))
}

/// Block-diagonal matrix with the given square blocks.
pub fn block_diagonal(blocks: &[ComplexMatrix]) -> ComplexMatrix {
    assert!(!blocks.is_empty(), "no blocks");
    let n: usize = blocks.iter().map(ComplexMatrix::rows).sum();
    let mut out = DMatrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        assert!(b.is_square(), "diagonal blocks must be square");
        out.view_mut((at, at), b.shape()).copy_from(b.as_nalgebra());
        at += b.rows();
    }
    ComplexMatrix::from_inner(out)
}
