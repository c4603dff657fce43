//! Dense complex matrices, block views and the special matrices built on them.

mod cmat;
mod matrix;
mod partition;
mod random;
mod special;

pub use cmat::{from_cmat_json, read_cmat, to_cmat_json, write_cmat};
pub use matrix::ComplexMatrix;
pub use num_complex::Complex64;
pub use partition::BlockPartition;
pub use random::{complex_gaussian, haar_random_unitary, haar_unitary_with, RandomSpec};
pub use special::{block_diagonal, block_fourier, dft_matrix, kronecker};

/// `‖a − b‖_F`; rejects differently shaped operands.
pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> crate::Result<f64> {
    a.frobenius_distance(b)
}

/// Unitary-sum identity: for unitary `a`, the block row sums and block column
/// sums each carry total squared Frobenius mass `n`. Returns
/// `(Σ_j ‖r_j‖², Σ_k ‖c_k‖²)`.
pub fn line_sum_masses(a: &ComplexMatrix, p: &BlockPartition) -> crate::Result<(f64, f64)> {
    let mut rows = 0.0;
    let mut cols = 0.0;
    for j in 1..=p.r() {
        rows += a.block_row_sum(p, j)?.frobenius_norm().powi(2);
        cols += a.block_col_sum(p, j)?.frobenius_norm().powi(2);
    }
    Ok((rows, cols))
}
