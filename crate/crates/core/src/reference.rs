//! Fixed sample inputs: a 6x6 unitary with small Gaussian-integer entries,
//! a six-point permutation, and two hand-built factorizations of it.

use num_complex::Complex64;

use crate::matcore::ComplexMatrix;
use crate::permdecomp::Permutation;

/// `12 · U` for the sample unitary.
const U6_TIMES_12: [[(i32, i32); 6]; 6] = [
    [(-5, 0), (6, 2), (-5, -5), (-4, 2), (2, 0), (-2, -1)],
    [(2, 2), (-2, -4), (0, -4), (-3, -1), (5, 5), (2, 6)],
    [(-6, -3), (-2, -2), (1, 3), (-6, 0), (-4, -2), (3, 4)],
    [(-2, -4), (-1, -7), (2, -6), (4, 3), (-1, -2), (0, -2)],
    [(3, -1), (4, 0), (-4, -2), (2, -2), (-6, 2), (7, 1)],
    [(0, -6), (-1, 3), (-2, 2), (3, 6), (0, 5), (-2, 4)],
];

/// The sample 6x6 unitary (entries are Gaussian integers over 12).
pub fn u6() -> ComplexMatrix {
    ComplexMatrix::from_fn(6, 6, |i, j| {
        let (re, im) = U6_TIMES_12[i][j];
        Complex64::new(re as f64 / 12.0, im as f64 / 12.0)
    })
}

/// `5 1 2 4 6 3` in one-line notation.
pub fn perm6() -> Permutation {
    Permutation::from_one_based(&[5, 1, 2, 4, 6, 3]).expect("valid permutation")
}

/// An exact factorization `u = d·x·z` together with its block size.
#[derive(Clone, Debug)]
pub struct ReferenceFactors {
    pub m: usize,
    pub u: ComplexMatrix,
    pub d: ComplexMatrix,
    pub x: ComplexMatrix,
    pub z: ComplexMatrix,
}

fn int_matrix(rows: [[u8; 6]; 6]) -> ComplexMatrix {
    ComplexMatrix::from_fn(6, 6, |i, j| Complex64::new(f64::from(rows[i][j]), 0.0))
}

/// Hand-built factorization of [`perm6`] with 2x2 blocks.
pub fn perm6_factors_m2() -> ReferenceFactors {
    ReferenceFactors {
        m: 2,
        u: perm6().to_matrix(),
        d: int_matrix([
            [0, 1, 0, 0, 0, 0],
            [1, 0, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 1, 0, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 0, 0, 1],
        ]),
        x: int_matrix([
            [1, 0, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 1],
            [0, 0, 1, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 1, 0, 0],
        ]),
        z: int_matrix([
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 1, 0, 0, 0],
            [0, 0, 0, 0, 0, 1],
            [0, 0, 0, 0, 1, 0],
        ]),
    }
}

/// Hand-built factorization of [`perm6`] with 3x3 blocks.
pub fn perm6_factors_m3() -> ReferenceFactors {
    ReferenceFactors {
        m: 3,
        u: perm6().to_matrix(),
        d: int_matrix([
            [0, 0, 1, 0, 0, 0],
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 0, 0, 0, 1],
        ]),
        x: int_matrix([
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 0, 1],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [0, 0, 1, 0, 0, 0],
        ]),
        z: int_matrix([
            [1, 0, 0, 0, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 1, 0, 0, 0],
            [0, 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 0, 1],
            [0, 0, 0, 0, 1, 0],
        ]),
    }
}

/// A biunitary pair `(V, W)` for [`u6`] with `m = 2`, rounded to two decimals,
/// each stacked as a 6x2 matrix.
pub fn rounded_biunitary_m2() -> (ComplexMatrix, ComplexMatrix) {
    const V: [[(f64, f64); 2]; 6] = [
        [(1.00, 0.00), (0.00, 0.00)],
        [(0.00, 0.00), (1.00, 0.00)],
        [(0.81, -0.31), (0.23, 0.43)],
        [(-0.20, 0.44), (0.84, 0.25)],
        [(-0.34, 0.77), (-0.37, 0.38)],
        [(-0.29, -0.45), (0.19, 0.83)],
    ];
    const W: [[(f64, f64); 2]; 6] = [
        [(-0.95, -0.16), (0.24, -0.14)],
        [(-0.14, -0.24), (-0.91, -0.31)],
        [(0.06, -0.70), (-0.71, 0.01)],
        [(-0.28, -0.65), (0.62, -0.34)],
        [(-0.12, -0.73), (0.67, -0.03)],
        [(-0.48, -0.46), (-0.57, 0.47)],
    ];
    let build = |t: &[[(f64, f64); 2]; 6]| {
        ComplexMatrix::from_fn(6, 2, |i, j| Complex64::new(t[i][j].0, t[i][j].1))
    };
    (build(&V), build(&W))
}
