use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;

/// Dimension and seed of a reproducible random draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub n: usize,
    pub seed: u64,
}

impl RandomSpec {
    pub fn new(n: usize, seed: u64) -> Self {
        Self { n, seed }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Haar-distributed unitary, deterministic per seed.
pub fn haar_random_unitary(spec: &RandomSpec) -> ComplexMatrix {
    haar_unitary_with(&mut spec.rng(), spec.n)
}

/// Matrix of i.i.d. standard complex Gaussians (`E|z|^2 = 1`).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// Haar unitary from QR of a complex Gaussian matrix, with the phases of
/// `diag(R)` moved into `Q` so the distribution is invariant.
pub fn haar_unitary_with<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let z = complex_gaussian(rng, n, n);
    let qr = z.as_nalgebra().clone().qr();
    let q = qr.q();
    let r = qr.r();
    let phases = DMatrix::from_fn(n, n, |i, j| {
        if i != j {
            return Complex64::new(0.0, 0.0);
        }
        let d = r[(i, i)];
        if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        }
    });
    ComplexMatrix::from_inner(q * phases)
}
