//! Unitary factor of the polar decomposition of a small square matrix.
//!
//! The production kernel is the plain Newton (Heron) iteration
//! `Y₀ = M, Y_{k+1} = ½(Y_k + (Y_k†)⁻¹)`. [`polar_oracle`] computes the same
//! factor through a Hermitian eigendecomposition of `M†M` and exists so the
//! two routes can be checked against each other.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{DxzError, Result};
use crate::matcore::ComplexMatrix;

/// Iterates are accepted once `‖Y†Y − I‖_F` is below this, even past
/// `newton_iters`.
const UNITARY_TARGET: f64 = 1e-12;
const MAX_STEPS: usize = 100;
const REFINE_STEP_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PolarConfig {
    /// Newton steps to take (more are added only while the iterate is not yet
    /// unitary to `1e-12`).
    pub newton_iters: usize,
    /// Smallest singular value below which the input counts as singular.
    pub sing_tol: f64,
    /// Iterate until successive iterates agree to `1e-14` instead.
    pub refine: bool,
}

impl Default for PolarConfig {
    fn default() -> Self {
        Self {
            newton_iters: 10,
            sing_tol: 1e-10,
            refine: false,
        }
    }
}

impl PolarConfig {
    pub fn refined() -> Self {
        Self {
            refine: true,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.newton_iters == 0 {
            return Err(DxzError::InvalidInput("newton_iters must be at least 1".into()));
        }
        if !(self.sing_tol > 0.0) {
            return Err(DxzError::InvalidInput("sing_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Which polar form the caller has in mind: `M = Φ·P` (left) or `M = Q·Υ`
/// (right). Both have the same unitary factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolarResult {
    /// `Φ` (or `Υ`); the identity when `singular` is set.
    pub unitary_factor: ComplexMatrix,
    pub singular: bool,
}

impl PolarResult {
    fn singular(m: usize) -> Self {
        Self {
            unitary_factor: ComplexMatrix::identity(m),
            singular: true,
        }
    }
}

fn frobenius(a: &DMatrix<Complex64>) -> f64 {
    a.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

fn unitarity(y: &DMatrix<Complex64>) -> f64 {
    let g = y.adjoint() * y;
    let mut acc = 0.0;
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            let t = if i == j { 1.0 } else { 0.0 };
            acc += (g[(i, j)] - t).norm_sqr();
        }
    }
    acc.sqrt()
}

/// Unitary polar factor by Newton iteration.
///
/// A matrix whose smallest singular value (estimated as `1/‖M⁻¹‖_F`) falls
/// below `cfg.sing_tol`, or whose iterate cannot be inverted, is reported as
/// singular with factor `I`.
pub fn polar_unitary(m: &ComplexMatrix, _side: Side, cfg: &PolarConfig) -> Result<PolarResult> {
    m.require_square()?;
    cfg.validate()?;
    let n = m.rows();
    let mut y = m.as_nalgebra().clone();
    for step in 0..MAX_STEPS {
        let inv = match y.clone().try_inverse() {
            Some(inv) if inv.iter().all(|z| z.is_finite()) => inv,
            _ => return Ok(PolarResult::singular(n)),
        };
        if step == 0 && 1.0 / frobenius(&inv) < cfg.sing_tol {
            return Ok(PolarResult::singular(n));
        }
        let next = (&y + inv.adjoint()) * Complex64::new(0.5, 0.0);
        let delta = frobenius(&(&next - &y));
        y = next;
        let done = if cfg.refine {
            delta <= REFINE_STEP_TOL
        } else {
            step + 1 >= cfg.newton_iters && unitarity(&y) <= UNITARY_TARGET
        };
        if done {
            break;
        }
    }
    Ok(PolarResult {
        unitary_factor: ComplexMatrix::from_inner(y),
        singular: false,
    })
}

/// Unitary polar factor `M·(M†M)^{−1/2}` from an eigendecomposition of `M†M`.
/// Singular when `σ_min < 1e−10`.
pub fn polar_oracle(m: &ComplexMatrix) -> Result<PolarResult> {
    m.require_square()?;
    let n = m.rows();
    let a = m.as_nalgebra();
    let gram = a.adjoint() * a;
    let eig = gram.symmetric_eigen();
    let sing_tol = PolarConfig::default().sing_tol;
    if eig.eigenvalues.iter().any(|&l| l.max(0.0).sqrt() < sing_tol) {
        return Ok(PolarResult::singular(n));
    }
    let v = &eig.eigenvectors;
    let inv_sqrt = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(1.0 / eig.eigenvalues[i].sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let factor = a * (v * inv_sqrt * v.adjoint());
    Ok(PolarResult {
        unitary_factor: ComplexMatrix::from_nalgebra(factor)?,
        singular: false,
    })
}
