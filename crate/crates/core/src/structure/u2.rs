use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{DxzError, Result};
use crate::matcore::{BlockPartition, Complex64, ComplexMatrix};
use crate::sinkhorn::{DxzDecomposition, INPUT_UNITARY_TOL};

/// Below this modulus an off-diagonal (or diagonal) entry counts as zero and
/// the angle it would carry is fixed by convention.
const DEGENERATE: f64 = 1e-13;

/// Angles of
/// `[[cos φ·e^{i(θ+ψ)}, sin φ·e^{i(θ+χ)}], [−sin φ·e^{i(θ−χ)}, cos φ·e^{i(θ−ψ)}]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct U2Parameters {
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
    pub chi: f64,
}

fn cis(a: f64) -> Complex64 {
    Complex64::from_polar(1.0, a)
}

/// Wraps into `(−π, π]`.
fn wrap(a: f64) -> f64 {
    let w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

impl U2Parameters {
    pub fn matrix(&self) -> ComplexMatrix {
        let (s, c) = self.phi.sin_cos();
        let Self { theta, psi, chi, .. } = *self;
        ComplexMatrix::from_rows(&[
            vec![cis(theta + psi) * c, cis(theta + chi) * s],
            vec![-cis(theta - chi) * s, cis(theta - psi) * c],
        ])
        .expect("2x2 from finite angles")
    }
}

/// Extracts `θ, φ, ψ, χ` with `φ ∈ [0, π/2]` and all other angles in
/// `(−π, π]`. When `φ = 0` the pair is resolved with `χ := ψ`; when
/// `φ = π/2` with `ψ := 0`.
pub fn u2_parameters(u: &ComplexMatrix) -> Result<U2Parameters> {
    if u.shape() != (2, 2) {
        return Err(DxzError::DimensionMismatch {
            op: "u2_parameters",
            left: u.shape(),
            right: (2, 2),
        });
    }
    u.require_unitary(INPUT_UNITARY_TOL)?;
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let theta = det.arg() / 2.0;
    let (a, b) = (u[(0, 0)], u[(0, 1)]);
    let phi = b.norm().atan2(a.norm());
    let (psi, chi) = if b.norm() <= DEGENERATE {
        let psi = wrap(a.arg() - theta);
        (psi, psi)
    } else if a.norm() <= DEGENERATE {
        (0.0, wrap(b.arg() - theta))
    } else {
        (wrap(a.arg() - theta), wrap(b.arg() - theta))
    };
    Ok(U2Parameters {
        theta: wrap(theta),
        phi,
        psi,
        chi,
    })
}

/// The closed-form factors `(D, X, Z)` for the given angles.
pub fn u2_factors(a: &U2Parameters) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let d = ComplexMatrix::diagonal(&[
        cis(a.theta + a.phi + a.psi),
        Complex64::i() * cis(a.theta + a.phi - a.chi),
    ]);
    let e = cis(-2.0 * a.phi);
    let one = Complex64::new(1.0, 0.0);
    let (p, m) = ((one + e) * 0.5, (one - e) * 0.5);
    let x = ComplexMatrix::from_rows(&[vec![p, m], vec![m, p]]).expect("2x2");
    let z = ComplexMatrix::diagonal(&[one, -Complex64::i() * cis(a.chi - a.psi)]);
    (d, x, z)
}

/// Exact `m = 1` factorization of a 2x2 unitary.
pub fn u2_closed_form(u: &ComplexMatrix) -> Result<DxzDecomposition> {
    let params = u2_parameters(u)?;
    let (d, x, z) = u2_factors(&params);
    DxzDecomposition::exact(d, x, z, BlockPartition::new(2, 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{haar_random_unitary, RandomSpec};
    use crate::sinkhorn::verify_decomposition;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn identity_angles_and_factors() {
        let eye = ComplexMatrix::identity(2);
        let a = u2_parameters(&eye).unwrap();
        assert!(close(a.theta, 0.0) && close(a.phi, 0.0) && close(a.psi, 0.0) && close(a.chi, 0.0));
        let dec = u2_closed_form(&eye).unwrap();
        let i = Complex64::i();
        let want_d = ComplexMatrix::diagonal(&[1.0.into(), i]);
        let want_z = ComplexMatrix::diagonal(&[1.0.into(), -i]);
        assert!(dec.d.frobenius_distance(&want_d).unwrap() < 1e-15);
        assert!(dec.x.frobenius_distance(&eye).unwrap() < 1e-15);
        assert!(dec.z.frobenius_distance(&want_z).unwrap() < 1e-15);
    }

    #[test]
    fn rotation_by_quarter_turn() {
        let u = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let a = u2_parameters(&u).unwrap();
        assert!(close(a.phi, PI / 2.0) && close(a.theta, 0.0) && close(a.chi, 0.0) && a.psi == 0.0);
        assert!(a.matrix().frobenius_distance(&u).unwrap() < 1e-12);
    }

    #[test]
    fn fixed_angles_multiply_out() {
        let a = U2Parameters {
            theta: 0.3,
            phi: 0.7,
            psi: 1.1,
            chi: -0.4,
        };
        let (d, x, z) = u2_factors(&a);
        assert!((&(&d * &x) * &z).frobenius_distance(&a.matrix()).unwrap() < 1e-12);
    }

    #[test]
    fn core_line_sums_are_one() {
        for phi in [0.0, 0.1, 0.7, 1.2, PI / 2.0] {
            let (_, x, _) = u2_factors(&U2Parameters {
                theta: 0.0,
                phi,
                psi: 0.0,
                chi: 0.0,
            });
            assert!(x.max_line_sum_residual(&BlockPartition::new(2, 1).unwrap()).unwrap() < 1e-15);
        }
    }

    #[test]
    fn haar_round_trip() {
        for seed in 0..200 {
            let u = haar_random_unitary(&RandomSpec::new(2, seed));
            let a = u2_parameters(&u).unwrap();
            assert!((0.0..=PI / 2.0).contains(&a.phi));
            assert!(a.theta > -PI && a.theta <= PI);
            assert!(a.matrix().frobenius_distance(&u).unwrap() < 1e-10);
            let dec = u2_closed_form(&u).unwrap();
            assert!(verify_decomposition(&u, &dec, 1e-9).unwrap().pass);
        }
    }

    #[test]
    fn diagonal_and_antidiagonal_inputs() {
        let i = Complex64::i();
        for u in [
            ComplexMatrix::diagonal(&[cis(0.4), cis(-1.3)]),
            ComplexMatrix::from_rows(&[vec![0.0.into(), cis(0.5)], vec![cis(2.0), 0.0.into()]]).unwrap(),
            ComplexMatrix::from_rows(&[vec![i, 0.0.into()], vec![0.0.into(), i]]).unwrap(),
        ] {
            let a = u2_parameters(&u).unwrap();
            assert!(a.matrix().frobenius_distance(&u).unwrap() < 1e-10);
            assert!(verify_decomposition(&u, &u2_closed_form(&u).unwrap(), 1e-9).unwrap().pass);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(u2_parameters(&ComplexMatrix::identity(3)).is_err());
        assert!(u2_parameters(&ComplexMatrix::zeros(2, 2)).is_err());
    }
}
