//! Structure around the iteration: group membership, the Fourier form
//! `T⁻¹XT = I ⊕ G`, conjugate decompositions, biunitary vectors and the
//! closed-form U(2) factorization.

mod biunitary;
mod conjugate;
mod fourier;
mod groups;
mod u2;

pub use biunitary::{biunitary_from_dxz, normalize_biunitary, xu_from_biunitary, BiunitaryVector};
pub use conjugate::{conjugate_decompose, conjugate_report, ConjugateDecomposition, ConjugateReport};
pub use fourier::{
    circulant_residual, core_to_xu, default_circulant_tol, fourier_split, is_block_circulant, xu_to_core,
    FourierSplit,
};
pub use groups::{membership, membership_residual, Group};
pub use u2::{u2_closed_form, u2_factors, u2_parameters, U2Parameters};
