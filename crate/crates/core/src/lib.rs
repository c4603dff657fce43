//! Block `D·X·Z` decompositions of unitary matrices.
//!
//! A unitary `U` of size `n = r·m` is factored as `U = D·X·Z` where `D` is
//! block-diagonal, `Z` is block-diagonal with leading block `I`, and every
//! block row sum and block column sum of `X` is `I`. General unitaries go
//! through [`sinkhorn::decompose`]; permutation and complex permutation
//! matrices have the exact constructions in [`permdecomp`].

pub mod error;
pub mod matcore;
pub mod permdecomp;
pub mod polar;
pub mod reference;
pub mod sinkhorn;
pub mod structure;

pub use error::{DxzError, Result};
pub use matcore::{BlockPartition, Complex64, ComplexMatrix};
pub use permdecomp::Permutation;
pub use sinkhorn::{decompose, psi, verify_decomposition, DxzDecomposition, IterationConfig};
