use std::fmt;
use std::str::FromStr;

use crate::error::DxzError;
use crate::matcore::{BlockPartition, ComplexMatrix};

/// The three matrix groups attached to a block partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    /// Unitary and block-diagonal.
    Du,
    /// `Du` with leading block `I`.
    Zu,
    /// Unitary with every block row sum and block column sum equal to `I`.
    Xu,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::Du => "DU",
            Group::Zu => "ZU",
            Group::Xu => "XU",
        })
    }
}

impl FromStr for Group {
    type Err = DxzError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "DU" => Ok(Group::Du),
            "ZU" => Ok(Group::Zu),
            "XU" => Ok(Group::Xu),
            _ => Err(DxzError::InvalidInput(format!("unknown group {s:?}"))),
        }
    }
}

/// Largest defining residual of `m` for `group`; `None` if `m` is not `n×n`.
pub fn membership_residual(m: &ComplexMatrix, p: &BlockPartition, group: Group) -> Option<f64> {
    if m.shape() != (p.n(), p.n()) {
        return None;
    }
    let unitary = m.unitarity_residual().ok()?;
    let structural = match group {
        Group::Du => m.off_block_diagonal_norm(p).ok()?,
        Group::Zu => {
            let lead = m.block0(p, 0, 0).frobenius_distance(&ComplexMatrix::identity(p.m())).ok()?;
            m.off_block_diagonal_norm(p).ok()?.max(lead)
        }
        Group::Xu => m.max_line_sum_residual(p).ok()?,
    };
    Some(unitary.max(structural))
}

/// Whether `m` belongs to `group` with every residual at most `tol`.
pub fn membership(m: &ComplexMatrix, p: &BlockPartition, group: Group, tol: f64) -> bool {
    membership_residual(m, p, group).is_some_and(|r| r <= tol)
}
