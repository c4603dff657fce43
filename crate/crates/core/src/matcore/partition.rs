use serde::Serialize;

use crate::error::{DxzError, Result};

/// Block grid of an `n x n` matrix into `r x r` blocks of size `m x m`.
///
/// Stores `r = n / m` and `q = n - m` alongside the defining pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BlockPartition {
    n: usize,
    m: usize,
    r: usize,
    q: usize,
}

impl BlockPartition {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m == 0 || n == 0 || m > n || n % m != 0 {
            return Err(DxzError::InvalidPartition { n, m });
        }
        Ok(Self {
            n,
            m,
            r: n / m,
            q: n - m,
        })
    }

    /// Matrix dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Block size.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of block rows (and block columns).
    pub fn r(&self) -> usize {
        self.r
    }

    /// Size of the trailing core block, `n - m`.
    pub fn q(&self) -> usize {
        self.q
    }

    /// All block sizes `m` that divide `n`, ascending.
    pub fn divisors(n: usize) -> Vec<usize> {
        (1..=n).filter(|m| n % m == 0).collect()
    }
}
