//! Exact factorization of permutation and complex permutation matrices.
//!
//! Every `1` of `P` is an edge from its block row to its block column; the
//! resulting bipartite multigraph is `m`-regular, so it splits into `m`
//! perfect matchings. Colouring the edges by matching index gives the three
//! permutation factors directly.

use std::fmt;
use std::str::FromStr;

use crate::error::{DxzError, Result};
use crate::matcore::{BlockPartition, Complex64, ComplexMatrix};
use crate::sinkhorn::DxzDecomposition;

/// Nonzero threshold and unit-modulus tolerance for complex permutations.
pub const PHASE_TOL: f64 = 1e-10;

/// A permutation of `0..n`; row `j` of its matrix has its `1` in column
/// `image[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// From zero-based images.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        if image.is_empty() {
            return Err(DxzError::InvalidPermutation("empty permutation".into()));
        }
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || std::mem::replace(&mut seen[i], true) {
                return Err(DxzError::InvalidPermutation(format!(
                    "{:?} is not a bijection on 1..={}",
                    image.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    image.len()
                )));
            }
        }
        Ok(Self { image })
    }

    /// From one-line notation with values in `1..=n`.
    pub fn from_one_based(image: &[usize]) -> Result<Self> {
        if image.contains(&0) {
            return Err(DxzError::InvalidPermutation("values start at 1".into()));
        }
        Self::new(image.iter().map(|i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self { image: (0..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// Zero-based images.
    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.image.iter().map(|i| i + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.n()];
        for (j, &i) in self.image.iter().enumerate() {
            inv[i] = j;
        }
        Self { image: inv }
    }

    /// The permutation whose matrix is `self.to_matrix() · rhs.to_matrix()`.
    pub fn then(&self, rhs: &Permutation) -> Self {
        assert_eq!(self.n(), rhs.n(), "permutation sizes differ");
        Self {
            image: self.image.iter().map(|&i| rhs.image[i]).collect(),
        }
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n(), self.n(), |j, i| {
            Complex64::new(if self.image[j] == i { 1.0 } else { 0.0 }, 0.0)
        })
    }

    /// Reads a 0/1 matrix with exactly one `1` per row and column.
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        m.require_square()?;
        let mut image = Vec::with_capacity(m.rows());
        for j in 0..m.rows() {
            let mut col = None;
            for i in 0..m.cols() {
                let z = m[(j, i)];
                if z == Complex64::new(1.0, 0.0) && col.replace(i).is_none() {
                    continue;
                }
                if z != Complex64::new(0.0, 0.0) {
                    return Err(DxzError::InvalidPermutation(format!("row {} is not a unit row", j + 1)));
                }
            }
            image.push(col.ok_or_else(|| DxzError::InvalidPermutation(format!("row {} is zero", j + 1)))?);
        }
        Self::new(image)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Permutation {
    type Err = DxzError;

    /// One-line notation, values `1..=n` separated by spaces or commas.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| DxzError::InvalidPermutation(format!("{t:?} is not a positive integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_based(&values)
    }
}

/// Number of ones of `P` in each block `(j, k)`.
pub fn block_degree_matrix(perm: &Permutation, m: usize) -> Result<Vec<Vec<usize>>> {
    let p = BlockPartition::new(perm.n(), m)?;
    let mut deg = vec![vec![0; p.r()]; p.r()];
    for (a, &b) in perm.image.iter().enumerate() {
        deg[a / m][b / m] += 1;
    }
    Ok(deg)
}

/// A colour in `0..m` for each row of `P` (equivalently each of its ones).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    pub m: usize,
    pub color: Vec<usize>,
}

impl EdgeColoring {
    /// Every block row and every block column uses each colour once.
    pub fn is_proper(&self, perm: &Permutation) -> bool {
        let m = self.m;
        if m == 0 || self.color.len() != perm.n() || perm.n() % m != 0 {
            return false;
        }
        let r = perm.n() / m;
        let mut rows = vec![vec![false; m]; r];
        let mut cols = vec![vec![false; m]; r];
        for (a, &c) in self.color.iter().enumerate() {
            if c >= m
                || std::mem::replace(&mut rows[a / m][c], true)
                || std::mem::replace(&mut cols[perm.image[a] / m][c], true)
            {
                return false;
            }
        }
        true
    }
}

/// Kuhn's augmenting-path search for a perfect matching of block rows to
/// block columns, using only pairs with `avail[j][k] > 0`.
fn perfect_matching(avail: &[Vec<usize>]) -> Option<Vec<usize>> {
    let r = avail.len();
    let mut owner: Vec<Option<usize>> = vec![None; r];

    fn augment(j: usize, avail: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for k in 0..avail.len() {
            if avail[j][k] == 0 || seen[k] {
                continue;
            }
            seen[k] = true;
            if owner[k].is_none_or(|other| augment(other, avail, seen, owner)) {
                owner[k] = Some(j);
                return true;
            }
        }
        false
    }

    for j in 0..r {
        let mut seen = vec![false; r];
        if !augment(j, avail, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut mate = vec![0; r];
    for (k, j) in owner.into_iter().enumerate() {
        mate[j?] = k;
    }
    Some(mate)
}

/// Proper `m`-colouring of the block multigraph of `P`, relabelled so that in
/// block column 1 each edge's colour equals its intra-column index.
pub fn edge_color(perm: &Permutation, m: usize) -> Result<EdgeColoring> {
    let p = BlockPartition::new(perm.n(), m)?;
    let r = p.r();
    // pending[j][k]: uncoloured rows with an edge j → k, ascending.
    let mut pending = vec![vec![Vec::new(); r]; r];
    for (a, &b) in perm.image.iter().enumerate() {
        pending[a / m][b / m].push(a);
    }
    let mut color = vec![usize::MAX; perm.n()];
    for c in 0..m {
        let avail: Vec<Vec<usize>> = pending.iter().map(|row| row.iter().map(Vec::len).collect()).collect();
        let mate = perfect_matching(&avail)
            .ok_or_else(|| DxzError::Inconsistent("regular block multigraph without perfect matching".into()))?;
        for (j, &k) in mate.iter().enumerate() {
            let a = pending[j][k].remove(0);
            color[a] = c;
        }
    }

    let mut relabel = vec![usize::MAX; m];
    for (a, &b) in perm.image.iter().enumerate() {
        if b < m {
            relabel[color[a]] = b;
        }
    }
    for c in &mut color {
        *c = relabel[*c];
    }
    Ok(EdgeColoring { m, color })
}

/// Permutation factors `P = D·X·Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermFactors {
    pub d: Permutation,
    pub x: Permutation,
    pub z: Permutation,
    pub m: usize,
}

impl PermFactors {
    pub fn product(&self) -> Permutation {
        self.d.then(&self.x).then(&self.z)
    }
}

/// `D` sends the colour-`i` one of block row `j` to intra-row `i`, `X` routes
/// colour `i` between blocks along the diagonal position `(i, i)`, and `Z`
/// sends intra-column `i` of block column `k` to the colour-`i` one.
pub fn perm_factors(perm: &Permutation, m: usize) -> Result<PermFactors> {
    let coloring = edge_color(perm, m)?;
    let n = perm.n();
    let mut d = vec![0; n];
    let mut x = vec![0; n];
    let mut z = vec![0; n];
    for (a, &b) in perm.image.iter().enumerate() {
        let c = coloring.color[a];
        let (j, k) = (a / m, b / m);
        d[a] = j * m + c;
        x[j * m + c] = k * m + c;
        z[k * m + c] = b;
    }
    let factors = PermFactors {
        d: Permutation::new(d)?,
        x: Permutation::new(x)?,
        z: Permutation::new(z)?,
        m,
    };
    if factors.product() != *perm {
        return Err(DxzError::Inconsistent("permutation factors do not multiply back".into()));
    }
    Ok(factors)
}

pub fn perm_dxz(perm: &Permutation, m: usize) -> Result<DxzDecomposition> {
    let f = perm_factors(perm, m)?;
    DxzDecomposition::exact(
        f.d.to_matrix(),
        f.x.to_matrix(),
        f.z.to_matrix(),
        BlockPartition::new(perm.n(), m)?,
    )
}

/// Splits a complex permutation matrix as `U = D′·P` with `D′` the diagonal
/// of phases. Entries of modulus at most [`PHASE_TOL`] count as zero.
pub fn split_complex_permutation(u: &ComplexMatrix) -> Result<(Vec<Complex64>, Permutation)> {
    u.require_square()?;
    let n = u.rows();
    let mut phases = Vec::with_capacity(n);
    let mut image = Vec::with_capacity(n);
    for j in 0..n {
        let nonzero: Vec<usize> = (0..n).filter(|&i| u[(j, i)].norm() > PHASE_TOL).collect();
        let &[i] = nonzero.as_slice() else {
            return Err(DxzError::InvalidPermutation(format!(
                "row {} has {} nonzero entries",
                j + 1,
                nonzero.len()
            )));
        };
        let z = u[(j, i)];
        if (z.norm() - 1.0).abs() > PHASE_TOL {
            return Err(DxzError::InvalidPermutation(format!(
                "entry ({}, {}) has modulus {}",
                j + 1,
                i + 1,
                z.norm()
            )));
        }
        phases.push(z);
        image.push(i);
    }
    Ok((phases, Permutation::new(image)?))
}

/// `U = D′·P = (D′·D″)·X·Z` with `P = D″·X·Z` from [`perm_dxz`].
pub fn complex_perm_dxz(u: &ComplexMatrix, m: usize) -> Result<DxzDecomposition> {
    let (phases, perm) = split_complex_permutation(u)?;
    let inner = perm_dxz(&perm, m)?;
    let d = &ComplexMatrix::diagonal(&phases) * &inner.d;
    DxzDecomposition::exact(d, inner.x, inner.z, inner.partition)
}
