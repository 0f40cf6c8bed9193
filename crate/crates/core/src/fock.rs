//! Truncated Bargmann-Fock spaces.
//!
//! `V^N` is spanned by the normalized monomials `z^k / sqrt(k!)` with
//! `|k| <= N`. Basis vectors are ordered by total degree and then
//! lexicographically, so `V^M` is always a leading block of `V^N` for
//! `M <= N` and cropping an operator is a top-left submatrix.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{CMatrix, Error, Result};

/// Upper bound on `dim V^N` accepted by [`FockTruncation::new`].
pub const MAX_DIM: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockTruncation {
    n: usize,
    max_degree: usize,
    basis: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, usize>,
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// `dim V^N = binomial(N + n, n)`; `None` on overflow.
pub fn truncation_dim(n: usize, max_degree: usize) -> Option<usize> {
    let v = binomial((max_degree + n) as u128, n as u128)?;
    usize::try_from(v).ok()
}

fn multi_indices_of_degree(n: usize, degree: u32, out: &mut Vec<Vec<u32>>) {
    // lexicographic ascending
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(n, left - k, prefix, out);
            prefix.pop();
        }
    }
    rec(n, degree, &mut Vec::with_capacity(n), out);
}

impl FockTruncation {
    pub fn new(n: usize, max_degree: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTruncation("fiber dimension n must be >= 1".into()));
        }
        let dim = truncation_dim(n, max_degree)
            .filter(|&d| d <= MAX_DIM)
            .ok_or_else(|| {
                Error::InvalidTruncation(format!("dim V^{max_degree} for n = {n} exceeds {MAX_DIM}"))
            })?;
        let mut basis = Vec::with_capacity(dim);
        for d in 0..=max_degree as u32 {
            multi_indices_of_degree(n, d, &mut basis);
        }
        debug_assert_eq!(basis.len(), dim);
        let lookup = basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Ok(Self { n, max_degree, basis, lookup })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn index_of(&self, k: &[u32]) -> Option<usize> {
        self.lookup.get(k).copied()
    }

    pub fn degree_of(&self, idx: usize) -> usize {
        self.basis[idx].iter().sum::<u32>() as usize
    }

    /// Number of basis vectors of total degree at most `degree`.
    pub fn block_len(&self, degree: usize) -> usize {
        if degree >= self.max_degree {
            return self.dim();
        }
        truncation_dim(self.n, degree).unwrap_or(self.dim())
    }
}

/// A finite matrix on `V^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    trunc: FockTruncation,
    entries: CMatrix,
}

impl FockOperator {
    pub fn new(trunc: FockTruncation, entries: CMatrix) -> Result<Self> {
        let d = trunc.dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "matrix {}x{} on a space of dimension {d}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { trunc, entries })
    }

    pub fn identity(trunc: &FockTruncation) -> Self {
        let d = trunc.dim();
        Self { trunc: trunc.clone(), entries: DMatrix::identity(d, d) }
    }

    pub fn zeros(trunc: &FockTruncation) -> Self {
        let d = trunc.dim();
        Self { trunc: trunc.clone(), entries: DMatrix::zeros(d, d) }
    }

    pub fn diagonal(trunc: &FockTruncation, f: impl Fn(&[u32]) -> Complex64) -> Self {
        let d = trunc.dim();
        let mut m = CMatrix::zeros(d, d);
        for (i, k) in trunc.basis().iter().enumerate() {
            m[(i, i)] = f(k);
        }
        Self { trunc: trunc.clone(), entries: m }
    }

    pub fn truncation(&self) -> &FockTruncation {
        &self.trunc
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.trunc.dim()
    }

    pub fn adjoint(&self) -> Self {
        Self { trunc: self.trunc.clone(), entries: self.entries.adjoint() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { trunc: self.trunc.clone(), entries: &self.entries * s }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { trunc: self.trunc.clone(), entries: &self.entries + &other.entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { trunc: self.trunc.clone(), entries: &self.entries - &other.entries })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { trunc: self.trunc.clone(), entries: &self.entries * &other.entries })
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::DimensionMismatch(format!(
                "operators on V^{} (n={}) and V^{} (n={})",
                self.trunc.max_degree(),
                self.trunc.n(),
                other.trunc.max_degree(),
                other.trunc.n()
            )));
        }
        Ok(())
    }

    /// Compression to `V^max_degree`, or zero-padding when the target is larger.
    pub fn resize(&self, max_degree: usize) -> Result<Self> {
        let trunc = FockTruncation::new(self.trunc.n(), max_degree)?;
        let d = trunc.dim();
        let keep = d.min(self.dim());
        let mut m = CMatrix::zeros(d, d);
        m.view_mut((0, 0), (keep, keep)).copy_from(&self.entries.view((0, 0), (keep, keep)));
        Ok(Self { trunc, entries: m })
    }

    /// Row-major `[re, im]` pairs.
    pub fn to_json_entries(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| {
                let z = self.entries[(i, j)];
                [z.re, z.im]
            }).collect())
            .collect()
    }
}

/// Serializable form of a [`FockOperator`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FockOperatorJson {
    pub n: usize,
    #[serde(rename = "N")]
    pub max_degree: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl From<&FockOperator> for FockOperatorJson {
    fn from(op: &FockOperator) -> Self {
        Self { n: op.trunc.n(), max_degree: op.trunc.max_degree(), entries: op.to_json_entries() }
    }
}

impl TryFrom<FockOperatorJson> for FockOperator {
    type Error = Error;

    fn try_from(j: FockOperatorJson) -> Result<Self> {
        let trunc = FockTruncation::new(j.n, j.max_degree)?;
        let d = trunc.dim();
        if j.entries.len() != d || j.entries.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch("entries do not match dim V^N".into()));
        }
        let m = CMatrix::from_fn(d, d, |i, k| Complex64::new(j.entries[i][k][0], j.entries[i][k][1]));
        FockOperator::new(trunc, m)
    }
}

pub fn build_truncation(n: usize, max_degree: usize) -> Result<FockTruncation> {
    FockTruncation::new(n, max_degree)
}

fn check_axis(trunc: &FockTruncation, axis: usize) -> Result<()> {
    if axis >= trunc.n() {
        return Err(Error::AxisOutOfRange { axis, n: trunc.n() });
    }
    Ok(())
}

/// Raising operator `a_j^dagger` along `axis` (0-based). Vectors leaving `V^N` map to zero.
pub fn creation(trunc: &FockTruncation, axis: usize) -> Result<FockOperator> {
    check_axis(trunc, axis)?;
    let d = trunc.dim();
    let mut m = CMatrix::zeros(d, d);
    for (col, k) in trunc.basis().iter().enumerate() {
        let mut up = k.clone();
        up[axis] += 1;
        if let Some(row) = trunc.index_of(&up) {
            m[(row, col)] = Complex64::from((up[axis] as f64).sqrt());
        }
    }
    Ok(FockOperator { trunc: trunc.clone(), entries: m })
}

/// Lowering operator `a_j`, the adjoint of [`creation`].
pub fn annihilation(trunc: &FockTruncation, axis: usize) -> Result<FockOperator> {
    Ok(creation(trunc, axis)?.adjoint())
}

/// Number operator `sum_j a_j^dagger a_j` (total degree on the diagonal).
pub fn number_operator(trunc: &FockTruncation) -> FockOperator {
    FockOperator::diagonal(trunc, |k| Complex64::from(k.iter().sum::<u32>() as f64))
}

/// Rank-one projector onto the vacuum `e_0`.
pub fn vacuum_projector(trunc: &FockTruncation) -> FockOperator {
    let d = trunc.dim();
    let mut m = CMatrix::zeros(d, d);
    m[(0, 0)] = Complex64::from(1.0);
    FockOperator { trunc: trunc.clone(), entries: m }
}

/// `P^dagger = C P^* C` with `C` coefficientwise conjugation in the number
/// basis, which is the plain matrix transpose.
pub fn transpose_dagger(op: &FockOperator) -> FockOperator {
    FockOperator { trunc: op.trunc.clone(), entries: op.entries.transpose() }
}
