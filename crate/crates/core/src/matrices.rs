//! Fishburn matrices, column-restricted matrices, and the bijection between
//! them.
//!
//! Rows and columns are numbered from 1, row 1 at the top. A Fishburn
//! matrix is upper triangular with no zero row and no zero column. A
//! column-restricted matrix may have zero rows but no zero column, and
//! every column `j + 1` reaches strictly below the topmost nonzero entry of
//! column `j` (`rmax_{j+1} > rmin_j`).
//!
//! [`theta`] sends column-restricted matrices of weight `n` to Fishburn
//! matrices of weight `n` by applying [`alpha`] to the leading `1 x 1`,
//! `2 x 2`, ..., `m x m` blocks in turn; [`theta_inv`] undoes it with
//! [`beta`] in the opposite order. [`theta_bar`] is the variant built on
//! [`alpha_prime`].

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A square upper-triangular matrix of nonnegative integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct TriMatrix {
    dim: usize,
    entries: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    dim: usize,
    rows: Vec<Vec<u32>>,
}

impl TryFrom<RawMatrix> for TriMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        if raw.dim != raw.rows.len() {
            return Err(Error::Input(format!(
                "dim {} does not match {} rows",
                raw.dim,
                raw.rows.len()
            )));
        }
        TriMatrix::new(raw.rows)
    }
}

impl From<TriMatrix> for RawMatrix {
    fn from(a: TriMatrix) -> Self {
        RawMatrix {
            dim: a.dim,
            rows: a.rows(),
        }
    }
}

/// Class membership reported by [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub fishburn: bool,
    pub column_restricted: bool,
}

impl TriMatrix {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::Input("matrix must have at least one row".into()));
        }
        if let Some(r) = rows.iter().position(|row| row.len() != m) {
            return Err(Error::Input(format!(
                "row {} has {} entries, expected {m}",
                r + 1,
                rows[r].len()
            )));
        }
        for (r, row) in rows.iter().enumerate() {
            if let Some(c) = row[..r].iter().position(|&v| v != 0) {
                return Err(Error::Input(format!(
                    "entry ({}, {}) below the diagonal is nonzero",
                    r + 1,
                    c + 1
                )));
            }
        }
        Ok(TriMatrix {
            dim: m,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn zeros(dim: usize) -> Self {
        TriMatrix {
            dim,
            entries: vec![0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry in row `i`, column `j` (1-based).
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[(i - 1) * self.dim + (j - 1)]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[(i - 1) * self.dim + (j - 1)] = v;
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.dim).map(<[u32]>::to_vec).collect()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn weight(&self) -> u64 {
        self.entries.iter().map(|&v| u64::from(v)).sum()
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        (1..=self.dim).all(|j| self.get(i, j) == 0)
    }

    pub fn column_is_zero(&self, j: usize) -> bool {
        (1..=self.dim).all(|i| self.get(i, j) == 0)
    }

    pub fn rmin(&self, j: usize) -> Option<usize> {
        (1..=self.dim).find(|&i| self.get(i, j) > 0)
    }

    pub fn rmax(&self, j: usize) -> Option<usize> {
        (1..=self.dim).rev().find(|&i| self.get(i, j) > 0)
    }

    /// `A[k]`, the leading `k x k` block.
    pub fn leading(&self, k: usize) -> TriMatrix {
        let mut out = TriMatrix::zeros(k);
        for i in 1..=k {
            for j in i..=k {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    /// `self` with its leading block replaced by `block`.
    pub fn with_leading(&self, block: &TriMatrix) -> TriMatrix {
        let mut out = self.clone();
        for i in 1..=block.dim {
            for j in 1..=block.dim {
                out.set(i, j, block.get(i, j));
            }
        }
        out
    }

    pub fn is_fishburn(&self) -> bool {
        classify(self).fishburn
    }

    pub fn is_column_restricted(&self) -> bool {
        classify(self).column_restricted
    }
}

impl fmt::Display for TriMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.entries.chunks(self.dim).enumerate() {
            if r > 0 {
                f.write_str("\n")?;
            }
            for (c, v) in row.iter().enumerate() {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

/// `(rmin_j, rmax_j)`: the smallest and largest rows with a nonzero entry
/// in column `j`.
pub fn column_extremes(a: &TriMatrix, j: usize) -> Result<(usize, usize)> {
    if j == 0 || j > a.dim {
        return Err(Error::Input(format!("column {j} outside 1..={}", a.dim)));
    }
    match (a.rmin(j), a.rmax(j)) {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(Error::Domain(format!("column {j} is zero"))),
    }
}

pub fn classify(a: &TriMatrix) -> Classification {
    let m = a.dim;
    let no_zero_column = (1..=m).all(|j| !a.column_is_zero(j));
    let no_zero_row = (1..=m).all(|i| !a.row_is_zero(i));
    let restricted = no_zero_column && (1..m).all(|j| a.rmax(j + 1).unwrap() > a.rmin(j).unwrap());
    Classification {
        fishburn: no_zero_column && no_zero_row,
        column_restricted: restricted,
    }
}

fn require_fishburn(a: &TriMatrix) -> Result<()> {
    if a.is_fishburn() {
        Ok(())
    } else {
        Err(Error::Domain("matrix is not a Fishburn matrix".into()))
    }
}

/// `index(A)`: the first row whose only nonzero entry sits in the last column.
pub fn index_row(a: &TriMatrix) -> Result<usize> {
    require_fishburn(a)?;
    let m = a.dim;
    Ok((1..=m)
        .find(|&i| (1..m).all(|j| a.get(i, j) == 0))
        .expect("row m is zero outside column m"))
}

/// Checks the hypotheses shared by `alpha` and `alpha_prime` and returns
/// `rmax_m(A)`.
fn alpha_pivot(a: &TriMatrix) -> Result<usize> {
    let m = a.dim;
    let i = a
        .rmax(m)
        .ok_or_else(|| Error::Domain(format!("last column of {m} x {m} matrix is zero")))?;
    if m > 1 {
        if !a.leading(m - 1).is_fishburn() {
            return Err(Error::Domain(format!(
                "A[{}] is not a Fishburn matrix",
                m - 1
            )));
        }
        let lo = a.rmin(m - 1).expect("Fishburn block has no zero column");
        if lo >= i {
            return Err(Error::Domain(format!(
                "rmin_{}(A) = {lo} is not below rmax_{m}(A) = {i}",
                m - 1
            )));
        }
    }
    Ok(i)
}

/// `A[m-1]` with a zero row and zero column inserted at position `i`.
fn insert_zero_line(a: &TriMatrix, i: usize) -> TriMatrix {
    let m = a.dim;
    let mut out = TriMatrix::zeros(m);
    let source = |r: usize| if r < i { r } else { r - 1 };
    for r in (1..=m).filter(|&r| r != i) {
        for c in (r..=m).filter(|&c| c != i) {
            out.set(r, c, a.get(source(r), source(c)));
        }
    }
    out
}

/// The transformation `alpha`.
///
/// With `i = rmax_m(A) < m`: insert a zero row and column at position `i`
/// of `A[m-1]`, copy rows `1..i-1` of the last column into the new column,
/// then overwrite rows `1..i` of the last column with those of `A`.
pub fn alpha(a: &TriMatrix) -> Result<TriMatrix> {
    let i = alpha_pivot(a)?;
    let m = a.dim;
    if i == m {
        return Ok(a.clone());
    }
    let mut out = insert_zero_line(a, i);
    for r in 1..i {
        let v = out.get(r, m);
        out.set(r, i, v);
    }
    for r in 1..=i {
        out.set(r, m, a.get(r, m));
    }
    Ok(out)
}

/// The transformation `beta`, inverse to `alpha`.
///
/// With `i = index(A) < m`: overwrite rows `1..i` of the last column with
/// rows `1..i` of column `i`, delete row and column `i`, append a zero row
/// and column, then put the original top `i` entries of the last column
/// back into the new last column.
pub fn beta(a: &TriMatrix) -> Result<TriMatrix> {
    let i = index_row(a)?;
    let m = a.dim;
    if i == m {
        return Ok(a.clone());
    }
    let mut b = a.clone();
    for r in 1..=i {
        b.set(r, m, a.get(r, i));
    }
    let mut c = TriMatrix::zeros(m);
    let source = |r: usize| if r < i { r } else { r + 1 };
    for r in 1..m {
        for col in r..m {
            c.set(r, col, b.get(source(r), source(col)));
        }
    }
    for r in 1..=i {
        c.set(r, m, a.get(r, m));
    }
    Ok(c)
}

/// The transformation `alpha'`.
///
/// Builds the same padded matrix `A'` as [`alpha`]. Let `c_1 < ... < c_l`
/// be the columns `j > i` of `A'` with a nonzero entry in rows `1..i-1`
/// and `c_0 = i`; rows `1..i` of column `c_b` of `A'` are copied into
/// column `c_{b-1}`, reading every source from `A'` before any copy. The
/// top `i` entries of the last column are then replaced by those of `A`.
pub fn alpha_prime(a: &TriMatrix) -> Result<TriMatrix> {
    let i = alpha_pivot(a)?;
    let m = a.dim;
    if i == m {
        return Ok(a.clone());
    }
    let padded = insert_zero_line(a, i);
    let mut chain = vec![i];
    chain.extend((i + 1..=m).filter(|&j| (1..i).any(|r| padded.get(r, j) > 0)));
    let mut out = padded.clone();
    for w in chain.windows(2) {
        let (target, source) = (w[0], w[1]);
        for r in 1..=i {
            out.set(r, target, padded.get(r, source));
        }
    }
    for r in 1..=i {
        out.set(r, m, a.get(r, m));
    }
    Ok(out)
}

/// Which local transformation [`apply_leading`] applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    Alpha,
    Beta,
    AlphaPrime,
}

impl Transform {
    pub fn apply(self, a: &TriMatrix) -> Result<TriMatrix> {
        match self {
            Transform::Alpha => alpha(a),
            Transform::Beta => beta(a),
            Transform::AlphaPrime => alpha_prime(a),
        }
    }
}

/// Applies `t` to the leading `k x k` block, leaving other entries alone.
pub fn apply_leading(a: &TriMatrix, k: usize, t: Transform) -> Result<TriMatrix> {
    if k == 0 || k > a.dim {
        return Err(Error::Input(format!(
            "block size {k} outside 1..={}",
            a.dim
        )));
    }
    let block = t.apply(&a.leading(k)).map_err(|e| Error::Stage {
        k,
        source: Box::new(e),
    })?;
    Ok(a.with_leading(&block))
}

fn require_column_restricted(a: &TriMatrix) -> Result<()> {
    if a.is_column_restricted() {
        Ok(())
    } else {
        Err(Error::Domain("matrix is not column-restricted".into()))
    }
}

/// `A^(0), A^(1), ..., A^(m)` where `A^(k)` applies `t` to the leading
/// `k x k` block of `A^(k-1)`.
fn forward_stages(a: &TriMatrix, t: Transform) -> Result<Vec<TriMatrix>> {
    require_column_restricted(a)?;
    let mut stages = Vec::with_capacity(a.dim + 1);
    stages.push(a.clone());
    for k in 1..=a.dim {
        let next = apply_leading(stages.last().unwrap(), k, t)?;
        stages.push(next);
    }
    Ok(stages)
}

/// The stages `A^(0) = A, A^(1), ..., A^(m) = theta(A)`.
pub fn theta_stages(a: &TriMatrix) -> Result<Vec<TriMatrix>> {
    forward_stages(a, Transform::Alpha)
}

pub fn theta(a: &TriMatrix) -> Result<TriMatrix> {
    Ok(theta_stages(a)?.pop().unwrap())
}

/// Inverse of [`theta`]: `beta` on the leading `m, m-1, ..., 1` blocks.
pub fn theta_inv(b: &TriMatrix) -> Result<TriMatrix> {
    require_fishburn(b)?;
    (1..=b.dim)
        .rev()
        .try_fold(b.clone(), |cur, k| apply_leading(&cur, k, Transform::Beta))
}

pub fn theta_bar(a: &TriMatrix) -> Result<TriMatrix> {
    Ok(forward_stages(a, Transform::AlphaPrime)?.pop().unwrap())
}

/// Which family an enumerator generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Fishburn,
    ColumnRestricted,
}

/// Depth-first filler of the upper triangle in row-major order, trying
/// larger values first.
#[derive(Clone)]
struct Filler {
    family: Family,
    m: usize,
    cells: Vec<(usize, usize)>,
    grid: TriMatrix,
    remaining: u32,
    row_has: Vec<bool>,
    col_has: Vec<bool>,
    rmin: Vec<usize>,
    rmax: Vec<usize>,
}

impl Filler {
    fn new(family: Family, m: usize, weight: u32) -> Self {
        let cells = (1..=m).flat_map(|r| (r..=m).map(move |c| (r, c))).collect();
        Filler {
            family,
            m,
            cells,
            grid: TriMatrix::zeros(m),
            remaining: weight,
            row_has: vec![false; m + 1],
            col_has: vec![false; m + 1],
            rmin: vec![0; m + 1],
            rmax: vec![0; m + 1],
        }
    }

    fn lower_bound(&self) -> u32 {
        let cols = self.col_has[1..].iter().filter(|&&h| !h).count();
        let rows = match self.family {
            Family::Fishburn => self.row_has[1..].iter().filter(|&&h| !h).count(),
            Family::ColumnRestricted => 0,
        };
        cols.max(rows) as u32
    }

    /// Constraints that become decidable once cell `(r, c)` is filled.
    fn closes_ok(&self, r: usize, c: usize) -> bool {
        if c == self.m && self.family == Family::Fishburn && !self.row_has[r] {
            return false;
        }
        if r == c {
            if !self.col_has[c] {
                return false;
            }
            if self.family == Family::ColumnRestricted && c > 1 && self.rmax[c] <= self.rmin[c - 1]
            {
                return false;
            }
        }
        true
    }

    fn run(&mut self, pos: usize, stop: usize, emit: &mut dyn FnMut(&Filler)) {
        if pos == stop {
            if pos < self.cells.len() || self.remaining == 0 {
                emit(self);
            }
            return;
        }
        let (r, c) = self.cells[pos];
        let saved = (self.row_has[r], self.col_has[c], self.rmin[c], self.rmax[c]);
        for v in (0..=self.remaining).rev() {
            self.grid.set(r, c, v);
            self.remaining -= v;
            if v > 0 {
                self.row_has[r] = true;
                self.col_has[c] = true;
                if self.rmin[c] == 0 {
                    self.rmin[c] = r;
                }
                self.rmax[c] = r;
            }
            if self.closes_ok(r, c) && self.remaining >= self.lower_bound() {
                self.run(pos + 1, stop, emit);
            }
            self.remaining += v;
            (self.row_has[r], self.col_has[c], self.rmin[c], self.rmax[c]) = saved;
        }
        self.grid.set(r, c, 0);
    }
}

fn enumerate_family(n: usize, family: Family) -> Result<Vec<TriMatrix>> {
    if n == 0 {
        return Err(Error::Input("weight must be at least 1".into()));
    }
    let weight = u32::try_from(n).map_err(|_| Error::Input(format!("weight {n} too large")))?;
    let mut out = Vec::new();
    for m in 1..=n {
        let mut root = Filler::new(family, m, weight);
        let mut partials = Vec::new();
        root.run(0, m, &mut |f| partials.push(f.clone()));
        let total = root.cells.len();
        let parts: Vec<Vec<TriMatrix>> = partials
            .into_par_iter()
            .map(|mut f| {
                let mut found = Vec::new();
                f.run(m, total, &mut |g| found.push(g.grid.clone()));
                found
            })
            .collect();
        out.extend(parts.into_iter().flatten());
    }
    Ok(out)
}

/// All Fishburn matrices of weight `n`.
///
/// Ordered by dimension, then by row-major entries in decreasing
/// lexicographic order (the order in which `M_3` is usually displayed).
pub fn enumerate_fishburn(n: usize) -> Result<Vec<TriMatrix>> {
    enumerate_family(n, Family::Fishburn)
}

/// All column-restricted matrices of weight `n`, ordered as in
/// [`enumerate_fishburn`].
pub fn enumerate_column_restricted(n: usize) -> Result<Vec<TriMatrix>> {
    enumerate_family(n, Family::ColumnRestricted)
}
