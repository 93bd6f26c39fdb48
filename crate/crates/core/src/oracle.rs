//! Brute-force definitions used to cross-check the fast code paths.
//!
//! Everything here filters the full ambient set (all sequences below the
//! staircase, all permutations, all inversion sequences, all
//! upper-triangular matrices of a given weight) through predicates written
//! straight from the definitions. None of the predicates call into
//! [`crate::sequences`], [`crate::permutations`], [`crate::posets`] or
//! [`crate::matrices`]; those modules are only used to wrap results.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{check_limit, Error, Result};
use crate::matrices::{self, TriMatrix};
use crate::permutations::{self, Permutation};
use crate::posets::{self, FactorialPoset};
use crate::sequences::{self, DSequence};

pub const MAX_SEQUENCE_N: usize = 9;
pub const MAX_PERMUTATION_N: usize = 9;
pub const MAX_POSET_N: usize = 8;
pub const MAX_MATRIX_N: usize = 7;

// ---------------------------------------------------------------------------
// Ambient sets

/// All permutations of `1..=n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (1..=n).collect();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// All `a_1 .. a_n` with `0 <= a_i <= i - 1`, lexicographically.
pub fn all_inversion_sequences(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    loop {
        out.push(cur.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < i {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Every way to write `total` as an ordered sum of `parts` nonnegative terms.
fn weak_compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(left: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=left {
            cur.push(v);
            go(left - v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

/// All `m x m` upper-triangular matrices of weight `n`, as dense row lists.
fn all_upper_triangular(n: u32, m: usize) -> Vec<Vec<Vec<u32>>> {
    let cells = m * (m + 1) / 2;
    weak_compositions(n, cells)
        .into_iter()
        .map(|flat| {
            let mut rows = vec![vec![0; m]; m];
            let mut it = flat.into_iter();
            for (r, row) in rows.iter_mut().enumerate() {
                for cell in row.iter_mut().skip(r) {
                    *cell = it.next().unwrap();
                }
            }
            rows
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Sequences

/// Direct reading of the definition: `x_1 = 0` and each later entry is at
/// most one more than the number of `d`-ascents counted over its prefix.
pub fn naive_is_d_ascent_sequence(x: &[i64], d: u32) -> bool {
    if x.is_empty() || x[0] != 0 {
        return false;
    }
    for i in 1..x.len() {
        let mut count = 0i64;
        for j in 0..i.saturating_sub(1) {
            if x[j + 1] + i64::from(d) > x[j] {
                count += 1;
            }
        }
        if x[i] < 0 || x[i] > count + 1 {
            return false;
        }
    }
    true
}

/// `A^d_n` by filtering every `x` with `0 <= x_i <= i - 1`, a superset
/// because a prefix of length `i - 1` has at most `i - 2` ascents.
pub fn filter_sequences(n: usize, d: u32) -> Result<Vec<DSequence>> {
    check_positive(n)?;
    check_limit("sequence oracle", MAX_SEQUENCE_N, n)?;
    all_inversion_sequences(n)
        .into_par_iter()
        .map(|a| a.into_iter().map(|v| v as i64).collect::<Vec<_>>())
        .filter(|x| naive_is_d_ascent_sequence(x, d))
        .map(DSequence::new)
        .collect()
}

// ---------------------------------------------------------------------------
// Permutations

fn index_of(p: &[usize], v: usize) -> usize {
    p.iter().position(|&w| w == v).unwrap()
}

/// `Act(pi)` following the classification procedure literally.
pub fn naive_active_permutation(p: &[usize], d: u32) -> Vec<usize> {
    let mut act = Vec::new();
    if p.is_empty() {
        return act;
    }
    act.push(1);
    for k in 2..=p.len() {
        let (ik, ik1) = (index_of(p, k), index_of(p, k - 1));
        let inactive = ik < ik1 && {
            let between = (ik + 1..ik1)
                .filter(|&t| p[t] < k - 1 && act.contains(&p[t]))
                .count();
            between >= d as usize
        };
        if !inactive {
            act.push(k);
        }
    }
    act
}

pub fn naive_is_difference_permutation(p: &[usize], d: u32) -> bool {
    let act = naive_active_permutation(p, d);
    (0..p.len().saturating_sub(1)).all(|i| p[i + 1] <= p[i] || act.contains(&p[i]))
}

/// Index subsets of `0..n` of size `k`, as sorted position lists.
fn position_subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n)
        .filter(move |mask| mask.count_ones() as usize == k)
        .map(move |mask| (0..n).filter(|&i| mask & (1 << i) != 0).collect())
}

/// Whether `pi` has positions `i_1 < ... < i_m` with `i_2 = i_1 + 1`,
/// values `pi(i_3) < ... < pi(i_m) = pi(i_1) - 1` and `pi(i_1) < pi(i_2)`.
pub fn naive_contains_tau(p: &[usize], m: usize) -> bool {
    if m > p.len() {
        return false;
    }
    position_subsets(p.len(), m).any(|idx| {
        let s: Vec<usize> = idx.iter().map(|&i| p[i]).collect();
        idx[1] == idx[0] + 1
            && s[0] < s[1]
            && s[2..].windows(2).all(|w| w[0] < w[1])
            && s[m - 1] + 1 == s[0]
    })
}

/// Whether `pi` contains some pattern `(d+2)|(d+3) mu (d+1)`: an adjacent
/// ascent `b c`, then `d` active values below `b - 1` in any relative
/// order, then `b - 1` itself.
pub fn naive_contains_sigma(p: &[usize], d: u32) -> bool {
    let k = d as usize + 3;
    if k > p.len() {
        return false;
    }
    let act = naive_active_permutation(p, d);
    position_subsets(p.len(), k).any(|idx| {
        let s: Vec<usize> = idx.iter().map(|&i| p[i]).collect();
        let last = s[k - 1];
        idx[1] == idx[0] + 1
            && s[0] < s[1]
            && last + 1 == s[0]
            && s[2..k - 1].iter().all(|&v| v < last && act.contains(&v))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermutationFilter {
    DifferenceD,
    AvoidsTau,
    AvoidsSigma,
}

/// Filters all of `S_n`. `AvoidsTau` uses the pattern of length `d + 3`.
pub fn filter_permutations(
    n: usize,
    filter: PermutationFilter,
    d: u32,
) -> Result<Vec<Permutation>> {
    check_positive(n)?;
    check_limit("permutation oracle", MAX_PERMUTATION_N, n)?;
    all_permutations(n)
        .into_par_iter()
        .filter(|p| match filter {
            PermutationFilter::DifferenceD => naive_is_difference_permutation(p, d),
            PermutationFilter::AvoidsTau => !naive_contains_tau(p, d as usize + 3),
            PermutationFilter::AvoidsSigma => !naive_contains_sigma(p, d),
        })
        .map(Permutation::new)
        .collect()
}

// ---------------------------------------------------------------------------
// Posets

/// Strict order of the factorial poset with inversion sequence `omega`:
/// `rel[u][v]` iff `u` lies in the down-set `[1, a_v]` of `v`.
pub fn naive_poset_relation(omega: &[usize]) -> Vec<Vec<bool>> {
    let n = omega.len();
    let mut rel = vec![vec![false; n + 1]; n + 1];
    for v in 1..=n {
        for u in 1..=omega[v - 1] {
            rel[u][v] = true;
        }
    }
    rel
}

/// `Act(P)` from the relation: `k < n` is inactive when every element below
/// `k + 1` is also below `k` and at least `d` active elements lie below `k`
/// but not below `k + 1`. The last element is inactive.
pub fn naive_active_poset(omega: &[usize], d: u32) -> Vec<usize> {
    let n = omega.len();
    let rel = naive_poset_relation(omega);
    let mut act: Vec<usize> = Vec::new();
    for k in 1..n {
        let nested = (1..=n).all(|u| !rel[u][k + 1] || rel[u][k]);
        let separated = (1..=n)
            .filter(|&u| rel[u][k] && !rel[u][k + 1] && act.contains(&u))
            .count();
        if !(nested && separated >= d as usize) {
            act.push(k);
        }
    }
    act
}

pub fn naive_is_difference_poset(omega: &[usize], d: u32) -> bool {
    let n = omega.len();
    let rel = naive_poset_relation(omega);
    let act = naive_active_poset(omega, d);
    // A(P): for each non-minimal v, the largest element below it.
    (1..=n).all(|v| match (1..=n).filter(|&u| rel[u][v]).max() {
        Some(top) => act.contains(&top),
        None => true,
    })
}

/// Whether some `m` elements induce a chain `i_1 < ... < i_{m-1}` plus the
/// isolated element `i_{m-2} + 1`.
pub fn naive_contains_special(omega: &[usize], m: usize) -> bool {
    let n = omega.len();
    if m > n || m < 3 {
        return false;
    }
    let rel = naive_poset_relation(omega);
    let comparable = |a: usize, b: usize| rel[a][b] || rel[b][a];
    position_subsets(n, m).any(|idx| {
        let elems: Vec<usize> = idx.iter().map(|&i| i + 1).collect();
        elems.iter().any(|&e| {
            let chain: Vec<usize> = elems.iter().copied().filter(|&c| c != e).collect();
            chain.windows(2).all(|w| rel[w[0]][w[1]])
                && e == chain[m - 3] + 1
                && chain.iter().all(|&c| !comparable(c, e))
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PosetFilter {
    /// Parameter is `d`.
    DifferenceD,
    /// Parameter is the size `m` of the special poset `P_m`.
    SpecialFree,
}

/// Filters all `n!` factorial posets on `[n]`.
pub fn filter_posets(n: usize, filter: PosetFilter, param: u32) -> Result<Vec<FactorialPoset>> {
    check_positive(n)?;
    check_limit("poset oracle", MAX_POSET_N, n)?;
    if filter == PosetFilter::SpecialFree && param < 3 {
        return Err(Error::Input(format!(
            "special poset needs m >= 3, got {param}"
        )));
    }
    all_inversion_sequences(n)
        .into_par_iter()
        .filter(|a| match filter {
            PosetFilter::DifferenceD => naive_is_difference_poset(a, param),
            PosetFilter::SpecialFree => !naive_contains_special(a, param as usize),
        })
        .map(FactorialPoset::new)
        .collect()
}

// ---------------------------------------------------------------------------
// Matrices

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFilter {
    Fishburn,
    ColumnRestricted,
}

/// `(fishburn, column_restricted)` for a dense upper-triangular matrix.
pub fn naive_classify(rows: &[Vec<u32>]) -> (bool, bool) {
    let m = rows.len();
    let col_rows = |j: usize| (0..m).filter(move |&i| rows[i][j] > 0);
    let zero_col = (0..m).any(|j| col_rows(j).next().is_none());
    let zero_row = rows.iter().any(|r| r.iter().all(|&v| v == 0));
    let fishburn = !zero_col && !zero_row;
    let restricted = !zero_col
        && (0..m.saturating_sub(1))
            .all(|j| col_rows(j + 1).max().unwrap() > col_rows(j).min().unwrap());
    (fishburn, restricted)
}

/// Filters all upper-triangular matrices of weight `n` and dimension at
/// most `n`, sorted.
pub fn filter_matrices(n: usize, filter: MatrixFilter) -> Result<Vec<TriMatrix>> {
    check_positive(n)?;
    check_limit("matrix oracle", MAX_MATRIX_N, n)?;
    let mut out: Vec<TriMatrix> = (1..=n)
        .into_par_iter()
        .flat_map_iter(|m| all_upper_triangular(n as u32, m))
        .filter(|rows| {
            let (fishburn, restricted) = naive_classify(rows);
            match filter {
                MatrixFilter::Fishburn => fishburn,
                MatrixFilter::ColumnRestricted => restricted,
            }
        })
        .map(TriMatrix::new)
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| matrix_key(a).cmp(&matrix_key(b)));
    Ok(out)
}

/// Canonical sort key for comparing matrix lists: dimension, then entries.
pub fn matrix_key(a: &TriMatrix) -> (usize, &[u32]) {
    (a.dim(), a.entries())
}

fn check_positive(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Input("n must be at least 1".into()))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Count table

/// The five families tracked in a [`CountTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassTag {
    Seq,
    Perm,
    Poset,
    Fishburn,
    Colres,
}

impl ClassTag {
    pub const ALL: [ClassTag; 5] = [
        ClassTag::Seq,
        ClassTag::Perm,
        ClassTag::Poset,
        ClassTag::Fishburn,
        ClassTag::Colres,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassTag::Seq => "seq",
            ClassTag::Perm => "perm",
            ClassTag::Poset => "poset",
            ClassTag::Fishburn => "fishburn",
            ClassTag::Colres => "colres",
        }
    }

    pub fn is_matrix(self) -> bool {
        matches!(self, ClassTag::Fishburn | ClassTag::Colres)
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fast-enumerator count alongside the oracle count for one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountEntry {
    pub count: u64,
    pub oracle: u64,
}

/// Counts keyed by `(class, n, d)`. Matrix classes use `d = 0`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountTable {
    entries: BTreeMap<(ClassTag, usize, u32), CountEntry>,
}

impl CountTable {
    pub fn insert(&mut self, class: ClassTag, n: usize, d: u32, entry: CountEntry) -> Result<()> {
        if self.entries.insert((class, n, d), entry).is_some() {
            return Err(Error::Input(format!(
                "duplicate count for ({class}, {n}, {d})"
            )));
        }
        Ok(())
    }

    pub fn get(&self, class: ClassTag, n: usize, d: u32) -> Option<CountEntry> {
        self.entries.get(&(class, n, d)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ClassTag, usize, u32, CountEntry)> + '_ {
        self.entries.iter().map(|(&(c, n, d), &e)| (c, n, d, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Cells where the fast enumerator and the oracle disagree.
    pub fn oracle_mismatches(&self) -> Vec<(ClassTag, usize, u32, CountEntry)> {
        self.iter()
            .filter(|(_, _, _, e)| e.count != e.oracle)
            .collect()
    }

    /// `(n, d)` cells where the sequence, permutation and poset counts
    /// differ, plus weights where the matrix counts differ from each other
    /// or from `|A^0_n|`.
    pub fn cross_class_mismatches(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (class, n, d, e) in self.iter() {
            let reference = match class {
                ClassTag::Seq => continue,
                ClassTag::Perm | ClassTag::Poset => self.get(ClassTag::Seq, n, d),
                ClassTag::Fishburn | ClassTag::Colres => self.get(ClassTag::Seq, n, 0),
            };
            if let Some(r) = reference {
                if r.count != e.count {
                    out.push(format!(
                        "{class}(n={n}, d={d}) = {} but seq(n={n}, d={}) = {}",
                        e.count,
                        if class.is_matrix() { 0 } else { d },
                        r.count
                    ));
                }
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("class,n,d,count\n");
        for (class, n, d, e) in self.iter() {
            s.push_str(&format!("{class},{n},{d},{}\n", e.count));
        }
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::from("| class | n | d | count | oracle |\n|---|---:|---:|---:|---:|\n");
        for (class, n, d, e) in self.iter() {
            s.push_str(&format!(
                "| {class} | {n} | {d} | {} | {} |\n",
                e.count, e.oracle
            ));
        }
        s
    }
}

/// Default weight cap for the matrix classes.
pub const DEFAULT_MATRIX_N: usize = 6;

/// [`build_count_table_with`] with matrix weights capped at
/// `min(max_n, 6)`.
pub fn build_count_table(max_n: usize, max_d: u32) -> Result<CountTable> {
    build_count_table_with(max_n, max_d, max_n.min(DEFAULT_MATRIX_N))
}

/// Counts every class for `1 <= n <= max_n`, `0 <= d <= max_d` (matrices
/// for weights up to `max_matrix_n`), each by its fast enumerator and by
/// the oracle.
pub fn build_count_table_with(max_n: usize, max_d: u32, max_matrix_n: usize) -> Result<CountTable> {
    check_limit("count table", MAX_POSET_N, max_n)?;
    check_limit("count table (matrices)", MAX_MATRIX_N, max_matrix_n)?;
    let mut cells: Vec<(ClassTag, usize, u32)> = Vec::new();
    for n in 1..=max_n {
        for d in 0..=max_d {
            for class in [ClassTag::Seq, ClassTag::Perm, ClassTag::Poset] {
                cells.push((class, n, d));
            }
        }
    }
    for n in 1..=max_matrix_n {
        cells.push((ClassTag::Fishburn, n, 0));
        cells.push((ClassTag::Colres, n, 0));
    }
    let counted = cells
        .into_par_iter()
        .map(|(class, n, d)| count_cell(class, n, d).map(|e| (class, n, d, e)))
        .collect::<Result<Vec<_>>>()?;
    let mut table = CountTable::default();
    for (class, n, d, e) in counted {
        table.insert(class, n, d, e)?;
    }
    Ok(table)
}

fn count_cell(class: ClassTag, n: usize, d: u32) -> Result<CountEntry> {
    let len = |v: usize| v as u64;
    let (count, oracle) = match class {
        ClassTag::Seq => (
            sequences::enumerate_d_ascent_sequences(n, d)?.len(),
            filter_sequences(n, d)?.len(),
        ),
        ClassTag::Perm => (
            permutations::enumerate_difference_permutations(n, d)?.len(),
            filter_permutations(n, PermutationFilter::DifferenceD, d)?.len(),
        ),
        ClassTag::Poset => (
            posets::enumerate_difference_posets(n, d)?.len(),
            filter_posets(n, PosetFilter::DifferenceD, d)?.len(),
        ),
        ClassTag::Fishburn => (
            matrices::enumerate_fishburn(n)?.len(),
            filter_matrices(n, MatrixFilter::Fishburn)?.len(),
        ),
        ClassTag::Colres => (
            matrices::enumerate_column_restricted(n)?.len(),
            filter_matrices(n, MatrixFilter::ColumnRestricted)?.len(),
        ),
    };
    Ok(CountEntry {
        count: len(count),
        oracle: len(oracle),
    })
}
