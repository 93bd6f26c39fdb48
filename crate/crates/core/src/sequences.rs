//! `d`-ascent statistics and `d`-ascent sequences.
//!
//! An index `i` (1-based, `1 <= i <= n-1`) of `x` is a `d`-ascent when
//! `x[i+1] > x[i] - d`. With `d = 0` these are ordinary ascents and with
//! `d = 1` weak ascents. A `d`-ascent sequence starts at 0 and never jumps
//! above one more than the number of `d`-ascents of the prefix before it.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer sequence `x_1 .. x_n` with nonnegative entries.
///
/// Validity as a `d`-ascent sequence depends on `d`, which is supplied per
/// call; see [`DSequence::is_valid`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct DSequence(Vec<i64>);

impl DSequence {
    pub fn new(values: Vec<i64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Input("sequence must be nonempty".into()));
        }
        if let Some(v) = values.iter().find(|&&v| v < 0) {
            return Err(Error::Input(format!("sequence entry {v} is negative")));
        }
        Ok(DSequence(values))
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based value `x_i`.
    pub fn get(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    pub fn d_ascents(&self, d: u32) -> BTreeSet<usize> {
        d_ascent_positions(&self.0, d).collect()
    }

    pub fn dasc(&self, d: u32) -> usize {
        d_ascent_positions(&self.0, d).count()
    }

    pub fn is_valid(&self, d: u32) -> bool {
        valid_sequence(&self.0, d)
    }

    pub fn into_values(self) -> Vec<i64> {
        self.0
    }
}

impl TryFrom<Vec<i64>> for DSequence {
    type Error = Error;

    fn try_from(values: Vec<i64>) -> Result<Self> {
        DSequence::new(values)
    }
}

impl From<DSequence> for Vec<i64> {
    fn from(s: DSequence) -> Self {
        s.0
    }
}

impl fmt::Display for DSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn is_d_ascent_step(prev: i64, next: i64, d: u32) -> bool {
    next > prev - i64::from(d)
}

fn d_ascent_positions(x: &[i64], d: u32) -> impl Iterator<Item = usize> + '_ {
    x.windows(2)
        .enumerate()
        .filter(move |(_, w)| is_d_ascent_step(w[0], w[1], d))
        .map(|(i, _)| i + 1)
}

/// The set of `d`-ascents of `x`, as 1-based indices.
pub fn d_ascent_set(x: &[i64], d: u32) -> Result<BTreeSet<usize>> {
    if x.is_empty() {
        return Err(Error::Input("sequence must be nonempty".into()));
    }
    Ok(d_ascent_positions(x, d).collect())
}

/// Number of `d`-ascents of `x`.
pub fn dasc(x: &[i64], d: u32) -> Result<usize> {
    d_ascent_set(x, d).map(|s| s.len())
}

fn valid_sequence(x: &[i64], d: u32) -> bool {
    if x.first() != Some(&0) {
        return false;
    }
    let mut ascents = 0i64;
    for w in x.windows(2) {
        // w[0] closes a prefix whose d-ascent count is `ascents`.
        if w[1] < 0 || w[1] > ascents + 1 {
            return false;
        }
        if is_d_ascent_step(w[0], w[1], d) {
            ascents += 1;
        }
    }
    true
}

/// Whether `x` is a `d`-ascent sequence. Negative entries make it invalid.
pub fn is_d_ascent_sequence(x: &[i64], d: u32) -> Result<bool> {
    if x.is_empty() {
        return Err(Error::Input("sequence must be nonempty".into()));
    }
    Ok(valid_sequence(x, d))
}

/// Depth-first extension of a valid prefix, emitting in lexicographic order.
fn extend_prefix(prefix: &mut Vec<i64>, ascents: i64, n: usize, d: u32, out: &mut Vec<DSequence>) {
    if prefix.len() == n {
        out.push(DSequence(prefix.clone()));
        return;
    }
    let last = *prefix.last().expect("prefix starts with 0");
    for next in 0..=ascents + 1 {
        let bump = i64::from(is_d_ascent_step(last, next, d));
        prefix.push(next);
        extend_prefix(prefix, ascents + bump, n, d, out);
        prefix.pop();
    }
}

/// Prefixes of length `len` together with their d-ascent counts, in lexicographic order.
fn prefixes(len: usize, d: u32) -> Vec<(Vec<i64>, i64)> {
    let mut level = vec![(vec![0i64], 0i64)];
    for _ in 1..len {
        let mut next_level = Vec::new();
        for (p, asc) in level {
            let last = *p.last().unwrap();
            for v in 0..=asc + 1 {
                let mut q = p.clone();
                q.push(v);
                next_level.push((q, asc + i64::from(is_d_ascent_step(last, v, d))));
            }
        }
        level = next_level;
    }
    level
}

const SPLIT_DEPTH: usize = 4;

/// All `d`-ascent sequences of length `n`, in lexicographic order.
///
/// Work is split over prefixes of length up to four and reassembled in
/// prefix order, so the output does not depend on the thread count.
pub fn enumerate_d_ascent_sequences(n: usize, d: u32) -> Result<Vec<DSequence>> {
    if n == 0 {
        return Err(Error::Input("n must be at least 1".into()));
    }
    let depth = n.min(SPLIT_DEPTH);
    let parts: Vec<Vec<DSequence>> = prefixes(depth, d)
        .into_par_iter()
        .map(|(mut p, asc)| {
            let mut out = Vec::new();
            extend_prefix(&mut p, asc, n, d, &mut out);
            out
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}
