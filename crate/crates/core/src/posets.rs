//! Factorial posets stored as inversion sequences.
//!
//! A factorial poset on `[n]` satisfies `i < j` and `j <_P k` implies
//! `i <_P k`. It is determined by `a_1 .. a_n` where `a_v` is the largest
//! element below `v` (0 when `v` is minimal), and `u <_P v` holds exactly
//! when `u <= a_v`.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::{is_d_ascent_sequence, DSequence};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct FactorialPoset(Vec<usize>);

impl FactorialPoset {
    /// Wraps an inversion sequence, checking `0 <= a_i <= i - 1`.
    pub fn new(omega: Vec<usize>) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::Input("inversion sequence must be nonempty".into()));
        }
        if let Some((i, &a)) = omega.iter().enumerate().find(|&(i, &a)| a > i) {
            return Err(Error::Input(format!("a_{} = {a} exceeds {}", i + 1, i)));
        }
        Ok(FactorialPoset(omega))
    }

    /// The antichain on `[n]`.
    pub fn antichain(n: usize) -> Self {
        FactorialPoset(vec![0; n])
    }

    pub fn omega(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based label `a_v`.
    pub fn a(&self, v: usize) -> usize {
        self.0[v - 1]
    }

    /// `P[i]`, the restriction to `[i]`.
    pub fn prefix(&self, i: usize) -> FactorialPoset {
        FactorialPoset(self.0[..i].to_vec())
    }

    #[inline]
    pub(crate) fn below(&self, u: usize, v: usize) -> bool {
        u <= self.0[v - 1]
    }

    /// `u <_P v`.
    pub fn less(&self, u: usize, v: usize) -> Result<bool> {
        let n = self.len();
        if u == 0 || v == 0 || u > n || v > n {
            return Err(Error::Input(format!("elements must lie in 1..={n}")));
        }
        Ok(self.below(u, v))
    }

    pub fn comparable(&self, u: usize, v: usize) -> bool {
        self.below(u, v) || self.below(v, u)
    }

    /// Cover pairs `(u, v)` of the Hasse diagram, lexicographically.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for v in 1..=n {
            for u in 1..=self.a(v) {
                let covered = (u + 1..v).any(|w| self.below(u, w) && self.below(w, v));
                if !covered {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Builds the poset generated by `relations` (pairs `(u, v)` meaning
    /// `u <_P v`) on `[n]`, checking that its transitive closure is a
    /// compatible factorial order.
    pub fn from_relations(n: usize, relations: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("n must be at least 1".into()));
        }
        let mut lt = vec![vec![false; n + 1]; n + 1];
        for &(u, v) in relations {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::Input(format!("relation ({u}, {v}) outside 1..={n}")));
            }
            lt[u][v] = true;
        }
        for w in 1..=n {
            for u in 1..=n {
                if lt[u][w] {
                    for v in 1..=n {
                        if lt[w][v] {
                            lt[u][v] = true;
                        }
                    }
                }
            }
        }
        if let Some(u) = (1..=n).find(|&u| lt[u][u]) {
            return Err(Error::Validation(format!(
                "relations contain a cycle through {u}"
            )));
        }
        for u in 1..=n {
            for v in 1..u {
                if lt[u][v] {
                    return Err(Error::Validation(format!(
                        "{u} <_P {v} violates compatibility"
                    )));
                }
            }
        }
        for (i, j, k) in (1..=n)
            .tuple_combinations::<(_, _)>()
            .flat_map(|(i, j)| (1..=n).map(move |k| (i, j, k)))
        {
            if lt[j][k] && !lt[i][k] {
                return Err(Error::Validation(format!(
                    "factorial rule fails at (i, j, k) = ({i}, {j}, {k}): {i} < {j} and {j} <_P {k} but not {i} <_P {k}"
                )));
            }
        }
        let omega = (1..=n)
            .map(|v| (1..v).rev().find(|&u| lt[u][v]).unwrap_or(0))
            .collect();
        Ok(FactorialPoset(omega))
    }

    pub fn into_omega(self) -> Vec<usize> {
        self.0
    }
}

impl TryFrom<Vec<usize>> for FactorialPoset {
    type Error = Error;

    fn try_from(omega: Vec<usize>) -> Result<Self> {
        FactorialPoset::new(omega)
    }
}

impl From<FactorialPoset> for Vec<usize> {
    fn from(p: FactorialPoset) -> Self {
        p.0
    }
}

impl fmt::Display for FactorialPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(" "))
    }
}

/// `A(P)`: the nonzero labels `a_i`.
pub fn nonzero_labels(p: &FactorialPoset) -> BTreeSet<usize> {
    p.0.iter().copied().filter(|&a| a > 0).collect()
}

/// Activity flags indexed by element (index 0 unused); the last element is
/// always inactive.
pub(crate) fn active_flags(omega: &[usize], d: u32) -> Vec<bool> {
    let n = omega.len();
    let mut active = vec![false; n + 1];
    for k in 1..n {
        let (here, next) = (omega[k - 1], omega[k]);
        let inactive =
            next <= here && (next + 1..=here).filter(|&u| active[u]).count() >= d as usize;
        active[k] = !inactive;
    }
    active
}

/// `Act(P)` for parameter `d`.
pub fn active_elements(p: &FactorialPoset, d: u32) -> BTreeSet<usize> {
    active_flags(&p.0, d)
        .into_iter()
        .enumerate()
        .filter(|&(_, a)| a)
        .map(|(v, _)| v)
        .collect()
}

pub fn is_difference_poset(p: &FactorialPoset, d: u32) -> bool {
    let active = active_flags(&p.0, d);
    p.0.iter().all(|&a| a == 0 || active[a])
}

/// Looks for a chain `i_1 <_P ... <_P i_{m-1}` together with the element
/// `i_{m-2} + 1`, incomparable to every chain element. Returns the chain
/// followed by that element.
pub fn special_poset_occurrence(p: &FactorialPoset, m: usize) -> Result<Option<Vec<usize>>> {
    if m < 3 {
        return Err(Error::Input(format!("special poset needs m >= 3, got {m}")));
    }
    let mut chain = Vec::with_capacity(m - 1);
    Ok(grow_chain(p, m - 1, &mut chain).then(|| {
        let isolated = chain[m - 3] + 1;
        chain.push(isolated);
        chain
    }))
}

fn grow_chain(p: &FactorialPoset, len: usize, chain: &mut Vec<usize>) -> bool {
    let n = p.len();
    if chain.len() == len {
        let e = chain[len - 2] + 1;
        return e <= n && chain.iter().all(|&c| !p.comparable(c, e));
    }
    let start = chain.last().map_or(1, |&c| c + 1);
    for v in start..=n {
        if chain.last().is_some_and(|&c| !p.below(c, v)) {
            continue;
        }
        chain.push(v);
        if grow_chain(p, len, chain) {
            return true;
        }
        chain.pop();
    }
    false
}

/// Whether `p` contains the special poset `P_m`.
pub fn contains_special_poset(p: &FactorialPoset, m: usize) -> Result<bool> {
    special_poset_occurrence(p, m).map(|o| o.is_some())
}

fn require_difference(p: &FactorialPoset, d: u32) -> Result<()> {
    if is_difference_poset(p, d) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{p} is not a difference {d} poset")))
    }
}

/// `psi(P)`: `x_i` counts the active elements of `P` in `[a_i]`.
pub fn psi(p: &FactorialPoset, d: u32) -> Result<DSequence> {
    require_difference(p, d)?;
    let active = active_flags(&p.0, d);
    let mut prefix_count = vec![0i64; p.len() + 1];
    for v in 1..=p.len() {
        prefix_count[v] = prefix_count[v - 1] + i64::from(active[v]);
    }
    DSequence::new(p.0.iter().map(|&a| prefix_count[a]).collect())
}

/// `psi` built one element at a time: `x_n` is 0 when `a_n = 0`,
/// `act(P[n-1]) + 1` when `a_n = n - 1`, and otherwise the rank of `a_n`
/// among the active elements of `P[n-1]`.
pub fn psi_recursive(p: &FactorialPoset, d: u32) -> Result<DSequence> {
    require_difference(p, d)?;
    let mut x = vec![0i64];
    for k in 2..=p.len() {
        let act = active_elements(&p.prefix(k - 1), d);
        let a = p.a(k);
        let xk = if a == 0 {
            0
        } else if a == k - 1 {
            act.len() + 1
        } else {
            act.iter()
                .position(|&u| u == a)
                .map(|r| r + 1)
                .ok_or_else(|| {
                    Error::Domain(format!("a_{k} = {a} is not active in P[{}]", k - 1))
                })?
        };
        x.push(xk as i64);
    }
    DSequence::new(x)
}

/// Inverse of [`psi`].
pub fn psi_inv(x: &DSequence, d: u32) -> Result<FactorialPoset> {
    if !is_d_ascent_sequence(x.values(), d)? {
        return Err(Error::Domain(format!("{x} is not a {d}-ascent sequence")));
    }
    let n = x.len();
    let mut omega = Vec::with_capacity(n);
    omega.push(0usize);
    // Active elements of the current prefix poset, ascending. The last
    // element of a prefix is never active, so it is settled only once the
    // next label is known.
    let mut active: Vec<usize> = Vec::new();
    for k in 2..=n {
        let xk = x.get(k) as usize;
        let a = if xk == 0 {
            0
        } else if xk == active.len() + 1 {
            k - 1
        } else if xk <= active.len() {
            active[xk - 1]
        } else {
            return Err(Error::Domain(format!("x_{k} = {xk} exceeds act + 1")));
        };
        let prev = omega[k - 2];
        let inactive =
            a <= prev && active.iter().filter(|&&u| u > a && u <= prev).count() >= d as usize;
        if !inactive {
            active.push(k - 1);
        }
        omega.push(a);
    }
    Ok(FactorialPoset(omega))
}

/// All `n!` factorial posets on `[n]`, lexicographic in `omega`.
pub fn enumerate_factorial_posets(n: usize) -> Result<Vec<FactorialPoset>> {
    if n == 0 {
        return Err(Error::Input("n must be at least 1".into()));
    }
    Ok((0..n)
        .map(|i| 0..=i)
        .multi_cartesian_product()
        .map(FactorialPoset)
        .collect())
}

/// `P^d_n` sorted by `omega`, built as the image of the `d`-ascent
/// sequences under [`psi_inv`].
pub fn enumerate_difference_posets(n: usize, d: u32) -> Result<Vec<FactorialPoset>> {
    let seqs = crate::sequences::enumerate_d_ascent_sequences(n, d)?;
    let mut posets = seqs
        .par_iter()
        .map(|x| psi_inv(x, d))
        .collect::<Result<Vec<_>>>()?;
    posets.par_sort_unstable();
    Ok(posets)
}
