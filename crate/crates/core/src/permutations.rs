//! Difference `d` permutations.
//!
//! The `d`-active elements of a permutation are classified in increasing
//! order of value: 1 is active, and `k > 1` is inactive exactly when `k`
//! sits to the left of `k - 1` with at least `d` active elements smaller than
//! `k - 1` strictly between them. A permutation is a difference `d`
//! permutation when every ascent bottom is active. Inserting the maximum
//! `n` at the front or right after an active element is the only way to
//! grow one, which gives the bijection [`phi`] to `d`-ascent sequences.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::{is_d_ascent_sequence, DSequence};

/// A permutation of `[n]` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::Input("permutation must be nonempty".into()));
        }
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n || seen[v] {
                return Err(Error::Input(format!(
                    "{values:?} is not a permutation of 1..={n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation(values))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `positions()[v]` is the 0-based position of value `v`; index 0 is unused.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len() + 1];
        for (p, &v) in self.0.iter().enumerate() {
            pos[v] = p;
        }
        pos
    }

    pub fn into_values(self) -> Vec<usize> {
        self.0
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(values: Vec<usize>) -> Result<Self> {
        Permutation::new(values)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(" "))
    }
}

/// Activity flags indexed by value (index 0 unused).
pub(crate) fn active_flags(values: &[usize], d: u32) -> Vec<bool> {
    let n = values.len();
    let mut pos = vec![0; n + 1];
    for (p, &v) in values.iter().enumerate() {
        pos[v] = p;
    }
    let mut active = vec![false; n + 1];
    if n == 0 {
        return active;
    }
    active[1] = true;
    for k in 2..=n {
        let (left, right) = (pos[k], pos[k - 1]);
        active[k] = if left < right {
            let between = values[left + 1..right]
                .iter()
                .filter(|&&v| v < k - 1 && active[v])
                .count();
            between < d as usize
        } else {
            true
        };
    }
    active
}

fn flags_to_set(flags: &[bool]) -> BTreeSet<usize> {
    flags
        .iter()
        .enumerate()
        .filter(|(_, &a)| a)
        .map(|(v, _)| v)
        .collect()
}

/// `Act(pi)`: the `d`-active elements of `pi`.
pub fn active_elements(pi: &Permutation, d: u32) -> BTreeSet<usize> {
    flags_to_set(&active_flags(&pi.0, d))
}

/// `Ascbot(pi)`: values `pi_i` with `pi_{i+1} > pi_i`.
pub fn ascent_bottoms(pi: &Permutation) -> BTreeSet<usize> {
    pi.0.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| w[0])
        .collect()
}

pub fn is_difference_permutation(pi: &Permutation, d: u32) -> bool {
    let active = active_flags(&pi.0, d);
    pi.0.windows(2).all(|w| w[1] < w[0] || active[w[0]])
}

/// A classical pattern with position adjacency (`adjacent_after`), value
/// adjacency (`value_links`) and activity (`active_marks`) constraints.
///
/// All indices and values are 1-based. `p` in `adjacent_after` forces the
/// host positions matched by pattern positions `p` and `p + 1` to be
/// consecutive; `v` in `value_links` forces the host element matched by
/// `v + 1` to be one more than the one matched by `v`; `p` in
/// `active_marks` forces the host element at pattern position `p` to be
/// `d`-active.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPattern")]
pub struct BivincularPattern {
    values: Vec<usize>,
    adjacent_after: BTreeSet<usize>,
    value_links: BTreeSet<usize>,
    active_marks: BTreeSet<usize>,
}

#[derive(Deserialize)]
struct RawPattern {
    values: Vec<usize>,
    #[serde(default)]
    adjacent_after: BTreeSet<usize>,
    #[serde(default)]
    value_links: BTreeSet<usize>,
    #[serde(default)]
    active_marks: BTreeSet<usize>,
}

impl TryFrom<RawPattern> for BivincularPattern {
    type Error = Error;

    fn try_from(raw: RawPattern) -> Result<Self> {
        BivincularPattern::new(
            raw.values,
            raw.adjacent_after,
            raw.value_links,
            raw.active_marks,
        )
    }
}

impl BivincularPattern {
    pub fn new(
        values: Vec<usize>,
        adjacent_after: BTreeSet<usize>,
        value_links: BTreeSet<usize>,
        active_marks: BTreeSet<usize>,
    ) -> Result<Self> {
        let k = values.len();
        Permutation::new(values.clone())?;
        let within = |set: &BTreeSet<usize>, hi: usize| set.iter().all(|&p| p >= 1 && p <= hi);
        if !within(&adjacent_after, k - 1) || !within(&value_links, k - 1) {
            return Err(Error::Input(format!(
                "adjacency marks must lie in 1..={}",
                k - 1
            )));
        }
        if !within(&active_marks, k) {
            return Err(Error::Input(format!("active marks must lie in 1..={k}")));
        }
        Ok(BivincularPattern {
            values,
            adjacent_after,
            value_links,
            active_marks,
        })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn adjacent_after(&self) -> &BTreeSet<usize> {
        &self.adjacent_after
    }

    pub fn value_links(&self) -> &BTreeSet<usize> {
        &self.value_links
    }

    pub fn active_marks(&self) -> &BTreeSet<usize> {
        &self.active_marks
    }
}

/// `(m-1) | m 1 2 ... (m-2)` with `m - 2` linked to `m - 1`.
pub fn tau_pattern(m: usize) -> Result<BivincularPattern> {
    if m < 3 {
        return Err(Error::Input(format!(
            "tau pattern needs length >= 3, got {m}"
        )));
    }
    let values = [m - 1, m].into_iter().chain(1..=m - 2).collect();
    BivincularPattern::new(
        values,
        BTreeSet::from([1]),
        BTreeSet::from([m - 2]),
        BTreeSet::new(),
    )
}

/// The `d!` patterns `(d+2) | (d+3) mu (d+1)` for `mu` in `S_d`, with the
/// letters of `mu` marked active and `d + 1` linked to `d + 2`.
///
/// Patterns are listed with `mu` in lexicographic order.
pub fn sigma_family(d: u32) -> Vec<BivincularPattern> {
    let d = d as usize;
    let marks: BTreeSet<usize> = (3..=d + 2).collect();
    (1..=d)
        .permutations(d)
        .map(|mu| {
            let values = [d + 2, d + 3]
                .into_iter()
                .chain(mu)
                .chain(std::iter::once(d + 1))
                .collect();
            BivincularPattern::new(
                values,
                BTreeSet::from([1]),
                BTreeSet::from([d + 1]),
                marks.clone(),
            )
            .expect("sigma pattern is well formed")
        })
        .collect()
}

struct Matcher<'a> {
    host: &'a [usize],
    pattern: &'a BivincularPattern,
    // 0-based pattern position of each pattern value
    value_pos: Vec<usize>,
    active: Option<Vec<bool>>,
    chosen: Vec<usize>,
}

impl Matcher<'_> {
    fn extend(&mut self) -> bool {
        let t = self.chosen.len();
        let k = self.pattern.len();
        if t == k {
            return true;
        }
        let n = self.host.len();
        let start = self.chosen.last().map_or(0, |&i| i + 1);
        let end = n - (k - t);
        let forced = t > 0 && self.pattern.adjacent_after.contains(&t);
        for i in start..=end {
            if forced && i != start {
                break;
            }
            let h = self.host[i];
            let pv = self.pattern.values[t];
            let order_ok = self
                .chosen
                .iter()
                .enumerate()
                .all(|(s, &j)| (self.pattern.values[s] < pv) == (self.host[j] < h));
            if !order_ok {
                continue;
            }
            if self.pattern.active_marks.contains(&(t + 1)) {
                if let Some(active) = &self.active {
                    if !active[h] {
                        continue;
                    }
                }
            }
            let links_ok = self.pattern.value_links.iter().all(|&v| {
                let (a, b) = (self.value_pos[v], self.value_pos[v + 1]);
                if a.max(b) != t {
                    return true;
                }
                let host_at = |p: usize| if p == t { h } else { self.host[self.chosen[p]] };
                host_at(b) == host_at(a) + 1
            });
            if !links_ok {
                continue;
            }
            self.chosen.push(i);
            if self.extend() {
                return true;
            }
            self.chosen.pop();
        }
        false
    }
}

/// Whether `pi` contains an occurrence of `pattern`; `d` only matters for
/// active marks, which are evaluated against `Act(pi)`.
pub fn contains_pattern(pi: &Permutation, pattern: &BivincularPattern, d: u32) -> bool {
    let k = pattern.len();
    if k > pi.len() {
        return false;
    }
    let mut value_pos = vec![0; k + 1];
    for (p, &v) in pattern.values.iter().enumerate() {
        value_pos[v] = p;
    }
    let active = (!pattern.active_marks.is_empty()).then(|| active_flags(&pi.0, d));
    Matcher {
        host: &pi.0,
        pattern,
        value_pos,
        active,
        chosen: Vec::with_capacity(k),
    }
    .extend()
}

/// Whether `pi` avoids every pattern in `patterns`.
pub fn avoids_all(pi: &Permutation, patterns: &[BivincularPattern], d: u32) -> bool {
    patterns.iter().all(|p| !contains_pattern(pi, p, d))
}

/// `phi(pi)`: `x_i` counts the active elements smaller than `i` that appear
/// to the left of `i`.
pub fn phi(pi: &Permutation, d: u32) -> Result<DSequence> {
    if !is_difference_permutation(pi, d) {
        return Err(Error::Domain(format!(
            "{pi} is not a difference {d} permutation"
        )));
    }
    let active = active_flags(&pi.0, d);
    let pos = pi.positions();
    let x = (1..=pi.len())
        .map(|i| {
            pi.0[..pos[i]]
                .iter()
                .filter(|&&a| a < i && active[a])
                .count() as i64
        })
        .collect();
    DSequence::new(x)
}

/// One stage of the insertion construction of [`phi_inv`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertionStep {
    pub permutation: Permutation,
    pub active: BTreeSet<usize>,
}

/// Runs the insertion construction, reporting the permutation and its
/// activity flags after every insertion.
fn insert_maxima(
    x: &DSequence,
    d: u32,
    mut on_step: impl FnMut(&[usize], &[bool]),
) -> Result<Vec<usize>> {
    if !is_d_ascent_sequence(x.values(), d)? {
        return Err(Error::Domain(format!("{x} is not a {d}-ascent sequence")));
    }
    let n = x.len();
    let mut perm = Vec::with_capacity(n);
    let mut active = vec![false; n + 1];
    perm.push(1);
    active[1] = true;
    on_step(&perm, &active[..2]);
    for k in 2..=n {
        let xk = x.get(k) as usize;
        let at = if xk == 0 {
            0
        } else {
            let p = perm
                .iter()
                .enumerate()
                .filter(|(_, &v)| active[v])
                .nth(xk - 1)
                .map(|(p, _)| p)
                .ok_or_else(|| Error::Domain(format!("x_{k} = {xk} exceeds the active count")))?;
            p + 1
        };
        perm.insert(at, k);
        // The new maximum is inactive iff x_k <= x_{k-1} - d.
        active[k] = x.get(k) > x.get(k - 1) - i64::from(d);
        on_step(&perm, &active[..=k]);
    }
    Ok(perm)
}

/// Inverse of [`phi`]: insert `2, 3, ..., n` in turn, `k` going to the
/// front when `x_k = 0` and otherwise right after the `x_k`-th active
/// element from the left.
pub fn phi_inv(x: &DSequence, d: u32) -> Result<Permutation> {
    insert_maxima(x, d, |_, _| {}).map(Permutation)
}

/// Every intermediate permutation of [`phi_inv`] with its active set.
pub fn phi_inv_trace(x: &DSequence, d: u32) -> Result<Vec<InsertionStep>> {
    let mut steps = Vec::with_capacity(x.len());
    insert_maxima(x, d, |perm, active| {
        steps.push(InsertionStep {
            permutation: Permutation(perm.to_vec()),
            active: flags_to_set(active),
        })
    })?;
    Ok(steps)
}

/// `S^d_n` sorted by one-line notation, built as the image of the
/// `d`-ascent sequences under [`phi_inv`].
pub fn enumerate_difference_permutations(n: usize, d: u32) -> Result<Vec<Permutation>> {
    let seqs = crate::sequences::enumerate_d_ascent_sequences(n, d)?;
    let mut perms = seqs
        .par_iter()
        .map(|x| phi_inv(x, d))
        .collect::<Result<Vec<_>>>()?;
    perms.par_sort_unstable();
    Ok(perms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        Permutation::new(s.bytes().map(|b| (b - b'0') as usize).collect()).unwrap()
    }

    fn seq(s: &str) -> DSequence {
        DSequence::new(s.bytes().map(|b| i64::from(b - b'0')).collect()).unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Permutation::new(vec![]).is_err());
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
    }

    #[test]
    fn active_sets_of_running_example() {
        let pi = perm("42617385");
        assert_eq!(active_elements(&pi, 0), set(&[1, 3, 5, 7, 8]));
        assert_eq!(active_elements(&pi, 2), set(&[1, 2, 3, 5, 7, 8]));
        for d in 0..4 {
            assert_eq!(
                active_elements(&Permutation::identity(6), d),
                set(&[1, 2, 3, 4, 5, 6])
            );
        }
    }

    #[test]
    fn ascent_bottom_sets() {
        assert_eq!(ascent_bottoms(&perm("42617385")), set(&[1, 2, 3]));
        assert!(ascent_bottoms(&perm("654321")).is_empty());
        assert_eq!(ascent_bottoms(&perm("45213")), set(&[1, 4]));
    }

    #[test]
    fn difference_predicate() {
        let pi = perm("42617385");
        assert!(!is_difference_permutation(&pi, 0));
        assert!(is_difference_permutation(&pi, 2));
        for d in 0..4 {
            assert!(is_difference_permutation(&Permutation::identity(7), d));
        }
    }

    #[test]
    fn tau_shapes() {
        let t3 = tau_pattern(3).unwrap();
        assert_eq!(t3.values(), &[2, 3, 1]);
        assert_eq!(t3.adjacent_after(), &set(&[1]));
        assert_eq!(t3.value_links(), &set(&[1]));
        let t4 = tau_pattern(4).unwrap();
        assert_eq!(t4.values(), &[3, 4, 1, 2]);
        assert_eq!(t4.value_links(), &set(&[2]));
        let t5 = tau_pattern(5).unwrap();
        assert_eq!(t5.values(), &[4, 5, 1, 2, 3]);
        assert_eq!(t5.value_links(), &set(&[3]));
        assert!(t5.active_marks().is_empty());
        assert!(tau_pattern(2).is_err());
    }

    #[test]
    fn sigma_shapes() {
        let s0 = sigma_family(0);
        assert_eq!(s0.len(), 1);
        assert_eq!(s0[0], tau_pattern(3).unwrap());
        let s1 = sigma_family(1);
        assert_eq!(s1.len(), 1);
        assert_eq!(s1[0].values(), &[3, 4, 1, 2]);
        assert_eq!(s1[0].active_marks(), &set(&[3]));
        let s2 = sigma_family(2);
        assert_eq!(s2.len(), 2);
        assert_eq!(s2[0].values(), &[4, 5, 1, 2, 3]);
        assert_eq!(s2[1].values(), &[4, 5, 2, 1, 3]);
        assert_eq!(s2[1].active_marks(), &set(&[3, 4]));
        assert_eq!(sigma_family(3).len(), 6);
    }

    #[test]
    fn pattern_containment() {
        let t3 = tau_pattern(3).unwrap();
        assert!(contains_pattern(&perm("42617385"), &t3, 0));
        assert!(!contains_pattern(
            &perm("45213"),
            &tau_pattern(5).unwrap(),
            0
        ));
        for m in 3..=6 {
            assert!(!contains_pattern(
                &Permutation::identity(6),
                &tau_pattern(m).unwrap(),
                0
            ));
        }
        // Longer than the host.
        assert!(!contains_pattern(&perm("21"), &t3, 0));
        // 231 with the 2 and 3 adjacent and 1, 2 consecutive values.
        assert!(contains_pattern(&perm("231"), &t3, 0));
        assert!(!contains_pattern(&perm("132"), &t3, 0));
        // 3|41(2bar): 3 4 adjacent, then 1 and 2 with host(3) = host(2) + 1.
        let p = BivincularPattern::new(vec![3, 4, 1, 2], set(&[1]), set(&[2]), set(&[])).unwrap();
        assert!(contains_pattern(&perm("3412"), &p, 0));
        assert!(contains_pattern(&perm("45213"), &p, 0));
        assert!(!contains_pattern(&perm("45312"), &p, 0));
        assert!(contains_pattern(&perm("45123"), &p, 0));
    }

    #[test]
    fn active_marks_use_host_activity() {
        // In 2 1 4 3 at d = 0, 2 precedes 1 so 2 is inactive.
        let pi = perm("2143");
        let p = BivincularPattern::new(vec![1, 2], set(&[]), set(&[]), set(&[1])).unwrap();
        // Occurrences of 12 start at 2 or 1; 1 is active.
        assert!(contains_pattern(&pi, &p, 0));
        let only_two =
            BivincularPattern::new(vec![2, 1, 3], set(&[1]), set(&[]), set(&[1])).unwrap();
        assert!(!contains_pattern(&pi, &only_two, 0));
        assert!(contains_pattern(&pi, &only_two, 1));
    }

    #[test]
    fn phi_running_example() {
        assert_eq!(phi(&perm("42617385"), 2).unwrap(), seq("00203124"));
        assert_eq!(phi_inv(&seq("00203124"), 2).unwrap(), perm("42617385"));
        assert!(matches!(phi(&perm("42617385"), 0), Err(Error::Domain(_))));
        for d in 0..3 {
            assert_eq!(phi(&perm("1"), d).unwrap(), seq("0"));
            assert_eq!(phi_inv(&seq("0"), d).unwrap(), perm("1"));
            assert_eq!(phi(&Permutation::identity(6), d).unwrap(), seq("012345"));
            assert_eq!(
                phi_inv(&seq("012345"), d).unwrap(),
                Permutation::identity(6)
            );
        }
    }

    #[test]
    fn phi_inv_trace_matches_worked_insertions() {
        let trace = phi_inv_trace(&seq("00203124"), 2).unwrap();
        let perms: Vec<String> = trace
            .iter()
            .map(|s| s.permutation.values().iter().join(""))
            .collect();
        assert_eq!(
            perms,
            ["1", "21", "213", "4213", "42135", "426135", "4261735", "42617385"]
        );
        let actives: Vec<Vec<usize>> = trace
            .iter()
            .map(|s| s.active.iter().copied().collect())
            .collect();
        assert_eq!(actives[0], vec![1]);
        assert_eq!(actives[1], vec![1, 2]);
        assert_eq!(actives[3], vec![1, 2, 3]);
        assert_eq!(actives[7], vec![1, 2, 3, 5, 7, 8]);
    }

    #[test]
    fn phi_inv_rejects_invalid_sequences() {
        assert!(matches!(phi_inv(&seq("02"), 0), Err(Error::Domain(_))));
        assert!(matches!(phi_inv(&seq("1"), 0), Err(Error::Domain(_))));
    }

    #[test]
    fn incremental_activity_agrees_with_recomputation() {
        for n in 1..=7 {
            for d in 0..=3 {
                for x in crate::sequences::enumerate_d_ascent_sequences(n, d).unwrap() {
                    for step in phi_inv_trace(&x, d).unwrap() {
                        assert_eq!(step.active, active_elements(&step.permutation, d));
                    }
                }
            }
        }
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_difference_permutations(3, 0).unwrap().len(), 5);
        for d in 0..4 {
            assert_eq!(
                enumerate_difference_permutations(1, d).unwrap(),
                vec![perm("1")]
            );
        }
        assert!(enumerate_difference_permutations(8, 2)
            .unwrap()
            .contains(&perm("42617385")));
        assert!(enumerate_difference_permutations(0, 0).is_err());
    }

    #[test]
    fn pattern_json_roundtrip_and_validation() {
        let t = tau_pattern(4).unwrap();
        let js = serde_json::to_string(&t).unwrap();
        assert_eq!(
            js,
            r#"{"values":[3,4,1,2],"adjacent_after":[1],"value_links":[2],"active_marks":[]}"#
        );
        let back: BivincularPattern = serde_json::from_str(&js).unwrap();
        assert_eq!(back, t);
        assert!(
            serde_json::from_str::<BivincularPattern>(r#"{"values":[1,2],"value_links":[2]}"#)
                .is_err()
        );
    }
}
