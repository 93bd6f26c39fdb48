//! Exhaustive cross-checks over small sizes.
//!
//! Each check runs over every object in its range and reports the first
//! counterexample it meets. Checks run concurrently; the report keeps a
//! fixed order.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::{check_limit, Error, Result};
use crate::matrices::{self, TriMatrix};
use crate::oracle::{self, MatrixFilter, PermutationFilter, PosetFilter};
use crate::permutations::{self, Permutation};
use crate::posets::{self, FactorialPoset};
use crate::sequences::{self, DSequence};

/// Largest `n` accepted for the sequence, permutation and poset suites.
pub const MAX_N: usize = 8;
/// Largest matrix weight accepted.
pub const MAX_MATRIX_N: usize = 7;
/// Largest `d` accepted.
pub const MAX_D: u32 = 5;
/// Pattern and special-poset scans stop at this size.
pub const MAX_PATTERN_N: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Perm,
    Poset,
    Matrix,
    Counts,
    All,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Perm => "perm",
            Suite::Poset => "poset",
            Suite::Matrix => "matrix",
            Suite::Counts => "counts",
            Suite::All => "all",
        }
    }

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Perm, Suite::Poset, Suite::Matrix, Suite::Counts],
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Size limits for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub max_n: usize,
    pub max_d: u32,
    pub max_matrix_n: usize,
}

impl Config {
    /// Matrix weights follow `max_n`, capped at 6.
    pub fn new(max_n: usize, max_d: u32) -> Self {
        Config {
            max_n,
            max_d,
            max_matrix_n: max_n.min(oracle::DEFAULT_MATRIX_N),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_n == 0 {
            return Err(Error::Input("max-n must be at least 1".into()));
        }
        check_limit("verify", MAX_N, self.max_n)?;
        check_limit("verify (matrices)", MAX_MATRIX_N, self.max_matrix_n)?;
        check_limit("verify (d)", MAX_D as usize, self.max_d as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub counterexample: Option<String>,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} [{}] {}", self.suite, self.name)?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n    counterexample: {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn find(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(
            f,
            "{} checks, {} passed, {} failed",
            self.checks.len(),
            self.checks.len() - failed,
            failed
        )
    }
}

type Outcome = std::result::Result<(), String>;

struct Check {
    suite: Suite,
    name: String,
    body: Box<dyn Fn() -> Outcome + Send + Sync>,
}

fn check(
    suite: Suite,
    name: impl Into<String>,
    body: impl Fn() -> Outcome + Send + Sync + 'static,
) -> Check {
    Check {
        suite,
        name: name.into(),
        body: Box::new(body),
    }
}

/// Runs every check of `suite` within `config`.
pub fn run(suite: Suite, config: &Config) -> Result<Report> {
    config.validate()?;
    let mut checks = Vec::new();
    for part in suite.parts() {
        checks.extend(match part {
            Suite::Perm => perm_checks(config)?,
            Suite::Poset => poset_checks(config)?,
            Suite::Matrix => matrix_checks(config)?,
            Suite::Counts => count_checks(config),
            Suite::All => unreachable!(),
        });
    }
    let results = checks
        .into_par_iter()
        .map(|c| {
            let outcome = (c.body)();
            CheckResult {
                suite: c.suite,
                name: c.name,
                passed: outcome.is_ok(),
                counterexample: outcome.err(),
            }
        })
        .collect();
    Ok(Report { checks: results })
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// First failure over `items`, in item order.
fn each<T: Sync>(items: &[T], f: impl Fn(&T) -> Outcome + Sync) -> Outcome {
    match items.par_iter().find_map_first(|t| f(t).err()) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn grid(max_n: usize, max_d: u32) -> Vec<(usize, u32)> {
    (1..=max_n)
        .flat_map(|n| (0..=max_d).map(move |d| (n, d)))
        .collect()
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = items.into_iter().map(|t| t.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

// ---------------------------------------------------------------------------
// Permutations

struct PermCell {
    n: usize,
    d: u32,
    seqs: Vec<DSequence>,
    /// `S^d_n` from the brute-force filter.
    perms: Vec<Permutation>,
}

fn perm_cells(config: &Config) -> Result<Vec<PermCell>> {
    grid(config.max_n, config.max_d)
        .into_par_iter()
        .map(|(n, d)| {
            Ok(PermCell {
                n,
                d,
                seqs: sequences::enumerate_d_ascent_sequences(n, d)?,
                perms: oracle::filter_permutations(n, PermutationFilter::DifferenceD, d)?,
            })
        })
        .collect()
}

fn all_perms(n: usize) -> Vec<Permutation> {
    oracle::all_permutations(n)
        .into_iter()
        .map(|v| Permutation::new(v).expect("valid permutation"))
        .collect()
}

/// `(d+2)(d+3)...n d...21(d+1)`.
pub fn strictness_witness(n: usize, d: u32) -> Result<Permutation> {
    let d = d as usize;
    let values: Vec<usize> = (d + 2..=n).chain((1..=d).rev()).chain([d + 1]).collect();
    Permutation::new(values)
}

fn perm_checks(config: &Config) -> Result<Vec<Check>> {
    let cells = std::sync::Arc::new(perm_cells(config)?);
    let (max_n, max_d) = (config.max_n, config.max_d);
    let range = format!("n <= {max_n}, d <= {max_d}");
    let mut out = Vec::new();

    let c = cells.clone();
    out.push(check(
        Suite::Perm,
        format!("phi and phi_inv are mutually inverse ({range})"),
        move || {
            for cell in c.iter() {
                let d = cell.d;
                each(&cell.seqs, |x| {
                    let p = lib(permutations::phi_inv(x, d))?;
                    let back = lib(permutations::phi(&p, d))?;
                    ensure(back == *x, || {
                        format!("d = {d}, x = {x}: phi(phi_inv(x)) = {back}")
                    })
                })?;
                each(&cell.perms, |p| {
                    let x = lib(permutations::phi(p, d))?;
                    let back = lib(permutations::phi_inv(&x, d))?;
                    ensure(back == *p, || {
                        format!("d = {d}, pi = {p}: phi_inv(phi(pi)) = {back}")
                    })
                })?;
            }
            Ok(())
        },
    ));

    let c = cells.clone();
    out.push(check(
        Suite::Perm,
        format!("act(pi) = dasc(phi(pi)) + 1 ({range})"),
        move || {
            for cell in c.iter() {
                let d = cell.d;
                each(&cell.perms, |p| {
                    let act = permutations::active_elements(p, d).len();
                    let x = lib(permutations::phi(p, d))?;
                    ensure(act == x.dasc(d) + 1, || {
                        format!("d = {d}, pi = {p}: act = {act}, dasc = {}", x.dasc(d))
                    })
                })?;
            }
            Ok(())
        },
    ));

    let c = cells.clone();
    out.push(check(
        Suite::Perm,
        format!("incremental activity during phi_inv matches recomputation ({range})"),
        move || {
            for cell in c.iter() {
                let d = cell.d;
                each(&cell.seqs, |x| {
                    for step in lib(permutations::phi_inv_trace(x, d))? {
                        let full = permutations::active_elements(&step.permutation, d);
                        ensure(full == step.active, || {
                            format!(
                                "d = {d}, x = {x}, at {}: tracked {} vs {}",
                                step.permutation,
                                join(&step.active),
                                join(&full)
                            )
                        })?;
                    }
                    Ok(())
                })?;
            }
            Ok(())
        },
    ));

    out.push(check(
        Suite::Perm,
        format!("inserting n keeps activity and follows the insertion law ({range})"),
        move || {
            for (n, d) in grid(max_n, max_d).into_iter().filter(|&(n, _)| n >= 2) {
                each(&all_perms(n - 1), |sigma| {
                    let ok = permutations::is_difference_permutation(sigma, d);
                    let act = permutations::active_elements(sigma, d);
                    let s = sigma.values();
                    for pos in 0..=s.len() {
                        let mut v = s.to_vec();
                        v.insert(pos, n);
                        let pi = Permutation::new(v).unwrap();
                        let legal = ok && (pos == 0 || act.contains(&s[pos - 1]));
                        let is = permutations::is_difference_permutation(&pi, d);
                        ensure(is == legal, || {
                            format!("d = {d}, sigma = {sigma}, pi = {pi}: difference = {is}, expected {legal}")
                        })?;
                        if legal {
                            let mut after = permutations::active_elements(&pi, d);
                            after.remove(&n);
                            ensure(after == act, || {
                                format!("d = {d}, sigma = {sigma}, pi = {pi}: Act {} became {}", join(&act), join(&after))
                            })?;
                        }
                    }
                    Ok(())
                })?;
            }
            Ok(())
        },
    ));

    for d in 0..=max_d {
        let relation = if d <= 1 { "=" } else { "subset of" };
        out.push(check(
            Suite::Perm,
            format!("S^{d}_n {relation} S_n(tau_{}) (n <= {max_n})", d + 3),
            move || {
                let tau = lib(permutations::tau_pattern(d as usize + 3))?;
                for n in 1..=max_n {
                    each(&all_perms(n), |p| {
                        let diff = permutations::is_difference_permutation(p, d);
                        let avoids = !permutations::contains_pattern(p, &tau, d);
                        let ok = if d <= 1 {
                            diff == avoids
                        } else {
                            !diff || avoids
                        };
                        ensure(ok, || {
                            format!("pi = {p}: difference = {diff}, avoids tau = {avoids}")
                        })
                    })?;
                }
                Ok(())
            },
        ));
    }

    for d in 2..=max_d {
        let ns: Vec<usize> = (d as usize + 3..=max_n).collect();
        if ns.is_empty() {
            continue;
        }
        out.push(check(
            Suite::Perm,
            format!(
                "witness (d+2)...n d...1(d+1) separates S^{d}_n from S_n(tau_{}) (n in {})",
                d + 3,
                join(&ns)
            ),
            move || {
                let tau = lib(permutations::tau_pattern(d as usize + 3))?;
                for &n in &ns {
                    let w = lib(strictness_witness(n, d))?;
                    ensure(!permutations::contains_pattern(&w, &tau, d), || {
                        format!("{w} contains tau")
                    })?;
                    ensure(!permutations::is_difference_permutation(&w, d), || {
                        format!("{w} is a difference permutation")
                    })?;
                    ensure(
                        !oracle::naive_contains_tau(w.values(), d as usize + 3),
                        || format!("oracle: {w} contains tau"),
                    )?;
                    ensure(
                        !oracle::naive_is_difference_permutation(w.values(), d),
                        || format!("oracle: {w} is a difference permutation"),
                    )?;
                }
                Ok(())
            },
        ));
    }

    let pn = max_n.min(MAX_PATTERN_N);
    out.push(check(
        Suite::Perm,
        format!("S^d_n = S_n(Sigma_(d+3)) (n <= {pn}, d <= {max_d})"),
        move || {
            for d in 0..=max_d {
                let family = permutations::sigma_family(d);
                for n in 1..=pn {
                    each(&all_perms(n), |p| {
                        let diff = permutations::is_difference_permutation(p, d);
                        let avoids = permutations::avoids_all(p, &family, d);
                        ensure(diff == avoids, || {
                            format!(
                                "d = {d}, pi = {p}: difference = {diff}, avoids Sigma = {avoids}"
                            )
                        })
                    })?;
                }
            }
            Ok(())
        },
    ));

    let c = cells.clone();
    out.push(check(
        Suite::Perm,
        format!("brute-force filters agree with the enumerator and pattern matcher ({range})"),
        move || {
            for cell in c.iter() {
                let (n, d) = (cell.n, cell.d);
                let fast = lib(permutations::enumerate_difference_permutations(n, d))?;
                ensure(fast == cell.perms, || {
                    format!("n = {n}, d = {d}: S^d_n lists differ")
                })?;
                if n > MAX_PATTERN_N {
                    continue;
                }
                let tau = lib(permutations::tau_pattern(d as usize + 3))?;
                let family = permutations::sigma_family(d);
                let all = all_perms(n);
                let by_tau: Vec<Permutation> = all
                    .iter()
                    .filter(|p| !permutations::contains_pattern(p, &tau, d))
                    .cloned()
                    .collect();
                let naive_tau = lib(oracle::filter_permutations(
                    n,
                    PermutationFilter::AvoidsTau,
                    d,
                ))?;
                ensure(by_tau == naive_tau, || {
                    format!("n = {n}, d = {d}: tau-avoider lists differ")
                })?;
                let by_sigma: Vec<Permutation> = all
                    .iter()
                    .filter(|p| permutations::avoids_all(p, &family, d))
                    .cloned()
                    .collect();
                let naive_sigma = lib(oracle::filter_permutations(
                    n,
                    PermutationFilter::AvoidsSigma,
                    d,
                ))?;
                ensure(by_sigma == naive_sigma, || {
                    format!("n = {n}, d = {d}: Sigma-avoider lists differ")
                })?;
            }
            Ok(())
        },
    ));

    Ok(out)
}

// ---------------------------------------------------------------------------
// Posets

struct PosetCell {
    n: usize,
    d: u32,
    seqs: Vec<DSequence>,
    /// `P^d_n` from the brute-force filter.
    posets: Vec<FactorialPoset>,
}

fn poset_cells(config: &Config) -> Result<Vec<PosetCell>> {
    grid(config.max_n, config.max_d)
        .into_par_iter()
        .map(|(n, d)| {
            Ok(PosetCell {
                n,
                d,
                seqs: sequences::enumerate_d_ascent_sequences(n, d)?,
                posets: oracle::filter_posets(n, PosetFilter::DifferenceD, d)?,
            })
        })
        .collect()
}

/// Inactivity of `k` read as "at least `d` active elements below `k` but
/// not below `k + 1`", optionally also requiring `a_{k+1} <= a_k`.
fn set_form_inactive(
    p: &FactorialPoset,
    act: &BTreeSet<usize>,
    k: usize,
    d: u32,
    ordered: bool,
) -> bool {
    let n = p.len();
    if k == n {
        return true;
    }
    let count = (1..=n)
        .filter(|&u| act.contains(&u))
        .filter(|&u| p.less(u, k).unwrap() && !p.less(u, k + 1).unwrap())
        .count();
    count >= d as usize && (!ordered || p.a(k + 1) <= p.a(k))
}

/// If `i <_P k` and `i+1` is not below `k`, some `j` is below `i+1` but not
/// below `i`.
fn d0_rule(p: &FactorialPoset) -> bool {
    let n = p.len();
    let lt = |u: usize, v: usize| p.less(u, v).unwrap();
    (1..n).all(|i| {
        let trigger = (1..=n).any(|k| lt(i, k) && !lt(i + 1, k));
        !trigger || (1..=n).any(|j| lt(j, i + 1) && !lt(j, i))
    })
}

fn poset_checks(config: &Config) -> Result<Vec<Check>> {
    let cells = std::sync::Arc::new(poset_cells(config)?);
    let (max_n, max_d) = (config.max_n, config.max_d);
    let range = format!("n <= {max_n}, d <= {max_d}");
    let pn = max_n.min(MAX_PATTERN_N);
    let mut out = Vec::new();

    let c = cells.clone();
    out.push(check(
        Suite::Poset,
        format!("psi and psi_inv are mutually inverse ({range})"),
        move || {
            for cell in c.iter() {
                let d = cell.d;
                each(&cell.seqs, |x| {
                    let p = lib(posets::psi_inv(x, d))?;
                    let back = lib(posets::psi(&p, d))?;
                    ensure(back == *x, || {
                        format!("d = {d}, x = {x}: psi(psi_inv(x)) = {back}")
                    })
                })?;
                each(&cell.posets, |p| {
                    let x = lib(posets::psi(p, d))?;
                    let back = lib(posets::psi_inv(&x, d))?;
                    ensure(back == *p, || {
                        format!("d = {d}, omega = {p}: psi_inv(psi(P)) = {back}")
                    })
                })?;
            }
            Ok(())
        },
    ));

    let c = cells.clone();
    out.push(check(
        Suite::Poset,
        format!("Act(P) = dAsc(psi(P)) ({range})"),
        move || {
            for cell in c.iter() {
                let d = cell.d;
                each(&cell.posets, |p| {
                    let act = posets::active_elements(p, d);
                    let x = lib(posets::psi(p, d))?;
                    let asc = x.d_ascents(d);
                    ensure(act == asc, || {
                        format!(
                            "d = {d}, omega = {p}: Act = {}, dAsc = {}",
                            join(&act),
                            join(&asc)
                        )
                    })
                })?;
            }
            Ok(())
        },
    ));

    let c = cells.clone();
    out.push(check(
        Suite::Poset,
        format!("direct and recursive psi agree ({range})"),
        move || {
            for cell in c.iter() {
                let d = cell.d;
                each(&cell.posets, |p| {
                    let a = lib(posets::psi(p, d))?;
                    let b = lib(posets::psi_recursive(p, d))?;
                    ensure(a == b, || {
                        format!("d = {d}, omega = {p}: direct {a}, recursive {b}")
                    })
                })?;
            }
            Ok(())
        },
    ));

    out.push(check(
        Suite::Poset,
        format!("extension law for difference posets ({range})"),
        move || {
            for (n, d) in grid(max_n, max_d).into_iter().filter(|&(n, _)| n >= 2) {
                each(&lib(posets::enumerate_factorial_posets(n))?, |p| {
                    let prefix = p.prefix(n - 1);
                    let an = p.a(n);
                    let expected = posets::is_difference_poset(&prefix, d)
                        && (an == 0
                            || an == n - 1
                            || posets::active_elements(&prefix, d).contains(&an));
                    let got = posets::is_difference_poset(p, d);
                    ensure(got == expected, || {
                        format!("d = {d}, omega = {p}: difference = {got}, expected {expected}")
                    })
                })?;
            }
            Ok(())
        },
    ));

    for d in 1..=max_d {
        let relation = if d == 1 { "=" } else { "subset of" };
        out.push(check(
            Suite::Poset,
            format!("P^{d}_n {relation} P_n(P_{}) (n <= {pn})", d + 3),
            move || {
                for n in 1..=pn {
                    each(&lib(posets::enumerate_factorial_posets(n))?, |p| {
                        let diff = posets::is_difference_poset(p, d);
                        let free = !lib(posets::contains_special_poset(p, d as usize + 3))?;
                        let ok = if d == 1 { diff == free } else { !diff || free };
                        ensure(ok, || {
                            format!("omega = {p}: difference = {diff}, special-free = {free}")
                        })
                    })?;
                }
                Ok(())
            },
        ));
    }

    out.push(check(
        Suite::Poset,
        format!("P_n(P_3) subset of P^0_n (n <= {pn})"),
        move || {
            for n in 1..=pn {
                each(&lib(posets::enumerate_factorial_posets(n))?, |p| {
                    let free = !lib(posets::contains_special_poset(p, 3))?;
                    ensure(!free || posets::is_difference_poset(p, 0), || {
                        format!("omega = {p} is P_3-free but not in P^0")
                    })
                })?;
            }
            Ok(())
        },
    ));

    if max_n >= 5 {
        out.push(check(
            Suite::Poset,
            "01013 lies in P^0_5 but contains P_3",
            || {
                let p = lib(FactorialPoset::new(vec![0, 1, 0, 1, 3]))?;
                ensure(posets::is_difference_poset(&p, 0), || {
                    "01013 is not in P^0_5".into()
                })?;
                ensure(lib(posets::contains_special_poset(&p, 3))?, || {
                    "01013 avoids P_3".into()
                })?;
                ensure(oracle::naive_is_difference_poset(p.omega(), 0), || {
                    "oracle: 01013 is not in P^0_5".into()
                })?;
                ensure(oracle::naive_contains_special(p.omega(), 3), || {
                    "oracle: 01013 avoids P_3".into()
                })
            },
        ));
    }

    out.push(check(
        Suite::Poset,
        format!("set-form inactivity matches the interval form (d >= 1 as stated, d = 0 with a_(k+1) <= a_k) ({range})"),
        move || {
            for (n, d) in grid(max_n, max_d) {
                each(&lib(posets::enumerate_factorial_posets(n))?, |p| {
                    let act = posets::active_elements(p, d);
                    for k in 1..=n {
                        let set_form = set_form_inactive(p, &act, k, d, d == 0);
                        ensure(set_form == !act.contains(&k), || {
                            format!("d = {d}, omega = {p}, k = {k}: set form says inactive = {set_form}")
                        })?;
                    }
                    Ok(())
                })?;
            }
            Ok(())
        },
    ));

    out.push(check(
        Suite::Poset,
        format!("d = 0 order-rule characterization of P^0_n (n <= {pn})"),
        move || {
            for n in 1..=pn {
                each(&lib(posets::enumerate_factorial_posets(n))?, |p| {
                    let diff = posets::is_difference_poset(p, 0);
                    let rule = d0_rule(p);
                    ensure(diff == rule, || {
                        format!("omega = {p}: difference = {diff}, rule = {rule}")
                    })
                })?;
            }
            Ok(())
        },
    ));

    let c = cells.clone();
    out.push(check(
        Suite::Poset,
        format!("brute-force filter agrees with the enumerator and special-poset test ({range})"),
        move || {
            for cell in c.iter() {
                let (n, d) = (cell.n, cell.d);
                let fast = lib(posets::enumerate_difference_posets(n, d))?;
                ensure(fast == cell.posets, || {
                    format!("n = {n}, d = {d}: P^d_n lists differ")
                })?;
                if n > MAX_PATTERN_N {
                    continue;
                }
                let m = d + 3;
                let mut free = Vec::new();
                for p in lib(posets::enumerate_factorial_posets(n))? {
                    if !lib(posets::contains_special_poset(&p, m as usize))? {
                        free.push(p);
                    }
                }
                let naive = lib(oracle::filter_posets(n, PosetFilter::SpecialFree, m))?;
                ensure(free == naive, || {
                    format!("n = {n}: P_{m}-free lists differ")
                })?;
            }
            Ok(())
        },
    ));

    Ok(out)
}

// ---------------------------------------------------------------------------
// Matrices

struct MatrixCell {
    n: usize,
    fishburn: Vec<TriMatrix>,
    restricted: Vec<TriMatrix>,
}

fn matrix_cells(config: &Config) -> Result<Vec<MatrixCell>> {
    (1..=config.max_matrix_n)
        .into_par_iter()
        .map(|n| {
            Ok(MatrixCell {
                n,
                fishburn: matrices::enumerate_fishburn(n)?,
                restricted: matrices::enumerate_column_restricted(n)?,
            })
        })
        .collect()
}

fn show(a: &TriMatrix) -> String {
    serde_json::to_string(a).expect("matrix serializes")
}

fn sorted(mut v: Vec<TriMatrix>) -> Vec<TriMatrix> {
    v.sort_by(|a, b| oracle::matrix_key(a).cmp(&oracle::matrix_key(b)));
    v
}

fn matrix_checks(config: &Config) -> Result<Vec<Check>> {
    let cells = std::sync::Arc::new(matrix_cells(config)?);
    let mn = config.max_matrix_n;
    let range = format!("n <= {mn}");
    let mut out = Vec::new();

    if mn >= 3 {
        let c = cells.clone();
        out.push(check(Suite::Matrix, "|M_3| = |M′_3| = 5", move || {
            let cell = &c[2];
            ensure(
                cell.fishburn.len() == 5 && cell.restricted.len() == 5,
                || {
                    format!(
                        "|M_3| = {}, |M′_3| = {}",
                        cell.fishburn.len(),
                        cell.restricted.len()
                    )
                },
            )
        }));
    }

    let c = cells.clone();
    out.push(check(
        Suite::Matrix,
        format!("|M_n| = |M′_n| = |A^0_n| ({range})"),
        move || {
            for cell in c.iter() {
                let seqs = lib(sequences::enumerate_d_ascent_sequences(cell.n, 0))?.len();
                let (f, r) = (cell.fishburn.len(), cell.restricted.len());
                ensure(f == r && r == seqs, || {
                    format!("n = {}: |M| = {f}, |M′| = {r}, |A^0| = {seqs}", cell.n)
                })?;
            }
            Ok(())
        },
    ));

    let c = cells.clone();
    out.push(check(
        Suite::Matrix,
        format!("theta maps M′_n into M_n keeping weight and dimension ({range})"),
        move || {
            for cell in c.iter() {
                each(&cell.restricted, |a| {
                    let b = lib(matrices::theta(a))?;
                    ensure(
                        b.is_fishburn() && b.weight() == a.weight() && b.dim() == a.dim(),
                        || format!("A = {} gives {}", show(a), show(&b)),
                    )
                })?;
            }
            Ok(())
        },
    ));

    let c = cells.clone();
    out.push(check(
        Suite::Matrix,
        format!("theta_inv inverts theta on both sides ({range})"),
        move || {
            for cell in c.iter() {
                each(&cell.restricted, |a| {
                    let b = lib(matrices::theta(a))?;
                    let back = lib(matrices::theta_inv(&b))?;
                    ensure(back == *a, || {
                        format!("A = {}: theta_inv(theta(A)) = {}", show(a), show(&back))
                    })
                })?;
                each(&cell.fishburn, |b| {
                    let a = lib(matrices::theta_inv(b))?;
                    ensure(a.is_column_restricted() && a.weight() == b.weight(), || {
                        format!(
                            "B = {}: theta_inv(B) = {} not column-restricted of equal weight",
                            show(b),
                            show(&a)
                        )
                    })?;
                    let back = lib(matrices::theta(&a))?;
                    ensure(back == *b, || {
                        format!("B = {}: theta(theta_inv(B)) = {}", show(b), show(&back))
                    })
                })?;
            }
            Ok(())
        },
    ));

    let c = cells.clone();
    out.push(check(
        Suite::Matrix,
        format!("alpha conserves weight, dimension and rmin_m, sets index to rmax_m, and beta undoes it on every theta block ({range})"),
        move || {
            for cell in c.iter() {
                each(&cell.restricted, |a| {
                    let stages = lib(matrices::theta_stages(a))?;
                    for k in 1..=a.dim() {
                        let block = stages[k - 1].leading(k);
                        let image = lib(matrices::alpha(&block))?;
                        let ctx = || format!("A = {}, k = {k}, block = {}", show(a), show(&block));
                        ensure(image.weight() == block.weight() && image.dim() == block.dim(), || {
                            format!("{}: weight or dimension changed", ctx())
                        })?;
                        ensure(image.rmin(k) == block.rmin(k), || format!("{}: rmin_m changed", ctx()))?;
                        let index = lib(matrices::index_row(&image))?;
                        ensure(Some(index) == block.rmax(k), || format!("{}: index(alpha) = {index}", ctx()))?;
                        ensure(lib(matrices::beta(&image))? == block, || format!("{}: beta(alpha(B)) != B", ctx()))?;
                        ensure(stages[k] == stages[k - 1].with_leading(&image), || {
                            format!("{}: stage {k} is not alpha on the leading block", ctx())
                        })?;
                    }
                    Ok(())
                })?;
            }
            Ok(())
        },
    ));

    let c = cells.clone();
    out.push(check(
        Suite::Matrix,
        format!(
            "theta stages keep weight, a Fishburn leading block and rmin_i < rmax_(i+1) ({range})"
        ),
        move || {
            for cell in c.iter() {
                each(&cell.restricted, |a| {
                    let stages = lib(matrices::theta_stages(a))?;
                    let m = a.dim();
                    for i in 1..=m {
                        let s = &stages[i];
                        let ctx = || format!("A = {}, i = {i}, A^(i) = {}", show(a), show(s));
                        ensure(s.weight() == a.weight(), || {
                            format!("{}: weight changed", ctx())
                        })?;
                        ensure(s.leading(i).is_fishburn(), || {
                            format!("{}: leading block not Fishburn", ctx())
                        })?;
                        let rmin = s.rmin(i).ok_or_else(|| format!("{}: zero column", ctx()))?;
                        let rmax_next = if i == m { Some(m + 1) } else { s.rmax(i + 1) };
                        ensure(rmax_next.is_some_and(|r| rmin < r), || {
                            format!("{}: rmin_i >= rmax_(i+1)", ctx())
                        })?;
                    }
                    Ok(())
                })?;
            }
            Ok(())
        },
    ));

    let c = cells.clone();
    out.push(check(
        Suite::Matrix,
        format!("theta_bar is a bijection from M′_n onto M_n ({range})"),
        move || {
            for cell in c.iter() {
                let targets: HashSet<&TriMatrix> = cell.fishburn.iter().collect();
                let mut seen: HashSet<TriMatrix> = HashSet::new();
                for a in &cell.restricted {
                    let b = lib(matrices::theta_bar(a))?;
                    ensure(b.weight() == a.weight() && targets.contains(&b), || {
                        format!("A = {}: theta_bar(A) = {} is not in M_n", show(a), show(&b))
                    })?;
                    let shown = show(&b);
                    ensure(seen.insert(b), || {
                        format!("A = {}: theta_bar value {shown} repeats", show(a))
                    })?;
                }
                ensure(seen.len() == targets.len(), || {
                    format!(
                        "n = {}: image has {} of {} matrices",
                        cell.n,
                        seen.len(),
                        targets.len()
                    )
                })?;
            }
            Ok(())
        },
    ));

    let c = cells.clone();
    out.push(check(
        Suite::Matrix,
        format!("brute-force filters agree with the enumerators ({range})"),
        move || {
            for cell in c.iter() {
                let n = cell.n;
                let naive = lib(oracle::filter_matrices(n, MatrixFilter::Fishburn))?;
                ensure(sorted(cell.fishburn.clone()) == naive, || {
                    format!("n = {n}: Fishburn lists differ")
                })?;
                let naive = lib(oracle::filter_matrices(n, MatrixFilter::ColumnRestricted))?;
                ensure(sorted(cell.restricted.clone()) == naive, || {
                    format!("n = {n}: column-restricted lists differ")
                })?;
            }
            Ok(())
        },
    ));

    Ok(out)
}

// ---------------------------------------------------------------------------
// Counts

fn count_checks(config: &Config) -> Vec<Check> {
    let cfg = *config;
    let range = format!(
        "n <= {}, d <= {}, matrices n <= {}",
        cfg.max_n, cfg.max_d, cfg.max_matrix_n
    );
    let table = std::sync::Arc::new(std::sync::OnceLock::new());
    let build = move |t: &std::sync::OnceLock<std::result::Result<oracle::CountTable, String>>| {
        t.get_or_init(|| {
            lib(oracle::build_count_table_with(
                cfg.max_n,
                cfg.max_d,
                cfg.max_matrix_n,
            ))
        })
        .clone()
    };
    let mut out = Vec::new();

    out.push(check(
        Suite::Counts,
        format!(
            "d-ascent enumerator matches the brute-force filter (n <= {}, d <= {})",
            cfg.max_n, cfg.max_d
        ),
        move || {
            for (n, d) in grid(cfg.max_n, cfg.max_d) {
                let fast = lib(sequences::enumerate_d_ascent_sequences(n, d))?;
                let naive = lib(oracle::filter_sequences(n, d))?;
                ensure(fast == naive, || format!("n = {n}, d = {d}: lists differ"))?;
            }
            Ok(())
        },
    ));

    let t = table.clone();
    out.push(check(
        Suite::Counts,
        format!("fast counts equal oracle counts ({range})"),
        move || {
            let table = build(&t)?;
            match table.oracle_mismatches().first() {
                Some((c, n, d, e)) => Err(format!(
                    "{c}(n={n}, d={d}): fast {}, oracle {}",
                    e.count, e.oracle
                )),
                None => Ok(()),
            }
        },
    ));

    let t = table;
    out.push(check(
        Suite::Counts,
        format!("all classes are equinumerous ({range})"),
        move || {
            let table = build(&t)?;
            match table.cross_class_mismatches().into_iter().next() {
                Some(m) => Err(m),
                None => Ok(()),
            }
        },
    ));

    out
}
