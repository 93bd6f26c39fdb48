//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::Instant;

use fishlab::matrices::{self, TriMatrix};
use fishlab::oracle::{self, MatrixFilter, PermutationFilter, PosetFilter};
use fishlab::permutations::{self, Permutation};
use fishlab::posets::{self, FactorialPoset};
use fishlab::sequences::{self, DSequence};
use rayon::prelude::*;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

const MAX_N: usize = 8;
const MAX_D: u32 = 3;
const MAX_MATRIX_N: usize = 6;
const MAX_PATTERN_N: usize = 7;
const MAX_THETA_BAR_N: usize = 5;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: fishlab::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn each<T: Sync>(items: &[T], f: impl Fn(&T) -> Outcome + Sync) -> Outcome {
    match items.par_iter().find_map_first(|t| f(t).err()) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn cells() -> impl Iterator<Item = (usize, u32)> {
    (1..=MAX_N).flat_map(|n| (0..=MAX_D).map(move |d| (n, d)))
}

fn digits(s: &str) -> Vec<usize> {
    s.bytes().map(|b| (b - b'0') as usize).collect()
}

fn perm(s: &str) -> Permutation {
    Permutation::new(digits(s)).unwrap()
}

fn seq(s: &str) -> DSequence {
    DSequence::new(digits(s).into_iter().map(|v| v as i64).collect()).unwrap()
}

fn poset(s: &str) -> FactorialPoset {
    FactorialPoset::new(digits(s)).unwrap()
}

fn mat(rows: &[&[u32]]) -> TriMatrix {
    TriMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn all_perms(n: usize) -> Vec<Permutation> {
    oracle::all_permutations(n)
        .into_iter()
        .map(|v| Permutation::new(v).unwrap())
        .collect()
}

fn all_posets(n: usize) -> Vec<FactorialPoset> {
    oracle::all_inversion_sequences(n)
        .into_iter()
        .map(|v| FactorialPoset::new(v).unwrap())
        .collect()
}

/// `{i : x_(i+1) > x_i - d}`, 1-based.
fn d_ascents(x: &DSequence, d: u32) -> BTreeSet<usize> {
    let v = x.values();
    (1..v.len())
        .filter(|&i| v[i] > v[i - 1] - i64::from(d))
        .collect()
}

fn sorted(mut v: Vec<TriMatrix>) -> Vec<TriMatrix> {
    v.sort_by(|a, b| oracle::matrix_key(a).cmp(&oracle::matrix_key(b)));
    v
}

fn show(a: &TriMatrix) -> String {
    serde_json::to_string(a).unwrap()
}

// ---------------------------------------------------------------------------

fn weight19() -> TriMatrix {
    mat(&[
        &[2, 1, 3, 2, 1],
        &[0, 1, 1, 3, 0],
        &[0, 0, 0, 1, 2],
        &[0, 0, 0, 2, 0],
        &[0, 0, 0, 0, 0],
    ])
}

fn criterion_1() -> Outcome {
    let a3: Vec<DSequence> = ["000", "001", "010", "011", "012"]
        .iter()
        .map(|s| seq(s))
        .collect();
    ensure(
        lib(sequences::enumerate_d_ascent_sequences(3, 0))? == a3,
        || "A_3 enumeration".into(),
    )?;

    let m3 = vec![
        mat(&[&[3]]),
        mat(&[&[2, 0], &[0, 1]]),
        mat(&[&[1, 1], &[0, 1]]),
        mat(&[&[1, 0], &[0, 2]]),
        mat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
    ];
    ensure(lib(matrices::enumerate_fishburn(3))? == m3, || {
        "M_3 enumeration".into()
    })?;

    let pi = perm("42617385");
    ensure(lib(permutations::phi(&pi, 2))? == seq("00203124"), || {
        "phi(42617385)".into()
    })?;
    let trace = lib(permutations::phi_inv_trace(&seq("00203124"), 2))?;
    let shapes: Vec<String> = trace
        .iter()
        .map(|s| {
            s.permutation
                .values()
                .iter()
                .map(|v| v.to_string())
                .collect()
        })
        .collect();
    let expected = [
        "1", "21", "213", "4213", "42135", "426135", "4261735", "42617385",
    ];
    ensure(shapes == expected, || format!("insertion trace {shapes:?}"))?;
    ensure(trace[0].active == BTreeSet::from([1]), || {
        "trace start activity".into()
    })?;
    ensure(
        trace[7].active == BTreeSet::from([1, 2, 3, 5, 7, 8]),
        || "trace end activity".into(),
    )?;

    ensure(
        lib(posets::psi(&poset("00204126"), 2))? == seq("00203124"),
        || "psi(00204126)".into(),
    )?;

    let b = mat(&[
        &[1, 0, 2, 3, 1],
        &[0, 3, 1, 1, 0],
        &[0, 0, 2, 3, 2],
        &[0, 0, 0, 2, 0],
        &[0, 0, 0, 0, 0],
    ]);
    let alpha_b = mat(&[
        &[1, 0, 3, 2, 1],
        &[0, 3, 1, 1, 0],
        &[0, 0, 0, 0, 2],
        &[0, 0, 0, 2, 3],
        &[0, 0, 0, 0, 2],
    ]);
    ensure(lib(matrices::alpha(&b))? == alpha_b, || "alpha(B)".into())?;
    ensure(lib(matrices::beta(&alpha_b))? == b, || {
        "beta(alpha(B))".into()
    })?;

    let a3 = mat(&[
        &[2, 1, 3, 2, 1],
        &[0, 0, 1, 3, 0],
        &[0, 0, 1, 1, 2],
        &[0, 0, 0, 2, 0],
        &[0, 0, 0, 0, 0],
    ]);
    let a5 = mat(&[
        &[2, 1, 2, 3, 1],
        &[0, 0, 3, 1, 0],
        &[0, 0, 0, 0, 2],
        &[0, 0, 0, 1, 1],
        &[0, 0, 0, 0, 2],
    ]);
    let expected = [weight19(), weight19(), a3.clone(), a3, a5.clone()];
    let stages = lib(matrices::theta_stages(&weight19()))?;
    ensure(stages[1..] == expected, || {
        "theta stages A^(1)..A^(5)".into()
    })?;
    ensure(lib(matrices::theta(&weight19()))? == a5, || {
        "theta of the weight-19 matrix".into()
    })
}

fn criterion_2() -> Outcome {
    for (n, d) in cells() {
        let seqs = lib(oracle::filter_sequences(n, d))?;
        let perms = lib(oracle::filter_permutations(
            n,
            PermutationFilter::DifferenceD,
            d,
        ))?;
        let pos = lib(oracle::filter_posets(n, PosetFilter::DifferenceD, d))?;
        ensure(seqs.len() == perms.len() && seqs.len() == pos.len(), || {
            format!("sizes differ at n = {n}, d = {d}")
        })?;

        each(&seqs, |x| {
            let p = lib(permutations::phi_inv(x, d))?;
            ensure(
                oracle::naive_is_difference_permutation(p.values(), d),
                || format!("d = {d}: phi_inv({x}) = {p} not in S^d"),
            )?;
            ensure(lib(permutations::phi(&p, d))? == *x, || {
                format!("d = {d}: phi(phi_inv({x})) != x")
            })?;
            let q = lib(posets::psi_inv(x, d))?;
            ensure(oracle::naive_is_difference_poset(q.omega(), d), || {
                format!("d = {d}: psi_inv({x}) = {q} not in P^d")
            })?;
            ensure(lib(posets::psi(&q, d))? == *x, || {
                format!("d = {d}: psi(psi_inv({x})) != x")
            })
        })?;
        each(&perms, |p| {
            let x = lib(permutations::phi(p, d))?;
            ensure(oracle::naive_is_d_ascent_sequence(x.values(), d), || {
                format!("d = {d}: phi({p}) = {x} not in A^d")
            })?;
            ensure(lib(permutations::phi_inv(&x, d))? == *p, || {
                format!("d = {d}: phi_inv(phi({p})) != pi")
            })?;
            let act = oracle::naive_active_permutation(p.values(), d).len();
            ensure(act == d_ascents(&x, d).len() + 1, || {
                format!("d = {d}: act({p}) = {act}, phi = {x}")
            })
        })?;
        each(&pos, |p| {
            let x = lib(posets::psi(p, d))?;
            ensure(oracle::naive_is_d_ascent_sequence(x.values(), d), || {
                format!("d = {d}: psi({p}) = {x} not in A^d")
            })?;
            ensure(lib(posets::psi_inv(&x, d))? == *p, || {
                format!("d = {d}: psi_inv(psi({p})) != P")
            })?;
            let act: BTreeSet<usize> = oracle::naive_active_poset(p.omega(), d)
                .into_iter()
                .collect();
            ensure(act == d_ascents(&x, d), || {
                format!("d = {d}: Act({p}) != dAsc({x})")
            })
        })?;
    }

    for n in 1..=MAX_MATRIX_N {
        let restricted = lib(oracle::filter_matrices(n, MatrixFilter::ColumnRestricted))?;
        let fishburn = lib(oracle::filter_matrices(n, MatrixFilter::Fishburn))?;
        ensure(restricted.len() == fishburn.len(), || {
            format!("|M′_{n}| != |M_{n}|")
        })?;
        each(&restricted, |a| {
            let b = lib(matrices::theta(a))?;
            let (fish, _) = oracle::naive_classify(&b.rows());
            ensure(fish && b.weight() == a.weight(), || {
                format!("theta({}) = {}", show(a), show(&b))
            })?;
            ensure(lib(matrices::theta_inv(&b))? == *a, || {
                format!("theta_inv(theta({})) != A", show(a))
            })
        })?;
        each(&fishburn, |b| {
            let a = lib(matrices::theta_inv(b))?;
            let (_, restricted) = oracle::naive_classify(&a.rows());
            ensure(restricted && a.weight() == b.weight(), || {
                format!("theta_inv({}) = {}", show(b), show(&a))
            })?;
            ensure(lib(matrices::theta(&a))? == *b, || {
                format!("theta(theta_inv({})) != B", show(b))
            })
        })?;
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    for n in 1..=MAX_N {
        let all = all_perms(n);
        for d in [0u32, 1] {
            let tau = lib(permutations::tau_pattern(d as usize + 3))?;
            let diff = lib(oracle::filter_permutations(
                n,
                PermutationFilter::DifferenceD,
                d,
            ))?;
            let avoid = lib(oracle::filter_permutations(
                n,
                PermutationFilter::AvoidsTau,
                d,
            ))?;
            ensure(diff == avoid, || {
                format!("oracle: S^{d}_{n} != S_{n}(tau_{})", d + 3)
            })?;
            let fast: Vec<Permutation> = all
                .iter()
                .filter(|p| permutations::is_difference_permutation(p, d))
                .cloned()
                .collect();
            let fast_avoid: Vec<Permutation> = all
                .iter()
                .filter(|p| !permutations::contains_pattern(p, &tau, d))
                .cloned()
                .collect();
            ensure(fast == diff && fast_avoid == avoid, || {
                format!("module lists differ at n = {n}, d = {d}")
            })?;
        }
    }

    let tau5 = lib(permutations::tau_pattern(5))?;
    for n in [5, 6] {
        let diff = lib(oracle::filter_permutations(
            n,
            PermutationFilter::DifferenceD,
            2,
        ))?;
        let avoid = lib(oracle::filter_permutations(
            n,
            PermutationFilter::AvoidsTau,
            2,
        ))?;
        let avoid_set: HashSet<&Permutation> = avoid.iter().collect();
        ensure(diff.iter().all(|p| avoid_set.contains(p)), || {
            format!("S^2_{n} not inside S_{n}(tau_5)")
        })?;
        ensure(diff.len() < avoid.len(), || {
            format!("S^2_{n} = S_{n}(tau_5)")
        })?;
    }
    let w = perm("45213");
    ensure(
        !permutations::contains_pattern(&w, &tau5, 2) && !oracle::naive_contains_tau(w.values(), 5),
        || "45213 contains tau_5".into(),
    )?;
    ensure(
        !permutations::is_difference_permutation(&w, 2)
            && !oracle::naive_is_difference_permutation(w.values(), 2),
        || "45213 lies in S^2_5".into(),
    )?;

    for n in 1..=MAX_PATTERN_N {
        let all = all_perms(n);
        for d in 0..=MAX_D {
            let family = permutations::sigma_family(d);
            let diff = lib(oracle::filter_permutations(
                n,
                PermutationFilter::DifferenceD,
                d,
            ))?;
            let avoid = lib(oracle::filter_permutations(
                n,
                PermutationFilter::AvoidsSigma,
                d,
            ))?;
            let fast: Vec<Permutation> = all
                .iter()
                .filter(|p| permutations::avoids_all(p, &family, d))
                .cloned()
                .collect();
            ensure(diff == avoid && avoid == fast, || {
                format!("S^{d}_{n} != S_{n}(Sigma_{})", d + 3)
            })?;
        }

        let all = all_posets(n);
        let p1 = lib(oracle::filter_posets(n, PosetFilter::DifferenceD, 1))?;
        let p4 = lib(oracle::filter_posets(n, PosetFilter::SpecialFree, 4))?;
        ensure(p1 == p4, || format!("oracle: P^1_{n} != P_{n}(P_4)"))?;
        let mut fast_p4 = Vec::new();
        for p in &all {
            if !lib(posets::contains_special_poset(p, 4))? {
                fast_p4.push(p.clone());
            }
        }
        ensure(fast_p4 == p4, || {
            format!("module P_4-free list differs at n = {n}")
        })?;
        let p0: HashSet<FactorialPoset> =
            lib(oracle::filter_posets(n, PosetFilter::DifferenceD, 0))?
                .into_iter()
                .collect();
        let p3 = lib(oracle::filter_posets(n, PosetFilter::SpecialFree, 3))?;
        ensure(p3.iter().all(|p| p0.contains(p)), || {
            format!("P_{n}(P_3) not inside P^0_{n}")
        })?;
    }
    let w = poset("01013");
    ensure(
        posets::is_difference_poset(&w, 0) && oracle::naive_is_difference_poset(w.omega(), 0),
        || "01013 not in P^0_5".into(),
    )?;
    ensure(
        lib(posets::contains_special_poset(&w, 3))? && oracle::naive_contains_special(w.omega(), 3),
        || "01013 lies in P_5(P_3)".into(),
    )
}

fn criterion_4() -> Outcome {
    for n in 1..=MAX_PATTERN_N {
        for d in 0..=MAX_D {
            let seqs = lib(sequences::enumerate_d_ascent_sequences(n, d))?;
            ensure(seqs == lib(oracle::filter_sequences(n, d))?, || {
                format!("A^{d}_{n} lists differ")
            })?;
            let perms = lib(permutations::enumerate_difference_permutations(n, d))?;
            let naive = lib(oracle::filter_permutations(
                n,
                PermutationFilter::DifferenceD,
                d,
            ))?;
            ensure(perms == naive, || format!("S^{d}_{n} lists differ"))?;
            let pos = lib(posets::enumerate_difference_posets(n, d))?;
            let naive = lib(oracle::filter_posets(n, PosetFilter::DifferenceD, d))?;
            ensure(pos == naive, || format!("P^{d}_{n} lists differ"))?;
            ensure(
                seqs.len() == perms.len() && perms.len() == pos.len(),
                || {
                    format!(
                        "n = {n}, d = {d}: {} / {} / {}",
                        seqs.len(),
                        perms.len(),
                        pos.len()
                    )
                },
            )?;
            if n == 3 && d == 0 {
                ensure(seqs.len() == 5, || "|A_3| != 5".into())?;
            }
        }
    }
    for n in 1..=MAX_MATRIX_N {
        let fish = sorted(lib(matrices::enumerate_fishburn(n))?);
        let colres = sorted(lib(matrices::enumerate_column_restricted(n))?);
        ensure(
            fish == lib(oracle::filter_matrices(n, MatrixFilter::Fishburn))?,
            || format!("M_{n} lists differ"),
        )?;
        ensure(
            colres == lib(oracle::filter_matrices(n, MatrixFilter::ColumnRestricted))?,
            || format!("M′_{n} lists differ"),
        )?;
        let asc = lib(oracle::filter_sequences(n, 0))?.len();
        ensure(fish.len() == colres.len() && colres.len() == asc, || {
            format!(
                "n = {n}: |M| = {}, |M′| = {}, |A^0| = {asc}",
                fish.len(),
                colres.len()
            )
        })?;
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    for (n, d) in cells() {
        if n >= 2 {
            each(&all_perms(n - 1), |sigma| {
                let ok = permutations::is_difference_permutation(sigma, d);
                let act = permutations::active_elements(sigma, d);
                let s = sigma.values();
                for pos in 0..=s.len() {
                    let mut v = s.to_vec();
                    v.insert(pos, n);
                    let pi = Permutation::new(v).unwrap();
                    let legal = ok && (pos == 0 || act.contains(&s[pos - 1]));
                    ensure(
                        permutations::is_difference_permutation(&pi, d) == legal,
                        || format!("d = {d}: inserting into {sigma} gives {pi}"),
                    )?;
                    if legal {
                        let mut after = permutations::active_elements(&pi, d);
                        after.remove(&n);
                        ensure(after == act, || {
                            format!("d = {d}: activity of {sigma} changed in {pi}")
                        })?;
                    }
                }
                Ok(())
            })?;

            each(&all_posets(n), |p| {
                let prefix = p.prefix(n - 1);
                let an = p.a(n);
                let expected = posets::is_difference_poset(&prefix, d)
                    && (an == 0
                        || an == n - 1
                        || posets::active_elements(&prefix, d).contains(&an));
                ensure(posets::is_difference_poset(p, d) == expected, || {
                    format!("d = {d}: extension law at {p}")
                })
            })?;
        }
        each(&lib(posets::enumerate_difference_posets(n, d))?, |p| {
            ensure(
                lib(posets::psi(p, d))? == lib(posets::psi_recursive(p, d))?,
                || format!("d = {d}: psi forms differ at {p}"),
            )
        })?;
    }

    for n in 1..=MAX_MATRIX_N {
        each(&lib(matrices::enumerate_column_restricted(n))?, |a| {
            let stages = lib(matrices::theta_stages(a))?;
            let m = a.dim();
            for k in 1..=m {
                let block = stages[k - 1].leading(k);
                let image = lib(matrices::alpha(&block))?;
                let ctx = || format!("A = {}, k = {k}", show(a));
                ensure(
                    image.weight() == block.weight() && image.dim() == block.dim(),
                    || format!("{}: alpha weight", ctx()),
                )?;
                ensure(image.rmin(k) == block.rmin(k), || {
                    format!("{}: alpha rmin_m", ctx())
                })?;
                ensure(
                    Some(lib(matrices::index_row(&image))?) == block.rmax(k),
                    || format!("{}: index", ctx()),
                )?;

                let s = &stages[k];
                ensure(s.weight() == a.weight(), || {
                    format!("{}: stage weight", ctx())
                })?;
                ensure(s.leading(k).is_fishburn(), || {
                    format!("{}: stage block not Fishburn", ctx())
                })?;
                let rmin = s.rmin(k).ok_or_else(|| format!("{}: zero column", ctx()))?;
                let rmax_next = if k == m { Some(m + 1) } else { s.rmax(k + 1) };
                ensure(rmax_next.is_some_and(|r| rmin < r), || {
                    format!("{}: rmin_k >= rmax_(k+1)", ctx())
                })?;
            }
            Ok(())
        })?;
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    for n in 1..=MAX_THETA_BAR_N {
        let targets: HashSet<TriMatrix> = lib(oracle::filter_matrices(n, MatrixFilter::Fishburn))?
            .into_iter()
            .collect();
        let mut image = HashSet::new();
        for a in lib(oracle::filter_matrices(n, MatrixFilter::ColumnRestricted))? {
            let b = lib(matrices::theta_bar(&a))?;
            ensure(b.weight() == a.weight() && targets.contains(&b), || {
                format!("theta_bar({}) = {}", show(&a), show(&b))
            })?;
            let shown = show(&b);
            ensure(image.insert(b), || format!("theta_bar repeats {shown}"))?;
        }
        ensure(image.len() == targets.len(), || {
            format!("n = {n}: image {} of {}", image.len(), targets.len())
        })?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("golden examples", criterion_1),
        ("exhaustive bijection roundtrips", criterion_2),
        ("pattern and special-poset identities", criterion_3),
        ("counting chain across all classes", criterion_4),
        ("structural properties of the constructions", criterion_5),
        ("theta_bar bijectivity", criterion_6),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({secs:.1}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.1}s): {e}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
