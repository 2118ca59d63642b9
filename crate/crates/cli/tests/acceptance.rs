//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails or overruns its time bound.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use hnquiver_core::counting::{
    is_coprime, moduli_count_poly, projective_group_order_poly, torsor_orbit_count, SemistableCounter,
};
use hnquiver_core::purity::{strong_purity_check, weak_purity_periodic_fit};
use hnquiver_core::rep::{enumerate_reps, enumerate_subreps};
use hnquiver_core::strata::classify_representations;
use hnquiver_core::{
    Analyzer, Budgets, Character, CountPolynomial, CountSamples, DimVector, FieldTable, PrimePower,
    Quiver, Representation, Subspace, SubspaceCatalog, SubspaceTuple, Verdict,
};
use num_bigint::BigInt;
use rayon::prelude::*;

type Outcome = Result<String, String>;

/// Id, name, time bound in seconds, check.
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn dv(v: &[usize]) -> DimVector {
    DimVector::new(v.to_vec())
}

fn theta10() -> Character {
    Character::new(vec![1, 0])
}

/// The instances of the partition and HN-uniqueness criteria.
fn partition_instances() -> Vec<(&'static str, Quiver, DimVector, Vec<u64>)> {
    vec![
        ("K2 (1,1)", Quiver::kronecker(2), dv(&[1, 1]), vec![2, 3, 4, 5]),
        ("K3 (1,1)", Quiver::kronecker(3), dv(&[1, 1]), vec![2, 3, 4, 5]),
        ("A2 (1,1)", Quiver::linear(2), dv(&[1, 1]), vec![2, 3, 4, 5]),
        ("K2 (2,3)", Quiver::kronecker(2), dv(&[2, 3]), vec![2, 3]),
    ]
}

fn field_axioms() -> Outcome {
    let mut checked = 0u64;
    for q in [2u64, 3, 4, 5, 7, 8, 9, 16] {
        let f = FieldTable::new(q).map_err(|e| e.to_string())?;
        let els: Vec<_> = f.elements().collect();
        ensure!(els.len() as u64 == q, "F_{q} has {} elements", els.len());
        let p = PrimePower::new(q).unwrap().p();
        for &a in &els {
            ensure!(f.add(a, 0) == a && f.mul(a, 1) == a, "identity fails for {a} in F_{q}");
            ensure!(f.add(a, f.neg(a)) == 0, "additive inverse fails for {a} in F_{q}");
            let mut sum = 0;
            for _ in 0..p {
                sum = f.add(sum, a);
            }
            ensure!(sum == 0, "characteristic of F_{q} is not {p}");
            if a != 0 {
                let inv = f.inv(a).map_err(|e| e.to_string())?;
                ensure!(f.mul(a, inv) == 1, "multiplicative inverse fails for {a} in F_{q}");
            } else {
                ensure!(f.inv(0).is_err(), "zero is invertible in F_{q}");
            }
            for &b in &els {
                ensure!(f.add(a, b) == f.add(b, a) && f.mul(a, b) == f.mul(b, a), "commutativity fails in F_{q}");
                ensure!(a == 0 || b == 0 || f.mul(a, b) != 0, "zero divisors in F_{q}");
                for &c in &els {
                    ensure!(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)), "additive associativity fails in F_{q}");
                    ensure!(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)), "multiplicative associativity fails in F_{q}");
                    ensure!(
                        f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)),
                        "distributivity fails in F_{q}"
                    );
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} triples"))
}

fn partition_identity() -> Outcome {
    let theta = theta10();
    let mut points = 0u128;
    for (name, quiver, d, qs) in partition_instances() {
        for q in qs {
            let f = FieldTable::new(q).unwrap();
            let table = classify_representations(&quiver, &d, &theta, &f, &Budgets::default())
                .map_err(|e| format!("{name} F_{q}: {e}"))?;
            let sum: u128 = table.counts().values().map(|&c| c as u128).sum();
            let expected = (q as u128).pow(quiver.rep_space_dim(&d) as u32);
            ensure!(sum == expected, "{name} F_{q}: strata hold {sum} points, expected {expected}");
            points += sum;
        }
    }
    Ok(format!("{points} points classified"))
}

fn stratum_formula_lock() -> Outcome {
    let quiver = Quiver::kronecker(2);
    let d = dv(&[2, 3]);
    let theta = theta10();
    let f = FieldTable::new(2).unwrap();
    let table = classify_representations(&quiver, &d, &theta, &f, &Budgets::default()).map_err(|e| e.to_string())?;
    ensure!(table.total() == 4096, "table holds {} points", table.total());
    let formulas = SemistableCounter::new(&quiver, &theta)
        .stratum_formulas(&d)
        .map_err(|e| e.to_string())?;
    ensure!(formulas.len() == table.counts().len(), "formula and table type lists differ");
    let mut nonempty = 0;
    for formula in &formulas {
        let predicted = formula.poly().eval_integer(2).map_err(|e| e.to_string())?;
        let observed = table.count(&formula.beta);
        ensure!(
            predicted == BigInt::from(observed),
            "type {}: formula {predicted}, exhaustive {observed}",
            formula.beta
        );
        nonempty += usize::from(observed > 0);
    }
    Ok(format!("{} types, {nonempty} nonempty, all equal", formulas.len()))
}

/// Inclusion between catalog subspaces, tabulated once per field.
struct Inclusions {
    index: Vec<HashMap<Subspace, usize>>,
    table: Vec<Vec<Vec<bool>>>,
}

impl Inclusions {
    fn new(f: &FieldTable, catalog: &SubspaceCatalog) -> Self {
        let mut index = Vec::new();
        let mut table = Vec::new();
        for n in 0..=catalog.max_ambient() {
            let all = catalog.subspaces(n);
            index.push(all.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect());
            table.push(all.iter().map(|a| all.iter().map(|b| a.is_subspace_of(f, b)).collect()).collect());
        }
        Inclusions { index, table }
    }

    fn locate(&self, s: &SubspaceTuple) -> Vec<usize> {
        s.spaces().iter().map(|x| self.index[x.ambient()][x]).collect()
    }
}

/// Every filtration of `m` by subrepresentations whose subquotients are
/// semistable with strictly decreasing slopes, found by exhaustive search.
fn hn_candidates(
    m: &Representation<'_>,
    theta: &Character,
    catalog: &SubspaceCatalog,
    inclusions: &Inclusions,
) -> Vec<Vec<SubspaceTuple>> {
    struct Ctx {
        subs: Vec<SubspaceTuple>,
        /// `(theta(dim S), total dim S)` per subrepresentation
        weight: Vec<(i64, i64)>,
        /// `below[i][j]`: `subs[i]` is a proper subrepresentation of `subs[j]`
        below: Vec<Vec<bool>>,
    }

    // positive denominators, so compare by cross-multiplying
    fn steeper(a: (i64, i64), b: (i64, i64)) -> bool {
        a.0 * b.1 > b.0 * a.1
    }

    impl Ctx {
        /// Slope of `subs[hi] / subs[lo]` as an unreduced fraction.
        fn piece_slope(&self, lo: usize, hi: usize) -> (i64, i64) {
            let (a, b) = (self.weight[hi], self.weight[lo]);
            (a.0 - b.0, a.1 - b.1)
        }

        fn search(&self, at: usize, prev: Option<(i64, i64)>, path: &mut Vec<usize>, out: &mut Vec<Vec<SubspaceTuple>>) {
            let over: Vec<usize> = (0..self.subs.len()).filter(|&j| self.below[at][j]).collect();
            let slopes: Vec<(i64, i64)> = over.iter().map(|&t| self.piece_slope(at, t)).collect();
            for (k, &next) in over.iter().enumerate() {
                let piece = slopes[k];
                if prev.is_some_and(|p| !steeper(p, piece)) {
                    continue;
                }
                // the subquotient is unstable iff some T with at < T < next beats its slope
                let unstable = over
                    .iter()
                    .zip(&slopes)
                    .any(|(&t, &s)| steeper(s, piece) && self.below[t][next]);
                if unstable {
                    continue;
                }
                path.push(next);
                if self.subs[next].is_full() {
                    out.push(path.iter().map(|&i| self.subs[i].clone()).collect());
                } else {
                    self.search(next, Some(piece), path, out);
                }
                path.pop();
            }
        }
    }

    let subs = enumerate_subreps(m, catalog, &Budgets::default()).unwrap();
    let dims: Vec<DimVector> = subs.iter().map(|s| s.dims()).collect();
    let located: Vec<Vec<usize>> = subs.iter().map(|s| inclusions.locate(s)).collect();
    let ambient = m.dims().coords();
    let below = (0..subs.len())
        .map(|i| {
            (0..subs.len())
                .map(|j| {
                    dims[i].le(&dims[j])
                        && dims[i] != dims[j]
                        && (0..ambient.len())
                            .all(|v| inclusions.table[ambient[v]][located[i][v]][located[j][v]])
                })
                .collect()
        })
        .collect();
    let start = subs.iter().position(|s| s.is_zero()).unwrap();
    let ctx = Ctx {
        weight: subs.iter().map(|s| (theta.eval(&s.dims()), s.total_dim() as i64)).collect(),
        below,
        subs,
    };
    let mut out = Vec::new();
    ctx.search(start, None, &mut vec![start], &mut out);
    out
}

fn hn_uniqueness() -> Outcome {
    let theta = theta10();
    let mut reps = 0u64;
    for (name, quiver, d, qs) in partition_instances() {
        for q in qs {
            let f = FieldTable::new(q).unwrap();
            let catalog = SubspaceCatalog::for_dims(&f, &d, &Budgets::default()).unwrap();
            let analyzer = Analyzer::new(&f, &theta, &catalog, Budgets::default());
            let inclusions = Inclusions::new(&f, &catalog);
            let space = enumerate_reps(&quiver, &d, &f, &Budgets::default()).unwrap();
            const CHUNK: u64 = 1 << 10;
            let check = |c: u64| -> Result<u64, String> {
                let mut n = 0;
                for m in space.range(c * CHUNK..((c + 1) * CHUNK).min(space.len())) {
                    let found = hn_candidates(&m, &theta, &catalog, &inclusions);
                    ensure!(
                        found.len() == 1,
                        "{name} F_{q}: {} candidate HN filtrations for\n{}",
                        found.len(),
                        m.to_literal()
                    );
                    let (filtration, _) = analyzer.hn_filtration(&m).map_err(|e| e.to_string())?;
                    ensure!(
                        filtration.steps() == found[0].as_slice(),
                        "{name} F_{q}: hn_filtration disagrees with search for\n{}",
                        m.to_literal()
                    );
                    n += 1;
                }
                Ok(n)
            };
            reps += (0..space.len().div_ceil(CHUNK))
                .into_par_iter()
                .map(check)
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .sum::<u64>();
        }
    }
    Ok(format!("{reps} representations, each with exactly one HN filtration"))
}

fn moduli_polynomials() -> Outcome {
    let theta = theta10();
    let cases = [
        ("K2 (1,1)", Quiver::kronecker(2), CountPolynomial::from_ints(&[1, 1])),
        ("K3 (1,1)", Quiver::kronecker(3), CountPolynomial::from_ints(&[1, 1, 1])),
        ("A2 (1,1)", Quiver::linear(2), CountPolynomial::from_ints(&[1])),
    ];
    let d = dv(&[1, 1]);
    for (name, quiver, expected) in cases {
        let poly = moduli_count_poly(&quiver, &d, &theta).map_err(|e| format!("{name}: {e}"))?;
        ensure!(poly == expected, "{name}: got {poly}, expected {expected}");
        ensure!(poly.has_integer_coeffs() && poly.has_nonnegative_coeffs(), "{name}: coefficients of {poly}");
        for q in [2u64, 3, 4, 5] {
            let f = FieldTable::new(q).unwrap();
            let t = torsor_orbit_count(&quiver, &d, &theta, &f, &Budgets::default()).map_err(|e| e.to_string())?;
            let value = poly.eval_integer(q as i64).unwrap();
            ensure!(value == BigInt::from(t.orbits), "{name} F_{q}: {} orbits, polynomial gives {value}", t.orbits);
        }
    }
    Ok("q + 1, q^2 + q + 1, 1; orbit counts agree for q = 2..5".into())
}

fn torsor_divisibility() -> Outcome {
    let theta = theta10();
    let cycle = Quiver::new(2, vec![(0, 1), (1, 0)]).unwrap();
    let small = [2u64, 3, 4, 5];
    let instances: Vec<(&str, Quiver, DimVector, &[u64])> = vec![
        ("K2 (1,1)", Quiver::kronecker(2), dv(&[1, 1]), &small),
        ("K3 (1,1)", Quiver::kronecker(3), dv(&[1, 1]), &small),
        ("A2 (1,1)", Quiver::linear(2), dv(&[1, 1]), &small),
        ("K2 (1,2)", Quiver::kronecker(2), dv(&[1, 2]), &small),
        ("K2 (2,1)", Quiver::kronecker(2), dv(&[2, 1]), &small),
        ("K3 (1,2)", Quiver::kronecker(3), dv(&[1, 2]), &small),
        ("2-cycle (1,1)", cycle, dv(&[1, 1]), &small),
        ("K2 (2,3)", Quiver::kronecker(2), dv(&[2, 3]), &[2]),
    ];
    let mut checked = 0;
    for (name, quiver, d, qs) in instances {
        ensure!(is_coprime(&d, &theta), "{name} is not coprime");
        for &q in qs {
            let f = FieldTable::new(q).unwrap();
            let t = torsor_orbit_count(&quiver, &d, &theta, &f, &Budgets::default())
                .map_err(|e| format!("{name} F_{q}: {e}"))?;
            let pg = projective_group_order_poly(&d).unwrap().eval_integer(q as i64).unwrap();
            ensure!(BigInt::from(t.projective_group_order) == pg, "{name} F_{q}: |PG| mismatch");
            ensure!(t.stable % t.projective_group_order == 0, "{name} F_{q}: {} stables, |PG| = {pg}", t.stable);
            checked += 1;
        }
    }
    Ok(format!("{checked} instance/field pairs divisible"))
}

fn extension_counts() -> Outcome {
    let quiver = Quiver::kronecker(2);
    let d = dv(&[1, 1]);
    let theta = theta10();
    let base = PrimePower::new(2).unwrap();
    let mut samples = Vec::new();
    for n in 1..=2u32 {
        let f = FieldTable::new(base.pow(n).q()).unwrap();
        let t = torsor_orbit_count(&quiver, &d, &theta, &f, &Budgets::default()).map_err(|e| e.to_string())?;
        samples.push((n, BigInt::from(t.orbits)));
    }
    let samples = CountSamples::new(2, samples).map_err(|e| e.to_string())?;
    let report = strong_purity_check(&samples, 1).map_err(|e| e.to_string())?;
    ensure!(
        report.verdict == Verdict::StrongPolynomial(CountPolynomial::from_ints(&[1, 1])),
        "verdict {:?}",
        report.verdict
    );
    Ok("counts 3, 5 fit t + 1".into())
}

/// Points of the norm-one torus of `F_{q^2}/F_q` over `F_{q^n}`: Frobenius
/// acts on its character group by `-1`, so they are the `x` in
/// `F_{q^{2n}}^*` with `x^{(-q)^n} = x`.
fn norm_one_torus_count(q: u64, n: u32) -> u64 {
    let big = PrimePower::new(q).unwrap().pow(2 * n);
    let f = FieldTable::with_limit(big, 256).unwrap();
    let qn = q.pow(n);
    f.elements()
        .filter(|&x| x != 0)
        .filter(|&x| {
            if n % 2 == 1 {
                f.pow(x, qn + 1) == 1
            } else {
                f.pow(x, qn - 1) == 1
            }
        })
        .count() as u64
}

fn norm_one_torus() -> Outcome {
    let counts: Vec<(u32, BigInt)> = (1..=4).map(|n| (n, BigInt::from(norm_one_torus_count(2, n)))).collect();
    let shown: Vec<String> = counts.iter().map(|c| c.1.to_string()).collect();
    let samples = CountSamples::new(2, counts).map_err(|e| e.to_string())?;
    let report = weak_purity_periodic_fit(&samples, 2, 1).map_err(|e| e.to_string())?;
    let expected = Verdict::PeriodicPolynomial {
        period: 2,
        polys: vec![CountPolynomial::from_ints(&[-1, 1]), CountPolynomial::from_ints(&[1, 1])],
    };
    ensure!(report.verdict == expected, "counts {shown:?} gave {:?}", report.verdict);
    Ok(format!("counts {} give P_0 = t - 1, P_1 = t + 1", shown.join(", ")))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn hnquiver(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hnquiver")).args(args).output().expect("binary runs")
}

fn coprimality_gate() -> Outcome {
    let problem = data("k2_22.txt");
    let out = hnquiver(&["moduli-poly", problem.to_str().unwrap()]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure!(out.status.code() == Some(4), "exit status {:?}", out.status.code());
    ensure!(out.stdout.is_empty(), "printed a result");
    ensure!(stderr.contains("not coprime"), "diagnostic: {stderr}");
    Ok(format!("exit 4: {}", stderr.trim()))
}

fn determinism() -> Outcome {
    let mut runs = 0;
    for problem in ["a2_11.txt", "k3_11.txt", "k2_12.txt"] {
        let path = data(problem);
        for extra in [&[][..], &["--json"][..]] {
            let mut args = vec!["verify", "--qmax", "3", path.to_str().unwrap()];
            args.extend_from_slice(extra);
            let a = hnquiver(&args);
            let b = hnquiver(&args);
            ensure!(a.status.code() == Some(0), "{problem}: exit {:?}", a.status.code());
            ensure!(a.stdout == b.stdout && a.stderr == b.stderr, "{problem}: outputs differ");
            ensure!(a.status.code() == b.status.code(), "{problem}: exit codes differ");
            runs += 2;
        }
    }
    Ok(format!("{runs} runs, identical pairs"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "field axioms", 1, field_axioms),
        (2, "partition identity", 30, partition_identity),
        (3, "stratum-formula lock", 30, stratum_formula_lock),
        (4, "HN uniqueness", 60, hn_uniqueness),
        (5, "moduli polynomials", 10, moduli_polynomials),
        (6, "torsor divisibility", 10, torsor_divisibility),
        (7, "polynomial in q^n", 5, extension_counts),
        (8, "periodic fit", 5, norm_one_torus),
        (9, "coprimality gate", 1, coprimality_gate),
        (10, "determinism", 60, determinism),
    ];
    let mut failed = 0;
    for (id, name, seconds, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let bound = Duration::from_secs(seconds);
        let (status, detail) = match result {
            Ok(_) if elapsed > bound => ("FAIL", format!("over the {seconds}s bound")),
            Ok(detail) => ("PASS", detail),
            Err(why) => ("FAIL", why),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {status} {name} [{:.2}s / {seconds}s]: {detail}",
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}
