//! Acceptance suite: one line per criterion with its runtime budget.
//!
//! Reference values that are not plain closed forms come from oracles
//! written here, independent of the engine (Gram-matrix inverses, brute
//! force factorization search, binomial Catalan numbers).

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use weingarten::bounds;
use weingarten::exact::{RationalFunctionRep, SeriesCoefficients, SolveOptions};
use weingarten::graph::{
    brute_force_factorizations, enumerate_paths, factorization_to_path, path_to_factorization, GraphKind, GraphNode,
    PathCountTable,
};
use weingarten::mc::{self, EnsembleSpec};
use weingarten::moments::{self, MomentSpec};
use weingarten::{Engine, Family, IntegerPartition, PairPartition, Permutation};

type Q = BigRational;
type Outcome = Result<String, String>;
/// Name, time budget in seconds, check.
type Criterion<'a> = (&'a str, u64, Box<dyn Fn() -> Outcome + 'a>);

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Integer coefficients, lowest degree first.
fn poly(c: &[i64]) -> Vec<Q> {
    c.iter().map(|&x| q(x)).collect()
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    while out.len() > 1 && out.last().unwrap().is_zero() {
        out.pop();
    }
    out
}

/// `rep == num/den` as rational functions (cross-multiplication).
fn same_function(rep: &RationalFunctionRep, num: &[i64], den: &[i64]) -> bool {
    poly_mul(&rep.numerator, &poly(den)) == poly_mul(&poly(num), &rep.denominator)
}

fn catalan(n: usize) -> BigInt {
    // C(2n, n) / (n + 1)
    let mut c = BigInt::one();
    for i in 0..n {
        c = c * BigInt::from(2 * n - i) / BigInt::from(i + 1);
    }
    c / BigInt::from(n + 1)
}

fn catalan_product(mu: &IntegerPartition) -> BigInt {
    mu.parts().iter().map(|&p| catalan(p - 1)).product()
}

/// Number of loops of `m ∪ n` on `{1..2k}`.
fn loops(m: &PairPartition, n: &PairPartition) -> u32 {
    let size = 2 * m.level();
    let mut parent: Vec<usize> = (0..=size).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (a, b) in m.blocks().into_iter().chain(n.blocks()) {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    (1..=size).filter(|&x| find(&mut parent, x) == x).count() as u32
}

/// Inverse of a square rational matrix by Gauss-Jordan elimination.
fn invert(mut a: Vec<Vec<Q>>) -> Option<Vec<Vec<Q>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| if i == j { q(1) } else { q(0) }).collect()).collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        inv.swap(col, p);
        let s = a[col][col].recip();
        for j in 0..n {
            a[col][j] = &a[col][j] * &s;
            inv[col][j] = &inv[col][j] * &s;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let (x, y) = (&a[col][j] * &f, &inv[col][j] * &f);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
    }
    Some(inv)
}

/// `Wg^O(e_k, m, D)` for every `m ∈ P₂(2k)` from the inverse Gram matrix
/// `(D^{loops(m,n)})`.
fn orthogonal_gram_oracle(k: usize, dim: i64) -> Option<Vec<(PairPartition, Q)>> {
    let all = PairPartition::all(k);
    let gram = all
        .iter()
        .map(|m| all.iter().map(|n| num_traits::pow(q(dim), loops(m, n) as usize)).collect())
        .collect();
    let inv = invert(gram)?;
    let e = all.iter().position(|m| *m == PairPartition::trivial(k)).unwrap();
    Some(all.iter().cloned().zip(inv[e].iter().cloned()).collect())
}

// -------------------------------------------------------------------------

fn c1_unitary_closed_forms(eng: &Engine) -> Outcome {
    let cases: [(&str, &[i64], &[i64]); 3] = [("1", &[1], &[0, 1]), ("1,2", &[1], &[-1, 0, 1]), ("2,1", &[-1], &[0, -1, 0, 1])];
    for (perm, num, den) in cases {
        let node = GraphNode::Perm(perm.parse().unwrap());
        let rep = eng.reconstruct_rational(Family::Unitary, &node, None).map_err(|e| e.to_string())?;
        check(same_function(&rep, num, den), || format!("Wg^U({perm}) reconstructed as {rep}"))?;
    }
    Ok("1/d, 1/(d²-1), -1/(d(d²-1))".into())
}

fn c2_orthogonal_closed_forms(eng: &Engine) -> Outcome {
    let den = [0, -2, 1, 1]; // (d+2)d(d-1)
    let cases: [(&str, &[i64]); 3] = [("1,2|3,4", &[1, 1]), ("1,3|2,4", &[-1]), ("1,4|2,3", &[-1])];
    for (m, num) in cases {
        let node = GraphNode::Pairing(m.parse().unwrap());
        let rep = eng.reconstruct_rational(Family::Orthogonal, &node, None).map_err(|e| e.to_string())?;
        check(same_function(&rep, num, &den), || format!("Wg^O({m}) reconstructed as {rep}"))?;
    }
    Ok("all of P₂(4)".into())
}

fn c3_coe_shift(eng: &Engine) -> Outcome {
    let mut n = 0;
    for k in 1..=4 {
        for d in 2 * k as i64..=2 * k as i64 + 5 {
            for m in PairPartition::all(k) {
                let direct = eng.wg_coe_direct(&m, d).map_err(|e| e.to_string())?;
                let shifted = eng.wg_orthogonal(&m, d + 1).map_err(|e| e.to_string())?;
                check(direct == shifted, || format!("m={m}, d={d}: {direct} vs {shifted}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} equalities"))
}

fn c4_aiii_example(eng: &Engine) -> Outcome {
    let sigma: Permutation = "2,1".parse().unwrap();
    let mut n = 0;
    for d in 3..=8i64 {
        for dm in 0..=d {
            let got = eng.wg_aiii(&sigma, d, dm).map_err(|e| e.to_string())?;
            let want = Q::new((d * d - dm * dm).into(), (d * (d * d - 1)).into());
            check(got == want, || format!("d={d}, d⁻={dm}: {got} vs {want}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} (d, d⁻) pairs"))
}

fn c5_series_vs_solver(eng: &Engine) -> Outcome {
    const G: usize = 3;
    let mut n = 0;
    let runs: Vec<(Family, Option<i64>)> = vec![
        (Family::Unitary, None),
        (Family::Orthogonal, None),
        (Family::Symplectic, None),
        (Family::AIII, Some(0)),
        (Family::AIII, Some(1)),
        (Family::AIII, Some(-2)),
    ];
    for (family, dm) in runs {
        let kind = family.graph_kind();
        for k in 1..=4 {
            for mu in IntegerPartition::all(k) {
                let node = kind.representative(&mu);
                let s = eng.series(family, &node, G).map_err(|e| e.to_string())?;
                let from_paths = s.inverse_power_coefficients(dm).map_err(|e| e.to_string())?;
                let rep = eng.reconstruct_rational(family, &node, dm).map_err(|e| e.to_string())?;
                let from_function = rep.inverse_power_coefficients(s.max_inverse_power()).map_err(|e| e.to_string())?;
                check(from_paths == from_function, || {
                    format!("{family} {node} d⁻={dm:?}: series {from_paths:?} vs function {from_function:?}")
                })?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} classes through g = {G}"))
}

fn c6_catalan(table: &PathCountTable) -> Outcome {
    let mut n = 0;
    for (kind, kmax) in [(GraphKind::Unitary, 5), (GraphKind::Orthogonal, 4)] {
        for k in 1..=kmax {
            for v in kind.all_nodes(k) {
                let got = table.count(kind, &v, v.transposition_length() as u32);
                let want = catalan_product(&v.class_key());
                check(got == want, || format!("{kind} {v}: {got} vs {want}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} elements"))
}

fn c7_bijection(table: &PathCountTable) -> Outcome {
    let kind = GraphKind::Unitary;
    let mut n = 0;
    for v in kind.all_nodes(4) {
        for l in 0..=5u32 {
            let paths = enumerate_paths(kind, &v, l, None, table).map_err(|e| e.to_string())?;
            let brute: BTreeSet<Vec<(usize, usize)>> =
                brute_force_factorizations(kind, &v, l as usize).map_err(|e| e.to_string())?.into_iter().collect();
            check(BigInt::from(paths.len()) == table.count(kind, &v, l), || format!("{v}, l={l}: enumeration vs count"))?;
            check(paths.len() == brute.len(), || format!("{v}, l={l}: #P={} but #F={}", paths.len(), brute.len()))?;
            let mut seen = BTreeSet::new();
            for p in &paths {
                let f = path_to_factorization(p).map_err(|e| e.to_string())?;
                let back = factorization_to_path(&f).map_err(|e| e.to_string())?;
                check(back.to_string() == p.to_string(), || format!("round trip of {p} gave {back}"))?;
                check(brute.contains(&f.transpositions), || format!("{f} is not a monotone factorization of {v}"))?;
                seen.insert(f.transpositions);
                n += 1;
            }
            check(seen.len() == brute.len(), || format!("{v}, l={l}: map is not injective"))?;
        }
    }
    Ok(format!("{n} paths round-tripped"))
}

fn c8_bounds(eng: &Engine) -> Outcome {
    let table = eng.path_counts();
    let mut reports = Vec::new();
    for k in 1..=5 {
        reports.push(bounds::certify_unitary_bounds(table, k, 3));
        reports.push(bounds::certify_neighborhood(table, GraphKind::Unitary, k));
    }
    for k in 1..=4 {
        reports.push(bounds::certify_orthogonal_bounds(table, k, 3));
    }
    for k in 1..=3usize {
        // the upper unitary bound switches on at d⁴ > 36k⁷
        let upper_from = (1i64..).find(|&d| d.pow(4) > 36 * (k as i64).pow(7)).unwrap();
        for d in k as i64..=upper_from + 3 {
            reports.push(bounds::certify_wg_ratio_unitary(eng, k, d).map_err(|e| e.to_string())?);
        }
        let sp = bounds::ratio_threshold(36, k);
        let o = bounds::ratio_threshold(144, k);
        check(sp * sp > 36 * (k as i64).pow(7) && (sp - 1).pow(2) <= 36 * (k as i64).pow(7), || format!("sp threshold {sp}"))?;
        for d in sp..sp + 4 {
            reports.push(bounds::certify_sp_ratio(eng, k, d).map_err(|e| e.to_string())?);
        }
        check(bounds::certify_sp_ratio(eng, k, sp - 1).is_err(), || "sp ratio accepted below threshold".into())?;
        for d in o..o + 4 {
            reports.push(bounds::certify_orthogonal_ratio(eng, k, d).map_err(|e| e.to_string())?);
        }
    }
    let checks: usize = reports.iter().map(|r| r.checks.len()).sum();
    if let Some(bad) = reports.iter().find(|r| !r.passed()) {
        return fail(format!("{}", bad));
    }
    Ok(format!("{} reports, {checks} instances", reports.len()))
}

fn c9_symplectic(eng: &Engine) -> Outcome {
    let mut n = 0;
    for k in 1..=3 {
        for d in k as i64..=k as i64 + 4 {
            let oracle = orthogonal_gram_oracle(k, -2 * d).ok_or(format!("Gram matrix singular at k={k}, D={}", -2 * d))?;
            for (m, o) in oracle {
                let sp = eng.value(Family::Symplectic, &GraphNode::Pairing(m.clone()), d, None, SolveOptions::default());
                let sp = sp.map_err(|e| e.to_string())?;
                check(sp == o.abs(), || format!("m={m}, d={d}: |Wg^Sp| = {sp}, |Wg^O(-2d)| = {}", o.abs()))?;
                n += 1;
            }
        }
        for mu in IntegerPartition::all(k) {
            let node = GraphKind::Orthogonal.representative(&mu);
            let s = eng.series(Family::Symplectic, &node, 3).map_err(|e| e.to_string())?;
            let coeffs = s.inverse_power_coefficients(None).map_err(|e| e.to_string())?;
            check(coeffs.iter().all(|c| !c.is_negative()), || format!("negative coefficient for {node}: {s}"))?;
            if let SeriesCoefficients::Counts(c) = &s.coefficients {
                check(c.iter().all(|c| !c.is_negative()), || format!("{s}"))?;
            }
        }
    }
    Ok(format!("{n} magnitudes, series nonnegative"))
}

fn c10_sum_rules(eng: &Engine) -> Outcome {
    let mut n = 0;
    for k in 1..=3usize {
        for d in (k as i64).max(2)..=5 {
            for sigma in Permutation::all(k) {
                // Σ_i u_{k,i} ū_{σ(k),i} = δ_{k,σ(k)}
                let lhs = moments::unitary_row_sum(eng, &sigma, d).map_err(|e| e.to_string())?;
                let rhs = if sigma.apply(k) == k {
                    let rows: Vec<usize> = (1..k).collect();
                    let crows: Vec<usize> = (1..k).map(|r| sigma.apply(r)).collect();
                    moments::moment_unitary(eng, &rows, &rows, &crows, &rows, d).map_err(|e| e.to_string())?
                } else {
                    q(0)
                };
                check(lhs == rhs, || format!("unitary σ={sigma}, d={d}: {lhs} vs {rhs}"))?;
                if sigma.apply(k) == k {
                    let down = eng.wg_unitary(&sigma.restrict_down().unwrap(), d).map_err(|e| e.to_string())?;
                    check(lhs == down, || format!("unitary σ={sigma}, d={d}: {lhs} vs Wg(σ↓) = {down}"))?;
                }
                for dm in -1..=2i64 {
                    if sigma.apply(k) == k {
                        // Tr s = d⁻
                        let lhs = moments::aiii_trace_sum(eng, &sigma, d, dm).map_err(|e| e.to_string())?;
                        let rows: Vec<usize> = (1..k).collect();
                        let cols: Vec<usize> = (1..k).map(|r| sigma.apply(r)).collect();
                        let rest = moments::moment_aiii(eng, &rows, &cols, d, dm).map_err(|e| e.to_string())?;
                        check(lhs == q(dm) * &rest, || format!("trace rule σ={sigma}, d={d}, d⁻={dm}: {lhs}"))?;
                    } else {
                        // s² = 1
                        let lhs = moments::aiii_square_sum(eng, &sigma, d, dm).map_err(|e| e.to_string())?;
                        let r = sigma.inverse().apply(k);
                        let keep: Vec<usize> = (1..k).filter(|&p| p != r).collect();
                        let rows: Vec<usize> = keep.clone();
                        let cols: Vec<usize> = keep.iter().map(|&p| sigma.apply(p)).collect();
                        let rhs = if sigma.apply(k) == r {
                            moments::moment_aiii(eng, &rows, &cols, d, dm).map_err(|e| e.to_string())?
                        } else {
                            q(0)
                        };
                        check(lhs == rhs, || format!("square rule σ={sigma}, d={d}, d⁻={dm}: {lhs} vs {rhs}"))?;
                    }
                    n += 1;
                }
            }
        }
    }
    for d in 1..=6i64 {
        for dm in -d..=d {
            let total: Q = (1..=d as usize)
                .map(|i| moments::moment_aiii(eng, &[i], &[i], d, dm).unwrap())
                .fold(q(0), |a, b| a + b);
            check(total == q(dm), || format!("Σ∫s_ii = {total} at d={d}, d⁻={dm}"))?;
        }
    }
    Ok(format!("{n} identities"))
}

fn c11_monte_carlo(eng: &Engine) -> Outcome {
    const N: usize = 200_000;
    const SEED: u64 = 20_240_611;
    let unitary = [
        "rows=1;cols=1;crows=1;ccols=1",
        "rows=1;cols=2;crows=1;ccols=2",
        "rows=1;cols=1",
        "rows=1,2;cols=1,2;crows=1,2;ccols=1,2",
        "rows=1,1;cols=1,1;crows=1,1;ccols=1,1",
        "rows=1,2;cols=1,2;crows=1,2;ccols=2,1",
        "rows=1,1;cols=1,2;crows=1;ccols=1",
    ];
    let orthogonal = [
        "rows=1,1;cols=1,1",
        "rows=1,2;cols=1,2",
        "rows=1,1;cols=1,2",
        "rows=1,1,1,1;cols=1,1,1,1",
        "rows=1,1,2,2;cols=1,1,2,2",
        "rows=1,2,1,2;cols=1,2,2,1",
        "rows=1,1,1;cols=1,1,1",
    ];
    let coe_low = ["rows=1;cols=1;crows=1;ccols=1", "rows=1;cols=2;crows=1;ccols=2", "rows=1;cols=1;crows=2;ccols=2", "rows=1;cols=2"];
    let coe_high = [
        "rows=1,1;cols=1,1;crows=1,1;ccols=1,1",
        "rows=1,3;cols=2,4;crows=1,3;ccols=2,4",
        "rows=1,2;cols=1,2;crows=1,2;ccols=2,1",
    ];
    let aiii_low = ["rows=1;cols=1", "rows=1,2;cols=2,1", "rows=1,2;cols=1,2", "rows=1,1;cols=1,1", "rows=1,2,3;cols=2,3,1"];
    let aiii_high = ["rows=1,2,3,4;cols=2,1,4,3", "rows=1,1,2,2;cols=1,1,2,2"];

    // (family, d, signature, monomials)
    type Run<'a> = (Family, usize, Option<(usize, usize)>, Vec<&'a str>);
    let mut runs: Vec<Run> = Vec::new();
    for d in 2..=4 {
        runs.push((Family::Unitary, d, None, unitary.to_vec()));
        runs.push((Family::Orthogonal, d, None, orthogonal.to_vec()));
        let mut coe = coe_low.to_vec();
        if d == 4 {
            coe.extend(coe_high);
        }
        runs.push((Family::Coe, d, None, coe));
    }
    for (a, b) in [(2, 1), (2, 2), (3, 1)] {
        let mut m = aiii_low.to_vec();
        if a + b == 4 {
            m.extend(aiii_high);
        }
        runs.push((Family::AIII, a + b, Some((a, b)), m));
    }
    let mut worst = 0.0f64;
    let mut n = 0;
    for (family, d, sig, monomials) in runs {
        let ens = EnsembleSpec::new(family, d, sig).map_err(|e| e.to_string())?;
        let specs: Vec<MomentSpec> = monomials
            .iter()
            .map(|m| MomentSpec::parse_monomial(family, m, d as i64, ens.dminus()).unwrap())
            .collect();
        for r in mc::compare_with_exact(eng, &ens, &specs, N, SEED).map_err(|e| format!("{ens}: {e}"))? {
            check(r.passed, || format!("{ens}: {r}"))?;
            worst = worst.max(r.z_re).max(r.z_im);
            n += 1;
        }
    }
    Ok(format!("{n} moments, max |z| = {worst:.2}"))
}

fn c12_dyck(table: &PathCountTable) -> Outcome {
    for k in 1..=5 {
        let r = bounds::dyck_area_report(table, &IntegerPartition::ones(k));
        check(r.agrees && r.dyck_area_sum == "0" && r.direct_count == "0", || format!("{r}"))?;
    }
    let two: IntegerPartition = "2".parse().unwrap();
    let r = bounds::dyck_area_report(table, &two);
    check(!r.agrees && r.to_string().contains("DISCREPANCY"), || format!("(2) not flagged: {r}"))?;
    check(bounds::dyck_area_sum(&"3+3".parse().unwrap()) >= BigInt::from(2), || "(3,3) misses the area-2 path".into())?;
    Ok(format!("(1^k) agree at 0; flagged: {r}"))
}

fn main() -> ExitCode {
    let engine = Engine::new();
    let table = PathCountTable::new();
    let criteria: Vec<Criterion> = vec![
        ("unitary closed forms", 1, Box::new(|| c1_unitary_closed_forms(&Engine::new()))),
        ("orthogonal closed forms", 1, Box::new(|| c2_orthogonal_closed_forms(&Engine::new()))),
        ("coe equals orthogonal at d+1", 120, Box::new(|| c3_coe_shift(&engine))),
        ("aiii [2,1] closed form", 10, Box::new(|| c4_aiii_example(&engine))),
        ("series matches solver", 300, Box::new(|| c5_series_vs_solver(&engine))),
        ("catalan shortest paths", 120, Box::new(|| c6_catalan(&table))),
        ("paths versus factorizations", 60, Box::new(|| c7_bijection(&table))),
        ("bound certification", 600, Box::new(|| c8_bounds(&engine))),
        ("symplectic magnitude", 30, Box::new(|| c9_symplectic(&engine))),
        ("moment sum rules", 60, Box::new(|| c10_sum_rules(&engine))),
        ("monte carlo suite", 300, Box::new(|| c11_monte_carlo(&engine))),
        ("dyck area report", 10, Box::new(|| c12_dyck(&table))),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(*limit) => Err(format!("took {elapsed:.2?}, limit {limit} s")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2} {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
