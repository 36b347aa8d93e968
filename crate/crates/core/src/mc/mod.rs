//! Monte Carlo estimates of Haar moments, as an independent statistical
//! check of the exact moment engine.
//!
//! Sample `i` of a run with seed `s` is drawn from the ChaCha20 stream
//! `(s, i)`, so estimates do not depend on thread count or scheduling.
//! Per-chunk sums are reduced pairwise in a fixed order.

mod matrix;

use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

pub use matrix::CMatrix;

use crate::error::{Result, WgError};
use crate::exact::{Engine, Family};
use crate::moments::MomentSpec;
use crate::rational::ExactRational;
use num_traits::ToPrimitive;

/// Minimum sample count accepted by the estimators.
pub const MIN_SAMPLES: usize = 1000;
/// Largest accepted `|z|`.
pub const Z_THRESHOLD: f64 = 5.0;
const CHUNK: usize = 1024;

/// A random-matrix ensemble with an exact backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnsembleSpec {
    pub family: Family,
    pub d: usize,
    /// A III signature `(a, b)`, `a + b = d`.
    pub signature: Option<(usize, usize)>,
}

impl EnsembleSpec {
    pub fn new(family: Family, d: usize, signature: Option<(usize, usize)>) -> Result<Self> {
        if d == 0 {
            return Err(WgError::InvalidArgument {
                arg: "dim",
                reason: "d must be at least 1".into(),
            });
        }
        match family {
            Family::Symplectic => Err(WgError::Unsupported(
                "no symplectic sampler: Wg^Sp is only known up to sign, so there is no exact value to compare with"
                    .into(),
            )),
            Family::AIII => match signature {
                Some((a, b)) if a + b == d => Ok(EnsembleSpec { family, d, signature }),
                Some((a, b)) => Err(WgError::InvalidArgument {
                    arg: "sig",
                    reason: format!("signature ({a},{b}) does not add up to d = {d}"),
                }),
                None => Err(WgError::InvalidArgument {
                    arg: "sig",
                    reason: "the aiii ensemble needs a signature a,b".into(),
                }),
            },
            _ if signature.is_some() => Err(WgError::InvalidArgument {
                arg: "sig",
                reason: format!("a signature only applies to aiii, not {family}"),
            }),
            _ => Ok(EnsembleSpec { family, d, signature }),
        }
    }

    /// `d⁻ = a - b` for A III.
    pub fn dminus(&self) -> Option<i64> {
        self.signature.map(|(a, b)| a as i64 - b as i64)
    }

    /// The generator of sample `index`.
    pub fn rng(seed: u64, index: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(index);
        rng
    }

    pub fn sample(&self, rng: &mut ChaCha20Rng) -> CMatrix {
        match self.family {
            Family::Unitary => haar_unitary(self.d, rng),
            Family::Orthogonal => haar_orthogonal(self.d, rng),
            Family::Coe => sample_coe(self.d, rng),
            Family::AIII => {
                let (a, b) = self.signature.expect("validated");
                sample_aiii(a, b, rng)
            }
            Family::Symplectic => unreachable!("rejected in new()"),
        }
    }

    /// Largest entry-wise violation of the defining constraints.
    pub fn constraint_defect(&self, m: &CMatrix) -> f64 {
        let id = CMatrix::identity(m.n);
        let unitary = m.mul(&m.adjoint()).max_diff(&id);
        match self.family {
            Family::Unitary => unitary,
            Family::Orthogonal => unitary.max(m.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)),
            Family::Coe => unitary.max(m.max_diff(&m.transpose())),
            Family::AIII => {
                let dm = self.dminus().unwrap() as f64;
                unitary
                    .max(m.max_diff(&m.adjoint()))
                    .max((m.trace() - Complex64::new(dm, 0.0)).norm())
            }
            Family::Symplectic => f64::NAN,
        }
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.signature {
            Some((a, b)) => write!(f, "{}(d={}, sig={a},{b})", self.family, self.d),
            None => write!(f, "{}(d={})", self.family, self.d),
        }
    }
}

fn gaussian(rng: &mut ChaCha20Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Haar unitary: phase-corrected QR of a complex Ginibre matrix.
pub fn haar_unitary(d: usize, rng: &mut ChaCha20Rng) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(d, |_, _| Complex64::new(gaussian(rng) * s, gaussian(rng) * s)).q_factor()
}

/// Haar orthogonal: sign-corrected QR of a real Gaussian matrix.
pub fn haar_orthogonal(d: usize, rng: &mut ChaCha20Rng) -> CMatrix {
    CMatrix::from_fn(d, |_, _| Complex64::new(gaussian(rng), 0.0)).q_factor()
}

/// `u uᵀ` for Haar `u`.
pub fn sample_coe(d: usize, rng: &mut ChaCha20Rng) -> CMatrix {
    let u = haar_unitary(d, rng);
    u.mul(&u.transpose())
}

/// `g I′_{ab} g*` for Haar `g`.
pub fn sample_aiii(a: usize, b: usize, rng: &mut ChaCha20Rng) -> CMatrix {
    let g = haar_unitary(a + b, rng);
    let n = a + b;
    // g I′ scales the last b columns by -1
    let gi = CMatrix::from_fn(n, |i, j| if j < a { g[(i, j)] } else { -g[(i, j)] });
    gi.mul(&g.adjoint())
}

/// Value of the monomial on one matrix.
pub fn evaluate_monomial(spec: &MomentSpec, m: &CMatrix) -> Complex64 {
    let entry = |r: usize, c: usize| m[(r - 1, c - 1)];
    let plain: Complex64 = spec.rows.iter().zip(&spec.cols).map(|(&r, &c)| entry(r, c)).product();
    let conj: Complex64 = spec.crows.iter().zip(&spec.ccols).map(|(&r, &c)| entry(r, c).conj()).product();
    plain * conj
}

/// Empirical mean with per-component standard errors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub mean_re: f64,
    pub mean_im: f64,
    pub se_re: f64,
    pub se_im: f64,
    pub samples: usize,
    pub seed: u64,
}

impl MomentEstimate {
    pub fn mean(&self) -> Complex64 {
        Complex64::new(self.mean_re, self.mean_im)
    }
}

/// Sums of `x`, `x²` per component and monomial.
#[derive(Clone, Debug)]
struct Sums(Vec<[f64; 4]>);

impl Sums {
    fn merge(a: &Sums, b: &Sums) -> Sums {
        Sums(a.0.iter().zip(&b.0).map(|(x, y)| [x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]]).collect())
    }
}

fn pairwise(items: &[Sums]) -> Sums {
    match items.len() {
        1 => items[0].clone(),
        n => {
            let (l, r) = items.split_at(n / 2);
            Sums::merge(&pairwise(l), &pairwise(r))
        }
    }
}

fn check_spec(ensemble: &EnsembleSpec, spec: &MomentSpec) -> Result<()> {
    if spec.rows.len() != spec.cols.len() || spec.crows.len() != spec.ccols.len() {
        return Err(WgError::LengthMismatch("row and column lists must have equal length".into()));
    }
    let all = spec.rows.iter().chain(&spec.cols).chain(&spec.crows).chain(&spec.ccols);
    if let Some(&bad) = all.into_iter().find(|&&x| x == 0 || x > ensemble.d) {
        return Err(WgError::InvalidArgument {
            arg: "moment",
            reason: format!("index {bad} is outside 1..={}", ensemble.d),
        });
    }
    Ok(())
}

/// Estimates several monomials on one shared set of `n` samples.
pub fn estimate_moments(ensemble: &EnsembleSpec, specs: &[MomentSpec], n: usize, seed: u64) -> Result<Vec<MomentEstimate>> {
    if n < MIN_SAMPLES {
        return Err(WgError::InvalidArgument {
            arg: "samples",
            reason: format!("need at least {MIN_SAMPLES} samples, got {n}"),
        });
    }
    for spec in specs {
        check_spec(ensemble, spec)?;
    }
    let chunks: Vec<Sums> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let per_sample: Vec<Sums> = (c * CHUNK..((c + 1) * CHUNK).min(n))
                .map(|i| {
                    let m = ensemble.sample(&mut EnsembleSpec::rng(seed, i as u64));
                    Sums(
                        specs
                            .iter()
                            .map(|s| {
                                let z = evaluate_monomial(s, &m);
                                [z.re, z.re * z.re, z.im, z.im * z.im]
                            })
                            .collect(),
                    )
                })
                .collect();
            pairwise(&per_sample)
        })
        .collect();
    let total = pairwise(&chunks);
    let nf = n as f64;
    Ok(total
        .0
        .iter()
        .map(|s| {
            let se = |sum: f64, sq: f64| {
                let mean = sum / nf;
                let var = ((sq - nf * mean * mean) / (nf - 1.0)).max(0.0);
                (var / nf).sqrt()
            };
            MomentEstimate {
                mean_re: s[0] / nf,
                mean_im: s[2] / nf,
                se_re: se(s[0], s[1]),
                se_im: se(s[2], s[3]),
                samples: n,
                seed,
            }
        })
        .collect())
}

pub fn estimate_moment(ensemble: &EnsembleSpec, spec: &MomentSpec, n: usize, seed: u64) -> Result<MomentEstimate> {
    Ok(estimate_moments(ensemble, std::slice::from_ref(spec), n, seed)?.remove(0))
}

/// Empirical versus exact, per component.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZReport {
    pub monomial: String,
    pub exact: String,
    pub estimate: MomentEstimate,
    pub z_re: f64,
    pub z_im: f64,
    pub passed: bool,
}

impl fmt::Display for ZReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.estimate;
        write!(
            f,
            "{}\texact {}\tmean {:.6}{:+.6}i\tse {:.2e},{:.2e}\tz {:.2},{:.2}\t{}",
            self.monomial,
            self.exact,
            e.mean_re,
            e.mean_im,
            e.se_re,
            e.se_im,
            self.z_re,
            self.z_im,
            if self.passed { "pass" } else { "FAIL" }
        )
    }
}

/// `|diff| / se`; with a (numerically) zero standard error the component
/// passes iff `|diff| < 1e-8`.
fn z_score(diff: f64, se: f64) -> (f64, bool) {
    if se < 1e-10 {
        let ok = diff.abs() < 1e-8;
        (if ok { 0.0 } else { f64::INFINITY }, ok)
    } else {
        let z = diff.abs() / se;
        (z, z <= Z_THRESHOLD)
    }
}

fn exact_spec(ensemble: &EnsembleSpec, spec: &MomentSpec) -> MomentSpec {
    MomentSpec {
        family: ensemble.family,
        d: ensemble.d as i64,
        dminus: ensemble.dminus(),
        ..spec.clone()
    }
}

/// Estimates every monomial on shared samples and compares with the exact
/// moment engine.
pub fn compare_with_exact(
    engine: &Engine,
    ensemble: &EnsembleSpec,
    specs: &[MomentSpec],
    n: usize,
    seed: u64,
) -> Result<Vec<ZReport>> {
    let exact: Vec<ExactRational> = specs
        .iter()
        .map(|s| exact_spec(ensemble, s).evaluate(engine).map(|v| v.value))
        .collect::<Result<_>>()?;
    let estimates = estimate_moments(ensemble, specs, n, seed)?;
    Ok(specs
        .iter()
        .zip(exact)
        .zip(estimates)
        .map(|((spec, ex), est)| {
            let exf = ex.to_f64().unwrap_or(f64::NAN);
            let (z_re, ok_re) = z_score(est.mean_re - exf, est.se_re);
            let (z_im, ok_im) = z_score(est.mean_im, est.se_im);
            ZReport {
                monomial: spec.to_string(),
                exact: crate::rational::format_rational(&ex),
                estimate: est,
                z_re,
                z_im,
                passed: ok_re && ok_im,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> MomentSpec {
        MomentSpec::parse_monomial(Family::Unitary, text, 0, None).unwrap()
    }

    #[test]
    fn samples_satisfy_constraints() {
        for (family, d, sig) in [
            (Family::Unitary, 4, None),
            (Family::Orthogonal, 5, None),
            (Family::Coe, 3, None),
            (Family::AIII, 4, Some((3, 1))),
            (Family::AIII, 3, Some((0, 3))),
        ] {
            let ens = EnsembleSpec::new(family, d, sig).unwrap();
            for i in 0..50 {
                let m = ens.sample(&mut EnsembleSpec::rng(7, i));
                assert!(ens.constraint_defect(&m) < 1e-10, "{ens}");
            }
        }
        let coe1 = EnsembleSpec::new(Family::Coe, 1, None).unwrap();
        let s = coe1.sample(&mut EnsembleSpec::rng(1, 0));
        assert!((s[(0, 0)].norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_ensembles() {
        assert!(matches!(EnsembleSpec::new(Family::Symplectic, 2, None), Err(WgError::Unsupported(_))));
        assert!(EnsembleSpec::new(Family::AIII, 3, Some((2, 2))).is_err());
        assert!(EnsembleSpec::new(Family::AIII, 3, None).is_err());
        assert!(EnsembleSpec::new(Family::Unitary, 3, Some((2, 1))).is_err());
        let ens = EnsembleSpec::new(Family::Unitary, 2, None).unwrap();
        assert!(estimate_moment(&ens, &spec("rows=1;cols=1"), 10, 1).is_err());
        assert!(estimate_moment(&ens, &spec("rows=3;cols=1"), 2000, 1).is_err());
    }

    #[test]
    fn simple_means() {
        let u1 = EnsembleSpec::new(Family::Unitary, 1, None).unwrap();
        let e = estimate_moment(&u1, &spec("rows=1;cols=1"), 100_000, 3).unwrap();
        assert!(e.mean_re.abs() <= 5.0 * e.se_re && e.mean_im.abs() <= 5.0 * e.se_im);
        let o2 = EnsembleSpec::new(Family::Orthogonal, 2, None).unwrap();
        let e = estimate_moment(&o2, &spec("rows=1,1;cols=1,1"), 20_000, 3).unwrap();
        assert!((e.mean_re - 0.5).abs() <= 5.0 * e.se_re);
        let a = EnsembleSpec::new(Family::AIII, 4, Some((2, 2))).unwrap();
        let e = estimate_moment(&a, &spec("rows=1;cols=1"), 20_000, 3).unwrap();
        assert!(e.mean_re.abs() <= 5.0 * e.se_re);
    }

    #[test]
    fn reproducible_and_thread_independent() {
        let ens = EnsembleSpec::new(Family::Coe, 3, None).unwrap();
        let s = spec("rows=1;cols=1;crows=1;ccols=1");
        let a = estimate_moment(&ens, &s, 5000, 11).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| estimate_moment(&ens, &s, 5000, 11).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn agrees_with_exact() {
        let eng = Engine::new();
        let cases = [
            (Family::Unitary, 3, None, "rows=1;cols=1;crows=1;ccols=1"),
            (Family::Coe, 3, None, "rows=1;cols=1;crows=1;ccols=1"),
            (Family::AIII, 4, Some((3, 1)), "rows=1,2;cols=2,1"),
        ];
        for (family, d, sig, text) in cases {
            let ens = EnsembleSpec::new(family, d, sig).unwrap();
            let reports = compare_with_exact(&eng, &ens, &[spec(text)], 50_000, 2024).unwrap();
            assert!(reports[0].passed, "{}", reports[0]);
        }
        let ens = EnsembleSpec::new(Family::AIII, 4, Some((3, 1))).unwrap();
        let r = compare_with_exact(&eng, &ens, &[spec("rows=1,2;cols=2,1")], 2000, 1).unwrap();
        assert_eq!(r[0].exact, "1/5");
    }
}
