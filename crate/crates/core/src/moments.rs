//! Haar integrals of matrix-entry monomials.
//!
//! Each family sums Weingarten values over the permutations or pair
//! partitions compatible with the index pattern. Compatible elements are
//! enumerated by backtracking over positions with equal indices, so only
//! nonzero terms are ever visited.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WgError};
use crate::exact::{Engine, Family, SolveOptions, WgTable};
use crate::rational::ExactRational;
use crate::symcore::{PairPartition, Permutation};

/// `δ_σ(i, i′) = 1` iff `i_{σ(r)} = i′_r` for every `r`.
pub fn delta_sigma(sigma: &Permutation, i: &[usize], ip: &[usize]) -> Result<bool> {
    if i.len() != sigma.level() || ip.len() != sigma.level() {
        return Err(WgError::LengthMismatch(format!(
            "δ_σ needs sequences of length {}, got {} and {}",
            sigma.level(),
            i.len(),
            ip.len()
        )));
    }
    Ok((1..=sigma.level()).all(|r| i[sigma.apply(r) - 1] == ip[r - 1]))
}

fn check_pairing_len(m: &PairPartition, i: &[usize]) -> Result<()> {
    if i.len() == 2 * m.level() {
        Ok(())
    } else {
        Err(WgError::LengthMismatch(format!(
            "a pair partition of {} points needs a sequence of that length, got {}",
            2 * m.level(),
            i.len()
        )))
    }
}

/// `Δ_m(i) = 1` iff `i_r = i_s` for every block `{r, s}` of `m`.
pub fn delta_admissible(m: &PairPartition, i: &[usize]) -> Result<bool> {
    check_pairing_len(m, i)?;
    Ok(m.blocks().iter().all(|&(a, b)| i[a - 1] == i[b - 1]))
}

/// Admissible, and `i_r = i_s` only when `{r, s}` is a block.
pub fn strongly_admissible(m: &PairPartition, i: &[usize]) -> Result<bool> {
    check_pairing_len(m, i)?;
    let partner = m.partners();
    Ok((0..i.len()).all(|r| (0..i.len()).all(|s| r == s || (i[r] == i[s]) == (partner[r] == s + 1))))
}

/// Every `σ ∈ S_k` with `δ_σ(i, i′) = 1`.
pub fn compatible_permutations(i: &[usize], ip: &[usize]) -> Vec<Permutation> {
    fn rec(r: usize, i: &[usize], ip: &[usize], used: &mut [bool], images: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        if r == ip.len() {
            out.push(Permutation::new(images).expect("bijection"));
            return;
        }
        for p in 0..i.len() {
            if !used[p] && i[p] == ip[r] {
                used[p] = true;
                images.push(p + 1);
                rec(r + 1, i, ip, used, images, out);
                images.pop();
                used[p] = false;
            }
        }
    }
    let mut out = Vec::new();
    if i.len() == ip.len() {
        rec(0, i, ip, &mut vec![false; i.len()], &mut Vec::new(), &mut out);
    }
    out
}

/// Every pair partition `m` with `Δ_m(i) = 1`.
pub fn admissible_pairings(i: &[usize]) -> Vec<PairPartition> {
    fn rec(i: &[usize], free: &mut Vec<usize>, blocks: &mut Vec<(usize, usize)>, out: &mut Vec<PairPartition>) {
        let Some(&a) = free.first() else {
            out.push(PairPartition::new(blocks).expect("perfect matching"));
            return;
        };
        free.remove(0);
        for idx in 0..free.len() {
            let b = free[idx];
            if i[a - 1] == i[b - 1] {
                free.remove(idx);
                blocks.push((a, b));
                rec(i, free, blocks, out);
                blocks.pop();
                free.insert(idx, b);
            }
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    if i.len().is_multiple_of(2) {
        rec(i, &mut (1..=i.len()).collect(), &mut Vec::new(), &mut out);
    }
    out
}

fn check_range(d: i64, seqs: &[&[usize]]) -> Result<()> {
    for s in seqs {
        if let Some(&bad) = s.iter().find(|&&x| x == 0 || x as i64 > d) {
            return Err(WgError::InvalidArgument {
                arg: "index",
                reason: format!("index {bad} is outside 1..={d}"),
            });
        }
    }
    Ok(())
}

fn lookup(table: &WgTable, sigma_class: &crate::symcore::IntegerPartition) -> ExactRational {
    table.values[sigma_class].clone()
}

/// `∫ u_{i₁j₁}⋯u_{i_kj_k} · conj(u_{i′₁j′₁}⋯u_{i′_kj′_k}) dμ` over `U(d)`.
///
/// Unequal numbers of plain and conjugated factors integrate to zero.
pub fn moment_unitary(engine: &Engine, i: &[usize], j: &[usize], ip: &[usize], jp: &[usize], d: i64) -> Result<ExactRational> {
    if i.len() != j.len() || ip.len() != jp.len() {
        return Err(WgError::LengthMismatch("row and column sequences must have equal length".into()));
    }
    check_range(d, &[i, j, ip, jp])?;
    if i.len() != ip.len() {
        return Ok(ExactRational::zero());
    }
    let sigmas = compatible_permutations(i, ip);
    let taus = compatible_permutations(j, jp);
    if sigmas.is_empty() || taus.is_empty() {
        return Ok(ExactRational::zero());
    }
    let table = engine.table(Family::Unitary, i.len(), d, None, SolveOptions::default())?;
    let mut acc = ExactRational::zero();
    for s in &sigmas {
        for t in &taus {
            acc += lookup(&table, &s.compose(&t.inverse()).cycle_type());
        }
    }
    Ok(acc)
}

/// `∫ u_{i₁j₁}⋯u_{i_{2k}j_{2k}} dμ` over `O(d)`; odd degree gives zero.
pub fn moment_orthogonal(engine: &Engine, i: &[usize], j: &[usize], d: i64) -> Result<ExactRational> {
    if i.len() != j.len() {
        return Err(WgError::LengthMismatch("row and column sequences must have equal length".into()));
    }
    check_range(d, &[i, j])?;
    if i.len() % 2 == 1 {
        return Ok(ExactRational::zero());
    }
    let ms = admissible_pairings(i);
    let ns = admissible_pairings(j);
    if ms.is_empty() || ns.is_empty() {
        return Ok(ExactRational::zero());
    }
    let table = engine.table(Family::Orthogonal, i.len() / 2, d, None, SolveOptions::default())?;
    let mut acc = ExactRational::zero();
    for m in &ms {
        let back = m.to_permutation().inverse();
        for n in &ns {
            acc += lookup(&table, &n.act(&back)?.coset_type());
        }
    }
    Ok(acc)
}

/// `∫ s_{i₁i₂}⋯s_{i_{2k-1}i_{2k}} · conj(s_{j₁j₂}⋯s_{j_{2k-1}j_{2k}}) dν` over the COE.
pub fn moment_coe(engine: &Engine, i: &[usize], j: &[usize], d: i64) -> Result<ExactRational> {
    if i.len() != j.len() || i.len() % 2 == 1 {
        return Err(WgError::LengthMismatch("coe sequences need equal even length".into()));
    }
    check_range(d, &[i, j])?;
    let sigmas = compatible_permutations(i, j);
    if sigmas.is_empty() {
        return Ok(ExactRational::zero());
    }
    let k = i.len() / 2;
    let table = engine.table(Family::Coe, k, d, None, SolveOptions::default())?;
    let e = PairPartition::trivial(k);
    let mut acc = ExactRational::zero();
    for s in &sigmas {
        acc += lookup(&table, &e.act(s)?.coset_type());
    }
    Ok(acc)
}

/// `∫ s_{i₁j₁}⋯s_{i_kj_k} dν` over the A III space of signature `(a, b)`,
/// `d = a + b`, `d⁻ = a - b`.
pub fn moment_aiii(engine: &Engine, i: &[usize], j: &[usize], d: i64, dminus: i64) -> Result<ExactRational> {
    if i.len() != j.len() {
        return Err(WgError::LengthMismatch("row and column sequences must have equal length".into()));
    }
    check_range(d, &[i, j])?;
    let sigmas = compatible_permutations(i, j);
    if sigmas.is_empty() {
        return Ok(ExactRational::zero());
    }
    let table = engine.table(Family::AIII, i.len(), d, Some(dminus), SolveOptions::default())?;
    Ok(sigmas.iter().map(|s| lookup(&table, &s.cycle_type())).sum())
}

/// A monomial in the entries of a random matrix.
///
/// `rows`/`cols` index the plain factors and `crows`/`ccols` the conjugated
/// ones. Unitary uses all four; COE pairs `(rows[r], cols[r])` into
/// `s_{rows[r], cols[r]}` and likewise for the conjugated factors; the
/// orthogonal group and A III use `rows`/`cols` only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentSpec {
    pub family: Family,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    #[serde(default)]
    pub crows: Vec<usize>,
    #[serde(default)]
    pub ccols: Vec<usize>,
    pub d: i64,
    pub dminus: Option<i64>,
}

/// An exact moment plus remarks such as a vanishing by invariance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentValue {
    pub value: ExactRational,
    pub notes: Vec<String>,
}

impl MomentSpec {
    /// Parses `rows=1,1;cols=1,1;crows=1,1;ccols=1,1` (keys in any order,
    /// missing keys empty).
    pub fn parse_monomial(family: Family, text: &str, d: i64, dminus: Option<i64>) -> Result<MomentSpec> {
        let mut spec = MomentSpec {
            family,
            rows: vec![],
            cols: vec![],
            crows: vec![],
            ccols: vec![],
            d,
            dminus,
        };
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, list) = part.split_once('=').ok_or_else(|| WgError::Parse {
                what: "monomial",
                reason: format!("{part:?} is not key=list"),
            })?;
            let list = parse_indices(list)?;
            match key.trim() {
                "rows" => spec.rows = list,
                "cols" => spec.cols = list,
                "crows" => spec.crows = list,
                "ccols" => spec.ccols = list,
                other => {
                    return Err(WgError::Parse {
                        what: "monomial",
                        reason: format!("unknown key {other:?}"),
                    })
                }
            }
        }
        Ok(spec)
    }

    /// Plain and conjugated degree.
    pub fn degrees(&self) -> (usize, usize) {
        (self.rows.len(), self.crows.len())
    }

    fn interleave(a: &[usize], b: &[usize]) -> Vec<usize> {
        a.iter().zip(b).flat_map(|(&x, &y)| [x, y]).collect()
    }

    pub fn evaluate(&self, engine: &Engine) -> Result<MomentValue> {
        let mut notes = Vec::new();
        let needs_conj = matches!(self.family, Family::Unitary | Family::Coe);
        if !needs_conj && !(self.crows.is_empty() && self.ccols.is_empty()) {
            return Err(WgError::InvalidArgument {
                arg: "crows",
                reason: format!("the {} family has no conjugated factors here", self.family),
            });
        }
        if self.rows.len() != self.cols.len() || self.crows.len() != self.ccols.len() {
            return Err(WgError::LengthMismatch("row and column lists must have equal length".into()));
        }
        let value = match self.family {
            Family::Unitary => {
                if self.rows.len() != self.crows.len() {
                    notes.push(format!(
                        "{} plain vs {} conjugated factors: zero by invariance under u ↦ e^{{iθ}}u",
                        self.rows.len(),
                        self.crows.len()
                    ));
                }
                moment_unitary(engine, &self.rows, &self.cols, &self.crows, &self.ccols, self.d)?
            }
            Family::Orthogonal => {
                if self.rows.len() % 2 == 1 {
                    notes.push("odd degree: zero by invariance under u ↦ -u".into());
                }
                moment_orthogonal(engine, &self.rows, &self.cols, self.d)?
            }
            Family::Coe => {
                if self.rows.len() != self.crows.len() {
                    notes.push("unequal plain and conjugated degree: zero by phase invariance".into());
                    check_range(self.d, &[&self.rows, &self.cols, &self.crows, &self.ccols])?;
                    ExactRational::zero()
                } else {
                    let i = Self::interleave(&self.rows, &self.cols);
                    let j = Self::interleave(&self.crows, &self.ccols);
                    moment_coe(engine, &i, &j, self.d)?
                }
            }
            Family::AIII => {
                let dm = self.dminus.ok_or(WgError::InvalidArgument {
                    arg: "dm",
                    reason: "the aiii family needs d⁻".into(),
                })?;
                moment_aiii(engine, &self.rows, &self.cols, self.d, dm)?
            }
            Family::Symplectic => {
                return Err(WgError::Unsupported(
                    "symplectic moments need the sign of Wg^Sp, which is not computed".into(),
                ))
            }
        };
        Ok(MomentValue { value, notes })
    }
}

impl fmt::Display for MomentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "rows={};cols={}", list(&self.rows), list(&self.cols))?;
        if !self.crows.is_empty() || !self.ccols.is_empty() {
            write!(f, ";crows={};ccols={}", list(&self.crows), list(&self.ccols))?;
        }
        Ok(())
    }
}

/// Comma-separated positive integers; an empty string is the empty list.
pub fn parse_indices(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim().parse::<usize>().ok().filter(|&x| x > 0).ok_or_else(|| WgError::Parse {
                what: "index list",
                reason: format!("{t:?} is not a positive integer"),
            })
        })
        .collect()
}

/// Σ_i ∫ u_{11}⋯u_{k-1,k-1} u_{k,i} · conj(u_{σ(1),1}⋯u_{σ(k),i}) dμ, the
/// left side of the unitary sum rule; orthonormal rows make it equal to
/// `[σ(k) = k]·Wg(σ↓)`.
pub fn unitary_row_sum(engine: &Engine, sigma: &Permutation, d: i64) -> Result<ExactRational> {
    let k = sigma.level();
    let rows: Vec<usize> = (1..=k).collect();
    let crows: Vec<usize> = (1..=k).map(|r| sigma.apply(r)).collect();
    let mut acc = ExactRational::zero();
    for i in 1..=d as usize {
        let cols: Vec<usize> = (1..k).chain([i]).collect();
        acc += moment_unitary(engine, &rows, &cols, &crows, &cols, d)?;
    }
    Ok(acc)
}

/// Σ_i ∫ s_{1σ(1)}⋯s_{k-1,σ(k-1)} s_{ii} dν for `σ(k) = k`, which the trace
/// `Tr s = d⁻` turns into `d⁻·Wg(σ↓)`.
pub fn aiii_trace_sum(engine: &Engine, sigma: &Permutation, d: i64, dminus: i64) -> Result<ExactRational> {
    let k = sigma.level();
    let mut acc = ExactRational::zero();
    for i in 1..=d as usize {
        let rows: Vec<usize> = (1..k).chain([i]).collect();
        let cols: Vec<usize> = (1..k).map(|r| sigma.apply(r)).chain([i]).collect();
        acc += moment_aiii(engine, &rows, &cols, d, dminus)?;
    }
    Ok(acc)
}

/// For `σ(k) ≠ k` with `r = σ⁻¹(k)`: Σ_i of the monomial with `s_{r,k}` and
/// `s_{k,σ(k)}` replaced by `s_{r,i}` and `s_{i,σ(k)}`. Since `s² = 1` this
/// is `[σ(k) = r]·Wg(σ♭)`.
pub fn aiii_square_sum(engine: &Engine, sigma: &Permutation, d: i64, dminus: i64) -> Result<ExactRational> {
    let k = sigma.level();
    let r = sigma.inverse().apply(k);
    let mut acc = ExactRational::zero();
    for i in 1..=d as usize {
        let rows: Vec<usize> = (1..=k).map(|p| if p == k { i } else { p }).collect();
        let cols: Vec<usize> = (1..=k).map(|p| if p == r { i } else { sigma.apply(p) }).collect();
        acc += moment_aiii(engine, &rows, &cols, d, dminus)?;
    }
    Ok(acc)
}
