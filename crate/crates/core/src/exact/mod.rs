//! Exact Weingarten values.
//!
//! Values at a fixed dimension come from the orthogonality recurrences,
//! solved level by level over exact rationals:
//!
//! ```text
//! diag·Wg(v) = -Σ_{solid v→y} Wg(y) + w·[v↓ exists]·Wg(v↓) + [v♭ exists]·Wg(v♭)
//! ```
//!
//! with `diag = d`, `w = 1` for the unitary and orthogonal groups, `w = d⁻`
//! (plus the `v♭` term) for A III, and `diag = d + 1` for the COE. Each level
//! is solved on one representative per class; a singular reduced system
//! falls back to the full level.

mod poly;
mod reconstruct;
mod series;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use reconstruct::{reconstruct, RationalFunctionRep, HELD_OUT_POINTS};
pub use series::{BivariateTerm, SeriesCoefficients, SeriesTruncation};

use crate::error::{Result, WgError};
use crate::graph::{dashed_target, solid_neighbors, squiggled_target, GraphKind, GraphNode, PathCountTable};
use crate::linalg::{self, Matrix};
use crate::rational::{int, ExactRational};
use crate::symcore::{IntegerPartition, PairPartition, Permutation};

/// Largest level system solved without class reduction.
pub const FULL_SYSTEM_CAP: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Unitary,
    Orthogonal,
    Coe,
    Symplectic,
    AIII,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Unitary, Family::Orthogonal, Family::Coe, Family::Symplectic, Family::AIII];

    /// Tag used in cache files.
    pub fn tag(self) -> &'static str {
        match self {
            Family::Unitary => "U",
            Family::Orthogonal => "O",
            Family::Coe => "COE",
            Family::Symplectic => "SP",
            Family::AIII => "AIII",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.tag() == tag)
    }

    /// The graph whose vertices label this family's Weingarten function.
    pub fn graph_kind(self) -> GraphKind {
        match self {
            Family::Unitary => GraphKind::Unitary,
            Family::AIII => GraphKind::AIII,
            Family::Orthogonal | Family::Coe | Family::Symplectic => GraphKind::Orthogonal,
        }
    }

    pub fn uses_dminus(self) -> bool {
        self == Family::AIII
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Unitary => "u",
            Family::Orthogonal => "o",
            Family::Coe => "coe",
            Family::Symplectic => "sp",
            Family::AIII => "aiii",
        })
    }
}

impl FromStr for Family {
    type Err = WgError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "u" | "unitary" => Ok(Family::Unitary),
            "o" | "orthogonal" => Ok(Family::Orthogonal),
            "coe" => Ok(Family::Coe),
            "sp" | "symplectic" => Ok(Family::Symplectic),
            "aiii" | "a3" => Ok(Family::AIII),
            _ => Err(WgError::Parse {
                what: "family",
                reason: format!("{s:?} (expected u, o, coe, sp or aiii)"),
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Skip the dimension range check; singular systems are still reported.
    pub force: bool,
}

impl SolveOptions {
    pub fn forced() -> Self {
        SolveOptions { force: true }
    }
}

/// Values of one family at one level and dimension, keyed by class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WgTable {
    pub family: Family,
    pub level: usize,
    pub d: i64,
    pub dminus: Option<i64>,
    pub values: BTreeMap<IntegerPartition, ExactRational>,
    /// Warnings such as an A III signature outside the ensemble range.
    pub notes: Vec<String>,
}

impl WgTable {
    pub fn get(&self, class: &IntegerPartition) -> Option<&ExactRational> {
        self.values.get(class)
    }
}

type LevelValues = BTreeMap<IntegerPartition, ExactRational>;
type PairingValues = HashMap<PairPartition, ExactRational>;

/// Cache key of one solved level: graph, level, `diag` and dashed weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct LevelKey {
    kind: GraphKind,
    level: usize,
    diag: i64,
    weight: i64,
}

/// Shared solver state: solved levels and path counts.
///
/// Solved tables are immutable; lookups take read locks and no lock is held
/// while solving, so distinct keys can be solved from several threads.
#[derive(Debug, Default)]
pub struct Engine {
    levels: RwLock<HashMap<LevelKey, Arc<LevelValues>>>,
    coe_full: RwLock<HashMap<(usize, i64), Arc<PairingValues>>>,
    paths: PathCountTable,
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn path_counts(&self) -> &PathCountTable {
        &self.paths
    }

    // ---- level systems -------------------------------------------------

    /// Levels `0..=k` of the recurrence with the given parameters.
    fn levels(&self, kind: GraphKind, k: usize, diag: i64, weight: i64) -> Result<Vec<Arc<LevelValues>>> {
        let mut out: Vec<Arc<LevelValues>> = Vec::with_capacity(k + 1);
        for level in 0..=k {
            let key = LevelKey { kind, level, diag, weight };
            if let Some(v) = self.levels.read().unwrap().get(&key) {
                out.push(v.clone());
                continue;
            }
            let solved = if level == 0 {
                BTreeMap::from([(IntegerPartition::ones(0), ExactRational::one())])
            } else {
                let below = |steps: usize| out.get(level.wrapping_sub(steps)).map(|v| v.as_ref());
                solve_level(kind, level, diag, weight, below(1).unwrap(), below(2))?
            };
            let solved = self.levels.write().unwrap().entry(key).or_insert(Arc::new(solved)).clone();
            out.push(solved);
        }
        Ok(out)
    }

    // ---- unitary -------------------------------------------------------

    pub fn solve_unitary_table(&self, k: usize, d: i64, opts: SolveOptions) -> Result<WgTable> {
        self.table(Family::Unitary, k, d, None, opts)
    }

    pub fn wg_unitary(&self, sigma: &Permutation, d: i64) -> Result<ExactRational> {
        self.value(Family::Unitary, &GraphNode::Perm(sigma.clone()), d, None, SolveOptions::default())
    }

    // ---- orthogonal ----------------------------------------------------

    pub fn solve_orthogonal_table(&self, k: usize, d: i64) -> Result<WgTable> {
        self.table(Family::Orthogonal, k, d, None, SolveOptions::default())
    }

    pub fn wg_orthogonal(&self, m: &PairPartition, d: i64) -> Result<ExactRational> {
        self.value(Family::Orthogonal, &GraphNode::Pairing(m.clone()), d, None, SolveOptions::default())
    }

    /// `Wg^O(m, n, d) = Wg^O(σ_m⁻¹.n, d)`.
    pub fn wg_orthogonal_pair(&self, m: &PairPartition, n: &PairPartition, d: i64) -> Result<ExactRational> {
        let reduced = n.act(&m.to_permutation().inverse()).map_err(|_| WgError::LevelMismatch {
            expected: m.level(),
            found: n.level(),
        })?;
        self.wg_orthogonal(&reduced, d)
    }

    // ---- COE -----------------------------------------------------------

    /// `Wg^COE(m, d) = Wg^O(m, d + 1)`, requiring `d ≥ 2k`.
    pub fn wg_coe(&self, m: &PairPartition, d: i64) -> Result<ExactRational> {
        self.value(Family::Coe, &GraphNode::Pairing(m.clone()), d, None, SolveOptions::default())
    }

    /// Solves the COE recurrence with diagonal `d + 1` over every pair
    /// partition of each level, without class reduction.
    pub fn wg_coe_direct(&self, m: &PairPartition, d: i64) -> Result<ExactRational> {
        let k = m.level();
        let mut below: Option<Arc<HashMap<PairPartition, ExactRational>>> = None;
        for level in 0..=k {
            if let Some(v) = self.coe_full.read().unwrap().get(&(level, d)) {
                below = Some(v.clone());
                continue;
            }
            let solved: HashMap<PairPartition, ExactRational> = if level == 0 {
                HashMap::from([(PairPartition::empty(), ExactRational::one())])
            } else {
                let lower = below.as_ref().expect("lower level solved first");
                let nodes: Vec<GraphNode> = GraphKind::Orthogonal.all_nodes(level);
                let values = solve_full(GraphKind::Orthogonal, &nodes, d + 1, 1, &|n| pairing_lookup(lower, n), &|_| {
                    ExactRational::zero()
                })
                .ok_or_else(|| WgError::Singular { level, dim: format!("d={d}") })?;
                nodes
                    .into_iter()
                    .zip(values)
                    .map(|(n, v)| match n {
                        GraphNode::Pairing(p) => (p, v),
                        GraphNode::Perm(_) => unreachable!(),
                    })
                    .collect()
            };
            let solved = self.coe_full.write().unwrap().entry((level, d)).or_insert(Arc::new(solved)).clone();
            below = Some(solved);
        }
        Ok(below.unwrap()[m].clone())
    }

    // ---- symplectic ----------------------------------------------------

    /// `|Wg^Sp(m, d)| = |Wg^O(m, -2d)|`. The sign is not determined.
    pub fn wg_symplectic_abs(&self, m: &PairPartition, d: i64) -> Result<ExactRational> {
        self.value(Family::Symplectic, &GraphNode::Pairing(m.clone()), d, None, SolveOptions::default())
    }

    // ---- A III ---------------------------------------------------------

    pub fn solve_aiii_table(&self, k: usize, d: i64, dminus: i64) -> Result<WgTable> {
        self.table(Family::AIII, k, d, Some(dminus), SolveOptions::default())
    }

    pub fn wg_aiii(&self, sigma: &Permutation, d: i64, dminus: i64) -> Result<ExactRational> {
        self.value(Family::AIII, &GraphNode::Perm(sigma.clone()), d, Some(dminus), SolveOptions::default())
    }

    // ---- generic entry points ------------------------------------------

    fn check_args(&self, family: Family, k: usize, d: i64, dminus: Option<i64>, opts: SolveOptions) -> Result<()> {
        if family.uses_dminus() != dminus.is_some() {
            return Err(WgError::InvalidArgument {
                arg: "dminus",
                reason: if family.uses_dminus() {
                    "the aiii family needs d⁻".into()
                } else {
                    format!("d⁻ only applies to the aiii family, not {family}")
                },
            });
        }
        let min = match family {
            Family::Unitary | Family::AIII | Family::Symplectic => Some(k as i64),
            Family::Coe => Some(2 * k as i64),
            Family::Orthogonal => None,
        };
        match min {
            Some(min) if d < min && !opts.force => Err(WgError::DimensionOutOfRange {
                dim: d,
                k,
                reason: format!("{family} needs d ≥ {min} (use force to override)"),
            }),
            _ => Ok(()),
        }
    }

    /// The level-system parameters and the post-processing of a family.
    fn route(family: Family, d: i64, dminus: Option<i64>) -> (GraphKind, i64, i64) {
        match family {
            Family::Unitary => (GraphKind::Unitary, d, 1),
            Family::Orthogonal => (GraphKind::Orthogonal, d, 1),
            Family::Coe => (GraphKind::Orthogonal, d + 1, 1),
            Family::Symplectic => (GraphKind::Orthogonal, -2 * d, 1),
            Family::AIII => (GraphKind::AIII, d, dminus.unwrap_or(0)),
        }
    }

    /// Solves every class of level `k`.
    pub fn table(&self, family: Family, k: usize, d: i64, dminus: Option<i64>, opts: SolveOptions) -> Result<WgTable> {
        self.check_args(family, k, d, dminus, opts)?;
        let (kind, diag, weight) = Self::route(family, d, dminus);
        let level = self.levels(kind, k, diag, weight).map_err(|e| match e {
            WgError::Singular { level, .. } => WgError::Singular {
                level,
                dim: dims_text(d, dminus),
            },
            e => e,
        })?;
        let mut values = level[k].as_ref().clone();
        if family == Family::Symplectic {
            values.values_mut().for_each(|v| *v = v.abs());
        }
        let mut notes = Vec::new();
        if let Some(dm) = dminus {
            if dm.abs() > d {
                notes.push(format!("|d⁻| = {} exceeds d = {d}: outside the ensemble range", dm.abs()));
            }
        }
        Ok(WgTable {
            family,
            level: k,
            d,
            dminus,
            values,
            notes,
        })
    }

    /// The Weingarten value of `node` in `family`.
    pub fn value(
        &self,
        family: Family,
        node: &GraphNode,
        d: i64,
        dminus: Option<i64>,
        opts: SolveOptions,
    ) -> Result<ExactRational> {
        family.graph_kind().check(node)?;
        let table = self.table(family, node.level(), d, dminus, opts)?;
        Ok(table.values[&node.class_key()].clone())
    }

    /// `diag·Wg(v) + Σ Wg(y) - w·Wg(v↓) - Wg(v♭)` for the family's own
    /// recurrence, evaluated with the solved values. Zero for a correct table.
    pub fn recurrence_residual(&self, family: Family, node: &GraphNode, d: i64, dminus: Option<i64>) -> Result<ExactRational> {
        let kind = family.graph_kind();
        kind.check(node)?;
        if family == Family::Symplectic {
            return Err(WgError::Unsupported("the symplectic values have no recurrence of their own".into()));
        }
        let (_, diag, weight) = Self::route(family, d, dminus);
        let wg = |v: &GraphNode| self.value(family, v, d, dminus, SolveOptions::forced());
        let mut acc = int(diag) * wg(node)?;
        for e in solid_neighbors(kind, node) {
            acc += wg(&e.target)?;
        }
        if let Some(down) = dashed_target(kind, node) {
            acc -= int(weight) * wg(&down)?;
        }
        if kind == GraphKind::AIII {
            if let Some(flat) = squiggled_target(kind, node)? {
                acc -= wg(&flat)?;
            }
        }
        Ok(acc)
    }

    /// The Weingarten function of `node` as a rational function of `d`
    /// (for A III at the fixed `dminus`).
    ///
    /// Symplectic output is `(-1)^k Wg^O(m, -2d)`, which equals
    /// `|Wg^Sp(m, d)|` for large `d`.
    pub fn reconstruct_rational(&self, family: Family, node: &GraphNode, dminus: Option<i64>) -> Result<RationalFunctionRep> {
        let kind = family.graph_kind();
        kind.check(node)?;
        self.check_args(family, 0, 0, dminus, SolveOptions::forced())?;
        let k = node.level();
        let d0 = 2 * k as i64 + 1;
        let cap = 4 * k * k + 4;
        let sign = if k.is_multiple_of(2) { int(1) } else { int(-1) };
        reconstruct(
            |d| match family {
                Family::Symplectic => {
                    Ok(&sign * self.value(Family::Orthogonal, node, -2 * d, None, SolveOptions::forced())?)
                }
                _ => self.value(family, node, d, dminus, SolveOptions::forced()),
            },
            d0,
            cap,
            "d",
        )
    }

    /// Truncated `1/d` expansion from path counts; `order` is the number of
    /// correction terms `G`.
    pub fn series(&self, family: Family, node: &GraphNode, order: usize) -> Result<SeriesTruncation> {
        series::series(&self.paths, family, node, order)
    }
}

fn dims_text(d: i64, dminus: Option<i64>) -> String {
    match dminus {
        Some(dm) => format!("d={d},dm={dm}"),
        None => format!("d={d}"),
    }
}

fn pairing_lookup(map: &HashMap<PairPartition, ExactRational>, node: &GraphNode) -> ExactRational {
    match node {
        GraphNode::Pairing(p) => map[p].clone(),
        GraphNode::Perm(_) => unreachable!("pair partition graph"),
    }
}

/// One level on class representatives, with the full level as fallback.
fn solve_level(
    kind: GraphKind,
    level: usize,
    diag: i64,
    weight: i64,
    below1: &LevelValues,
    below2: Option<&LevelValues>,
) -> Result<LevelValues> {
    let classes = IntegerPartition::all(level);
    let index: HashMap<&IntegerPartition, usize> = classes.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let n = classes.len();
    let mut a: Matrix = vec![vec![ExactRational::zero(); n]; n];
    let mut b = vec![ExactRational::zero(); n];
    let w = int(weight);
    for (i, mu) in classes.iter().enumerate() {
        let v = kind.representative(mu);
        a[i][i] += int(diag);
        for e in solid_neighbors(kind, &v) {
            a[i][index[&e.target.class_key()]] += ExactRational::one();
        }
        b[i] = rhs(kind, &v, &w, &|u| below1[&u.class_key()].clone(), &|u| {
            below2.expect("level ≥ 2")[&u.class_key()].clone()
        });
    }
    if let Some(x) = linalg::solve(a, b) {
        return Ok(classes.into_iter().zip(x).collect());
    }

    // Reduced system singular: solve the whole level and read off classes.
    let singular = || WgError::Singular {
        level,
        dim: format!("diag={diag}"),
    };
    let nodes = kind.all_nodes(level);
    if nodes.len() > FULL_SYSTEM_CAP {
        return Err(singular());
    }
    let x = solve_full(kind, &nodes, diag, weight, &|u| below1[&u.class_key()].clone(), &|u| {
        below2.expect("level ≥ 2")[&u.class_key()].clone()
    })
    .ok_or_else(singular)?;
    let mut out = LevelValues::new();
    for (node, value) in nodes.iter().zip(x) {
        match out.get(&node.class_key()) {
            Some(prev) if *prev != value => return Err(singular()),
            _ => {
                out.insert(node.class_key(), value);
            }
        }
    }
    Ok(out)
}

fn rhs(
    kind: GraphKind,
    v: &GraphNode,
    weight: &ExactRational,
    below1: &dyn Fn(&GraphNode) -> ExactRational,
    below2: &dyn Fn(&GraphNode) -> ExactRational,
) -> ExactRational {
    let mut r = ExactRational::zero();
    if let Some(down) = dashed_target(kind, v) {
        r += weight * below1(&down);
    }
    if kind == GraphKind::AIII {
        if let Ok(Some(flat)) = squiggled_target(kind, v) {
            r += below2(&flat);
        }
    }
    r
}

/// The recurrence over every vertex of one level.
fn solve_full(
    kind: GraphKind,
    nodes: &[GraphNode],
    diag: i64,
    weight: i64,
    below1: &dyn Fn(&GraphNode) -> ExactRational,
    below2: &dyn Fn(&GraphNode) -> ExactRational,
) -> Option<Vec<ExactRational>> {
    let index: HashMap<&GraphNode, usize> = nodes.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let n = nodes.len();
    let mut a: Matrix = vec![vec![ExactRational::zero(); n]; n];
    let w = int(weight);
    let mut b = Vec::with_capacity(n);
    for (i, v) in nodes.iter().enumerate() {
        a[i][i] += int(diag);
        for e in solid_neighbors(kind, v) {
            a[i][index[&e.target]] += ExactRational::one();
        }
        b.push(rhs(kind, v, &w, below1, below2));
    }
    linalg::solve(a, b)
}
