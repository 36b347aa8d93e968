use std::fmt;

use serde::{Deserialize, Serialize};

use super::{dashed_target, EdgeKind, EdgeStep, GraphKind, GraphNode, Path};
use crate::error::{Result, WgError};
use crate::symcore::{PairPartition, Permutation};

/// A monotone factorization `(τ_1, …, τ_l)` of a vertex.
///
/// Unitary: `τ_i = (s_i, t_i)`, `t_1 ≥ … ≥ t_l` and `σ = τ_1 ⋯ τ_l`.
/// Orthogonal: `τ_i = (s_i, 2t_i - 1)`, `t_1 ≥ … ≥ t_l` and `m = (τ_1 ⋯ τ_l).e_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonotoneFactorization {
    pub kind: GraphKind,
    pub target: GraphNode,
    pub transpositions: Vec<(usize, usize)>,
}

impl MonotoneFactorization {
    /// Validates shape, monotonicity and the product.
    pub fn new(kind: GraphKind, target: GraphNode, transpositions: Vec<(usize, usize)>) -> Result<Self> {
        let f = MonotoneFactorization {
            kind,
            target,
            transpositions,
        };
        f.levels()?;
        if f.product()? != f.target {
            return Err(WgError::ProductMismatch(format!("{f} does not factor {}", f.target)));
        }
        Ok(f)
    }

    pub fn len(&self) -> usize {
        self.transpositions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transpositions.is_empty()
    }

    /// The level `t_i` of each factor, checking shape and monotonicity.
    fn levels(&self) -> Result<Vec<usize>> {
        if self.kind == GraphKind::AIII {
            return Err(WgError::Unsupported("monotone factorizations are defined for u and o only".into()));
        }
        self.kind.check(&self.target)?;
        let k = self.target.level();
        let mut levels = Vec::with_capacity(self.len());
        for &(s, b) in &self.transpositions {
            let t = match self.kind {
                GraphKind::Orthogonal if b % 2 == 1 => b.div_ceil(2),
                GraphKind::Orthogonal => {
                    return Err(WgError::NotMonotone(format!("({s},{b}) must move an odd point")))
                }
                _ => b,
            };
            if s == 0 || s >= b || t > k {
                return Err(WgError::NotMonotone(format!("({s},{b}) is out of range for level {k}")));
            }
            if levels.last().is_some_and(|&prev| t > prev) {
                return Err(WgError::NotMonotone(format!("{self} is not weakly decreasing")));
            }
            levels.push(t);
        }
        Ok(levels)
    }

    fn product(&self) -> Result<GraphNode> {
        let k = self.target.level();
        match self.kind {
            GraphKind::Unitary => {
                let mut prod = Permutation::identity(k);
                for &(s, b) in &self.transpositions {
                    prod = prod.compose(&Permutation::transposition(k, s, b));
                }
                Ok(GraphNode::Perm(prod))
            }
            GraphKind::Orthogonal => {
                let mut prod = Permutation::identity(2 * k);
                for &(s, b) in &self.transpositions {
                    prod = prod.compose(&Permutation::transposition(2 * k, s, b));
                }
                Ok(GraphNode::Pairing(PairPartition::trivial(k).act_unchecked(&prod)))
            }
            GraphKind::AIII => unreachable!("rejected by levels()"),
        }
    }
}

impl fmt::Display for MonotoneFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.transpositions.is_empty() {
            return f.write_str("()");
        }
        for (s, b) in &self.transpositions {
            write!(f, "({s},{b})")?;
        }
        Ok(())
    }
}

/// Reads off the transpositions of the solid edges of a path.
pub fn path_to_factorization(path: &Path) -> Result<MonotoneFactorization> {
    if path.squiggled_count() > 0 || path.kind == GraphKind::AIII {
        return Err(WgError::Unsupported("A III paths have no factorization counterpart".into()));
    }
    let transpositions = path
        .steps
        .iter()
        .filter(|s| s.kind == EdgeKind::Solid)
        .map(|s| s.transposition.expect("solid edges carry a transposition"))
        .collect();
    MonotoneFactorization::new(path.kind, path.start.clone(), transpositions)
}

/// Rebuilds the path of a monotone factorization: before each factor of level
/// `t`, dashed edges lower the current vertex to level `t`; after the last
/// factor dashed edges run down to `∅`.
pub fn factorization_to_path(f: &MonotoneFactorization) -> Result<Path> {
    let levels = f.levels()?;
    let kind = f.kind;
    let mut at = f.target.clone();
    let mut steps = Vec::new();
    let descend = |at: &mut GraphNode, steps: &mut Vec<EdgeStep>, to: usize| -> Result<()> {
        while at.level() > to {
            let down = dashed_target(kind, at).ok_or_else(|| {
                WgError::ProductMismatch(format!("{f}: no dashed edge out of {at}"))
            })?;
            steps.push(EdgeStep::plain(EdgeKind::Dashed, down.clone()));
            *at = down;
        }
        Ok(())
    };
    for (&(s, b), &t) in f.transpositions.iter().zip(&levels) {
        descend(&mut at, &mut steps, t)?;
        let next = match &at {
            GraphNode::Perm(p) => GraphNode::Perm(p.left_transpose(s, b)),
            GraphNode::Pairing(m) => GraphNode::Pairing(m.transpose(s, b)),
        };
        steps.push(EdgeStep::solid(s, b, next.clone()));
        at = next;
    }
    descend(&mut at, &mut steps, 0)?;
    Ok(Path {
        kind,
        start: f.target.clone(),
        steps,
    })
}

/// Every monotone factorization of length `l`, found by direct search over
/// transposition sequences. Independent of the graph; used as an oracle.
pub fn brute_force_factorizations(kind: GraphKind, target: &GraphNode, l: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    kind.check(target)?;
    let k = target.level();
    let pivot = |t: usize| if kind == GraphKind::Orthogonal { 2 * t - 1 } else { t };
    let n = if kind == GraphKind::Orthogonal { 2 * k } else { k };
    let mut out = Vec::new();
    let mut seq = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        kind: GraphKind,
        k: usize,
        n: usize,
        max_t: usize,
        left: usize,
        prod: &Permutation,
        pivot: &dyn Fn(usize) -> usize,
        target: &GraphNode,
        seq: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if left == 0 {
            let got = if kind == GraphKind::Orthogonal {
                GraphNode::Pairing(PairPartition::trivial(k).act_unchecked(prod))
            } else {
                GraphNode::Perm(prod.clone())
            };
            if &got == target {
                out.push(seq.clone());
            }
            return;
        }
        for t in (1..=max_t).rev() {
            let b = pivot(t);
            for s in 1..b {
                seq.push((s, b));
                let next = prod.compose(&Permutation::transposition(n, s, b));
                rec(kind, k, n, t, left - 1, &next, pivot, target, seq, out);
                seq.pop();
            }
        }
    }
    rec(kind, k, n, k, l, &Permutation::identity(n), &pivot, target, &mut seq, &mut out);
    Ok(out)
}
