//! The Weingarten graphs.
//!
//! Vertices are group elements of every level. Solid edges multiply by a
//! transposition within a level, dashed edges drop one level and (A III only)
//! squiggled edges drop a 2-cycle containing the top letter. Paths to `∅`
//! encode the terms of the `1/d` expansions.

mod count;
mod factorization;
mod paths;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use count::{count_paths, PathCountTable};
pub use factorization::{
    brute_force_factorizations, factorization_to_path, path_to_factorization,
    MonotoneFactorization,
};
pub use paths::{enumerate_paths, Path};

use crate::error::{Result, WgError};
use crate::symcore::{IntegerPartition, PairPartition, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GraphKind {
    Unitary,
    Orthogonal,
    AIII,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Unitary => "unitary",
            GraphKind::Orthogonal => "orthogonal",
            GraphKind::AIII => "aiii",
        }
    }

    pub fn uses_pairings(self) -> bool {
        self == GraphKind::Orthogonal
    }

    pub fn parse_node(self, text: &str) -> Result<GraphNode> {
        Ok(if self.uses_pairings() {
            GraphNode::Pairing(text.parse()?)
        } else {
            GraphNode::Perm(text.parse()?)
        })
    }

    pub fn check(self, node: &GraphNode) -> Result<()> {
        if node.is_pairing() == self.uses_pairings() {
            Ok(())
        } else {
            Err(WgError::InvalidArgument {
                arg: "element",
                reason: format!("{node} is not a vertex of the {} graph", self.name()),
            })
        }
    }

    pub fn empty_node(self) -> GraphNode {
        if self.uses_pairings() {
            GraphNode::Pairing(PairPartition::empty())
        } else {
            GraphNode::Perm(Permutation::empty())
        }
    }

    /// Canonical vertex of the class `μ` (cycle-type or coset-type).
    pub fn representative(self, mu: &IntegerPartition) -> GraphNode {
        if self.uses_pairings() {
            GraphNode::Pairing(PairPartition::class_representative(mu))
        } else {
            GraphNode::Perm(Permutation::class_representative(mu))
        }
    }

    /// Every vertex of level `k`.
    pub fn all_nodes(self, k: usize) -> Vec<GraphNode> {
        if self.uses_pairings() {
            PairPartition::all(k).into_iter().map(GraphNode::Pairing).collect()
        } else {
            Permutation::all(k).into_iter().map(GraphNode::Perm).collect()
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A vertex: a permutation (unitary, A III) or a pair partition (orthogonal).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphNode {
    Perm(Permutation),
    Pairing(PairPartition),
}

impl GraphNode {
    pub fn level(&self) -> usize {
        match self {
            GraphNode::Perm(p) => p.level(),
            GraphNode::Pairing(m) => m.level(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.level() == 0
    }

    pub fn is_pairing(&self) -> bool {
        matches!(self, GraphNode::Pairing(_))
    }

    /// Cycle-type or coset-type.
    pub fn class_key(&self) -> IntegerPartition {
        match self {
            GraphNode::Perm(p) => p.cycle_type(),
            GraphNode::Pairing(m) => m.coset_type(),
        }
    }

    /// `|σ|` or `|m|`.
    pub fn transposition_length(&self) -> usize {
        match self {
            GraphNode::Perm(p) => p.transposition_length(),
            GraphNode::Pairing(m) => m.transposition_length(),
        }
    }
}

impl fmt::Display for GraphNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphNode::Perm(p) => p.fmt(f),
            GraphNode::Pairing(m) => m.fmt(f),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    Solid,
    Dashed,
    Squiggled,
}

impl EdgeKind {
    pub fn arrow(self) -> &'static str {
        match self {
            EdgeKind::Solid => "->",
            EdgeKind::Dashed => "=>",
            EdgeKind::Squiggled => "~>",
        }
    }
}

/// One outgoing edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeStep {
    pub kind: EdgeKind,
    /// The `i` selecting the transposition of a solid edge.
    pub index: Option<usize>,
    /// The transposition applied by a solid edge: `(i, k)` or `(i, 2k-1)`.
    pub transposition: Option<(usize, usize)>,
    pub target: GraphNode,
}

impl EdgeStep {
    fn solid(index: usize, pivot: usize, target: GraphNode) -> Self {
        EdgeStep {
            kind: EdgeKind::Solid,
            index: Some(index),
            transposition: Some((index, pivot)),
            target,
        }
    }

    fn plain(kind: EdgeKind, target: GraphNode) -> Self {
        EdgeStep {
            kind,
            index: None,
            transposition: None,
            target,
        }
    }
}

/// Solid edges out of `node`, by increasing index. Unitary and A III vertices
/// of level `k` have `k - 1` of them, orthogonal ones `2k - 2`, self-loops
/// included.
pub fn solid_neighbors(kind: GraphKind, node: &GraphNode) -> Vec<EdgeStep> {
    match (kind, node) {
        (GraphKind::Unitary | GraphKind::AIII, GraphNode::Perm(p)) => {
            let k = p.level();
            (1..k.max(1))
                .map(|i| EdgeStep::solid(i, k, GraphNode::Perm(p.left_transpose(i, k))))
                .collect()
        }
        (GraphKind::Orthogonal, GraphNode::Pairing(m)) => {
            let k = m.level();
            if k == 0 {
                return Vec::new();
            }
            let pivot = 2 * k - 1;
            (1..pivot)
                .map(|i| EdgeStep::solid(i, pivot, GraphNode::Pairing(m.transpose(i, pivot))))
                .collect()
        }
        _ => panic!("{node} is not a vertex of the {kind} graph"),
    }
}

/// `σ↓` or `m↓` when the top letter is fixed, respectively `{2k-1,2k} ∈ m`.
pub fn dashed_target(kind: GraphKind, node: &GraphNode) -> Option<GraphNode> {
    match (kind, node) {
        (GraphKind::Unitary | GraphKind::AIII, GraphNode::Perm(p)) => {
            p.restrict_down().ok().map(GraphNode::Perm)
        }
        (GraphKind::Orthogonal, GraphNode::Pairing(m)) => m.pairing_down().ok().map(GraphNode::Pairing),
        _ => panic!("{node} is not a vertex of the {kind} graph"),
    }
}

/// `σ♭` when the top letter lies in a 2-cycle. Only the A III graph has
/// squiggled edges; other kinds are rejected.
pub fn squiggled_target(kind: GraphKind, node: &GraphNode) -> Result<Option<GraphNode>> {
    match (kind, node) {
        (GraphKind::AIII, GraphNode::Perm(p)) => Ok(p.flat().ok().map(GraphNode::Perm)),
        (GraphKind::AIII, _) => Err(WgError::InvalidArgument {
            arg: "element",
            reason: format!("{node} is not a vertex of the aiii graph"),
        }),
        _ => Err(WgError::Unsupported(format!("the {kind} graph has no squiggled edges"))),
    }
}

/// All outgoing edges in enumeration order: solid by index, then dashed, then
/// squiggled.
pub fn out_edges(kind: GraphKind, node: &GraphNode) -> Vec<EdgeStep> {
    let mut edges = solid_neighbors(kind, node);
    if let Some(t) = dashed_target(kind, node) {
        edges.push(EdgeStep::plain(EdgeKind::Dashed, t));
    }
    if kind == GraphKind::AIII {
        if let Ok(Some(t)) = squiggled_target(kind, node) {
            edges.push(EdgeStep::plain(EdgeKind::Squiggled, t));
        }
    }
    edges
}

/// Pairs of distinct indices `i < j` whose solid edges out of `node` reach the
/// same vertex without being self-loops.
pub fn coincident_solid_targets(kind: GraphKind, node: &GraphNode) -> Vec<(usize, usize)> {
    let edges = solid_neighbors(kind, node);
    let mut out = Vec::new();
    for (a, ea) in edges.iter().enumerate() {
        for eb in &edges[a + 1..] {
            if ea.target == eb.target && &ea.target != node {
                out.push((ea.index.unwrap(), eb.index.unwrap()));
            }
        }
    }
    out
}

impl FromStr for GraphKind {
    type Err = WgError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "u" | "unitary" => Ok(GraphKind::Unitary),
            "o" | "orthogonal" => Ok(GraphKind::Orthogonal),
            "aiii" | "a3" => Ok(GraphKind::AIII),
            _ => Err(WgError::Parse {
                what: "graph kind",
                reason: format!("{s:?} (expected u, o or aiii)"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(kind: GraphKind, s: &str) -> GraphNode {
        kind.parse_node(s).unwrap()
    }

    #[test]
    fn unitary_edges() {
        let steps = solid_neighbors(GraphKind::Unitary, &node(GraphKind::Unitary, "2,1"));
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].target, node(GraphKind::Unitary, "1,2"));
        assert_eq!(
            dashed_target(GraphKind::Unitary, &node(GraphKind::Unitary, "1,3,2,4")),
            Some(node(GraphKind::Unitary, "1,3,2"))
        );
        assert!(solid_neighbors(GraphKind::Unitary, &node(GraphKind::Unitary, "1")).is_empty());
        assert_eq!(solid_neighbors(GraphKind::Unitary, &node(GraphKind::Unitary, "∅")).len(), 0);
    }

    #[test]
    fn orthogonal_edges() {
        let o = GraphKind::Orthogonal;
        let m = node(o, "1,3|2,4");
        let steps = solid_neighbors(o, &m);
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[0].target, m);
        assert_eq!(steps[0].transposition, Some((1, 3)));
        assert_eq!(steps[1].target, node(o, "1,2|3,4"));
        assert_eq!(dashed_target(o, &m), None);

        let e2 = node(o, "1,2|3,4");
        let targets: Vec<GraphNode> = solid_neighbors(o, &e2).into_iter().map(|s| s.target).collect();
        assert_eq!(targets, vec![node(o, "1,4|2,3"), node(o, "1,3|2,4")]);
    }

    #[test]
    fn squiggled_edges() {
        let a = GraphKind::AIII;
        assert_eq!(
            squiggled_target(a, &node(a, "4,5,1,3,2")).unwrap(),
            Some(node(a, "3,1,2"))
        );
        assert!(squiggled_target(GraphKind::Unitary, &node(a, "2,1")).is_err());
        // no vertex has both a dashed and a squiggled edge
        for k in 0..=5 {
            for v in a.all_nodes(k) {
                let both = dashed_target(a, &v).is_some() && squiggled_target(a, &v).unwrap().is_some();
                assert!(!both, "{v}");
            }
        }
    }

    #[test]
    fn orthogonal_solid_targets_are_distinct() {
        for k in 1..=5 {
            for v in GraphKind::Orthogonal.all_nodes(k) {
                assert!(coincident_solid_targets(GraphKind::Orthogonal, &v).is_empty(), "{v}");
            }
        }
    }

    #[test]
    fn length_changes_along_solid_edges() {
        for k in 1..=5 {
            for v in GraphKind::Unitary.all_nodes(k) {
                for e in solid_neighbors(GraphKind::Unitary, &v) {
                    let diff = e.target.transposition_length() as i64 - v.transposition_length() as i64;
                    assert!(diff == 1 || diff == -1);
                }
            }
        }
        for k in 1..=4 {
            for v in GraphKind::Orthogonal.all_nodes(k) {
                for e in solid_neighbors(GraphKind::Orthogonal, &v) {
                    let diff = e.target.transposition_length() as i64 - v.transposition_length() as i64;
                    assert!((-1..=1).contains(&diff));
                }
            }
        }
    }
}
