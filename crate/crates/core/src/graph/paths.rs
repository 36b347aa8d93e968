use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{out_edges, EdgeKind, EdgeStep, GraphKind, GraphNode, PathCountTable};
use crate::error::{Result, WgError};

/// A path from a vertex to `∅`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    pub kind: GraphKind,
    pub start: GraphNode,
    pub steps: Vec<EdgeStep>,
}

impl Path {
    fn count_of(&self, kind: EdgeKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }

    pub fn solid_count(&self) -> usize {
        self.count_of(EdgeKind::Solid)
    }

    pub fn dashed_count(&self) -> usize {
        self.count_of(EdgeKind::Dashed)
    }

    pub fn squiggled_count(&self) -> usize {
        self.count_of(EdgeKind::Squiggled)
    }

    /// Vertex sequence, starting vertex included.
    pub fn nodes(&self) -> Vec<&GraphNode> {
        std::iter::once(&self.start)
            .chain(self.steps.iter().map(|s| &s.target))
            .collect()
    }

    pub fn end(&self) -> &GraphNode {
        self.steps.last().map_or(&self.start, |s| &s.target)
    }
}

/// Arrow notation: `4,1,5,3,2 -(3,5)-> 4,1,3,5,2 => … ~> ∅`.
impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for step in &self.steps {
            match (step.kind, step.transposition) {
                (EdgeKind::Solid, Some((a, b))) => write!(f, " -({a},{b})-> {}", step.target)?,
                (kind, _) => write!(f, " {} {}", kind.arrow(), step.target)?,
            }
        }
        Ok(())
    }
}

/// All paths in `P(node, solid)` in lexicographic order of edge choices
/// (solid edges by index, then dashed, then squiggled).
///
/// Fails with [`WgError::CapExceeded`] when more than `limit` paths exist.
pub fn enumerate_paths(
    kind: GraphKind,
    node: &GraphNode,
    solid: u32,
    limit: Option<usize>,
    table: &PathCountTable,
) -> Result<Vec<Path>> {
    kind.check(node)?;
    let total = table.count(kind, node, solid);
    if let Some(cap) = limit {
        if total > BigInt::from(cap) {
            return Err(WgError::CapExceeded { cap });
        }
    }
    let capacity = total.to_usize().ok_or(WgError::CapExceeded { cap: usize::MAX })?;
    let mut out = Vec::with_capacity(capacity);
    let mut steps = Vec::new();
    walk(kind, node, node, solid, table, &mut steps, &mut out);
    debug_assert_eq!(out.len(), capacity);
    Ok(out)
}

fn walk(
    kind: GraphKind,
    start: &GraphNode,
    at: &GraphNode,
    solid_left: u32,
    table: &PathCountTable,
    steps: &mut Vec<EdgeStep>,
    out: &mut Vec<Path>,
) {
    if at.is_empty() {
        if solid_left == 0 {
            out.push(Path {
                kind,
                start: start.clone(),
                steps: steps.clone(),
            });
        }
        return;
    }
    for edge in out_edges(kind, at) {
        let left = match edge.kind {
            EdgeKind::Solid if solid_left == 0 => continue,
            EdgeKind::Solid => solid_left - 1,
            _ => solid_left,
        };
        if table.count(kind, &edge.target, left).is_zero() {
            continue;
        }
        let target = edge.target.clone();
        steps.push(edge);
        walk(kind, start, &target, left, table, steps, out);
        steps.pop();
    }
}
