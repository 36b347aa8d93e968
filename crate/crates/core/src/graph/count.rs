use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{dashed_target, solid_neighbors, squiggled_target, GraphKind, GraphNode};
use crate::error::Result;

type CountKey = (GraphKind, GraphNode, u32);
type RefinedKey = (GraphNode, u32, u32);

/// Memoized path counts `#P(v, l)`: the number of paths from `v` to `∅`
/// traversing exactly `l` solid edges.
///
/// For A III the table also keeps counts refined by the number of solid and
/// dashed edges; the number of squiggled edges is then forced by
/// `dashed + 2·squiggled = level`.
///
/// Entries are immutable once inserted. Lookups take a read lock, and no lock
/// is held while a missing entry is computed.
#[derive(Debug, Default)]
pub struct PathCountTable {
    counts: RwLock<HashMap<CountKey, BigInt>>,
    refined: RwLock<HashMap<RefinedKey, BigInt>>,
}

impl PathCountTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.counts.read().unwrap().len() + self.refined.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `#P(node, solid)`. For A III this sums over all dashed/squiggled splittings.
    pub fn count(&self, kind: GraphKind, node: &GraphNode, solid: u32) -> BigInt {
        if node.is_empty() {
            return if solid == 0 { BigInt::one() } else { BigInt::zero() };
        }
        let key = (kind, node.clone(), solid);
        if let Some(v) = self.counts.read().unwrap().get(&key) {
            return v.clone();
        }
        let mut total = BigInt::zero();
        if solid > 0 {
            for step in solid_neighbors(kind, node) {
                total += self.count(kind, &step.target, solid - 1);
            }
        }
        if let Some(down) = dashed_target(kind, node) {
            total += self.count(kind, &down, solid);
        }
        if kind == GraphKind::AIII {
            if let Ok(Some(flat)) = squiggled_target(kind, node) {
                total += self.count(kind, &flat, solid);
            }
        }
        self.counts.write().unwrap().entry(key).or_insert(total).clone()
    }

    /// A III paths from `node` to `∅` with exactly `solid` solid and `dashed`
    /// dashed edges.
    pub fn count_aiii_refined(&self, node: &GraphNode, solid: u32, dashed: u32) -> BigInt {
        let level = node.level() as u32;
        if dashed > level || (level - dashed) % 2 == 1 {
            return BigInt::zero();
        }
        if node.is_empty() {
            return if solid == 0 { BigInt::one() } else { BigInt::zero() };
        }
        let key = (node.clone(), solid, dashed);
        if let Some(v) = self.refined.read().unwrap().get(&key) {
            return v.clone();
        }
        let kind = GraphKind::AIII;
        let mut total = BigInt::zero();
        if solid > 0 {
            for step in solid_neighbors(kind, node) {
                total += self.count_aiii_refined(&step.target, solid - 1, dashed);
            }
        }
        if dashed > 0 {
            if let Some(down) = dashed_target(kind, node) {
                total += self.count_aiii_refined(&down, solid, dashed - 1);
            }
        }
        if let Ok(Some(flat)) = squiggled_target(kind, node) {
            total += self.count_aiii_refined(&flat, solid, dashed);
        }
        self.refined.write().unwrap().entry(key).or_insert(total).clone()
    }
}

/// `#P(node, solid)` with a fresh table.
pub fn count_paths(kind: GraphKind, node: &GraphNode, solid: u32) -> Result<BigInt> {
    kind.check(node)?;
    Ok(PathCountTable::new().count(kind, node, solid))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(kind: GraphKind, s: &str, l: u32) -> BigInt {
        count_paths(kind, &kind.parse_node(s).unwrap(), l).unwrap()
    }

    /// Plain recursion over out-edges with no memo.
    fn naive(kind: GraphKind, node: &GraphNode, solid: u32) -> u64 {
        if node.is_empty() {
            return (solid == 0) as u64;
        }
        super::super::out_edges(kind, node)
            .into_iter()
            .map(|e| match e.kind {
                super::super::EdgeKind::Solid if solid == 0 => 0,
                super::super::EdgeKind::Solid => naive(kind, &e.target, solid - 1),
                _ => naive(kind, &e.target, solid),
            })
            .sum()
    }

    #[test]
    fn unitary_small_counts() {
        let u = GraphKind::Unitary;
        assert_eq!(count(u, "2,1", 1), BigInt::from(1));
        assert_eq!(count(u, "2,1", 2), BigInt::from(0));
        assert_eq!(count(u, "2,1", 3), BigInt::from(1));
        assert_eq!(count(u, "4,1,5,3,2", 4), BigInt::from(14));
        assert_eq!(count(u, "1", 0), BigInt::from(1));
        assert_eq!(count(u, "∅", 0), BigInt::from(1));
        assert_eq!(count(u, "∅", 1), BigInt::from(0));
    }

    #[test]
    fn orthogonal_small_counts() {
        let o = GraphKind::Orthogonal;
        let got: Vec<BigInt> = (1..=3).map(|l| count(o, "1,3|2,4", l)).collect();
        assert_eq!(got, vec![1.into(), 1.into(), 3.into()]);
        assert_eq!(count(o, "1,2|3,4", 1), BigInt::from(0));
        assert_eq!(count(o, "1,2|3,4", 2), BigInt::from(2));
    }

    #[test]
    fn memo_matches_naive_recount() {
        let table = PathCountTable::new();
        for kind in [GraphKind::Unitary, GraphKind::Orthogonal, GraphKind::AIII] {
            for k in 0..=3 {
                for v in kind.all_nodes(k) {
                    for l in 0..=4 {
                        assert_eq!(table.count(kind, &v, l), BigInt::from(naive(kind, &v, l)), "{kind} {v} {l}");
                    }
                }
            }
        }
    }

    #[test]
    fn aiii_refined_sums_to_total() {
        let table = PathCountTable::new();
        for k in 0..=4 {
            for v in GraphKind::AIII.all_nodes(k) {
                for l in 0..=4 {
                    let refined: BigInt = (0..=k as u32).map(|b| table.count_aiii_refined(&v, l, b)).sum();
                    assert_eq!(refined, table.count(GraphKind::AIII, &v, l));
                }
            }
        }
    }

    #[test]
    fn aiii_two_cycle_paths() {
        // [2,1]: 2j solid edges then squiggle, or 2j+1 solid edges then two dashes
        let table = PathCountTable::new();
        let v = GraphKind::AIII.parse_node("2,1").unwrap();
        for j in 0..4u32 {
            assert_eq!(table.count_aiii_refined(&v, 2 * j, 0), BigInt::one());
            assert_eq!(table.count_aiii_refined(&v, 2 * j + 1, 2), BigInt::one());
            assert_eq!(table.count_aiii_refined(&v, 2 * j + 1, 0), BigInt::zero());
        }
    }

    #[test]
    fn kind_mismatch_rejected() {
        let p = GraphKind::Unitary.parse_node("2,1").unwrap();
        assert!(count_paths(GraphKind::Orthogonal, &p, 1).is_err());
    }
}
