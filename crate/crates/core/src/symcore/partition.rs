use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::EMPTY_SYMBOL;
use crate::error::{Result, WgError};

/// A weakly decreasing sequence of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntegerPartition {
    parts: Vec<usize>,
}

impl IntegerPartition {
    /// Builds a partition from parts in any order.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(WgError::Parse {
                what: "integer partition",
                reason: "parts must be positive".into(),
            });
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(IntegerPartition { parts })
    }

    pub(crate) fn from_sorted(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        IntegerPartition { parts }
    }

    /// `(1^k)`.
    pub fn ones(k: usize) -> Self {
        IntegerPartition { parts: vec![1; k] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts, `ℓ(μ)`.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// `|μ| - ℓ(μ)`, the transposition length of any element of this class.
    pub fn transposition_length(&self) -> usize {
        self.weight() - self.length()
    }

    /// All partitions of `n`, in reverse lexicographic order: `(n)` first,
    /// `(1^n)` last.
    pub fn all(n: usize) -> Vec<IntegerPartition> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<IntegerPartition>) {
            if rest == 0 {
                out.push(IntegerPartition { parts: cur.clone() });
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str(EMPTY_SYMBOL);
        }
        let text: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&text.join("+"))
    }
}

impl FromStr for IntegerPartition {
    type Err = WgError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == EMPTY_SYMBOL {
            return Ok(IntegerPartition { parts: Vec::new() });
        }
        let parts = s
            .split('+')
            .map(|t| {
                t.trim().parse::<usize>().map_err(|_| WgError::Parse {
                    what: "integer partition",
                    reason: format!("{t:?} in {s:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let out = IntegerPartition::new(parts)?;
        if out.to_string() != s {
            return Err(WgError::Parse {
                what: "integer partition",
                reason: format!("{s:?} is not weakly decreasing"),
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|n| IntegerPartition::all(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn text_round_trip() {
        let mu: IntegerPartition = "3+1+1".parse().unwrap();
        assert_eq!(mu.parts(), &[3, 1, 1]);
        assert_eq!(mu.to_string(), "3+1+1");
        assert_eq!(mu.transposition_length(), 2);
        assert!("1+3".parse::<IntegerPartition>().is_err());
        assert_eq!("∅".parse::<IntegerPartition>().unwrap().weight(), 0);
    }
}
