use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{parse_index_list, IntegerPartition, EMPTY_SYMBOL, MAX_LEVEL};
use crate::error::{Result, WgError};

/// A permutation of `{1..k}` in one-line notation `[σ(1), …, σ(k)]`.
///
/// Level 0 is the empty permutation `∅`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    /// Builds a permutation from 1-based one-line images.
    pub fn new(images: &[usize]) -> Result<Self> {
        let k = images.len();
        if k > MAX_LEVEL {
            return Err(WgError::Parse {
                what: "permutation",
                reason: format!("level {k} exceeds the maximum {MAX_LEVEL}"),
            });
        }
        let mut seen = vec![false; k + 1];
        for &x in images {
            if x == 0 || x > k || seen[x] {
                return Err(WgError::Parse {
                    what: "permutation",
                    reason: format!("{images:?} is not a bijection on 1..{k}"),
                });
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.iter().map(|&x| x as u8).collect(),
        })
    }

    fn from_raw(images: Vec<u8>) -> Self {
        Permutation { images }
    }

    pub fn identity(k: usize) -> Self {
        Permutation::from_raw((1..=k as u8).collect())
    }

    pub fn empty() -> Self {
        Permutation { images: Vec::new() }
    }

    /// The transposition `(i, j)` in `S_k`.
    pub fn transposition(k: usize, i: usize, j: usize) -> Self {
        Permutation::identity(k).left_transpose(i, j)
    }

    pub fn level(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x as usize == i + 1)
    }

    /// One-line images, 1-based.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    /// `σ(x)` for 1-based `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] as usize
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.level(), other.level(), "composing permutations of different levels");
        Permutation::from_raw(other.images.iter().map(|&x| self.images[x as usize - 1]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.level()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize - 1] = (i + 1) as u8;
        }
        Permutation::from_raw(inv)
    }

    /// `(i, j) σ`: swaps the values `i` and `j` in the one-line notation.
    pub fn left_transpose(&self, i: usize, j: usize) -> Permutation {
        let (i, j) = (i as u8, j as u8);
        Permutation::from_raw(
            self.images
                .iter()
                .map(|&x| if x == i { j } else if x == j { i } else { x })
                .collect(),
        )
    }

    /// Cycles, each starting at its smallest element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let k = self.level();
        let mut seen = vec![false; k + 1];
        let mut out = Vec::new();
        for start in 1..=k {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> IntegerPartition {
        let mut parts: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        IntegerPartition::from_sorted(parts)
    }

    /// `|σ| = k - ℓ(cycle type)`.
    pub fn transposition_length(&self) -> usize {
        self.level() - self.cycles().len()
    }

    /// `σ↓ ∈ S_{k-1}`; requires `σ(k) = k`.
    pub fn restrict_down(&self) -> Result<Permutation> {
        let k = self.level();
        if k == 0 || self.apply(k) != k {
            return Err(WgError::Precondition {
                op: "restrict_down",
                reason: format!("{self} does not fix its top letter"),
            });
        }
        Ok(Permutation::from_raw(self.images[..k - 1].to_vec()))
    }

    /// The letter `r` with `σ(k) = r ≠ k` and `σ(r) = k`, when `k` lies in a 2-cycle.
    pub fn top_two_cycle(&self) -> Option<usize> {
        let k = self.level();
        if k < 2 {
            return None;
        }
        let r = self.apply(k);
        (r != k && self.apply(r) == k).then_some(r)
    }

    /// `σ♭ ∈ S_{k-2}`: removes the 2-cycle `(r, k)` and relabels the remaining
    /// letters order-preservingly.
    pub fn flat(&self) -> Result<Permutation> {
        let r = self.top_two_cycle().ok_or_else(|| WgError::Precondition {
            op: "flat",
            reason: format!("the top letter of {self} is not in a 2-cycle"),
        })?;
        let k = self.level();
        let relabel = |x: usize| if x < r { x } else { x - 1 };
        let images = (1..k)
            .filter(|&x| x != r)
            .map(|x| relabel(self.apply(x)) as u8)
            .collect();
        Ok(Permutation::from_raw(images))
    }

    /// The permutation whose cycles are consecutive blocks, longest first:
    /// `(2,1) ↦ [2,1,3]`.
    pub fn class_representative(mu: &IntegerPartition) -> Permutation {
        let mut images = Vec::with_capacity(mu.weight());
        let mut start = 1u8;
        for &part in mu.parts() {
            let part = part as u8;
            for j in 0..part {
                images.push(if j + 1 < part { start + j + 1 } else { start });
            }
            start += part;
        }
        Permutation::from_raw(images)
    }

    /// All of `S_k` in lexicographic order of one-line notation.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut cur: Vec<u8> = (1..=k as u8).collect();
        let mut out = vec![Permutation::from_raw(cur.clone())];
        while next_permutation(&mut cur) {
            out.push(Permutation::from_raw(cur.clone()));
        }
        out
    }
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.images.is_empty() {
            return f.write_str(EMPTY_SYMBOL);
        }
        let text: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        f.write_str(&text.join(","))
    }
}

impl FromStr for Permutation {
    type Err = WgError;

    fn from_str(s: &str) -> Result<Self> {
        Permutation::new(&parse_index_list(s, "permutation")?)
    }
}

impl TryFrom<String> for Permutation {
    type Error = WgError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Permutation> for String {
    fn from(p: Permutation) -> String {
        p.to_string()
    }
}
