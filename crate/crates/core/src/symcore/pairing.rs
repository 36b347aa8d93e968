use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{parse_index_list, IntegerPartition, Permutation, EMPTY_SYMBOL, MAX_LEVEL};
use crate::error::{Result, WgError};

/// A pair partition of `{1..2k}`, stored canonically: each block `(a, b)` has
/// `a < b` and blocks are sorted by their first element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PairPartition {
    blocks: Vec<(u8, u8)>,
}

impl PairPartition {
    /// Builds a pair partition from unordered blocks.
    pub fn new(blocks: &[(usize, usize)]) -> Result<Self> {
        let n = 2 * blocks.len();
        if blocks.len() > MAX_LEVEL {
            return Err(WgError::Parse {
                what: "pair partition",
                reason: format!("level {} exceeds the maximum {MAX_LEVEL}", blocks.len()),
            });
        }
        let mut seen = vec![false; n + 1];
        for &(a, b) in blocks {
            for x in [a, b] {
                if x == 0 || x > n || seen[x] {
                    return Err(WgError::Parse {
                        what: "pair partition",
                        reason: format!("{blocks:?} does not partition 1..{n} into pairs"),
                    });
                }
                seen[x] = true;
            }
        }
        Ok(Self::canonical(blocks.iter().map(|&(a, b)| (a as u8, b as u8)).collect()))
    }

    fn canonical(mut blocks: Vec<(u8, u8)>) -> Self {
        for blk in blocks.iter_mut() {
            if blk.0 > blk.1 {
                *blk = (blk.1, blk.0);
            }
        }
        blocks.sort_unstable();
        PairPartition { blocks }
    }

    /// `e_k = {1,2}{3,4}…{2k-1,2k}`.
    pub fn trivial(k: usize) -> Self {
        PairPartition {
            blocks: (0..k as u8).map(|j| (2 * j + 1, 2 * j + 2)).collect(),
        }
    }

    pub fn empty() -> Self {
        PairPartition { blocks: Vec::new() }
    }

    pub fn level(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> Vec<(usize, usize)> {
        self.blocks.iter().map(|&(a, b)| (a as usize, b as usize)).collect()
    }

    pub fn contains_block(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b) as u8, a.max(b) as u8);
        self.blocks.binary_search(&key).is_ok()
    }

    /// Partner of each point: `partners()[x - 1]` is the point paired with `x`.
    pub fn partners(&self) -> Vec<usize> {
        let mut out = vec![0; 2 * self.level()];
        for &(a, b) in &self.blocks {
            out[a as usize - 1] = b as usize;
            out[b as usize - 1] = a as usize;
        }
        out
    }

    pub fn partner(&self, x: usize) -> usize {
        self.partners()[x - 1]
    }

    /// `ζ.m = {ζ(a), ζ(b)}…`, for `ζ ∈ S_{2k}`.
    pub fn act(&self, zeta: &Permutation) -> Result<PairPartition> {
        if zeta.level() != 2 * self.level() {
            return Err(WgError::LevelMismatch {
                expected: 2 * self.level(),
                found: zeta.level(),
            });
        }
        Ok(self.act_unchecked(zeta))
    }

    pub(crate) fn act_unchecked(&self, zeta: &Permutation) -> PairPartition {
        Self::canonical(
            self.blocks
                .iter()
                .map(|&(a, b)| (zeta.apply(a as usize) as u8, zeta.apply(b as usize) as u8))
                .collect(),
        )
    }

    /// `(i, j).m`, swapping the points `i` and `j`.
    pub fn transpose(&self, i: usize, j: usize) -> PairPartition {
        let (i, j) = (i as u8, j as u8);
        let swap = |x: u8| if x == i { j } else if x == j { i } else { x };
        Self::canonical(self.blocks.iter().map(|&(a, b)| (swap(a), swap(b))).collect())
    }

    /// Coset-type: the union of the blocks of `m` and of `e_k` decomposes into
    /// cycles of lengths `2μ_1 ≥ 2μ_2 ≥ …`; returns `μ`.
    pub fn coset_type(&self) -> IntegerPartition {
        let n = 2 * self.level();
        let partner = self.partners();
        let trivial_partner = |x: usize| if x % 2 == 1 { x + 1 } else { x - 1 };
        let mut seen = vec![false; n + 1];
        let mut parts = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            loop {
                let y = trivial_partner(x);
                seen[x] = true;
                seen[y] = true;
                len += 1;
                x = partner[y - 1];
                if x == start {
                    break;
                }
            }
            parts.push(len);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        IntegerPartition::from_sorted(parts)
    }

    /// `|m| = k - ℓ(coset type)`.
    pub fn transposition_length(&self) -> usize {
        self.level() - self.coset_type().length()
    }

    /// `m↓`: removes the block `{2k-1, 2k}`.
    pub fn pairing_down(&self) -> Result<PairPartition> {
        let k = self.level();
        if k == 0 || !self.contains_block(2 * k - 1, 2 * k) {
            return Err(WgError::Precondition {
                op: "pairing_down",
                reason: format!("{self} does not contain the block {{{},{}}}", 2 * k - 1, 2 * k),
            });
        }
        Ok(PairPartition {
            blocks: self
                .blocks
                .iter()
                .copied()
                .filter(|&(_, b)| b as usize != 2 * k)
                .collect(),
        })
    }

    /// The lexicographically least sequence `i` with `i_r = i_s` exactly when
    /// `{r, s}` is a block.
    pub fn strong_admissible_sequence(&self) -> Vec<usize> {
        let partner = self.partners();
        let mut seq = vec![0; partner.len()];
        let mut next = 1;
        for x in 0..seq.len() {
            if seq[x] == 0 {
                seq[x] = next;
                seq[partner[x] - 1] = next;
                next += 1;
            }
        }
        seq
    }

    /// `σ_m` with `σ_m(2j-1) = a_j`, `σ_m(2j) = b_j` over the canonical blocks,
    /// so that `σ_m.e_k = m`.
    pub fn to_permutation(&self) -> Permutation {
        let images: Vec<usize> = self
            .blocks
            .iter()
            .flat_map(|&(a, b)| [a as usize, b as usize])
            .collect();
        Permutation::new(&images).expect("blocks cover 1..2k")
    }

    /// A pair partition of the given coset-type: each part `r` occupies `r`
    /// consecutive trivial blocks, longest parts first.
    pub fn class_representative(mu: &IntegerPartition) -> PairPartition {
        let mut blocks = Vec::with_capacity(mu.weight());
        let mut first = 1usize; // first trivial block of the current part
        for &r in mu.parts() {
            for j in first..first + r - 1 {
                blocks.push((2 * j, 2 * j + 1));
            }
            blocks.push((2 * first - 1, 2 * (first + r - 1)));
            first += r;
        }
        PairPartition::new(&blocks).expect("representative is a pair partition")
    }

    /// All of `P_2(2k)`, in lexicographic order of canonical blocks.
    pub fn all(k: usize) -> Vec<PairPartition> {
        fn rec(free: &mut Vec<u8>, cur: &mut Vec<(u8, u8)>, out: &mut Vec<PairPartition>) {
            if free.is_empty() {
                out.push(PairPartition { blocks: cur.clone() });
                return;
            }
            let a = free.remove(0);
            for idx in 0..free.len() {
                let b = free.remove(idx);
                cur.push((a, b));
                rec(free, cur, out);
                cur.pop();
                free.insert(idx, b);
            }
            free.insert(0, a);
        }
        let mut out = Vec::new();
        rec(&mut (1..=2 * k as u8).collect(), &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return f.write_str(EMPTY_SYMBOL);
        }
        let text: Vec<String> = self.blocks.iter().map(|(a, b)| format!("{a},{b}")).collect();
        f.write_str(&text.join("|"))
    }
}

impl FromStr for PairPartition {
    type Err = WgError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == EMPTY_SYMBOL {
            return Ok(PairPartition::empty());
        }
        let blocks = s
            .split('|')
            .map(|blk| match parse_index_list(blk, "pair partition")?.as_slice() {
                &[a, b] => Ok((a, b)),
                _ => Err(WgError::Parse {
                    what: "pair partition",
                    reason: format!("block {blk:?} is not a pair"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        PairPartition::new(&blocks)
    }
}

impl TryFrom<String> for PairPartition {
    type Error = WgError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PairPartition> for String {
    fn from(p: PairPartition) -> String {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairing(s: &str) -> PairPartition {
        s.parse().unwrap()
    }

    #[test]
    fn action_examples() {
        let e2 = PairPartition::trivial(2);
        assert_eq!(e2.act(&Permutation::identity(4)).unwrap(), e2);
        let t23 = Permutation::transposition(4, 2, 3);
        assert_eq!(e2.act(&t23).unwrap(), pairing("1,3|2,4"));
        let t13 = Permutation::transposition(4, 1, 3);
        assert_eq!(pairing("1,3|2,4").act(&t13).unwrap(), pairing("1,3|2,4"));
        assert!(e2.act(&Permutation::identity(3)).is_err());
    }

    #[test]
    fn coset_types() {
        assert_eq!(PairPartition::trivial(3).coset_type(), IntegerPartition::ones(3));
        assert_eq!(PairPartition::trivial(3).transposition_length(), 0);
        assert_eq!(pairing("1,3|2,4").coset_type().parts(), &[2]);
        assert_eq!(pairing("1,3|2,4").transposition_length(), 1);
        assert_eq!(pairing("1,3|2,6|4,5").coset_type().parts(), &[3]);
    }

    #[test]
    fn down_and_sequences() {
        assert_eq!(pairing("1,2|3,4").pairing_down().unwrap(), pairing("1,2"));
        assert_eq!(pairing("1,2").pairing_down().unwrap(), PairPartition::empty());
        assert_eq!(pairing("1,4|2,3|5,6").pairing_down().unwrap(), pairing("1,4|2,3"));
        assert!(pairing("1,3|2,4").pairing_down().is_err());
        assert_eq!(pairing("1,3|2,6|4,5").strong_admissible_sequence(), vec![1, 2, 1, 3, 3, 2]);
        assert_eq!(PairPartition::trivial(2).strong_admissible_sequence(), vec![1, 1, 2, 2]);
    }

    #[test]
    fn enumeration_and_representatives() {
        let counts: Vec<usize> = (0..=5).map(|k| PairPartition::all(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 15, 105, 945]);
        for k in 0..=5 {
            for mu in IntegerPartition::all(k) {
                assert_eq!(PairPartition::class_representative(&mu).coset_type(), mu);
            }
        }
        for m in PairPartition::all(3) {
            assert_eq!(PairPartition::trivial(3).act(&m.to_permutation()).unwrap(), m);
        }
    }

    #[test]
    fn text_syntax() {
        let m = pairing("3,1|4,2");
        assert_eq!(m.to_string(), "1,3|2,4");
        assert!("1,2|2,3".parse::<PairPartition>().is_err());
        assert!("1,2,3".parse::<PairPartition>().is_err());
        assert!("1,3".parse::<PairPartition>().is_err());
    }
}
