//! Group elements labelling Weingarten functions: permutations, integer
//! partitions (cycle-types and coset-types) and pair partitions.
//!
//! All values are immutable once built and may be shared across threads.

mod pairing;
mod partition;
mod permutation;

pub use pairing::PairPartition;
pub use partition::IntegerPartition;
pub use permutation::Permutation;

/// Text used for the empty element (level 0) in every element syntax.
pub const EMPTY_SYMBOL: &str = "∅";

/// Largest supported level. Elements store their entries as `u8`.
pub const MAX_LEVEL: usize = 127;

pub(crate) fn parse_index_list(text: &str, what: &'static str) -> crate::Result<Vec<usize>> {
    let text = text.trim();
    if text.is_empty() || text == EMPTY_SYMBOL {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim().parse::<usize>().map_err(|_| crate::WgError::Parse {
                what,
                reason: format!("{t:?} is not a positive integer in {text:?}"),
            })
        })
        .collect()
}
