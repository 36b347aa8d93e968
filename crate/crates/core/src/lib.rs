//! Exact Weingarten calculus.
//!
//! The crate computes Weingarten functions of the unitary, orthogonal and
//! symplectic groups and of the COE and A III symmetric spaces:
//!
//! - [`symcore`]: permutations, integer partitions and pair partitions.
//! - [`graph`]: the Weingarten graphs, memoized path counts, path enumeration
//!   and the path / monotone factorization bijection.
//! - [`exact`]: exact values at fixed dimension from the orthogonality
//!   relations, rational reconstruction in `d` and `1/d` series from path counts.
//! - [`moments`]: Haar integrals of matrix-entry monomials.
//! - [`bounds`]: Catalan / Möbius closed forms and exhaustive certification of
//!   the uniform bounds.
//! - [`mc`]: a Monte Carlo Haar-sampling oracle.
//! - [`cache`] and [`cli`]: the value cache and the `wg` command line.

pub mod bounds;
pub mod cache;
pub mod cli;
pub mod error;
pub mod exact;
pub mod graph;
pub mod linalg;
pub mod mc;
pub mod moments;
pub mod rational;
pub mod symcore;

pub use error::{Result, WgError};
pub use exact::{Engine, Family};
pub use graph::{GraphKind, GraphNode};
pub use rational::ExactRational;
pub use symcore::{IntegerPartition, PairPartition, Permutation};
