//! Covering codes in the permutation Hamming space.
//!
//! The space is `(S_n, d_H)`: permutations of `{1..n}` with the Hamming
//! distance (number of positions where two permutations disagree). The
//! central quantity is `f(n,s)`, the minimum size of a set of permutations
//! whose Hamming balls of radius `n-s` cover all of `S_n`.
//!
//! Modules:
//! - [`perm`]: permutations, the metric, covering radius, transitivity, and
//!   the degree-reduction map for non-transitive sets.
//! - [`counting`]: derangement numbers, ball sizes, harmonic numbers, and a
//!   consolidated report of lower/upper bounds on `f(n,s)`.
//! - [`cover`]: exact `f(n,s)` by branch-and-bound set cover, plus the greedy
//!   cover with its harmonic-factor guarantee.
//! - [`rainbow`]: edge-colored `K_{n,n}` induced by a permutation set, and
//!   constructive searches for light/rainbow perfect matchings.
//! - [`latin`]: latin squares, transversal enumeration, and the bridge from
//!   transversal-free squares to covering codes.

pub mod bitset;
pub mod counting;
pub mod cover;
pub mod latin;
pub mod perm;
pub mod rainbow;

pub use perm::{PermError, PermSet, Permutation};
