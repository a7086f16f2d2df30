//! Permutation group machinery and an exact solver for the minimal faithful
//! permutation degree `μ(G)`.
//!
//! Points are 0-based in the API and 1-based in all text. Permutations act on
//! the right: `a * b` applies `a` first.

pub mod actions;
pub mod backtrack;
pub mod brute;
pub mod cache;
pub mod error;
pub mod group;
pub mod iso;
pub mod lattice;
pub mod mu;
pub mod named;
pub mod perfect;
pub mod perm;
pub mod spec;
pub mod structure;
pub mod verify;

pub use error::{Error, Result};
pub use group::{CosetTable, PermGroup};
pub use perm::{Perm, MAX_DEGREE};
