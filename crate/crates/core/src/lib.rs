//! Exact counting of derangements, permutations and perfect matchings on
//! graphs, with executable checks of the inequalities relating them.
//!
//! The central quantity is `(d/p)_G`, the number of derangements of a
//! digraph `G` (bijections moving every vertex along an arc) divided by the
//! number of permutations on `G` (bijections in which every vertex either
//! stays put or moves along an arc). Both are permanents: `per(A)` and
//! `per(A + I)` for the adjacency matrix `A`.

pub mod error;
pub mod exact;
pub mod graph;
pub mod counting;
pub mod permanent;
pub mod injection;
pub mod random;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{BigCount, ExactRatio};
