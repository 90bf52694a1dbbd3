//! Exact counting, ranking, unranking, uniform random sampling and
//! exhaustive generation of reduced ordered binary decision diagrams
//! (ROBDDs) with a given number of variables `k` and size `n`.
//!
//! The machinery rests on the spanning-tree ("spine") decomposition of a
//! plane BDD: the depth-first spanning tree determines the diagram up to
//! the choice of its red (non-tree) edges, and the number of legal choices
//! factors over the tree nodes. Counting sums these weights over
//! equivalence classes of subtrees with a memoized recursion
//! ([`counting::Counter`]); a total order over the classes turns the same
//! recursion into unranking, ranking, uniform sampling and exhaustive
//! streaming ([`unranking`]). Everything is cross-checked against a
//! brute-force oracle that compacts the decision trees of all Boolean
//! functions for small `k` ([`oracle`]).
//!
//! All counts and ranks are exact big integers; no floating point is
//! involved anywhere in the pipeline.

pub mod bdd;
pub mod counting;
pub mod dot;
mod error;
pub mod oracle;
pub mod profile;
pub mod spine;
pub mod text;
pub mod unranking;

pub use bdd::{Bdd, BddNode, NodeId, TruthTable, Violation};
pub use counting::{Counter, Distribution};
pub use error::Error;
pub use profile::Profile;
pub use spine::Spine;
