//! Dag- and tree-like refutations of linear systems: the proof file format,
//! checkers for each proof kind, and the layered construction.

mod check;
mod layered;
mod mutate;
mod types;

pub use check::{check_refutation, Verdict};
pub use layered::{build_layered_refutation, LayeredBuild};
pub use mutate::mutations;
pub use types::{Edge, NodeRecord, ProofKind, Refutation, Split};
