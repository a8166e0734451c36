//! Splitting refutations, Prover-Delayer games and brute-force oracles for
//! 0-1 unsatisfiable linear systems `A x = b` over prime fields F_p, p >= 5.

pub mod error;
pub mod gf;

pub use error::{Error, Result};
pub mod clausal;
pub mod cli;
pub mod combinatorics;
pub mod games;
pub mod instances;
pub mod refutations;
pub mod robustness;
