//! Line-by-line checkers for the clausal calculi Res(lin) (disjunctions of
//! linear equations) and Res(lin!=) (disjunctions of linear inequalities).

mod check;
pub mod fixtures;
mod types;

pub use check::{check_reslin, check_reslin_neq, instance_clauses, unit_clauses};
pub use types::{Calculus, Clause, Derivation, Justification, Line};
