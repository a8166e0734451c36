//! Zero-one sumsets and the constructive procedures built on them: covering
//! `F_p^m` by sums of bases, boolean solutions of high-distance systems, and
//! the weight and dimension claims used by the Delayer strategy.
//!
//! Throughout, `A_1 + ... + A_t` denotes the zero-one sumset
//! `{sum eps_v v : eps in {0,1}}` over all vectors of the family, i.e. the
//! image of the boolean cube under the column map.

mod claims;
mod eccsat;
mod sumset;
mod trials;

pub use claims::{
    image_size_bound_check, implied_equation_check, kill_narrow, kill_narrow_unchecked,
    narrow_element, span_weight, trunc_dim_bound_check, DimBound, ImageBound, Implication,
    KillNarrow,
};
pub use eccsat::{ecc_sat_solve, independent_blocks};
pub use sumset::{cover_check_addcomb, find_line, zero_one_sumset, BasisFamily, Sumset};
pub use trials::{run_trial, Lemma, TrialParams, TrialRow};
