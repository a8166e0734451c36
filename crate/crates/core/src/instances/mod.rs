//! Linear systems over F_p, their boolean images, and generators of
//! 0-1 unsatisfiable instances from error correcting codes.

mod analysis;
mod generate;
mod system;

pub(crate) use analysis::next_combination;
pub use analysis::{
    code_distance, optimal_rate_check, zero_one_image, zero_one_sat, RateCheck, ZeroOneImage,
};
pub use generate::{
    gen_instance, instance_from_matrix, random_matrix, reed_solomon_matrix, smallest_non_image,
    EccInstance, GenParams, GeneratorKind, Provenance, MAX_RETRIES,
};
pub use system::LinearSystem;
pub(crate) use system::{format_row, parse_residues, parse_row};
