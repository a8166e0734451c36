//! Exact arithmetic and linear algebra over prime fields F_p, p >= 5.

pub mod cube;
mod field;
mod matrix;
mod poly;
mod span;

pub use field::{weight, Field, Residue};
pub use matrix::FMatrix;
pub use poly::{AffinePoly, PartialAssignment, Restrict};
pub use span::{for_each_combination, AffineSpan, Reduction};

use crate::error::{Error, Result};

/// Upper bound on the number of objects any exhaustive enumeration may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(1 << 24);

    /// `LINRES_BUDGET` if set and parseable, else the default.
    pub fn from_env() -> Budget {
        std::env::var("LINRES_BUDGET")
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
            .filter(|&b| b > 0)
            .map(Budget)
            .unwrap_or_default()
    }

    pub fn check(self, needed: u128) -> Result<()> {
        if needed > self.0 as u128 {
            Err(Error::BudgetExceeded {
                needed,
                budget: self.0,
            })
        } else {
            Ok(())
        }
    }

    pub fn check_cube(self, n: usize) -> Result<()> {
        self.check(1u128.checked_shl(n as u32).unwrap_or(u128::MAX))
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}
