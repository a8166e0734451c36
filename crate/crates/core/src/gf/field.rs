use std::fmt;

use crate::error::{Error, Result};

/// A residue in `[0, p)`.
pub type Residue = u32;

/// The prime field F_p with p >= 5.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    p: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(p: u64) -> Result<Self> {
        if p < 5 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::InvalidField(p));
        }
        Ok(Field { p: p as u32 })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: Residue, b: Residue) -> Residue {
        ((a as u64 + b as u64) % self.p as u64) as Residue
    }

    #[inline]
    pub fn sub(self, a: Residue, b: Residue) -> Residue {
        ((a as u64 + self.p as u64 - b as u64) % self.p as u64) as Residue
    }

    #[inline]
    pub fn neg(self, a: Residue) -> Residue {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: Residue, b: Residue) -> Residue {
        ((a as u64 * b as u64) % self.p as u64) as Residue
    }

    pub fn pow(self, mut base: Residue, mut exp: u64) -> Residue {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: Residue) -> Residue {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    #[inline]
    pub fn div(self, a: Residue, b: Residue) -> Residue {
        self.mul(a, self.inv(b))
    }

    /// Reduce an arbitrary signed integer into `[0, p)`.
    pub fn reduce(self, v: i64) -> Residue {
        v.rem_euclid(self.p as i64) as Residue
    }

    /// `a + c * b`, the row-operation kernel.
    #[inline]
    pub fn add_mul(self, a: Residue, c: Residue, b: Residue) -> Residue {
        ((a as u64 + c as u64 * b as u64) % self.p as u64) as Residue
    }

    pub fn elements(self) -> impl Iterator<Item = Residue> {
        0..self.p
    }

    /// `p^e` as an exact count, saturating at `u128::MAX`.
    pub fn count(self, e: usize) -> u128 {
        (self.p as u128).checked_pow(e as u32).unwrap_or(u128::MAX)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// Number of nonzero entries.
pub fn weight(v: &[Residue]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_and_composite_moduli() {
        for p in [0, 1, 2, 3, 4, 6, 9, 25, 91] {
            assert_eq!(Field::new(p), Err(Error::InvalidField(p)));
        }
        for p in [5, 7, 11, 13, 101] {
            assert!(Field::new(p).is_ok());
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for p in [5u64, 7, 11] {
            let f = Field::new(p).unwrap();
            for a in f.elements() {
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
                for b in f.elements() {
                    assert!(f.add(a, b) < f.p());
                    assert!(f.mul(a, b) < f.p());
                    assert_eq!(f.add(f.sub(a, b), b), a);
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn weight_counts_nonzero() {
        assert_eq!(weight(&[0, 3, 0, 1]), 2);
        assert_eq!(weight(&[0, 0, 0]), 0);
    }

    #[test]
    fn reduce_handles_negatives() {
        let f = Field::new(5).unwrap();
        assert_eq!(f.reduce(-1), 4);
        assert_eq!(f.reduce(-13), 2);
        assert_eq!(f.reduce(12), 2);
    }
}
