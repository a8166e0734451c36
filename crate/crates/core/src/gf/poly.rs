use std::collections::BTreeMap;
use std::fmt;

use super::field::{weight, Field, Residue};
use crate::error::{Error, Result};

/// An affine polynomial `c_1 x_1 + ... + c_n x_n + c_0` over F_p.
///
/// The equation `f = a` is stored as the polynomial `f - a`, so the constant
/// term is the negated right-hand side. Terms are laid out variables first,
/// constant last, which is also the coordinate order used by [`AffineSpan`].
///
/// [`AffineSpan`]: super::AffineSpan
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePoly {
    field: Field,
    terms: Vec<Residue>,
}

impl AffinePoly {
    pub fn zero(field: Field, n: usize) -> Self {
        AffinePoly {
            field,
            terms: vec![0; n + 1],
        }
    }

    /// The polynomial `coeffs . x - rhs`, i.e. the equation `coeffs . x = rhs`.
    pub fn equation(field: Field, coeffs: &[Residue], rhs: Residue) -> Self {
        let mut terms: Vec<Residue> = coeffs.iter().map(|&c| c % field.p()).collect();
        terms.push(field.neg(rhs % field.p()));
        AffinePoly { field, terms }
    }

    /// The linear form `coeffs . x` (zero constant).
    pub fn form(field: Field, coeffs: &[Residue]) -> Self {
        AffinePoly::equation(field, coeffs, 0)
    }

    pub fn variable(field: Field, n: usize, j: usize) -> Self {
        let mut p = AffinePoly::zero(field, n);
        p.terms[j] = 1;
        p
    }

    pub fn constant_poly(field: Field, n: usize, c: Residue) -> Self {
        let mut p = AffinePoly::zero(field, n);
        p.terms[n] = c % field.p();
        p
    }

    /// From the full `n + 1` coordinate vector.
    pub fn from_terms(field: Field, terms: Vec<Residue>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Dimension(
                "affine polynomial needs a constant slot".into(),
            ));
        }
        if terms.iter().any(|&t| t >= field.p()) {
            return Err(Error::Dimension("unreduced coefficient".into()));
        }
        Ok(AffinePoly { field, terms })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn coeffs(&self) -> &[Residue] {
        &self.terms[..self.n()]
    }

    pub fn coeff(&self, j: usize) -> Residue {
        self.terms[j]
    }

    pub fn constant(&self) -> Residue {
        self.terms[self.n()]
    }

    /// Right-hand side when read as `coeffs . x = rhs`.
    pub fn rhs(&self) -> Residue {
        self.field.neg(self.constant())
    }

    pub fn terms(&self) -> &[Residue] {
        &self.terms
    }

    /// Nonzero variable coefficients; the constant is never counted.
    pub fn weight(&self) -> usize {
        weight(self.coeffs())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|&t| t == 0)
    }

    /// No variables but a nonzero constant: the equation `0 = c`, `c != 0`.
    pub fn is_contradiction(&self) -> bool {
        self.weight() == 0 && self.constant() != 0
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.terms[j] != 0).collect()
    }

    pub fn eval(&self, x: &[Residue]) -> Residue {
        assert_eq!(x.len(), self.n());
        self.coeffs()
            .iter()
            .zip(x)
            .fold(self.constant(), |acc, (&c, &v)| {
                self.field.add_mul(acc, c, v)
            })
    }

    /// Evaluate at a boolean point.
    pub fn eval_bool(&self, x: &[bool]) -> Residue {
        assert_eq!(x.len(), self.n());
        self.coeffs()
            .iter()
            .zip(x)
            .filter(|(_, &b)| b)
            .fold(self.constant(), |acc, (&c, _)| self.field.add(acc, c))
    }

    pub fn scale(&self, c: Residue) -> Self {
        AffinePoly {
            field: self.field,
            terms: self.terms.iter().map(|&t| self.field.mul(t, c)).collect(),
        }
    }

    pub fn add(&self, other: &AffinePoly) -> Self {
        self.add_scaled(other, 1)
    }

    pub fn sub(&self, other: &AffinePoly) -> Self {
        self.add_scaled(other, self.field.neg(1))
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &AffinePoly, c: Residue) -> Self {
        assert_eq!(self.n(), other.n(), "ambient dimension mismatch");
        AffinePoly {
            field: self.field,
            terms: self
                .terms
                .iter()
                .zip(&other.terms)
                .map(|(&a, &b)| self.field.add_mul(a, c, b))
                .collect(),
        }
    }

    /// Same polynomial with the constant shifted by `c`.
    pub fn shift_constant(&self, c: Residue) -> Self {
        let mut out = self.clone();
        let n = out.n();
        out.terms[n] = self.field.add(out.terms[n], c);
        out
    }

    /// The variable part with zero constant.
    pub fn linear_part(&self) -> Self {
        let mut out = self.clone();
        let n = out.n();
        out.terms[n] = 0;
        out
    }

    /// The set `f({0,1}^n)` of values of the linear part on the boolean cube,
    /// sorted, computed by a subset-sum sweep in `O(n p)`.
    pub fn cube_values(&self) -> Vec<Residue> {
        let p = self.field.p() as usize;
        let mut reach = vec![false; p];
        reach[0] = true;
        for &c in self.coeffs() {
            if c == 0 {
                continue;
            }
            let prev = reach.clone();
            for (v, &r) in prev.iter().enumerate() {
                if r {
                    reach[(v + c as usize) % p] = true;
                }
            }
        }
        (0..p as Residue).filter(|&v| reach[v as usize]).collect()
    }

    /// Scalar multiple whose first nonzero term is 1; the zero polynomial is unchanged.
    pub fn normalized(&self) -> Self {
        match self.terms.iter().find(|&&t| t != 0) {
            Some(&lead) if lead != 1 => self.scale(self.field.inv(lead)),
            _ => self.clone(),
        }
    }
}

impl fmt::Debug for AffinePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Human-readable form, e.g. `x1 + 3x4 = 2` (1-based variable names).
impl fmt::Display for AffinePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, &c) in self.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c == 1 {
                write!(f, "x{}", j + 1)?;
            } else {
                write!(f, "{c}x{}", j + 1)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " = {}", self.rhs())
    }
}

/// A partial 0-1 assignment on variables `0..n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialAssignment {
    n: usize,
    bindings: BTreeMap<usize, bool>,
}

impl PartialAssignment {
    pub fn empty(n: usize) -> Self {
        PartialAssignment {
            n,
            bindings: BTreeMap::new(),
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, bool)>) -> Result<Self> {
        let mut rho = PartialAssignment::empty(n);
        for (j, b) in pairs {
            rho.bind(j, b)?;
        }
        Ok(rho)
    }

    /// The full assignment given by a boolean vector.
    pub fn full(x: &[bool]) -> Self {
        PartialAssignment {
            n: x.len(),
            bindings: x.iter().copied().enumerate().collect(),
        }
    }

    pub fn bind(&mut self, j: usize, b: bool) -> Result<()> {
        if j >= self.n {
            return Err(Error::Dimension(format!(
                "variable {j} outside ambient dimension {}",
                self.n
            )));
        }
        self.bindings.insert(j, b);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize) -> Option<bool> {
        self.bindings.get(&j).copied()
    }

    pub fn support(&self) -> Vec<usize> {
        self.bindings.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.bindings.iter().map(|(&j, &b)| (j, b))
    }

    /// The sub-assignment on the given variables (those that are bound).
    pub fn restricted_to(&self, vars: &[usize]) -> Self {
        PartialAssignment {
            n: self.n,
            bindings: vars
                .iter()
                .filter_map(|&j| self.get(j).map(|b| (j, b)))
                .collect(),
        }
    }
}

/// Substitution of a partial 0-1 assignment, folding bound variables into constants.
pub trait Restrict {
    fn restrict(&self, rho: &PartialAssignment) -> Self;
}

impl Restrict for AffinePoly {
    fn restrict(&self, rho: &PartialAssignment) -> Self {
        assert_eq!(
            rho.n(),
            self.n(),
            "assignment over a different ambient dimension"
        );
        let mut out = self.clone();
        let n = out.n();
        for (j, b) in rho.iter() {
            let c = out.terms[j];
            if b {
                out.terms[n] = self.field.add(out.terms[n], c);
            }
            out.terms[j] = 0;
        }
        out
    }
}

impl Restrict for Vec<AffinePoly> {
    fn restrict(&self, rho: &PartialAssignment) -> Self {
        self.iter().map(|q| q.restrict(rho)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Field {
        Field::new(5).unwrap()
    }

    #[test]
    fn restrict_folds_into_constant() {
        // (x1 + 2x2 + x3 = 4)|_{x2 <- 1}  ->  x1 + x3 = 2
        let q = AffinePoly::equation(f5(), &[1, 2, 1], 4);
        let rho = PartialAssignment::from_pairs(3, [(1, true)]).unwrap();
        assert_eq!(q.restrict(&rho), AffinePoly::equation(f5(), &[1, 0, 1], 2));
        assert_eq!(q.restrict(&PartialAssignment::empty(3)), q);
    }

    #[test]
    fn weight_ignores_constant() {
        let q = AffinePoly::equation(f5(), &[1, 1], 4);
        assert_eq!(q.weight(), 2);
        assert_eq!(AffinePoly::constant_poly(f5(), 3, 2).weight(), 0);
    }

    #[test]
    fn equation_storage_convention() {
        let q = AffinePoly::equation(f5(), &[1, 0], 3);
        assert_eq!(q.constant(), 2);
        assert_eq!(q.rhs(), 3);
        assert_eq!(q.eval(&[3, 0]), 0);
        assert_eq!(q.eval_bool(&[true, false]), 3);
        assert_eq!(format!("{q}"), "x1 = 3");
    }

    #[test]
    fn cube_values_match_enumeration() {
        let q = AffinePoly::equation(f5(), &[1, 1, 1], 2);
        assert_eq!(q.cube_values(), vec![0, 1, 2, 3]);
        let q = AffinePoly::form(f5(), &[2, 0, 3]);
        assert_eq!(q.cube_values(), vec![0, 2, 3]);
        assert_eq!(AffinePoly::zero(f5(), 2).cube_values(), vec![0]);
    }

    #[test]
    fn bind_out_of_range() {
        assert!(PartialAssignment::from_pairs(2, [(2, true)]).is_err());
    }
}
