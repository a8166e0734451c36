use std::fmt;
use std::ops::ControlFlow;

use super::cube;
use super::field::{weight, Field, Residue};
use super::matrix::rref_rows;
use super::poly::{AffinePoly, PartialAssignment, Restrict};
use super::Budget;
use crate::error::Result;

/// A subspace of affine polynomials over `n` variables, kept as a reduced
/// echelon basis over the `n + 1` coordinates (variables first, constant last).
///
/// Because the basis is canonical, two spans are equal iff their bases are
/// identical. A span containing `0 = c` with `c != 0` is representable; it is
/// flagged by [`AffineSpan::is_inconsistent`] and its last basis row is the
/// constant polynomial `1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineSpan {
    field: Field,
    n: usize,
    basis: Vec<AffinePoly>,
    pivots: Vec<usize>,
}

/// Result of a minimal-weight reduction: `poly = alpha * h + r` with `r` in the span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub poly: AffinePoly,
    pub alpha: Residue,
    pub r: AffinePoly,
    /// coordinates of `r` in the echelon basis
    pub coords: Vec<Residue>,
}

impl AffineSpan {
    pub fn zero(field: Field, n: usize) -> Self {
        AffineSpan {
            field,
            n,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn new(field: Field, n: usize, gens: &[AffinePoly]) -> Self {
        let mut rows: Vec<Vec<Residue>> = gens
            .iter()
            .map(|g| {
                assert_eq!(g.n(), n, "generator over a different ambient dimension");
                g.terms().to_vec()
            })
            .collect();
        let pivots = rref_rows(field, &mut rows, n + 1);
        rows.truncate(pivots.len());
        let basis = rows
            .into_iter()
            .map(|t| AffinePoly::from_terms(field, t).expect("reduced"))
            .collect();
        AffineSpan {
            field,
            n,
            basis,
            pivots,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[AffinePoly] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Contains `0 = c` for some `c != 0`, i.e. has no solution over F_p^n.
    pub fn is_inconsistent(&self) -> bool {
        self.pivots.last() == Some(&self.n)
    }

    /// Reduce `q` modulo the basis; zero iff `q` lies in the span.
    fn residue_of(&self, q: &AffinePoly) -> Vec<Residue> {
        let mut v = q.terms().to_vec();
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            let x = v[c];
            if x != 0 {
                let f = self.field.neg(x);
                for (a, &b) in v.iter_mut().zip(row.terms()) {
                    *a = self.field.add_mul(*a, f, b);
                }
            }
        }
        v
    }

    pub fn contains(&self, q: &AffinePoly) -> bool {
        assert_eq!(q.n(), self.n, "ambient dimension mismatch");
        self.residue_of(q).iter().all(|&x| x == 0)
    }

    pub fn contains_span(&self, other: &AffineSpan) -> bool {
        other.basis.iter().all(|q| self.contains(q))
    }

    pub fn contains_all(&self, qs: &[AffinePoly]) -> bool {
        qs.iter().all(|q| self.contains(q))
    }

    /// `V + W`: the span of both generator sets.
    pub fn sum(&self, other: &AffineSpan) -> Self {
        self.extend(&other.basis)
    }

    pub fn extend(&self, gens: &[AffinePoly]) -> Self {
        let mut all = self.basis.clone();
        all.extend_from_slice(gens);
        AffineSpan::new(self.field, self.n, &all)
    }

    /// Coordinates of `q` in the echelon basis, if `q` lies in the span.
    pub fn coordinates(&self, q: &AffinePoly) -> Option<Vec<Residue>> {
        if !self.contains(q) {
            return None;
        }
        Some(
            self.pivots
                .iter()
                .map(|&c| q.coeff_or_constant(c))
                .collect(),
        )
    }

    /// The element with the given echelon coordinates.
    pub fn combine(&self, coords: &[Residue]) -> AffinePoly {
        assert_eq!(coords.len(), self.dim());
        let mut acc = AffinePoly::zero(self.field, self.n);
        for (b, &c) in self.basis.iter().zip(coords) {
            if c != 0 {
                acc = acc.add_scaled(b, c);
            }
        }
        acc
    }

    /// Visit every element (as `n + 1` terms) with its echelon coordinates,
    /// in lexicographic order of the coordinates.
    pub fn for_each_element(
        &self,
        budget: Budget,
        visit: impl FnMut(&[Residue], &[Residue]) -> ControlFlow<()>,
    ) -> Result<()> {
        let rows: Vec<&[Residue]> = self.basis.iter().map(|b| b.terms()).collect();
        for_each_combination(self.field, &rows, self.n + 1, budget, visit)
    }

    /// `omega(P)`: least weight over nonzero elements; `None` for the zero span.
    pub fn min_weight(&self, budget: Budget) -> Result<Option<usize>> {
        if self.is_inconsistent() {
            return Ok(Some(0));
        }
        let mut best: Option<usize> = None;
        let n = self.n;
        self.for_each_element(budget, |coords, terms| {
            if coords.iter().any(|&c| c != 0) {
                let w = weight(&terms[..n]);
                if best.is_none_or(|b| w < b) {
                    best = Some(w);
                }
            }
            ControlFlow::Continue(())
        })?;
        Ok(best)
    }

    /// `[P]_{w <= tau}`: the span of all elements of weight at most `tau`.
    pub fn truncated(&self, tau: usize, budget: Budget) -> Result<AffineSpan> {
        let n = self.n;
        let dim = self.dim();
        let mut acc = AffineSpan::zero(self.field, n);
        self.for_each_element(budget, |_, terms| {
            if weight(&terms[..n]) <= tau {
                let q = AffinePoly::from_terms(self.field, terms.to_vec()).expect("reduced");
                if !acc.contains(&q) {
                    acc = acc.extend(&[q]);
                    if acc.dim() == dim {
                        return ControlFlow::Break(());
                    }
                }
            }
            ControlFlow::Continue(())
        })?;
        Ok(acc)
    }

    /// `red_P(h)`: a minimal-weight `alpha * h + r` with `alpha != 0`, `r` in the span.
    ///
    /// Ties go to the lexicographically smallest `(alpha, coords(r))`. Since
    /// `alpha * h + r` and `h + r / alpha` have the same weight, the minimum
    /// is always attained at `alpha = 1`, so only that slice is searched.
    pub fn reduce_min_weight(&self, h: &AffinePoly, budget: Budget) -> Result<Reduction> {
        assert_eq!(h.n(), self.n, "ambient dimension mismatch");
        let n = self.n;
        let mut best: Option<(usize, Vec<Residue>)> = None;
        self.for_each_element(budget, |coords, terms| {
            let w = (0..n)
                .filter(|&j| self.field.add(h.coeff(j), terms[j]) != 0)
                .count();
            if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                best = Some((w, coords.to_vec()));
                if w == 0 {
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        })?;
        let (_, coords) = best.expect("the zero element is always visited");
        let r = self.combine(&coords);
        Ok(Reduction {
            poly: h.add(&r),
            alpha: 1,
            r,
            coords,
        })
    }

    /// All `x in {0,1}^n` on which every element vanishes.
    pub fn zero_one_models(&self, budget: Budget) -> Result<Vec<Vec<bool>>> {
        cube::all_zero_one_solutions(self.field, self.n, &self.basis, budget)
    }

    pub fn first_zero_one_model(&self, budget: Budget) -> Result<Option<Vec<bool>>> {
        cube::first_zero_one_solution(self.field, self.n, &self.basis, budget)
    }

    pub fn is_zero_one_satisfiable(&self, budget: Budget) -> Result<bool> {
        Ok(self.first_zero_one_model(budget)?.is_some())
    }
}

/// Visit every linear combination `sum coords[i] * rows[i]` in lexicographic
/// order of `coords` (last coordinate fastest), starting from zero.
pub fn for_each_combination(
    field: Field,
    rows: &[&[Residue]],
    width: usize,
    budget: Budget,
    mut visit: impl FnMut(&[Residue], &[Residue]) -> ControlFlow<()>,
) -> Result<()> {
    budget.check(field.count(rows.len()))?;
    let dim = rows.len();
    let mut coords = vec![0; dim];
    let mut acc = vec![0; width];
    if visit(&coords, &acc).is_break() {
        return Ok(());
    }
    let p = field.p();
    loop {
        // odometer step: every position that changes adds its row once
        let mut pos = dim;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            for (t, &b) in acc.iter_mut().zip(rows[pos]) {
                *t = field.add(*t, b);
            }
            coords[pos] += 1;
            if coords[pos] == p {
                coords[pos] = 0;
            } else {
                break;
            }
        }
        if visit(&coords, &acc).is_break() {
            return Ok(());
        }
    }
}

impl Restrict for AffineSpan {
    fn restrict(&self, rho: &PartialAssignment) -> Self {
        AffineSpan::new(self.field, self.n, &self.basis.restrict(rho))
    }
}

impl fmt::Debug for AffineSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.basis.iter()).finish()
    }
}

impl AffinePoly {
    /// Coordinate `c` of the `n + 1` term vector.
    pub(crate) fn coeff_or_constant(&self, c: usize) -> Residue {
        self.terms()[c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> Field {
        Field::new(5).unwrap()
    }

    fn eq(c: &[u32], rhs: u32) -> AffinePoly {
        AffinePoly::equation(f5(), c, rhs)
    }

    #[test]
    fn membership() {
        let p = AffineSpan::new(f5(), 2, &[eq(&[1, 0], 1), eq(&[0, 1], 2)]);
        assert!(p.contains(&eq(&[1, 1], 3)));
        assert!(!p.contains(&eq(&[1, 1], 0)));
        assert!(p.contains(&AffinePoly::zero(f5(), 2)));
    }

    #[test]
    fn restriction_can_make_span_inconsistent() {
        // span{x1 + x2 - 1, x1 - x2}|_{x1 <- 1} = span{x2, x2 - 1} which holds 0 = 1
        let p = AffineSpan::new(f5(), 2, &[eq(&[1, 1], 1), eq(&[1, 4], 0)]);
        assert!(!p.is_inconsistent());
        let rho = PartialAssignment::from_pairs(2, [(0, true)]).unwrap();
        let r = p.restrict(&rho);
        assert!(r.is_inconsistent());
        assert_eq!(
            r,
            AffineSpan::new(f5(), 2, &[eq(&[0, 1], 0), eq(&[0, 1], 1)])
        );
    }

    #[test]
    fn truncated_examples() {
        let b = Budget::default();
        let p = AffineSpan::new(f5(), 2, &[eq(&[1, 1], 0)]);
        assert!(p.truncated(1, b).unwrap().is_zero());
        assert_eq!(p.truncated(2, b).unwrap(), p);
        // span{x1 + x2, x1 - x2 - 1} contains 2x1 - 1 and 2x2 + 1
        let p = AffineSpan::new(f5(), 2, &[eq(&[1, 1], 0), eq(&[1, 4], 1)]);
        let t = p.truncated(1, b).unwrap();
        assert_eq!(t, p);
        assert!(t.contains(&eq(&[2, 0], 1)));
        assert!(t.contains(&eq(&[0, 2], 4)));
    }

    #[test]
    fn reduce_examples() {
        let b = Budget::default();
        // P = span{x1+x2+x3-1}, h = x1+x2+x4 -> x4 - x3 + 1
        let p = AffineSpan::new(f5(), 4, &[eq(&[1, 1, 1, 0], 1)]);
        let h = AffinePoly::form(f5(), &[1, 1, 0, 1]);
        let red = p.reduce_min_weight(&h, b).unwrap();
        assert_eq!(red.alpha, 1);
        assert_eq!(red.coords, vec![4]);
        assert_eq!(
            red.poly,
            AffinePoly::from_terms(f5(), vec![0, 0, 4, 1, 1]).unwrap()
        );
        assert_eq!(red.r, eq(&[1, 1, 1, 0], 1).scale(4));

        // zero span leaves h unchanged
        let z = AffineSpan::zero(f5(), 5);
        let h = AffinePoly::variable(f5(), 5, 4);
        let red = z.reduce_min_weight(&h, b).unwrap();
        assert_eq!((red.poly.clone(), red.alpha), (h, 1));
        assert!(red.r.is_zero());

        // P = span{x1 - 3}, h = x1 -> constant 3
        let p = AffineSpan::new(f5(), 1, &[eq(&[1], 3)]);
        let red = p
            .reduce_min_weight(&AffinePoly::variable(f5(), 1, 0), b)
            .unwrap();
        assert_eq!(red.poly, AffinePoly::constant_poly(f5(), 1, 3));
        assert_eq!(red.poly.weight(), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let gens: Vec<AffinePoly> = (0..6).map(|j| AffinePoly::variable(f5(), 6, j)).collect();
        let p = AffineSpan::new(f5(), 6, &gens);
        assert!(p.truncated(1, Budget(100)).is_err());
        assert!(p.truncated(1, Budget(15625)).is_ok());
    }

    fn arb_case() -> impl Strategy<Value = (Vec<Vec<u32>>, usize, Vec<Option<bool>>, u64)> {
        (1usize..7).prop_flat_map(|n| {
            (
                prop::collection::vec(prop::collection::vec(0u32..5, n + 1), 0..4),
                Just(n),
                prop::collection::vec(prop::option::of(any::<bool>()), n),
                any::<u64>(),
            )
        })
    }

    proptest! {
        #[test]
        fn restriction_commutes_with_span((gens, n, rho, _s) in arb_case()) {
            let f = f5();
            let gens: Vec<AffinePoly> = gens.into_iter().map(|t| AffinePoly::from_terms(f, t).unwrap()).collect();
            let rho = PartialAssignment::from_pairs(n, rho.iter().enumerate().filter_map(|(j, b)| b.map(|b| (j, b)))).unwrap();
            let lhs = AffineSpan::new(f, n, &gens).restrict(&rho);
            let rhs = AffineSpan::new(f, n, &gens.restrict(&rho));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn canonical_under_generator_shuffle((gens, n, _rho, seed) in arb_case()) {
            use rand::{seq::SliceRandom, Rng, SeedableRng};
            let f = f5();
            let gens: Vec<AffinePoly> = gens.into_iter().map(|t| AffinePoly::from_terms(f, t).unwrap()).collect();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut mixed = gens.clone();
            mixed.shuffle(&mut rng);
            // add random combinations of the generators
            for _ in 0..2 {
                let mut acc = AffinePoly::zero(f, n);
                for g in &gens {
                    acc = acc.add_scaled(g, rng.gen_range(0..5));
                }
                mixed.push(acc);
            }
            prop_assert_eq!(AffineSpan::new(f, n, &gens), AffineSpan::new(f, n, &mixed));
        }

        #[test]
        fn reduction_identity_and_weight((gens, n, _rho, seed) in arb_case()) {
            use rand::{Rng, SeedableRng};
            let f = f5();
            let gens: Vec<AffinePoly> = gens.into_iter().map(|t| AffinePoly::from_terms(f, t).unwrap()).collect();
            let p = AffineSpan::new(f, n, &gens);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let terms: Vec<u32> = (0..=n).map(|_| rng.gen_range(0..5)).collect();
            let h = AffinePoly::from_terms(f, terms).unwrap();
            let red = p.reduce_min_weight(&h, Budget::default()).unwrap();
            prop_assert!(red.poly.weight() <= h.weight());
            prop_assert!(red.alpha != 0);
            prop_assert!(p.contains(&red.r));
            prop_assert_eq!(red.poly.clone(), h.scale(red.alpha).add(&red.r));
        }

        #[test]
        fn truncation_monotone((gens, n, _rho, _s) in arb_case()) {
            let f = f5();
            let gens: Vec<AffinePoly> = gens.into_iter().map(|t| AffinePoly::from_terms(f, t).unwrap()).collect();
            let p = AffineSpan::new(f, n, &gens);
            let b = Budget::default();
            prop_assert_eq!(p.truncated(n, b).unwrap(), p.clone());
            let mut prev = AffineSpan::zero(f, n);
            for tau in 0..=n {
                let t = p.truncated(tau, b).unwrap();
                prop_assert!(t.contains_span(&prev));
                prop_assert!(p.contains_span(&t));
                prev = t;
            }
        }
    }
}
