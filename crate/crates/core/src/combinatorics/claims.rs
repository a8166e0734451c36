use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::gf::{
    cube, weight, AffinePoly, AffineSpan, Budget, FMatrix, PartialAssignment, Residue, Restrict,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Implication {
    InSpan,
    /// Holds on every 0-1 model of the span without being in it.
    ImpliedNotInSpan,
    /// The lexicographically first 0-1 model of the span violating the equation.
    NotImplied(Vec<bool>),
}

/// Classify `P |= h` over 0-1 assignments against span membership.
pub fn implied_equation_check(
    p: &AffineSpan,
    h: &AffinePoly,
    budget: Budget,
) -> Result<Implication> {
    let mut witness = None;
    cube::for_each_zero_one_solution(p.field(), p.n(), p.basis(), budget, |x| {
        if h.eval_bool(x) != 0 {
            witness = Some(x.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(match witness {
        Some(x) => Implication::NotImplied(x),
        None if p.contains(h) => Implication::InSpan,
        None => Implication::ImpliedNotInSpan,
    })
}

/// Least weight over elements with a nonzero linear part, with the first
/// such element of that weight; `None` if every element is constant.
pub fn narrow_element(span: &AffineSpan, budget: Budget) -> Result<Option<(usize, AffinePoly)>> {
    let n = span.n();
    let mut best: Option<(usize, Vec<Residue>)> = None;
    span.for_each_element(budget, |_, terms| {
        let w = weight(&terms[..n]);
        if w > 0 && best.as_ref().is_none_or(|(bw, _)| w < *bw) {
            best = Some((w, terms.to_vec()));
            if w == 1 {
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;
    Ok(best.map(|(w, t)| (w, AffinePoly::from_terms(span.field(), t).expect("reduced"))))
}

/// `omega` of a span as used by the claims: least weight of an element with
/// a nonzero linear part, infinite (`None`) when there is none.
pub fn span_weight(span: &AffineSpan, budget: Budget) -> Result<Option<usize>> {
    Ok(narrow_element(span, budget)?.map(|(w, _)| w))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KillNarrow {
    pub rho: PartialAssignment,
    pub steps: usize,
}

/// Bind variables of narrow equations of `(P + R)|_rho` according to `rho0`
/// until every element with a nonzero linear part has weight at least `tau0`.
///
/// Preconditions: `dim R <= 0.5 omega(P) / tau0 - 1`, and `rho0` satisfies
/// `[P + R]_{w <= 2 dim(R) tau0}`.
pub fn kill_narrow(
    p: &AffineSpan,
    r: &AffineSpan,
    rho0: &[bool],
    tau0: usize,
    budget: Budget,
) -> Result<KillNarrow> {
    let tau0 = tau0.max(1);
    let dr = r.dim();
    if let Some(w) = span_weight(p, budget)? {
        if (dr as f64) > 0.5 * w as f64 / tau0 as f64 - 1.0 {
            return Err(Error::PreconditionFailed(format!(
                "dim(R) = {dr} exceeds 0.5 * {w} / {tau0} - 1"
            )));
        }
    }
    let sum = p.sum(r);
    let narrow = sum.truncated(2 * dr * tau0, budget)?;
    if narrow.basis().iter().any(|q| q.eval_bool(rho0) != 0) {
        return Err(Error::PreconditionFailed(
            "rho0 does not satisfy the narrow part of P + R".into(),
        ));
    }
    kill_narrow_unchecked(p, r, rho0, tau0, budget)
}

/// The binding loop of [`kill_narrow`] without its preconditions.
pub fn kill_narrow_unchecked(
    p: &AffineSpan,
    r: &AffineSpan,
    rho0: &[bool],
    tau0: usize,
    budget: Budget,
) -> Result<KillNarrow> {
    let n = p.n();
    if rho0.len() != n {
        return Err(Error::Dimension(format!(
            "assignment of length {} for {n} variables",
            rho0.len()
        )));
    }
    let sum = p.sum(r);
    let mut rho = PartialAssignment::empty(n);
    let mut steps = 0;
    loop {
        let restricted = sum.restrict(&rho);
        match narrow_element(&restricted, budget)? {
            Some((w, q)) if w < tau0 => {
                for j in q.support() {
                    rho.bind(j, rho0[j])?;
                }
                steps += 1;
            }
            _ => return Ok(KillNarrow { rho, steps }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimBound {
    /// `omega(P) > dim(R) tau0`, as the claim is stated.
    pub hypothesis: bool,
    /// `omega(P) > (dim(R) + 1) tau0`, which the counting argument needs.
    pub strict_hypothesis: bool,
    pub dim_r: usize,
    pub truncated_dim: usize,
}

impl DimBound {
    pub fn holds(&self) -> bool {
        !self.hypothesis || self.truncated_dim <= self.dim_r
    }
}

/// Compare `dim [P + R]_{w <= tau0}` with `dim R`.
pub fn trunc_dim_bound_check(
    p: &AffineSpan,
    r: &AffineSpan,
    tau0: usize,
    budget: Budget,
) -> Result<DimBound> {
    let dim_r = r.dim();
    let w = span_weight(p, budget)?;
    let hypothesis = w.is_none_or(|w| w > dim_r * tau0);
    let strict_hypothesis = w.is_none_or(|w| w > (dim_r + 1) * tau0);
    let truncated_dim = p.sum(r).truncated(tau0, budget)?.dim();
    Ok(DimBound {
        hypothesis,
        strict_hypothesis,
        dim_r,
        truncated_dim,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImageBound {
    pub image_size: usize,
    pub rank: usize,
    /// `2^{r - eps n}`.
    pub bound: f64,
    /// Values of `X` on the non-pivot columns, chosen to maximise the fiber.
    pub suffix: Vec<bool>,
    pub suffix_columns: Vec<usize>,
    pub fiber: usize,
}

impl ImageBound {
    pub fn holds(&self) -> bool {
        self.image_size as f64 >= self.bound - 1e-9 && self.fiber as f64 >= self.bound - 1e-9
    }
}

/// `|M(X)|` against `2^{r - eps n}` for `X` in the boolean cube with
/// `|X| >= 2^{(1 - eps) n}`.
pub fn image_size_bound_check(
    m: &FMatrix,
    x: &[Vec<bool>],
    eps: f64,
    budget: Budget,
) -> Result<ImageBound> {
    let n = m.cols();
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::PreconditionFailed(format!(
            "eps = {eps} is outside [0, 1)"
        )));
    }
    if x.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension(
            "points of X must have one coordinate per column".into(),
        ));
    }
    let points: HashSet<&Vec<bool>> = x.iter().collect();
    budget.check(points.len() as u128)?;
    let need = 2f64.powf((1.0 - eps) * n as f64);
    if (points.len() as f64) < need - 1e-9 {
        return Err(Error::PreconditionFailed(format!(
            "|X| = {} is below 2^((1 - eps) n) = {need:.2}",
            points.len()
        )));
    }
    let (_, pivots) = m.rref_with_pivots();
    let rank = pivots.len();
    let suffix_columns: Vec<usize> = (0..n).filter(|j| !pivots.contains(j)).collect();
    let mut fibers: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut image = HashSet::new();
    for v in &points {
        let xr: Vec<Residue> = v.iter().map(|&b| b as Residue).collect();
        image.insert(m.mul_vec(&xr));
        *fibers
            .entry(suffix_columns.iter().map(|&j| v[j]).collect())
            .or_default() += 1;
    }
    let (suffix, fiber) = fibers
        .into_iter()
        .max_by(|(s1, c1), (s2, c2)| c1.cmp(c2).then_with(|| s2.cmp(s1)))
        .unwrap_or((vec![false; suffix_columns.len()], 0));
    Ok(ImageBound {
        image_size: image.len(),
        rank,
        bound: 2f64.powf(rank as f64 - eps * n as f64),
        suffix,
        suffix_columns,
        fiber,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    fn f5() -> Field {
        Field::new(5).unwrap()
    }

    fn span(eqs: &[(&[Residue], Residue)]) -> AffineSpan {
        let f = f5();
        let n = eqs.first().map_or(0, |e| e.0.len());
        let gens: Vec<AffinePoly> = eqs
            .iter()
            .map(|(c, v)| AffinePoly::equation(f, c, *v))
            .collect();
        AffineSpan::new(f, n, &gens)
    }

    #[test]
    fn implication_examples() {
        let f = f5();
        let p = span(&[(&[1], 1)]);
        assert_eq!(
            implied_equation_check(&p, &AffinePoly::equation(f, &[1], 1), Budget::DEFAULT).unwrap(),
            Implication::InSpan
        );
        let p = span(&[(&[1, 1], 1)]);
        let h = AffinePoly::equation(f, &[1, 4], 0);
        match implied_equation_check(&p, &h, Budget::DEFAULT).unwrap() {
            Implication::NotImplied(x) => assert!(x == vec![false, true] || x == vec![true, false]),
            other => panic!("{other:?}"),
        }
        // no 0-1 models: implied, classified by membership
        let p = span(&[(&[1, 1], 3)]);
        assert_eq!(
            implied_equation_check(&p, &AffinePoly::equation(f, &[1, 0], 2), Budget::DEFAULT)
                .unwrap(),
            Implication::ImpliedNotInSpan
        );
        assert_eq!(
            implied_equation_check(&p, &AffinePoly::equation(f, &[2, 2], 1), Budget::DEFAULT)
                .unwrap(),
            Implication::InSpan
        );
    }

    #[test]
    fn kill_narrow_small_example() {
        let p = span(&[(&[1, 1, 0], 1)]);
        let r = span(&[(&[1, 0, 0], 1)]);
        assert!(matches!(
            kill_narrow(&p, &r, &[true, false, false], 2, Budget::DEFAULT),
            Err(Error::PreconditionFailed(_))
        ));
        let k = kill_narrow_unchecked(&p, &r, &[true, false, false], 2, Budget::DEFAULT).unwrap();
        assert!(k.rho.len() <= 2);
        let after = p.sum(&r).restrict(&k.rho);
        assert!(span_weight(&after, Budget::DEFAULT)
            .unwrap()
            .is_none_or(|w| w >= 2));
        for (j, b) in k.rho.iter() {
            assert_eq!(b, [true, false, false][j]);
        }
    }

    #[test]
    fn kill_narrow_with_zero_r() {
        let p = span(&[(&[1, 1, 1, 1, 1, 1], 1)]);
        let r = AffineSpan::zero(f5(), 6);
        let k = kill_narrow(
            &p,
            &r,
            &[true, false, false, false, false, false],
            2,
            Budget::DEFAULT,
        )
        .unwrap();
        assert!(k.rho.is_empty());
        assert_eq!(k.steps, 0);
    }

    #[test]
    fn dim_bound_examples() {
        let p = span(&[(&[1, 1, 1], 0)]);
        let r = span(&[(&[1, 0, 0], 0)]);
        let b = trunc_dim_bound_check(&p, &r, 1, Budget::DEFAULT).unwrap();
        assert!(b.hypothesis && b.holds());
        assert_eq!(b.truncated_dim, 1);
        let z = AffineSpan::zero(f5(), 3);
        let b = trunc_dim_bound_check(&p, &z, 1, Budget::DEFAULT).unwrap();
        assert_eq!(b.truncated_dim, 0);
        assert!(b.holds());
    }

    #[test]
    fn dim_bound_fails_at_the_stated_threshold() {
        // omega(P) = 3 > 1 * 2, yet x1 and x2 + x3 are independent narrow elements
        let p = span(&[(&[1, 1, 1], 0)]);
        let r = span(&[(&[1, 0, 0], 0)]);
        let b = trunc_dim_bound_check(&p, &r, 2, Budget::DEFAULT).unwrap();
        assert!(b.hypothesis && !b.strict_hypothesis);
        assert_eq!(b.truncated_dim, 2);
        assert!(!b.holds());
    }

    #[test]
    fn image_bound_examples() {
        let f = f5();
        let cube: Vec<Vec<bool>> = cube::cube_points(2).collect();
        let id = FMatrix::identity(f, 2);
        let b = image_size_bound_check(&id, &cube, 0.0, Budget::DEFAULT).unwrap();
        assert_eq!(b.image_size, 4);
        assert!(b.holds());
        let m = FMatrix::from_rows(f, 2, &[vec![1, 0], vec![0, 0]]).unwrap();
        let b = image_size_bound_check(&m, &cube, 0.5, Budget::DEFAULT).unwrap();
        assert_eq!(b.image_size, 2);
        assert_eq!(b.rank, 1);
        assert!(b.holds());
        assert!(matches!(
            image_size_bound_check(&m, &cube[..1], 0.5, Budget::DEFAULT),
            Err(Error::PreconditionFailed(_))
        ));
    }
}
