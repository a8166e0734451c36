//! Exhaustive search over the boolean cube `{0,1}^n` for solutions of a
//! system of affine equations.
//!
//! Solutions are visited in lexicographic order (`x_1` most significant,
//! 0 before 1). A row stops constraining the search once all of its
//! variables are bound, so unsatisfiable rows prune whole subtrees.

use std::ops::ControlFlow;

use super::field::{Field, Residue};
use super::poly::AffinePoly;
use super::Budget;
use crate::error::Result;

struct Search<'a> {
    field: Field,
    rows: Vec<&'a [Residue]>,
    /// rows whose last nonzero variable is `j` are checked right after `x_j` is bound
    closing: Vec<Vec<usize>>,
    residual: Vec<Residue>,
    x: Vec<bool>,
}

impl Search<'_> {
    fn dfs(
        &mut self,
        j: usize,
        visit: &mut dyn FnMut(&[bool]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let n = self.x.len();
        if j == n {
            return visit(&self.x);
        }
        for b in [false, true] {
            self.x[j] = b;
            if b {
                for (r, row) in self.rows.iter().enumerate() {
                    self.residual[r] = self.field.add(self.residual[r], row[j]);
                }
            }
            let ok = self.closing[j].iter().all(|&r| self.residual[r] == 0);
            let flow = if ok {
                self.dfs(j + 1, visit)
            } else {
                ControlFlow::Continue(())
            };
            if b {
                for (r, row) in self.rows.iter().enumerate() {
                    self.residual[r] = self.field.sub(self.residual[r], row[j]);
                }
            }
            flow?;
        }
        self.x[j] = false;
        ControlFlow::Continue(())
    }
}

/// Visit every `x in {0,1}^n` with `q(x) = 0` for all `q` in `eqs`.
pub fn for_each_zero_one_solution(
    field: Field,
    n: usize,
    eqs: &[AffinePoly],
    budget: Budget,
    mut visit: impl FnMut(&[bool]) -> ControlFlow<()>,
) -> Result<()> {
    budget.check_cube(n)?;
    // rows with no variables are decided immediately
    if eqs.iter().any(|q| q.weight() == 0 && q.constant() != 0) {
        return Ok(());
    }
    let rows: Vec<&[Residue]> = eqs
        .iter()
        .filter(|q| q.weight() > 0)
        .map(|q| {
            assert_eq!(q.n(), n, "equation over a different ambient dimension");
            q.terms()
        })
        .collect();
    let mut closing = vec![Vec::new(); n];
    for (r, row) in rows.iter().enumerate() {
        let last = (0..n).rev().find(|&j| row[j] != 0).expect("weight > 0");
        closing[last].push(r);
    }
    let residual = rows.iter().map(|row| row[n]).collect();
    let mut search = Search {
        field,
        rows,
        closing,
        residual,
        x: vec![false; n],
    };
    let _ = search.dfs(0, &mut visit);
    Ok(())
}

/// Lexicographically first boolean solution, if any.
pub fn first_zero_one_solution(
    field: Field,
    n: usize,
    eqs: &[AffinePoly],
    budget: Budget,
) -> Result<Option<Vec<bool>>> {
    let mut found = None;
    for_each_zero_one_solution(field, n, eqs, budget, |x| {
        found = Some(x.to_vec());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

pub fn all_zero_one_solutions(
    field: Field,
    n: usize,
    eqs: &[AffinePoly],
    budget: Budget,
) -> Result<Vec<Vec<bool>>> {
    let mut out = Vec::new();
    for_each_zero_one_solution(field, n, eqs, budget, |x| {
        out.push(x.to_vec());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn is_zero_one_satisfiable(
    field: Field,
    n: usize,
    eqs: &[AffinePoly],
    budget: Budget,
) -> Result<bool> {
    Ok(first_zero_one_solution(field, n, eqs, budget)?.is_some())
}

/// Iterate `{0,1}^n` in lexicographic order as bit vectors.
pub fn cube_points(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0u64..(1u64 << n)).map(move |m| (0..n).map(|j| (m >> (n - 1 - j)) & 1 == 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lexicographic_first() {
        let f = Field::new(5).unwrap();
        let eq = AffinePoly::equation(f, &[1, 1], 1);
        let sol = first_zero_one_solution(f, 2, &[eq], Budget::default()).unwrap();
        assert_eq!(sol, Some(vec![false, true]));
        let eq = AffinePoly::equation(f, &[1, 1], 3);
        assert_eq!(
            first_zero_one_solution(f, 2, &[eq], Budget::default()).unwrap(),
            None
        );
    }

    #[test]
    fn agrees_with_plain_enumeration() {
        let f = Field::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let n = rng.gen_range(1..8);
            let k = rng.gen_range(0..4);
            let eqs: Vec<AffinePoly> = (0..k)
                .map(|_| {
                    let c: Vec<u32> = (0..n)
                        .map(|_| {
                            if rng.gen_bool(0.5) {
                                rng.gen_range(0..5)
                            } else {
                                0
                            }
                        })
                        .collect();
                    AffinePoly::equation(f, &c, rng.gen_range(0..5))
                })
                .collect();
            let fast = all_zero_one_solutions(f, n, &eqs, Budget::default()).unwrap();
            let slow: Vec<Vec<bool>> = cube_points(n)
                .filter(|x| eqs.iter().all(|q| q.eval_bool(x) == 0))
                .collect();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn budget_guard() {
        let f = Field::new(5).unwrap();
        assert!(first_zero_one_solution(f, 30, &[], Budget(1 << 10)).is_err());
    }
}
