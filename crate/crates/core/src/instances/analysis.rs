use std::collections::HashSet;
use std::ops::ControlFlow;

use super::system::LinearSystem;
use crate::error::Result;
use crate::gf::{cube, for_each_combination, weight, Budget, FMatrix, Residue};

/// `d_A`: least weight of `y A` over nonzero `y`; 0 iff the rows are dependent.
pub fn code_distance(a: &FMatrix, budget: Budget) -> Result<usize> {
    let rows: Vec<&[Residue]> = (0..a.rows()).map(|i| a.row(i)).collect();
    let mut best = a.cols();
    let mut any = false;
    for_each_combination(a.field(), &rows, a.cols(), budget, |y, ya| {
        if y.iter().any(|&c| c != 0) {
            any = true;
            best = best.min(weight(ya));
            if best == 0 {
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    })?;
    // a matrix with no rows has no nonzero y; report the vacuous full length
    Ok(if any { best } else { a.cols() })
}

/// The set `A({0,1}^n)`.
#[derive(Clone, Debug)]
pub struct ZeroOneImage {
    points: HashSet<Vec<Residue>>,
}

impl ZeroOneImage {
    pub fn contains(&self, v: &[Residue]) -> bool {
        self.points.contains(v)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Elements in lexicographic order.
    pub fn sorted(&self) -> Vec<Vec<Residue>> {
        let mut v: Vec<_> = self.points.iter().cloned().collect();
        v.sort();
        v
    }
}

/// Enumerate the image of the boolean cube along a Gray code, one column update per step.
pub fn zero_one_image(a: &FMatrix, budget: Budget) -> Result<ZeroOneImage> {
    let (k, n) = (a.rows(), a.cols());
    budget.check_cube(n)?;
    let field = a.field();
    let cols: Vec<Vec<Residue>> = (0..n).map(|j| a.column(j)).collect();
    let mut x = vec![false; n];
    let mut acc = vec![0; k];
    let mut points = HashSet::new();
    points.insert(acc.clone());
    for step in 1u64..(1u64 << n) {
        let j = step.trailing_zeros() as usize;
        x[j] = !x[j];
        for (s, &c) in acc.iter_mut().zip(&cols[j]) {
            *s = if x[j] {
                field.add(*s, c)
            } else {
                field.sub(*s, c)
            };
        }
        points.insert(acc.clone());
    }
    Ok(ZeroOneImage { points })
}

/// Lexicographically first boolean solution of `A x = b`, if any.
pub fn zero_one_sat(s: &LinearSystem, budget: Budget) -> Result<Option<Vec<bool>>> {
    cube::first_zero_one_solution(s.field(), s.n(), &s.equations(), budget)
}

/// Outcome of the optimal code rate test `rank(A_I) >= (k/n)|I|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateCheck {
    pub optimal: bool,
    /// A violating column set: smallest size first, then lexicographically first.
    pub violating: Option<Vec<usize>>,
}

pub fn optimal_rate_check(a: &FMatrix, budget: Budget) -> Result<RateCheck> {
    let (k, n) = (a.rows(), a.cols());
    budget.check_cube(n)?;
    for size in 1..=n {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let rank = a.select_columns(&idx).rank();
            // rank / |I| >= k / n, compared in integers
            if rank * n < k * size {
                return Ok(RateCheck {
                    optimal: false,
                    violating: Some(idx),
                });
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    Ok(RateCheck {
        optimal: true,
        violating: None,
    })
}

/// Advance to the next `idx.len()`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let m = idx.len();
    let mut i = m;
    while i > 0 {
        i -= 1;
        if idx[i] < n - m + i {
            idx[i] += 1;
            for t in i + 1..m {
                idx[t] = idx[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{AffinePoly, Field};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f5() -> Field {
        Field::new(5).unwrap()
    }

    fn random_matrix(f: Field, k: usize, n: usize, rng: &mut ChaCha8Rng) -> FMatrix {
        let data = (0..k * n).map(|_| rng.gen_range(0..f.p())).collect();
        FMatrix::new(f, k, n, data).unwrap()
    }

    /// Plain nested enumeration of all y, independent of the odometer.
    fn distance_oracle(a: &FMatrix) -> usize {
        let p = a.field().p() as u64;
        let total = p.pow(a.rows() as u32);
        (1..total)
            .map(|mut code| {
                let y: Vec<Residue> = (0..a.rows())
                    .map(|_| {
                        let c = (code % p) as Residue;
                        code /= p;
                        c
                    })
                    .collect();
                weight(&a.vec_mul(&y))
            })
            .min()
            .unwrap_or(a.cols())
    }

    #[test]
    fn distance_examples() {
        let b = Budget::default();
        assert_eq!(code_distance(&FMatrix::identity(f5(), 2), b).unwrap(), 1);
        let one = FMatrix::from_signed(f5(), &[vec![1, 1, 1]]).unwrap();
        assert_eq!(code_distance(&one, b).unwrap(), 3);
        let dep = FMatrix::from_signed(f5(), &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(code_distance(&dep, b).unwrap(), 0);
    }

    #[test]
    fn distance_matches_oracle_and_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let k = rng.gen_range(1..4);
            let n = rng.gen_range(1..7);
            let a = random_matrix(f5(), k, n, &mut rng);
            let d = code_distance(&a, Budget::default()).unwrap();
            assert_eq!(d, distance_oracle(&a));
            assert_eq!(d > 0, a.rank() == k);
        }
    }

    #[test]
    fn image_examples() {
        let b = Budget::default();
        let one = FMatrix::from_signed(f5(), &[vec![1, 1, 1]]).unwrap();
        assert_eq!(
            zero_one_image(&one, b).unwrap().sorted(),
            vec![vec![0], vec![1], vec![2], vec![3]]
        );
        let id = zero_one_image(&FMatrix::identity(f5(), 2), b).unwrap();
        assert_eq!(
            id.sorted(),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        let z = zero_one_image(&FMatrix::zeros(f5(), 2, 3), b).unwrap();
        assert_eq!(z.sorted(), vec![vec![0, 0]]);
    }

    #[test]
    fn image_matches_direct_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..40 {
            let k = rng.gen_range(1..4);
            let n = rng.gen_range(1..8);
            let a = random_matrix(f5(), k, n, &mut rng);
            let img = zero_one_image(&a, Budget::default()).unwrap();
            let direct: HashSet<Vec<Residue>> = cube::cube_points(n)
                .map(|x| a.mul_vec(&x.iter().map(|&b| b as Residue).collect::<Vec<_>>()))
                .collect();
            assert_eq!(img.points, direct);
            assert!(img.len() <= (1usize << n).min(5usize.pow(k as u32)));
        }
    }

    #[test]
    fn sat_examples() {
        let b = Budget::default();
        let s = LinearSystem::from_equations(f5(), 2, &[AffinePoly::equation(f5(), &[1, 1], 3)])
            .unwrap();
        assert_eq!(zero_one_sat(&s, b).unwrap(), None);
        let s = LinearSystem::from_equations(f5(), 2, &[AffinePoly::equation(f5(), &[1, 1], 1)])
            .unwrap();
        assert_eq!(zero_one_sat(&s, b).unwrap(), Some(vec![false, true]));
    }

    #[test]
    fn rate_examples() {
        let b = Budget::default();
        assert!(
            optimal_rate_check(&FMatrix::identity(f5(), 4), b)
                .unwrap()
                .optimal
        );
        let a = FMatrix::from_signed(f5(), &[vec![1, 0, 2], vec![3, 0, 1]]).unwrap();
        let r = optimal_rate_check(&a, b).unwrap();
        assert!(!r.optimal);
        assert_eq!(r.violating, Some(vec![1]));
    }

    #[test]
    fn rate_matches_recomputation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let a = random_matrix(f5(), 3, 6, &mut rng);
            let r = optimal_rate_check(&a, Budget::default()).unwrap();
            let mut any_bad = false;
            for mask in 1u32..64 {
                let cols: Vec<usize> = (0..6).filter(|j| mask >> j & 1 == 1).collect();
                let rank = a.select_columns(&cols).rank() as f64;
                if rank < 0.5 * cols.len() as f64 - 1e-9 {
                    any_bad = true;
                }
            }
            assert_eq!(r.optimal, !any_bad);
            if let Some(i) = r.violating {
                assert!(2 * a.select_columns(&i).rank() < i.len());
            }
        }
    }

    #[test]
    fn combinations_in_order() {
        let mut idx = vec![0, 1];
        let mut seen = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            seen.push(idx.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }
}
