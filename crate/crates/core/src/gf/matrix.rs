use std::fmt;

use super::field::{Field, Residue};
use crate::error::{Error, Result};

/// Dense row-major matrix over F_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Residue>,
}

impl FMatrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Residue>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|&&x| x >= field.p()) {
            return Err(Error::Dimension(format!(
                "entry {bad} not reduced mod {}",
                field.p()
            )));
        }
        Ok(FMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Build from rows of already-reduced entries; `cols` is needed when `rows` is empty.
    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<Residue>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        FMatrix::new(field, rows.len(), cols, data)
    }

    /// Reduces signed entries mod p.
    pub fn from_signed(field: Field, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let rows: Vec<Vec<Residue>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.reduce(x)).collect())
            .collect();
        FMatrix::from_rows(field, cols, &rows)
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = FMatrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Residue {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Residue) {
        self.data[i * self.cols + j] = v % self.field.p();
    }

    pub fn row(&self, i: usize) -> &[Residue] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self) -> Vec<Vec<Residue>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Residue> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn data(&self) -> &[Residue] {
        &self.data
    }

    /// Submatrix on the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> FMatrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                data.push(self.get(i, j));
            }
        }
        FMatrix {
            field: self.field,
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn transpose(&self) -> FMatrix {
        let mut t = FMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// `A * x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[Residue]) -> Vec<Residue> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| self.field.add_mul(acc, a, b))
            })
            .collect()
    }

    /// `y * A` for a row vector `y`.
    pub fn vec_mul(&self, y: &[Residue]) -> Vec<Residue> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![0; self.cols];
        for (i, &c) in y.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = self.field.add_mul(*o, c, a);
            }
        }
        out
    }

    /// Reduced row echelon form and rank.
    pub fn rref(&self) -> (FMatrix, usize) {
        let (m, pivots) = self.rref_with_pivots();
        (m, pivots.len())
    }

    /// Reduced row echelon form together with the pivot column of each nonzero row.
    pub fn rref_with_pivots(&self) -> (FMatrix, Vec<usize>) {
        let mut rows = self.row_vec();
        let pivots = rref_rows(self.field, &mut rows, self.cols);
        let data = rows.into_iter().flatten().collect();
        (
            FMatrix {
                field: self.field,
                rows: self.rows,
                cols: self.cols,
                data,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// A basis of `{x : A x = 0}`, one vector per non-pivot column.
    pub fn nullspace(&self) -> Vec<Vec<Residue>> {
        let (r, pivots) = self.rref_with_pivots();
        let field = self.field;
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = field.neg(r.get(i, free));
                }
                v
            })
            .collect()
    }
}

/// In-place Gauss-Jordan elimination on `rows` (each of length `cols`).
/// Nonzero rows end up first, normalized with pivot 1; returns the pivot columns.
pub(crate) fn rref_rows(field: Field, rows: &mut [Vec<Residue>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]);
        if inv != 1 {
            for x in rows[rank].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        for r in 0..rows.len() {
            if r == rank || rows[r][col] == 0 {
                continue;
            }
            let factor = field.neg(rows[r][col]);
            let (src, dst) = if r < rank {
                let (a, b) = rows.split_at_mut(rank);
                (&b[0], &mut a[r])
            } else {
                let (a, b) = rows.split_at_mut(r);
                (&a[rank], &mut b[0])
            };
            for (d, &s) in dst.iter_mut().zip(src.iter()).skip(col) {
                *d = field.add_mul(*d, factor, s);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    pivots
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f5() -> Field {
        Field::new(5).unwrap()
    }

    #[test]
    fn identity_is_its_own_rref() {
        let id = FMatrix::identity(f5(), 3);
        let (r, rank) = id.rref();
        assert_eq!(r, id);
        assert_eq!(rank, 3);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let z = FMatrix::zeros(f5(), 2, 4);
        let (r, rank) = z.rref();
        assert_eq!(r, z);
        assert_eq!(rank, 0);
    }

    #[test]
    fn dependent_rows() {
        let m = FMatrix::from_signed(f5(), &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rejects_unreduced_entries() {
        assert!(FMatrix::new(f5(), 1, 2, vec![1, 5]).is_err());
        assert!(FMatrix::new(f5(), 1, 2, vec![1]).is_err());
    }

    #[test]
    fn rref_idempotent_and_rank_preserving() {
        let f = Field::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let r = rng.gen_range(1..5);
            let c = rng.gen_range(1..7);
            let data = (0..r * c).map(|_| rng.gen_range(0..7)).collect();
            let m = FMatrix::new(f, r, c, data).unwrap();
            let (once, rank) = m.rref();
            let (twice, rank2) = once.rref();
            assert_eq!(once, twice);
            assert_eq!(rank, rank2);
            assert_eq!(rank, m.transpose().rank());
        }
    }

    #[test]
    fn nullspace_is_annihilated() {
        let f = Field::new(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let r = rng.gen_range(1..5);
            let c = rng.gen_range(1..7);
            let data = (0..r * c).map(|_| rng.gen_range(0..7)).collect();
            let m = FMatrix::new(f, r, c, data).unwrap();
            let ns = m.nullspace();
            assert_eq!(ns.len() + m.rank(), c);
            for v in &ns {
                assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
        }
    }

    #[test]
    fn products() {
        let m = FMatrix::from_signed(f5(), &[vec![1, 2, 3], vec![0, 1, 4]]).unwrap();
        assert_eq!(m.mul_vec(&[1, 1, 1]), vec![1, 0]);
        assert_eq!(m.vec_mul(&[1, 1]), vec![1, 3, 2]);
    }
}
