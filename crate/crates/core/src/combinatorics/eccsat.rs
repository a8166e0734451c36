use super::sumset::Sumset;
use crate::error::{Error, Result};
use crate::games::c_e;
use crate::gf::{Budget, FMatrix, Residue};
use crate::instances::code_distance;

/// Disjoint sets of `m` linearly independent columns, taken greedily: each
/// block scans the unused columns in order and keeps those that raise the rank.
pub fn independent_blocks(m: &FMatrix) -> Vec<Vec<usize>> {
    let rows = m.rows();
    let mut unused: Vec<usize> = (0..m.cols()).collect();
    let mut blocks = Vec::new();
    if rows == 0 {
        return blocks;
    }
    loop {
        let mut block: Vec<usize> = Vec::new();
        for &j in &unused {
            let mut cand = block.clone();
            cand.push(j);
            if m.select_columns(&cand).rank() == cand.len() {
                block = cand;
                if block.len() == rows {
                    break;
                }
            }
        }
        if block.len() < rows {
            return blocks;
        }
        unused.retain(|j| !block.contains(j));
        blocks.push(block);
    }
}

/// A boolean solution of `M x = a` for a matrix of code distance at least
/// `C_{E,p} m^3`.
///
/// The columns are split into disjoint independent `m`-blocks; the zero-one
/// sumset of the block columns is grown with witnesses until `a` appears, and
/// the columns outside the witness are set to 0.
pub fn ecc_sat_solve(m: &FMatrix, a: &[Residue], budget: Budget) -> Result<Vec<bool>> {
    let field = m.field();
    let rows = m.rows();
    if a.len() != rows {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for {rows} rows",
            a.len()
        )));
    }
    let d = code_distance(m, budget)?;
    let need = c_e(field.p()) * (rows as f64).powi(3);
    if (d as f64) < need {
        return Err(Error::PreconditionFailed(format!(
            "code distance {d} is below C_E m^3 = {need:.2}"
        )));
    }
    let n = m.cols();
    let mut x = vec![false; n];
    let mut sumset = Sumset::origin(field, rows, budget)?;
    let mut cols = Vec::new();
    if !sumset.contains(a) {
        'blocks: for block in independent_blocks(m) {
            for j in block {
                sumset.push(&m.column(j));
                cols.push(j);
                if sumset.contains(a) {
                    break 'blocks;
                }
            }
        }
    }
    let w = sumset.witness(a).ok_or(Error::NotFound)?;
    for (i, &j) in cols.iter().enumerate() {
        x[j] = w[i];
    }
    let xr: Vec<Residue> = x.iter().map(|&b| b as Residue).collect();
    debug_assert_eq!(m.mul_vec(&xr), a);
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use rand::{Rng, SeedableRng};

    #[test]
    fn all_ones_row() {
        let f = Field::new(5).unwrap();
        let m = FMatrix::from_rows(f, 9, &[vec![1; 9]]).unwrap();
        let x = ecc_sat_solve(&m, &[3], Budget::DEFAULT).unwrap();
        assert_eq!(x.iter().filter(|&&b| b).count(), 3);
        let short = FMatrix::from_rows(f, 4, &[vec![1; 4]]).unwrap();
        assert!(matches!(
            ecc_sat_solve(&short, &[3], Budget::DEFAULT),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn two_rows_wide_matrix() {
        let f = Field::new(5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let rows: Vec<Vec<Residue>> = (0..2)
            .map(|_| (0..200).map(|_| rng.gen_range(0..5)).collect())
            .collect();
        let m = FMatrix::from_rows(f, 200, &rows).unwrap();
        for a in [[0, 0], [1, 4], [3, 2]] {
            let x = ecc_sat_solve(&m, &a, Budget::DEFAULT).unwrap();
            let xr: Vec<Residue> = x.iter().map(|&b| b as Residue).collect();
            assert_eq!(m.mul_vec(&xr), a);
        }
    }

    #[test]
    fn blocks_are_disjoint_and_independent() {
        let f = Field::new(7).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let rows: Vec<Vec<Residue>> = (0..3)
            .map(|_| (0..30).map(|_| rng.gen_range(0..7)).collect())
            .collect();
        let m = FMatrix::from_rows(f, 30, &rows).unwrap();
        let blocks = independent_blocks(&m);
        let mut seen = std::collections::HashSet::new();
        for b in &blocks {
            assert_eq!(m.select_columns(b).rank(), 3);
            assert!(b.iter().all(|j| seen.insert(*j)));
        }
        assert!(blocks.len() >= 8);
    }
}
