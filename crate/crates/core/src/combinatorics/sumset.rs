use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{Budget, FMatrix, Field, Residue};

/// `t` bases `A_1, ..., A_t` of `F_p^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisFamily {
    field: Field,
    m: usize,
    bases: Vec<Vec<Vec<Residue>>>,
}

impl BasisFamily {
    pub fn new(field: Field, m: usize, bases: Vec<Vec<Vec<Residue>>>) -> Result<Self> {
        for (i, b) in bases.iter().enumerate() {
            if b.len() != m || b.iter().any(|v| v.len() != m) {
                return Err(Error::Dimension(format!(
                    "basis {i} is not {m} vectors of length {m}"
                )));
            }
            if FMatrix::from_rows(field, m, b)?.rank() != m {
                return Err(Error::Dimension(format!(
                    "basis {i} is not linearly independent"
                )));
            }
        }
        Ok(BasisFamily { field, m, bases })
    }

    /// `t` uniformly random bases (rejection sampling of invertible matrices).
    pub fn random<R: Rng>(field: Field, m: usize, t: usize, rng: &mut R) -> Self {
        let mut bases = Vec::with_capacity(t);
        while bases.len() < t {
            let b: Vec<Vec<Residue>> = (0..m)
                .map(|_| (0..m).map(|_| rng.gen_range(0..field.p())).collect())
                .collect();
            if FMatrix::from_rows(field, m, &b).expect("square").rank() == m {
                bases.push(b);
            }
        }
        BasisFamily { field, m, bases }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[Vec<Vec<Residue>>] {
        &self.bases
    }

    /// All vectors, basis by basis.
    pub fn vectors(&self) -> Vec<Vec<Residue>> {
        self.bases.iter().flatten().cloned().collect()
    }
}

/// The zero-one sumset `{sum eps_v v : eps in {0,1}}` of a list of vectors,
/// with a witness for every element.
#[derive(Clone, Debug)]
pub struct Sumset {
    field: Field,
    m: usize,
    vectors: Vec<Vec<Residue>>,
    /// Indexed by the base-p code of an element: `(parent code, vector index)`
    /// of the step that first reached it; the origin points to itself.
    reached: Vec<Option<(usize, usize)>>,
    order: Vec<usize>,
}

fn encode(p: u32, v: &[Residue]) -> usize {
    v.iter()
        .rev()
        .fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

fn decode(p: u32, m: usize, mut code: usize) -> Vec<Residue> {
    (0..m)
        .map(|_| {
            let c = (code % p as usize) as Residue;
            code /= p as usize;
            c
        })
        .collect()
}

impl Sumset {
    /// Start from `{0}` over `F_p^m`.
    pub fn origin(field: Field, m: usize, budget: Budget) -> Result<Self> {
        let size = field.count(m);
        budget.check(size)?;
        let mut reached = vec![None; size as usize];
        reached[0] = Some((0, usize::MAX));
        Ok(Sumset {
            field,
            m,
            vectors: Vec::new(),
            reached,
            order: vec![0],
        })
    }

    /// `B + {0, v}`; new elements are appended in the order of their parents.
    pub fn push(&mut self, v: &[Residue]) {
        assert_eq!(v.len(), self.m, "vector length");
        let idx = self.vectors.len();
        self.vectors.push(v.to_vec());
        let p = self.field.p();
        let current = self.order.len();
        for i in 0..current {
            let code = self.order[i];
            let x = decode(p, self.m, code);
            let y: Vec<Residue> = x
                .iter()
                .zip(v)
                .map(|(&a, &b)| self.field.add(a, b))
                .collect();
            let c = encode(p, &y);
            if self.reached[c].is_none() {
                self.reached[c] = Some((code, idx));
                self.order.push(c);
            }
        }
    }

    pub fn contains(&self, v: &[Residue]) -> bool {
        v.len() == self.m && self.reached[encode(self.field.p(), v)].is_some()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.order.len() == self.reached.len()
    }

    pub fn num_vectors(&self) -> usize {
        self.vectors.len()
    }

    /// Elements in the order they were reached.
    pub fn elements(&self) -> Vec<Vec<Residue>> {
        self.order
            .iter()
            .map(|&c| decode(self.field.p(), self.m, c))
            .collect()
    }

    /// A 0-1 coefficient vector over the pushed vectors summing to `v`.
    pub fn witness(&self, v: &[Residue]) -> Option<Vec<bool>> {
        if v.len() != self.m {
            return None;
        }
        let mut code = encode(self.field.p(), v);
        self.reached[code]?;
        let mut eps = vec![false; self.vectors.len()];
        while code != 0 {
            let (parent, idx) = self.reached[code].expect("on the path");
            eps[idx] = true;
            code = parent;
        }
        Some(eps)
    }

    /// Some `a` with `a + alpha v` in the set for every `alpha`, the first in reach order.
    pub fn line_along(&self, v: &[Residue]) -> Option<Vec<Residue>> {
        let p = self.field.p();
        self.order.iter().find_map(|&c| {
            let a = decode(p, self.m, c);
            let mut x = a.clone();
            for _ in 1..p {
                for (xi, &vi) in x.iter_mut().zip(v) {
                    *xi = self.field.add(*xi, vi);
                }
                self.reached[encode(p, &x)]?;
            }
            Some(a)
        })
    }
}

/// Zero-one sumset of `vectors` in `F_p^m`.
pub fn zero_one_sumset(
    field: Field,
    m: usize,
    vectors: &[Vec<Residue>],
    budget: Budget,
) -> Result<Sumset> {
    let mut s = Sumset::origin(field, m, budget)?;
    for v in vectors {
        if v.len() != m {
            return Err(Error::Dimension(format!(
                "vector of length {} in F_p^{m}",
                v.len()
            )));
        }
        s.push(v);
    }
    Ok(s)
}

/// Whether `A_1 + ... + A_t = F_p^m` for the zero-one sumset.
pub fn cover_check_addcomb(family: &BasisFamily, budget: Budget) -> Result<bool> {
    Ok(zero_one_sumset(family.field, family.m, &family.vectors(), budget)?.is_full())
}

/// A line `{a + alpha v}` inside the family's zero-one sumset whose direction
/// `v` is a family vector outside `<S>`.
///
/// The sumsets `B_i = A_1 + ... + A_i` are grown basis by basis; before adding
/// `A_{i+1}`, each of its vectors outside `<S>` is tried as a direction in `B_i`.
/// The final `B_t` is tried against every family vector outside `<S>`.
pub fn find_line(
    s: &[Vec<Residue>],
    family: &BasisFamily,
    budget: Budget,
) -> Result<(Vec<Residue>, Vec<Residue>)> {
    let field = family.field;
    let m = family.m;
    let s_rank = if s.is_empty() {
        0
    } else {
        FMatrix::from_rows(field, m, s)?.rank()
    };
    let outside = |v: &Vec<Residue>| {
        let mut rows = s.to_vec();
        rows.push(v.clone());
        FMatrix::from_rows(field, m, &rows).expect("shape").rank() > s_rank
    };
    let mut b = Sumset::origin(field, m, budget)?;
    for basis in &family.bases {
        for v in basis.iter().filter(|v| outside(v)) {
            if let Some(a) = b.line_along(v) {
                return Ok((v.clone(), a));
            }
        }
        for v in basis {
            b.push(v);
        }
    }
    for v in family.bases.iter().flatten().filter(|v| outside(v)) {
        if let Some(a) = b.line_along(v) {
            return Ok((v.clone(), a));
        }
    }
    Err(Error::NotFound)
}
