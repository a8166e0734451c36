use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{
    cube, AffinePoly, AffineSpan, Budget, FMatrix, Field, PartialAssignment, Residue, Restrict,
};
use crate::instances::{code_distance, next_combination, zero_one_sat, LinearSystem};

/// `r(s)`; `Infinite` when no valid pair exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RValue {
    Finite(usize),
    Infinite,
}

impl RValue {
    /// `r(s) >= r`.
    pub fn at_least(self, r: usize) -> bool {
        match self {
            RValue::Finite(v) => v >= r,
            RValue::Infinite => true,
        }
    }
}

impl fmt::Display for RValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RValue::Finite(v) => write!(f, "{v}"),
            RValue::Infinite => f.write_str("inf"),
        }
    }
}

/// A minimizing pair: the assignment and the canonical basis of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub rho: PartialAssignment,
    pub g: AffineSpan,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub s: usize,
    pub r: RValue,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug)]
pub struct RobustnessProfile {
    pub instance: LinearSystem,
    pub d_a: usize,
    pub rows: Vec<ProfileRow>,
}

impl RobustnessProfile {
    /// Whether `r(s) > 1` implies `r(s) <= s < d_A` on this row.
    pub fn bound_consistent(&self, row: &ProfileRow) -> bool {
        match row.r {
            RValue::Finite(r) if r > 1 => r <= row.s && row.s < self.d_a,
            _ => true,
        }
    }

    pub fn witness_verified(&self, row: &ProfileRow) -> bool {
        match (&row.witness, row.r) {
            (None, RValue::Infinite) => true,
            (Some(w), RValue::Finite(r)) => {
                w.rho.len() == row.s
                    && verify_conditions(&self.instance, &w.rho, &w.g)
                    && restricted_dim(&w.g, &w.rho.support()) == r
            }
            _ => false,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,r,support,dim,d_a,bound_ok,witness_ok\n");
        for row in &self.rows {
            let (support, dim) = match &row.witness {
                Some(w) => (format_rho(&w.rho), w.g.dim().to_string()),
                None => ("-".into(), "-".into()),
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                row.s,
                row.r,
                support,
                dim,
                self.d_a,
                self.bound_consistent(row),
                self.witness_verified(row)
            ));
        }
        out
    }
}

/// `x1=0;x3=1` with 1-based names; `-` when empty.
pub fn format_rho(rho: &PartialAssignment) -> String {
    if rho.is_empty() {
        return "-".into();
    }
    let parts: Vec<String> = rho
        .iter()
        .map(|(j, b)| format!("x{}={}", j + 1, b as u8))
        .collect();
    parts.join(";")
}

/// Galois number: subspaces of `F_p^k` of every dimension.
pub fn subspace_count(p: u32, k: usize) -> u128 {
    let p = p as u128;
    // Gaussian binomials by the recurrence [k, r] = [k-1, r-1] + p^r [k-1, r]
    let mut row = vec![1u128];
    for kk in 1..=k {
        let mut next = vec![1u128; kk + 1];
        for r in 1..kk {
            next[r] = row[r - 1].saturating_add(p.saturating_pow(r as u32).saturating_mul(row[r]));
        }
        row = next;
    }
    row.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

/// Every subspace of `F_p^k` as a reduced echelon basis: by dimension, then
/// pivot set in lexicographic order, then free entries (last fastest).
pub fn subspaces(field: Field, k: usize, budget: Budget) -> Result<Vec<Vec<Vec<Residue>>>> {
    budget.check(subspace_count(field.p(), k))?;
    let mut out = vec![Vec::new()];
    for r in 1..=k {
        let mut pivots: Vec<usize> = (0..r).collect();
        loop {
            // free slots: row i, column j > pivots[i], j not a pivot
            let slots: Vec<(usize, usize)> = (0..r)
                .flat_map(|i| {
                    let pv = &pivots;
                    (pv[i] + 1..k)
                        .filter(move |j| !pv.contains(j))
                        .map(move |j| (i, j))
                })
                .collect();
            let mut vals = vec![0 as Residue; slots.len()];
            loop {
                let mut rows = vec![vec![0 as Residue; k]; r];
                for (i, &c) in pivots.iter().enumerate() {
                    rows[i][c] = 1;
                }
                for (&(i, j), &v) in slots.iter().zip(&vals) {
                    rows[i][j] = v;
                }
                out.push(rows);
                let mut t = slots.len();
                while t > 0 && vals[t - 1] == field.p() - 1 {
                    vals[t - 1] = 0;
                    t -= 1;
                }
                if t == 0 {
                    break;
                }
                vals[t - 1] += 1;
            }
            if !next_combination(&mut pivots, k) {
                break;
            }
        }
    }
    Ok(out)
}

/// `dim <G_[I]>`: rank of the basis restricted to the columns `I`.
pub fn restricted_dim(g: &AffineSpan, cols: &[usize]) -> usize {
    if g.dim() == 0 || cols.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Residue>> = g
        .basis()
        .iter()
        .map(|q| cols.iter().map(|&j| q.coeff(j)).collect())
        .collect();
    FMatrix::from_rows(g.field(), cols.len(), &rows)
        .expect("shape")
        .rank()
}

fn covers(g: &AffineSpan, cols: &[usize]) -> bool {
    cols.iter()
        .all(|&j| g.basis().iter().any(|q| q.coeff(j) != 0))
}

/// The three conditions on `(rho, G)`, each checked directly: `G` inside the
/// instance span, `G|rho` without 0-1 points, and every variable of `rho`
/// occurring in `G`.
pub fn verify_conditions(inst: &LinearSystem, rho: &PartialAssignment, g: &AffineSpan) -> bool {
    let n = inst.n();
    if !inst.span().contains_span(g) || !covers(g, &rho.support()) {
        return false;
    }
    let restricted = g.basis().to_vec().restrict(rho);
    !cube::cube_points(n).any(|x| restricted.iter().all(|q| q.eval_bool(&x) == 0))
}

/// All subspaces of the instance span as canonical spans.
pub(crate) fn span_subspaces(inst: &LinearSystem, budget: Budget) -> Result<Vec<AffineSpan>> {
    let f = inst.field();
    let n = inst.n();
    let span = inst.span();
    let basis = span.basis();
    Ok(subspaces(f, basis.len(), budget)?
        .into_iter()
        .map(|rows| {
            let gens: Vec<AffinePoly> = rows
                .iter()
                .map(|c| {
                    basis
                        .iter()
                        .zip(c)
                        .fold(AffinePoly::zero(f, n), |acc, (b, &y)| acc.add_scaled(b, y))
                })
                .collect();
            AffineSpan::new(f, n, &gens)
        })
        .collect())
}

/// Supports of size `s` in lexicographic order.
pub(crate) fn supports(n: usize, s: usize) -> Vec<Vec<usize>> {
    if s > n {
        return Vec::new();
    }
    let mut idx: Vec<usize> = (0..s).collect();
    let mut out = vec![idx.clone()];
    if s == 0 {
        return out;
    }
    while next_combination(&mut idx, n) {
        out.push(idx.clone());
    }
    out
}

/// Assignments on `cols`, values counted up in binary (first variable most significant).
pub(crate) fn assignments(n: usize, cols: &[usize]) -> Vec<PartialAssignment> {
    let s = cols.len();
    (0u64..1 << s)
        .map(|m| {
            PartialAssignment::from_pairs(
                n,
                cols.iter()
                    .enumerate()
                    .map(|(i, &j)| (j, m >> (s - 1 - i) & 1 == 1)),
            )
            .expect("in range")
        })
        .collect()
}

fn binom(n: usize, s: usize) -> u128 {
    (0..s).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `r(s)` for `s = 0..=s_max` with one witness each.
///
/// Candidates are ordered by support, then values, then subspace; the witness
/// is the first of least dimension.
pub fn robustness_profile(
    inst: &LinearSystem,
    s_max: usize,
    budget: Budget,
) -> Result<RobustnessProfile> {
    let n = inst.n();
    let f = inst.field();
    let k = inst.span().dim();
    for s in 0..=s_max.min(n) {
        let cells = binom(n, s)
            .saturating_mul(1 << s)
            .saturating_mul(subspace_count(f.p(), k))
            .saturating_mul(1u128 << (n - s));
        budget.check(cells)?;
    }
    let d_a = code_distance(inst.a(), budget)?;
    let subs = span_subspaces(inst, budget)?;
    let mut rows = Vec::new();
    for s in 0..=s_max {
        let per_support: Vec<Option<(usize, Witness)>> = supports(n, s)
            .par_iter()
            .map(|cols| best_on_support(inst, &subs, cols, budget))
            .collect::<Result<Vec<_>>>()?;
        // deterministic min-reduction: earliest support wins ties
        let best = per_support
            .into_iter()
            .flatten()
            .fold(None::<(usize, Witness)>, |acc, c| match acc {
                Some(a) if a.0 <= c.0 => Some(a),
                _ => Some(c),
            });
        rows.push(match best {
            Some((r, w)) => ProfileRow {
                s,
                r: RValue::Finite(r),
                witness: Some(w),
            },
            None => ProfileRow {
                s,
                r: RValue::Infinite,
                witness: None,
            },
        });
    }
    Ok(RobustnessProfile {
        instance: inst.clone(),
        d_a,
        rows,
    })
}

fn best_on_support(
    inst: &LinearSystem,
    subs: &[AffineSpan],
    cols: &[usize],
    budget: Budget,
) -> Result<Option<(usize, Witness)>> {
    let f = inst.field();
    let n = inst.n();
    // condition 3 and the dimension do not depend on the values
    let candidates: Vec<(&AffineSpan, usize)> = subs
        .iter()
        .filter(|g| covers(g, cols))
        .map(|g| (g, restricted_dim(g, cols)))
        .collect();
    let mut best: Option<(usize, Witness)> = None;
    for rho in assignments(n, cols) {
        for &(g, dim) in &candidates {
            if best.as_ref().is_some_and(|b| b.0 <= dim) {
                continue;
            }
            let restricted = g.basis().to_vec().restrict(&rho);
            if !cube::is_zero_one_satisfiable(f, n, &restricted, budget)? {
                best = Some((
                    dim,
                    Witness {
                        rho: rho.clone(),
                        g: g.clone(),
                    },
                ));
            }
        }
        if best.as_ref().is_some_and(|b| b.0 == 0) {
            break;
        }
    }
    Ok(best)
}

/// Per assignment of support `s`: the least dimension of a 0-1 unsatisfiable
/// subspace of `<F|rho>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeRow {
    pub rho: PartialAssignment,
    pub min_eqs: usize,
    pub k: usize,
}

pub fn conjecture_probe(inst: &LinearSystem, s: usize, budget: Budget) -> Result<Vec<ProbeRow>> {
    let f = inst.field();
    let n = inst.n();
    if zero_one_sat(inst, budget)?.is_some() {
        return Err(Error::NotUnsat);
    }
    let subs = span_subspaces(inst, budget)?;
    let mut out = Vec::new();
    for cols in supports(n, s) {
        for rho in assignments(n, &cols) {
            let mut min_eqs = None;
            for g in &subs {
                let restricted = AffineSpan::new(f, n, &g.basis().to_vec().restrict(&rho));
                if min_eqs.is_some_and(|m| m <= restricted.dim()) {
                    continue;
                }
                if !restricted.is_zero_one_satisfiable(budget)? {
                    min_eqs = Some(restricted.dim());
                }
            }
            out.push(ProbeRow {
                rho,
                // the full span qualifies
                min_eqs: min_eqs.expect("unsatisfiable instance"),
                k: inst.k(),
            });
        }
    }
    Ok(out)
}

pub fn probe_csv(s: usize, rows: &[ProbeRow]) -> String {
    let mut out = String::from("s,rho,min_eqs,k\n");
    for r in rows {
        out.push_str(&format!(
            "{s},{},{},{}\n",
            format_rho(&r.rho),
            r.min_eqs,
            r.k
        ));
    }
    out
}
