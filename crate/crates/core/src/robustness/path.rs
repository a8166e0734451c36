use crate::error::{Error, Result};
use crate::gf::{AffinePoly, AffineSpan, Budget, FMatrix, PartialAssignment, Residue, Restrict};
use crate::instances::LinearSystem;
use crate::refutations::{check_refutation, Refutation, Split};

use super::profile::format_rho;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathWitness {
    /// Node reached along the path.
    pub node: usize,
    /// Number of edges followed to reach it.
    pub depth: usize,
    pub rho_hat: PartialAssignment,
    /// One preimage in `<F>` per equation of the node, in the same order.
    pub preimage: Vec<AffinePoly>,
}

impl PathWitness {
    /// `F_v = F_rho|rho_hat` and `F_rho` inside `<F>`, rechecked from scratch.
    pub fn verify(&self, t: &Refutation, inst: &LinearSystem) -> bool {
        let Some(node) = t.nodes.get(&self.node) else {
            return false;
        };
        let span = inst.span();
        self.preimage.iter().all(|q| span.contains(q))
            && self.preimage.restrict(&self.rho_hat) == node.system
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "node {} depth {}\nrho {}\n",
            self.node,
            self.depth,
            format_rho(&self.rho_hat)
        );
        for q in &self.preimage {
            out.push_str(&format!("preimage {q}\n"));
        }
        out
    }
}

/// Coefficients `y` with `sum y_i rows[i] = target`, free coordinates set to 0.
fn solve_combination(rows: &[AffinePoly], target: &AffinePoly) -> Option<Vec<Residue>> {
    let f = target.field();
    let k = rows.len();
    let width = target.terms().len();
    // columns are the generators, the last column the target
    let aug: Vec<Vec<Residue>> = (0..width)
        .map(|c| {
            let mut r: Vec<Residue> = rows.iter().map(|q| q.terms()[c]).collect();
            r.push(target.terms()[c]);
            r
        })
        .collect();
    let (m, pivots) = FMatrix::from_rows(f, k + 1, &aug).ok()?.rref_with_pivots();
    if pivots.contains(&k) {
        return None;
    }
    let mut y = vec![0; k];
    for (i, &c) in pivots.iter().enumerate() {
        y[c] = m.get(i, k);
    }
    Some(y)
}

/// Follow the path of the full assignment `x` and return the first node whose
/// minimal sub-assignment `rho_i` (least size, then lexicographic support)
/// with `F_{v_i}` inside `<F|rho_i>` has exactly `s` variables.
pub fn path_witness(
    t: &Refutation,
    inst: &LinearSystem,
    x: &[bool],
    s: usize,
    budget: Budget,
) -> Result<PathWitness> {
    let n = inst.n();
    let f = inst.field();
    if x.len() != n || t.n != n {
        return Err(Error::Dimension(format!(
            "assignment of length {} for {n} variables",
            x.len()
        )));
    }
    if !check_refutation(t, inst, budget)?.is_accept() {
        return Err(Error::PreconditionFailed(
            "refutation is not accepted".into(),
        ));
    }
    if s > n {
        return Err(Error::NeverReached);
    }
    let full = PartialAssignment::full(x);
    let eqs = inst.equations();
    let xr: Vec<Residue> = x.iter().map(|&b| b as Residue).collect();
    let mut v = t.root;
    let mut seen: Vec<usize> = Vec::new();
    let mut depth = 0;
    loop {
        let node = &t.nodes[&v];
        if let Some(rho) = minimal_subassignment(inst, &node.system, &full, &seen, budget)? {
            if rho.len() == s {
                let restricted = eqs.restrict(&rho);
                let mut preimage = Vec::with_capacity(node.system.len());
                for g in &node.system {
                    let y = solve_combination(&restricted, g).ok_or_else(|| {
                        Error::MalformedProof(format!("node {v}: equation without preimage"))
                    })?;
                    let q = eqs
                        .iter()
                        .zip(&y)
                        .fold(AffinePoly::zero(f, n), |acc, (e, &c)| acc.add_scaled(e, c));
                    preimage.push(q);
                }
                return Ok(PathWitness {
                    node: v,
                    depth,
                    rho_hat: rho,
                    preimage,
                });
            }
        }
        if node.terminal {
            return Err(Error::NeverReached);
        }
        if let Some(Split::Var(j)) = &node.split {
            if !seen.contains(j) {
                seen.push(*j);
                seen.sort_unstable();
            }
        }
        let next = t
            .out_edges(v)
            .find(|e| e.label.eval(&xr) == 0)
            .ok_or_else(|| {
                Error::MalformedProof(format!("node {v}: no edge satisfied by the assignment"))
            })?;
        v = next.to;
        depth += 1;
    }
}

/// Least sub-assignment of `full` on `vars` (by size, then lexicographic
/// support) whose restriction of the instance spans `system`.
fn minimal_subassignment(
    inst: &LinearSystem,
    system: &[AffinePoly],
    full: &PartialAssignment,
    vars: &[usize],
    budget: Budget,
) -> Result<Option<PartialAssignment>> {
    let f = inst.field();
    let n = inst.n();
    let eqs = inst.equations();
    budget.check(1u128 << vars.len())?;
    for size in 0..=vars.len() {
        for cols in super::profile::supports(vars.len(), size) {
            let chosen: Vec<usize> = cols.iter().map(|&i| vars[i]).collect();
            let rho = full.restricted_to(&chosen);
            if AffineSpan::new(f, n, &eqs.restrict(&rho)).contains_all(system) {
                return Ok(Some(rho));
            }
        }
    }
    Ok(None)
}
