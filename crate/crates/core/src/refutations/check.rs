use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt;

use super::types::{ProofKind, Refutation, Split};
use crate::error::{Error, Result};
use crate::gf::{cube, AffinePoly, AffineSpan, Budget, PartialAssignment, Restrict};
use crate::instances::LinearSystem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(String),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Accept => f.write_str("accept"),
            Verdict::Reject(why) => write!(f, "reject: {why}"),
        }
    }
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedProof(msg.into())
}

/// Nodes in topological order, smallest id first among the available ones.
fn topological_order(t: &Refutation) -> Result<Vec<usize>> {
    let mut indeg: BTreeMap<usize, usize> = t.nodes.keys().map(|&id| (id, 0)).collect();
    for e in &t.edges {
        *indeg
            .get_mut(&e.to)
            .ok_or_else(|| malformed(format!("edge to missing node {}", e.to)))? += 1;
        if !t.nodes.contains_key(&e.from) {
            return Err(malformed(format!("edge from missing node {}", e.from)));
        }
    }
    let sources: Vec<usize> = indeg
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&id, _)| id)
        .collect();
    if sources != [t.root] {
        return Err(malformed(format!(
            "the root must be the only node without incoming edges, found {sources:?}"
        )));
    }
    let mut heap: BinaryHeap<Reverse<usize>> = sources.into_iter().map(Reverse).collect();
    let mut order = Vec::with_capacity(t.nodes.len());
    while let Some(Reverse(v)) = heap.pop() {
        order.push(v);
        for e in t.out_edges(v) {
            let d = indeg.get_mut(&e.to).expect("checked");
            *d -= 1;
            if *d == 0 {
                heap.push(Reverse(e.to));
            }
        }
    }
    if order.len() != t.nodes.len() {
        return Err(malformed("the proof graph has a cycle"));
    }
    Ok(order)
}

fn check_structure(t: &Refutation, inst: &LinearSystem) -> Result<Vec<usize>> {
    if t.field != inst.field() || t.n != inst.n() {
        return Err(malformed(
            "proof and instance disagree on the field or the number of variables",
        ));
    }
    if !t.nodes.contains_key(&t.root) {
        return Err(malformed(format!("root {} is not a node", t.root)));
    }
    for e in &t.edges {
        if e.label.n() != t.n || e.label.field() != t.field {
            return Err(malformed(format!(
                "edge {}->{} has a label of the wrong shape",
                e.from, e.to
            )));
        }
    }
    let order = topological_order(t)?;
    let mut indeg: HashMap<usize, usize> = HashMap::new();
    for e in &t.edges {
        *indeg.entry(e.to).or_default() += 1;
    }
    for (&id, node) in &t.nodes {
        let out = t.out_edges(id).count();
        if node.terminal {
            if node.split.is_some() || out > 0 {
                return Err(malformed(format!(
                    "terminal node {id} has a split or outgoing edges"
                )));
            }
        } else {
            if node.split.is_none() {
                return Err(malformed(format!("splitting node {id} has no split label")));
            }
            if out == 0 {
                return Err(malformed(format!(
                    "splitting node {id} has no outgoing edges"
                )));
            }
        }
        match (&node.split, t.kind) {
            (Some(Split::Form(_)), ProofKind::BinDag | ProofKind::BinRegDag) => {
                return Err(malformed(format!(
                    "node {id} splits on a form in a variable-split proof"
                )));
            }
            (Some(Split::Var(j)), _) if *j >= t.n => {
                return Err(malformed(format!(
                    "node {id} splits on variable {j} out of range"
                )));
            }
            (Some(Split::Form(c)), _) if c.len() != t.n => {
                return Err(malformed(format!(
                    "node {id} split form has the wrong length"
                )));
            }
            _ => {}
        }
        if node
            .system
            .iter()
            .any(|q| q.n() != t.n || q.field() != t.field)
        {
            return Err(malformed(format!("node {id} system has the wrong shape")));
        }
        if t.kind == ProofKind::LinTree {
            if !node.system.is_empty() {
                return Err(malformed(format!("tree node {id} carries a system")));
            }
            if indeg.get(&id).copied().unwrap_or(0) > 1 {
                return Err(malformed(format!("node {id} has two parents in a tree")));
            }
        }
    }
    Ok(order)
}

/// Outgoing edges of a splitting node must be labelled `f_v = a`, one per `a` in `f_v({0,1}^n)`.
fn check_edge_coverage(t: &Refutation, v: usize, f: &AffinePoly) -> Option<String> {
    let values = f.cube_values();
    let mut seen = Vec::new();
    for e in t.out_edges(v) {
        if e.label.linear_part() != *f {
            return Some(format!(
                "edge {v}->{}: label {} is not an equation on the split form",
                e.to, e.label
            ));
        }
        let a = e.label.rhs();
        if !values.contains(&a) {
            return Some(format!(
                "edge {v}->{}: value {a} is not attained on the boolean cube",
                e.to
            ));
        }
        if seen.contains(&a) {
            return Some(format!("edge {v}->{}: second edge for value {a}", e.to));
        }
        seen.push(a);
    }
    if seen.len() != values.len() {
        let missing: Vec<_> = values.iter().filter(|a| !seen.contains(a)).collect();
        return Some(format!("node {v}: no edge for values {missing:?}"));
    }
    None
}

pub fn check_refutation(t: &Refutation, inst: &LinearSystem, budget: Budget) -> Result<Verdict> {
    let order = check_structure(t, inst)?;
    match t.kind {
        ProofKind::LinTree => check_tree(t, inst, &order),
        _ => check_dag(t, inst, &order, budget),
    }
}

fn check_tree(t: &Refutation, inst: &LinearSystem, order: &[usize]) -> Result<Verdict> {
    let mut spans: HashMap<usize, AffineSpan> = HashMap::new();
    spans.insert(t.root, inst.span());
    for &v in order {
        let node = &t.nodes[&v];
        let span = spans[&v].clone();
        if node.terminal {
            if !span.is_inconsistent() {
                return Ok(Verdict::Reject(format!(
                    "node {v}: leaf, but the instance with the path equations is solvable over F_p"
                )));
            }
            continue;
        }
        if span.is_inconsistent() {
            return Ok(Verdict::Reject(format!(
                "node {v}: the instance with the path equations is already unsolvable, so it must be a leaf"
            )));
        }
        let f = node.split.as_ref().expect("checked").form(t.field, t.n);
        if let Some(why) = check_edge_coverage(t, v, &f) {
            return Ok(Verdict::Reject(why));
        }
        for e in t.out_edges(v) {
            spans.insert(e.to, span.extend(std::slice::from_ref(&e.label)));
        }
    }
    Ok(Verdict::Accept)
}

fn check_dag(
    t: &Refutation,
    inst: &LinearSystem,
    order: &[usize],
    budget: Budget,
) -> Result<Verdict> {
    if t.nodes[&t.root].system != inst.equations() {
        return Ok(Verdict::Reject(format!(
            "node {}: root system differs from the instance",
            t.root
        )));
    }
    let spans: HashMap<usize, AffineSpan> = t
        .nodes
        .iter()
        .map(|(&id, node)| (id, AffineSpan::new(t.field, t.n, &node.system)))
        .collect();
    for &v in order {
        let node = &t.nodes[&v];
        if let Some(x) = cube::first_zero_one_solution(t.field, t.n, &node.system, budget)? {
            let bits: String = x.iter().map(|&b| if b { '1' } else { '0' }).collect();
            return Ok(Verdict::Reject(format!(
                "node {v}: system is 0-1 satisfiable by {bits}"
            )));
        }
        if node.terminal {
            if !spans[&v].is_inconsistent() {
                return Ok(Verdict::Reject(format!(
                    "node {v}: terminal system is solvable over F_p"
                )));
            }
            continue;
        }
        let split = node.split.as_ref().expect("checked");
        let f = split.form(t.field, t.n);
        if let Some(why) = check_edge_coverage(t, v, &f) {
            return Ok(Verdict::Reject(why));
        }
        for e in t.out_edges(v) {
            let child = &spans[&e.to];
            let ok = match (t.kind, split) {
                (ProofKind::BinRegDag, Split::Var(j)) => {
                    let rho = PartialAssignment::from_pairs(t.n, [(*j, e.label.rhs() == 1)])?;
                    spans[&v].restrict(&rho).contains_span(child)
                }
                _ => {
                    let label = std::slice::from_ref(&e.label);
                    spans[&v].extend(label).contains_span(&child.extend(label))
                }
            };
            if !ok {
                return Ok(Verdict::Reject(format!(
                    "edge {v}->{}: child system is not implied by the parent under {}",
                    e.to, e.label
                )));
            }
        }
    }
    Ok(Verdict::Accept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    fn f5() -> Field {
        Field::new(5).unwrap()
    }

    fn inst(rows: &[(&[u32], u32)], n: usize) -> LinearSystem {
        let eqs: Vec<AffinePoly> = rows
            .iter()
            .map(|(c, a)| AffinePoly::equation(f5(), c, *a))
            .collect();
        LinearSystem::from_equations(f5(), n, &eqs).unwrap()
    }

    #[test]
    fn single_terminal_root() {
        let s = inst(&[(&[0], 1)], 1);
        let t = Refutation::parse(
            "kind binregdag\nroot 0\nnode 0 terminal\neq 0 | 1\n",
            f5(),
            1,
        )
        .unwrap();
        assert_eq!(
            check_refutation(&t, &s, Budget::default()).unwrap(),
            Verdict::Accept
        );
    }

    #[test]
    fn three_node_binregdag() {
        let s = inst(&[(&[1], 3)], 1);
        let text = "kind binregdag\nroot 0\nnode 0\nsplit var 0\neq 1 | 3\nnode 1 terminal\neq 0 | 3\nnode 2 terminal\neq 0 | 2\nedge 0 1 1 | 0\nedge 0 2 1 | 1\n";
        let t = Refutation::parse(text, f5(), 1).unwrap();
        assert!(check_refutation(&t, &s, Budget::default())
            .unwrap()
            .is_accept());
        let bad = text.replace("eq 0 | 2", "eq 0 | 0");
        let t = Refutation::parse(&bad, f5(), 1).unwrap();
        assert!(!check_refutation(&t, &s, Budget::default())
            .unwrap()
            .is_accept());
    }

    #[test]
    fn lintree_on_a_sum() {
        // x1 + x2 = 3 refuted by splitting on x1 + x2 itself
        let s = inst(&[(&[1, 1], 3)], 2);
        let text = "kind lintree\nroot 0\nnode 0\nsplit form 1 1\nnode 1 terminal\nnode 2 terminal\nnode 3 terminal\nedge 0 1 1 1 | 0\nedge 0 2 1 1 | 1\nedge 0 3 1 1 | 2\n";
        let t = Refutation::parse(text, f5(), 2).unwrap();
        assert!(check_refutation(&t, &s, Budget::default())
            .unwrap()
            .is_accept());
        // dropping an edge loses coverage of the value 2
        let short = text
            .replace("edge 0 3 1 1 | 2\n", "")
            .replace("node 3 terminal\n", "");
        let t = Refutation::parse(&short, f5(), 2).unwrap();
        assert!(!check_refutation(&t, &s, Budget::default())
            .unwrap()
            .is_accept());
    }

    #[test]
    fn lindag_split_on_form() {
        let s = inst(&[(&[1, 1], 3)], 2);
        let text = "kind lindag\nroot 0\nnode 0\nsplit form 1 1\neq 1 1 | 3\nnode 1 terminal\neq 0 0 | 3\nnode 2 terminal\neq 0 0 | 1\nnode 3 terminal\neq 0 0 | 2\nedge 0 1 1 1 | 0\nedge 0 2 1 1 | 1\nedge 0 3 1 1 | 2\n";
        let t = Refutation::parse(text, f5(), 2).unwrap();
        assert!(check_refutation(&t, &s, Budget::default())
            .unwrap()
            .is_accept());
    }

    #[test]
    fn structural_errors() {
        let s = inst(&[(&[1], 3)], 1);
        let cyc = "kind bindag\nroot 0\nnode 0\nsplit var 0\neq 1 | 3\nnode 1\nsplit var 0\nedge 0 1 1 | 0\nedge 1 1 1 | 0\n";
        let t = Refutation::parse(cyc, f5(), 1).unwrap();
        assert!(matches!(
            check_refutation(&t, &s, Budget::default()),
            Err(Error::MalformedProof(_))
        ));
        let form = "kind binregdag\nroot 0\nnode 0\nsplit form 1\neq 1 | 3\nnode 1 terminal\nedge 0 1 1 | 0\n";
        let t = Refutation::parse(form, f5(), 1).unwrap();
        assert!(matches!(
            check_refutation(&t, &s, Budget::default()),
            Err(Error::MalformedProof(_))
        ));
    }
}
