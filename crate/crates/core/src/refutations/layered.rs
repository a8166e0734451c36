use std::collections::{BTreeMap, HashMap};

use super::types::{Edge, NodeRecord, ProofKind, Refutation, Split};
use crate::error::{Error, Result};
use crate::gf::{AffinePoly, Budget, PartialAssignment, Restrict};
use crate::instances::{zero_one_sat, LinearSystem};

/// A layered refutation together with the number of distinct systems per layer.
#[derive(Clone, Debug)]
pub struct LayeredBuild {
    pub refutation: Refutation,
    pub layer_sizes: Vec<usize>,
}

/// Split on the variables in `order`; layer `i` holds the distinct systems
/// `(A x = b)|_{x_{order[0]} <- a_0, ..., x_{order[i-1]} <- a_{i-1}}`.
/// A node is terminal as soon as its system is unsolvable over F_p.
pub fn build_layered_refutation(
    inst: &LinearSystem,
    order: &[usize],
    budget: Budget,
) -> Result<LayeredBuild> {
    let n = inst.n();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return Err(Error::PreconditionFailed(
            "variable order must be a permutation of 0..n".into(),
        ));
    }
    if zero_one_sat(inst, budget)?.is_some() {
        return Err(Error::NotUnsat);
    }
    let field = inst.field();

    let mut nodes: BTreeMap<usize, NodeRecord> = BTreeMap::new();
    let mut edges = Vec::new();
    let mut layer: Vec<(usize, Vec<AffinePoly>)> = vec![(0, inst.equations())];
    let mut layer_sizes = vec![1];
    let mut next_id = 1;

    for &var in order {
        let mut next: Vec<(usize, Vec<AffinePoly>)> = Vec::new();
        let mut index: HashMap<Vec<AffinePoly>, usize> = HashMap::new();
        for (id, system) in layer {
            let inconsistent = LinearSystem::from_equations(field, n, &system)?.is_inconsistent();
            if inconsistent {
                nodes.insert(
                    id,
                    NodeRecord {
                        terminal: true,
                        split: None,
                        system,
                    },
                );
                continue;
            }
            for b in [false, true] {
                let rho = PartialAssignment::from_pairs(n, [(var, b)])?;
                let child = system.restrict(&rho);
                let to = *index.entry(child.clone()).or_insert_with(|| {
                    let id = next_id;
                    next_id += 1;
                    next.push((id, child));
                    id
                });
                edges.push(Edge {
                    from: id,
                    to,
                    label: AffinePoly::variable(field, n, var).shift_constant(field.neg(b as u32)),
                });
            }
            nodes.insert(
                id,
                NodeRecord {
                    terminal: false,
                    split: Some(Split::Var(var)),
                    system,
                },
            );
        }
        layer_sizes.push(next.len());
        layer = next;
        if layer.is_empty() {
            break;
        }
    }
    // after all variables are fixed every remaining system is 0 = c with some c != 0
    for (id, system) in layer {
        nodes.insert(
            id,
            NodeRecord {
                terminal: true,
                split: None,
                system,
            },
        );
    }
    while layer_sizes.last() == Some(&0) {
        layer_sizes.pop();
    }
    Ok(LayeredBuild {
        refutation: Refutation {
            kind: ProofKind::BinRegDag,
            field,
            n,
            root: 0,
            nodes,
            edges,
        },
        layer_sizes,
    })
}
