use super::types::{Refutation, Split};

/// Single semantic edits of an accepted proof, each of which should be
/// rejected: bump one right-hand side at a splitting node, bump one edge
/// value, or move one variable split to the next variable.
///
/// Right-hand sides at terminal nodes are left alone: a terminal child of a
/// node whose restriction is already unsolvable may carry any unsolvable
/// system, so such an edit can legitimately still be a refutation.
pub fn mutations(t: &Refutation) -> Vec<(String, Refutation)> {
    let mut out = Vec::new();
    let field = t.field;
    for (&id, node) in &t.nodes {
        if node.terminal {
            continue;
        }
        for i in 0..node.system.len() {
            let mut m = t.clone();
            let q = &mut m.nodes.get_mut(&id).expect("present").system[i];
            *q = q.shift_constant(field.neg(1));
            out.push((format!("node {id} equation {i}: right-hand side + 1"), m));
        }
        if let Some(Split::Var(j)) = node.split {
            if t.n > 1 {
                let mut m = t.clone();
                m.nodes.get_mut(&id).expect("present").split = Some(Split::Var((j + 1) % t.n));
                out.push((
                    format!("node {id}: split variable {j} -> {}", (j + 1) % t.n),
                    m,
                ));
            }
        }
    }
    for i in 0..t.edges.len() {
        let mut m = t.clone();
        let e = &mut m.edges[i];
        e.label = e.label.shift_constant(field.neg(1));
        out.push((
            format!("edge {}->{}: value + 1", t.edges[i].from, t.edges[i].to),
            m,
        ));
    }
    out
}
