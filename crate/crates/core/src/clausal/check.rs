use super::types::{Calculus, Clause, Derivation, Justification};
use crate::gf::{AffinePoly, Field};
use crate::instances::LinearSystem;
use crate::refutations::Verdict;

fn sorted(c: &[AffinePoly]) -> Vec<AffinePoly> {
    let mut v = c.to_vec();
    v.sort();
    v
}

fn same_multiset(a: &[AffinePoly], b: &[AffinePoly]) -> bool {
    a.len() == b.len() && sorted(a) == sorted(b)
}

/// `big` minus `small` as multisets, if `small` is contained in `big`.
fn multiset_minus(big: &[AffinePoly], small: &[AffinePoly]) -> Option<Vec<AffinePoly>> {
    let mut rest = big.to_vec();
    for q in small {
        let pos = rest.iter().position(|r| r == q)?;
        rest.swap_remove(pos);
    }
    Some(rest)
}

/// The clause with its `l`-th literal removed.
fn without(c: &Clause, l: usize) -> Option<(AffinePoly, Clause)> {
    if l >= c.len() {
        return None;
    }
    let mut rest = c.clone();
    let lit = rest.remove(l);
    Some((lit, rest))
}

/// Boolean axioms `x_i = 0 or x_i = 1`.
fn is_reslin_axiom(c: &Clause, field: Field, n: usize) -> bool {
    (0..n).any(|i| {
        let x = AffinePoly::variable(field, n, i);
        same_multiset(c, &[x.clone(), x.shift_constant(field.neg(1))])
    })
}

/// Boolean axioms `x_i != c` for `2 <= c < p`, and truth axioms `0 != c` for `c != 0`.
fn is_reslin_neq_axiom(c: &Clause) -> bool {
    let [q] = c.as_slice() else { return false };
    match q.support().as_slice() {
        [] => q.constant() != 0,
        [j] => q.coeff(*j) == 1 && q.rhs() >= 2,
        _ => false,
    }
}

fn premise(d: &Derivation, at: usize, k: usize) -> Result<&Clause, String> {
    if k >= at {
        Err(format!("line {at}: cites line {k}, which is not earlier"))
    } else {
        Ok(&d.lines[k].clause)
    }
}

fn literal(c: &Clause, l: usize, at: usize, k: usize) -> Result<(AffinePoly, Clause), String> {
    without(c, l).ok_or_else(|| format!("line {at}: line {k} has no literal {l}"))
}

fn check_line(d: &Derivation, at: usize, inputs: &[Clause]) -> Result<(), String> {
    let field = d.field;
    let line = &d.lines[at];
    let concl = &line.clause;
    if concl.iter().any(|q| q.n() != d.n) {
        return Err(format!(
            "line {at}: literal over the wrong number of variables"
        ));
    }
    let fail = |what: &str| Err(format!("line {at}: {what}"));
    match (&line.by, d.calculus) {
        (Justification::Axiom, Calculus::ResLin) => {
            if !is_reslin_axiom(concl, field, d.n) {
                return fail("not a boolean axiom x_i = 0 or x_i = 1");
            }
        }
        (Justification::Axiom, Calculus::ResLinNeq) => {
            if !is_reslin_neq_axiom(concl) {
                return fail("not an axiom x_i != c (c >= 2) or 0 != c (c != 0)");
            }
        }
        (Justification::Input(j), _) => match inputs.get(*j) {
            Some(c) if same_multiset(c, concl) => {}
            Some(_) => return fail(&format!("clause differs from input {j}")),
            None => return fail(&format!("no input clause {j}")),
        },
        (
            &Justification::Res {
                i,
                li,
                j,
                lj,
                alpha,
                beta,
            },
            Calculus::ResLin,
        ) => {
            let (f, c) = literal(premise(d, at, i)?, li, at, i)?;
            let (g, dd) = literal(premise(d, at, j)?, lj, at, j)?;
            let mut expect = c;
            expect.extend(dd);
            expect.push(f.scale(alpha).add_scaled(&g, beta));
            if !same_multiset(&expect, concl) {
                return fail("conclusion is not the cited resolvent");
            }
        }
        (Justification::ResNeq(pairs), Calculus::ResLinNeq) => {
            if pairs.len() != field.p() as usize {
                return fail(&format!(
                    "resolution needs {} premises, one per residue, got {}",
                    field.p(),
                    pairs.len()
                ));
            }
            let mut expect = Vec::new();
            let mut seen = vec![false; field.p() as usize];
            let mut form: Option<AffinePoly> = None;
            for &(k, l) in pairs {
                let (lit, rest) = literal(premise(d, at, k)?, l, at, k)?;
                let f = lit.linear_part();
                if form.get_or_insert_with(|| f.clone()) != &f {
                    return fail("resolved literals are not all on the same form");
                }
                let a = lit.rhs() as usize;
                if seen[a] {
                    return fail(&format!("value {a} is resolved twice"));
                }
                seen[a] = true;
                expect.extend(rest);
            }
            if !same_multiset(&expect, concl) {
                return fail("conclusion is not the union of the side clauses");
            }
        }
        (Justification::Res { .. }, Calculus::ResLinNeq)
        | (Justification::ResNeq(_), Calculus::ResLin) => {
            return fail("resolution parameters do not match the calculus");
        }
        (&Justification::Simp(k), calc) => {
            let prem = premise(d, at, k)?;
            let removed = multiset_minus(prem, concl);
            let ok = match removed.as_deref() {
                Some([q]) => match calc {
                    Calculus::ResLin => q.is_contradiction(),
                    Calculus::ResLinNeq => q.is_zero(),
                },
                _ => false,
            };
            if !ok {
                return fail(match calc {
                    Calculus::ResLin => {
                        "simplification must drop exactly one literal a = 0 with a != 0"
                    }
                    Calculus::ResLinNeq => "simplification must drop exactly one literal 0 != 0",
                });
            }
        }
        (&Justification::Weak(k), Calculus::ResLin) => {
            let prem = premise(d, at, k)?;
            match multiset_minus(concl, prem) {
                Some(extra) if extra.len() == 1 => {}
                _ => return fail("weakening must add exactly one literal"),
            }
        }
        (Justification::Weak(_), Calculus::ResLinNeq) => {
            return fail("weakening is not a rule of this calculus");
        }
        (Justification::LinComb { k, l, g, b }, Calculus::ResLinNeq) => {
            if g.len() != d.n {
                return fail("g has the wrong number of coefficients");
            }
            let (lit, mut expect) = literal(premise(d, at, *k)?, *l, at, *k)?;
            let g = AffinePoly::equation(field, g, *b);
            expect.push(lit.add(&g));
            expect.push(g);
            if !same_multiset(&expect, concl) {
                return fail("conclusion is not the cited linear combination");
            }
        }
        (Justification::LinComb { .. }, Calculus::ResLin) => {
            return fail("linear combination is not a rule of this calculus");
        }
    }
    Ok(())
}

fn check_lines(d: &Derivation, inputs: &[Clause]) -> Option<String> {
    (0..d.lines.len()).find_map(|at| check_line(d, at, inputs).err())
}

/// A Res(lin) refutation of `inputs`: every line is justified and the last is empty.
pub fn check_reslin(d: &Derivation, inputs: &[Clause]) -> Verdict {
    if d.calculus != Calculus::ResLin {
        return Verdict::Reject("derivation is not written in Res(lin)".into());
    }
    if let Some(why) = check_lines(d, inputs) {
        return Verdict::Reject(why);
    }
    match d.lines.last() {
        Some(l) if l.clause.is_empty() => Verdict::Accept,
        _ => Verdict::Reject("last line is not the empty clause".into()),
    }
}

/// The equations of `inst` as unit clauses, the inputs of a Res(lin) refutation.
pub fn unit_clauses(inst: &LinearSystem) -> Vec<Clause> {
    inst.equations().into_iter().map(|q| vec![q]).collect()
}

/// `OR_{b != a} f != b` for each equation `f = a` of `inst`.
pub fn instance_clauses(inst: &LinearSystem) -> Vec<Clause> {
    let field = inst.field();
    inst.equations()
        .into_iter()
        .map(|q| {
            (1..field.p())
                .map(|s| q.shift_constant(field.neg(s)))
                .collect()
        })
        .collect()
}

/// A Res(lin!=) derivation of `OR_j f_j != a_j` over the equations of `inst`.
///
/// Every literal of the last line must be one of the target literals. With
/// `allow_instance_clauses`, `input j` may cite the clause `OR_{b != a_j} f_j != b`.
pub fn check_reslin_neq(
    d: &Derivation,
    inst: &LinearSystem,
    allow_instance_clauses: bool,
) -> Verdict {
    if d.calculus != Calculus::ResLinNeq {
        return Verdict::Reject("derivation is not written in Res(lin!=)".into());
    }
    let inputs = if allow_instance_clauses {
        instance_clauses(inst)
    } else {
        Vec::new()
    };
    if let Some(why) = check_lines(d, &inputs) {
        return Verdict::Reject(why);
    }
    let target = inst.equations();
    match d.lines.last() {
        Some(l) if l.clause.iter().all(|q| target.contains(q)) => Verdict::Accept,
        _ => Verdict::Reject("last line is not a subclause of the negated instance".into()),
    }
}
