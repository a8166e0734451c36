//! Small hand-built derivations.

use super::types::{Calculus, Derivation, Justification};
use crate::gf::{AffinePoly, Field};
use crate::instances::LinearSystem;

/// Res(lin) refutation of `x1 = 3` over F_5: resolve the boolean axiom twice
/// against the input and simplify the constants away.
pub fn reslin_single_equation() -> (LinearSystem, Derivation) {
    let f = Field::new(5).expect("prime");
    let x_minus_3 = AffinePoly::equation(f, &[1], 3);
    let inst = LinearSystem::from_equations(f, 1, std::slice::from_ref(&x_minus_3)).expect("shape");
    let x = AffinePoly::variable(f, 1, 0);
    let x_minus_1 = AffinePoly::equation(f, &[1], 1);
    let c = |v| AffinePoly::constant_poly(f, 1, v);

    let mut d = Derivation::new(Calculus::ResLin, f, 1);
    let ax = d.push(vec![x, x_minus_1.clone()], Justification::Axiom);
    let input = d.push(vec![x_minus_3], Justification::Input(0));
    // x + 4(x - 3) = 3
    let r1 = d.push(
        vec![x_minus_1.clone(), c(3)],
        Justification::Res {
            i: ax,
            li: 0,
            j: input,
            lj: 0,
            alpha: 1,
            beta: 4,
        },
    );
    let s1 = d.push(vec![x_minus_1], Justification::Simp(r1));
    // (x - 1) + 4(x - 3) = 2
    let r2 = d.push(
        vec![c(2)],
        Justification::Res {
            i: s1,
            li: 0,
            j: input,
            lj: 0,
            alpha: 1,
            beta: 4,
        },
    );
    d.push(vec![], Justification::Simp(r2));
    (inst, d)
}

/// Res(lin!=) derivation of `x1 + x2 != 3` over F_5 from the axioms: resolve on
/// `x1` over all five values, covering `x1 = 0, 1` by linear combinations of
/// `x2 != 3` and `x2 != 2`.
pub fn reslin_neq_sum() -> (LinearSystem, Derivation) {
    let f = Field::new(5).expect("prime");
    let eq = |c: &[u32], a| AffinePoly::equation(f, c, a);
    let inst = LinearSystem::from_equations(f, 2, &[eq(&[1, 1], 3)]).expect("shape");

    let mut d = Derivation::new(Calculus::ResLinNeq, f, 2);
    let a3 = d.push(vec![eq(&[0, 1], 3)], Justification::Axiom);
    let v0 = d.push(
        vec![eq(&[1, 1], 3), eq(&[1, 0], 0)],
        Justification::LinComb {
            k: a3,
            l: 0,
            g: vec![1, 0],
            b: 0,
        },
    );
    let a2 = d.push(vec![eq(&[0, 1], 2)], Justification::Axiom);
    let v1 = d.push(
        vec![eq(&[1, 1], 3), eq(&[1, 0], 1)],
        Justification::LinComb {
            k: a2,
            l: 0,
            g: vec![1, 0],
            b: 1,
        },
    );
    let v2 = d.push(vec![eq(&[1, 0], 2)], Justification::Axiom);
    let v3 = d.push(vec![eq(&[1, 0], 3)], Justification::Axiom);
    let v4 = d.push(vec![eq(&[1, 0], 4)], Justification::Axiom);
    d.push(
        vec![eq(&[1, 1], 3), eq(&[1, 1], 3)],
        Justification::ResNeq(vec![(v0, 1), (v1, 1), (v2, 0), (v3, 0), (v4, 0)]),
    );
    (inst, d)
}
