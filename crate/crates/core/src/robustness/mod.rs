//! Exhaustive `(s, r)`-robustness profiles of tiny instances and the
//! sub-assignment witnesses read off a path through a regular dag refutation.
//!
//! Condition 3 ("`G` depends on every variable of `rho`") is evaluated on the
//! subspace: the supports of its elements must cover `supp(rho)`.

mod path;
mod profile;

pub use path::{path_witness, PathWitness};
pub use profile::{
    conjecture_probe, format_rho, probe_csv, restricted_dim, robustness_profile, subspace_count,
    subspaces, verify_conditions, ProbeRow, ProfileRow, RValue, RobustnessProfile, Witness,
};

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::profile::{assignments, supports};
    use super::*;
    use crate::error::Error;
    use crate::gf::{AffinePoly, AffineSpan, Budget, Field, Residue};
    use crate::instances::{gen_instance, GenParams, GeneratorKind, LinearSystem};
    use crate::refutations::build_layered_refutation;

    fn f5() -> Field {
        Field::new(5).unwrap()
    }

    fn single(coeffs: &[Residue], rhs: Residue) -> LinearSystem {
        LinearSystem::from_equations(
            f5(),
            coeffs.len(),
            &[AffinePoly::equation(f5(), coeffs, rhs)],
        )
        .unwrap()
    }

    #[test]
    fn galois_numbers() {
        assert_eq!(subspace_count(5, 0), 1);
        assert_eq!(subspace_count(5, 2), 8);
        assert_eq!(subspace_count(5, 3), 64);
        assert_eq!(subspaces(f5(), 3, Budget::DEFAULT).unwrap().len(), 64);
        let f7 = Field::new(7).unwrap();
        assert_eq!(
            subspaces(f7, 3, Budget::DEFAULT).unwrap().len() as u128,
            subspace_count(7, 3)
        );
    }

    #[test]
    fn single_equation_profile() {
        let inst = single(&[1], 3);
        let prof = robustness_profile(&inst, 1, Budget::DEFAULT).unwrap();
        assert_eq!(prof.rows[0].r, RValue::Finite(0));
        let w = prof.rows[0].witness.as_ref().unwrap();
        assert!(w.rho.is_empty());
        assert_eq!(w.g, inst.span());
        for row in &prof.rows {
            assert!(prof.witness_verified(row));
        }
    }

    #[test]
    fn distance_one_gives_small_r() {
        // A = [1 0; 0 1] at b = (3, 0) has distance 1
        let f = f5();
        let inst = LinearSystem::from_equations(
            f,
            2,
            &[
                AffinePoly::equation(f, &[1, 0], 3),
                AffinePoly::equation(f, &[0, 1], 0),
            ],
        )
        .unwrap();
        let prof = robustness_profile(&inst, 2, Budget::DEFAULT).unwrap();
        assert_eq!(prof.d_a, 1);
        for row in &prof.rows[1..] {
            assert!(!row.r.at_least(2), "{row:?}");
            assert!(prof.witness_verified(row));
        }
    }

    /// Subspaces grown one vector at a time from the zero space, deduplicated
    /// by canonical basis; conditions checked by direct cube scans.
    fn reference_profile(inst: &LinearSystem, s_max: usize) -> Vec<Option<usize>> {
        let f = inst.field();
        let n = inst.n();
        let span = inst.span();
        let mut elements = Vec::new();
        span.for_each_element(Budget::DEFAULT, |_, t| {
            elements.push(AffinePoly::from_terms(f, t.to_vec()).unwrap());
            std::ops::ControlFlow::Continue(())
        })
        .unwrap();
        let mut all: HashSet<AffineSpan> = HashSet::new();
        let mut layer = vec![AffineSpan::zero(f, n)];
        all.insert(layer[0].clone());
        while !layer.is_empty() {
            let mut next = Vec::new();
            for g in &layer {
                for e in elements.iter().filter(|e| !g.contains(e)) {
                    let h = g.extend(std::slice::from_ref(e));
                    if all.insert(h.clone()) {
                        next.push(h);
                    }
                }
            }
            layer = next;
        }
        (0..=s_max)
            .map(|s| {
                let mut best: Option<usize> = None;
                for cols in supports(n, s) {
                    for rho in assignments(n, &cols) {
                        for g in &all {
                            let depends = cols.iter().all(|&j| {
                                elements.iter().any(|e| g.contains(e) && e.coeff(j) != 0)
                            });
                            if depends && verify_conditions(inst, &rho, g) {
                                let d = restricted_dim(g, &cols);
                                best = Some(best.map_or(d, |b| b.min(d)));
                            }
                        }
                    }
                }
                best
            })
            .collect()
    }

    #[test]
    fn profile_matches_reference_enumeration() {
        for seed in 0..2 {
            let e = gen_instance(
                GenParams {
                    kind: GeneratorKind::RandomDistance,
                    p: 5,
                    n: 5,
                    k: 3,
                    min_d: 1,
                    seed,
                },
                Budget::DEFAULT,
            )
            .unwrap();
            let prof = robustness_profile(&e.system, 3, Budget::DEFAULT).unwrap();
            let reference = reference_profile(&e.system, 3);
            for (row, r) in prof.rows.iter().zip(&reference) {
                let expect = r.map_or(RValue::Infinite, RValue::Finite);
                assert_eq!(row.r, expect, "seed {seed} s {}", row.s);
                assert!(prof.witness_verified(row));
                assert!(prof.bound_consistent(row));
            }
        }
    }

    #[test]
    fn path_witness_on_two_variables() {
        let inst = single(&[1, 1], 3);
        let t = build_layered_refutation(&inst, &[0, 1], Budget::DEFAULT)
            .unwrap()
            .refutation;
        let w = path_witness(&t, &inst, &[false, false], 1, Budget::DEFAULT).unwrap();
        assert_eq!(
            t.nodes[&w.node].system,
            vec![AffinePoly::equation(f5(), &[0, 1], 3)]
        );
        assert_eq!(format_rho(&w.rho_hat), "x1=0");
        assert_eq!(w.preimage, inst.equations());
        assert!(w.verify(&t, &inst));

        let root = path_witness(&t, &inst, &[true, false], 0, Budget::DEFAULT).unwrap();
        assert_eq!(root.node, t.root);
        assert!(root.rho_hat.is_empty());
        assert_eq!(root.preimage, inst.equations());

        assert!(matches!(
            path_witness(&t, &inst, &[false, false], 3, Budget::DEFAULT),
            Err(Error::NeverReached)
        ));
    }

    #[test]
    fn probe_counts_are_bounded_by_k() {
        let e = gen_instance(
            GenParams {
                kind: GeneratorKind::ReedSolomon,
                p: 5,
                n: 5,
                k: 3,
                min_d: 1,
                seed: 0,
            },
            Budget::DEFAULT,
        )
        .unwrap();
        let rows = conjecture_probe(&e.system, 1, Budget::DEFAULT).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r.min_eqs >= 1 && r.min_eqs <= r.k));
        assert!(probe_csv(1, &rows).starts_with("s,rho,min_eqs,k\n"));
    }

    #[test]
    fn path_witnesses_verify_on_random_paths() {
        use rand::{Rng, SeedableRng};
        let e = gen_instance(
            GenParams {
                kind: GeneratorKind::RandomDistance,
                p: 5,
                n: 6,
                k: 3,
                min_d: 2,
                seed: 7,
            },
            Budget::DEFAULT,
        )
        .unwrap();
        let order: Vec<usize> = (0..6).collect();
        let t = build_layered_refutation(&e.system, &order, Budget::DEFAULT)
            .unwrap()
            .refutation;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut found = 0;
        for _ in 0..20 {
            let x: Vec<bool> = (0..6).map(|_| rng.gen()).collect();
            for s in 0..=3 {
                match path_witness(&t, &e.system, &x, s, Budget::DEFAULT) {
                    Ok(w) => {
                        assert_eq!(w.rho_hat.len(), s);
                        assert!(w.verify(&t, &e.system));
                        found += 1;
                    }
                    Err(Error::NeverReached) => {}
                    Err(other) => panic!("{other}"),
                }
            }
        }
        assert!(found > 0);
    }
}
