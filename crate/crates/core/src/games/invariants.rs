//! Independent checks of the two invariants the Delayer strategy maintains:
//! the truncated span of `F + G` stays 0-1 satisfiable, and it implies every
//! equation added without branching.

use std::ops::ControlFlow;

use super::engine::{play_lintrees_observed, GameConfig, Transcript};
use super::position::LinPosition;
use super::strategy::{LinDelayer, LinProver};
use crate::error::Result;
use crate::gf::{
    cube, for_each_combination, AffinePoly, AffineSpan, Budget, FMatrix, Field, Residue,
};
use crate::instances::LinearSystem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantRecord {
    /// Rounds played before this position.
    pub round: usize,
    pub branchings: usize,
    pub truncated_sat: bool,
    /// Every forced equation holds on every 0-1 model of the truncated span.
    pub implied: bool,
    /// Every forced equation is `v + r` with `v` vanishing on those models and
    /// `r` in `P`: the weaker reading where the reduction remainder is dropped.
    pub implied_mod_span: bool,
    /// Whether the Delayer fell back on the move made from this position;
    /// `None` for the final position.
    pub next_fallback: Option<bool>,
}

impl InvariantRecord {
    /// Both invariants, with implication read modulo `<F + G>`.
    pub fn holds(&self) -> bool {
        self.truncated_sat && self.implied_mod_span
    }

    pub fn holds_literal(&self) -> bool {
        self.truncated_sat && self.implied
    }

    /// The Delayer applied its rule (not a fallback) from this position.
    pub fn rule_applied(&self) -> bool {
        self.next_fallback == Some(false)
    }
}

/// Elements of `span(gens)` of weight at most `tau`, one per projective class,
/// found by direct enumeration of the combinations of `gens`' echelon rows.
fn narrow_elements(
    field: Field,
    n: usize,
    gens: &[AffinePoly],
    tau: usize,
    budget: Budget,
) -> Result<Vec<AffinePoly>> {
    let rows: Vec<Vec<Residue>> = gens.iter().map(|g| g.terms().to_vec()).collect();
    let (m, rank) = FMatrix::from_rows(field, n + 1, &rows)?.rref();
    let basis: Vec<Vec<Residue>> = (0..rank).map(|i| m.row(i).to_vec()).collect();
    let refs: Vec<&[Residue]> = basis.iter().map(|r| r.as_slice()).collect();
    let mut out = Vec::new();
    for_each_combination(field, &refs, n + 1, budget, |coords, terms| {
        // keep one representative per scalar class: first nonzero coordinate is 1
        if coords.iter().find(|&&c| c != 0) == Some(&1)
            && terms[..n].iter().filter(|&&c| c != 0).count() <= tau
        {
            out.push(AffinePoly::from_terms(field, terms.to_vec()).expect("reduced"));
        }
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

pub fn check_position(
    pos: &LinPosition,
    tau: usize,
    round: usize,
    budget: Budget,
) -> Result<InvariantRecord> {
    let field = pos.field;
    let n = pos.n;
    let mut gens = pos.instance.clone();
    gens.extend(pos.branching());
    let narrow = narrow_elements(field, n, &gens, tau, budget)?;
    let models = cube::all_zero_one_solutions(field, n, &narrow, budget)?;
    let forced = pos.forced();
    let implied = forced
        .iter()
        .all(|h| models.iter().all(|x| h.eval_bool(x) == 0));
    let implied_mod_span = if models.is_empty() {
        true
    } else {
        let rows: Vec<Vec<Residue>> = models
            .iter()
            .map(|x| x.iter().map(|&b| b as Residue).chain([1]).collect())
            .collect();
        let vanishing: Vec<AffinePoly> = FMatrix::from_rows(field, n + 1, &rows)?
            .nullspace()
            .into_iter()
            .map(|v| AffinePoly::from_terms(field, v).expect("reduced"))
            .collect();
        let mut all = vanishing;
        all.extend(gens.iter().cloned());
        let span = AffineSpan::new(field, n, &all);
        forced.iter().all(|h| span.contains(h))
    };
    Ok(InvariantRecord {
        round,
        branchings: pos.branchings(),
        truncated_sat: !models.is_empty(),
        implied,
        implied_mod_span,
        next_fallback: None,
    })
}

/// Play a LinTrees game and check both invariants at every position reached
/// before the first fallback.
pub fn play_checked(
    inst: &LinearSystem,
    prover: &mut dyn LinProver,
    delayer: &mut dyn LinDelayer,
    tau: usize,
    cfg: GameConfig,
) -> Result<(Transcript, Vec<InvariantRecord>)> {
    let mut records = Vec::new();
    let t = play_lintrees_observed(inst, prover, delayer, cfg, &mut |pos, fell_back| {
        if !fell_back {
            records.push(check_position(pos, tau, pos.added.len(), cfg.budget)?);
        }
        Ok(())
    })?;
    for r in &mut records {
        r.next_fallback = t.rounds.get(r.round).map(|x| x.fallback);
    }
    Ok((t, records))
}
