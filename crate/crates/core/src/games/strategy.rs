use std::collections::VecDeque;
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::params::StrategyParams;
use super::position::{LinPosition, ResPosition};
use crate::error::{Error, Result};
use crate::gf::{cube, AffinePoly, Budget, Residue};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinDecision {
    Choose(Residue),
    Branch(Residue, Residue),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DelayerMove {
    pub decision: LinDecision,
    /// The strategy could not apply its rule and played a fallback value.
    pub fallback: bool,
}

pub trait LinProver {
    /// The linear form to query next (zero constant).
    fn propose(&mut self, pos: &LinPosition) -> Result<AffinePoly>;
    /// Which of the two offered values to take at a branching point.
    fn pick(
        &mut self,
        pos: &LinPosition,
        l: &AffinePoly,
        a1: Residue,
        a2: Residue,
    ) -> Result<Residue>;
}

pub trait LinDelayer {
    fn decide(&mut self, pos: &LinPosition, l: &AffinePoly) -> Result<DelayerMove>;
}

/// Prover move `h != c`, `u = f - a`, `w = g - b` with `u + w = h - c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResMove {
    pub h: usize,
    pub u: AffinePoly,
    pub w: AffinePoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResDecision {
    First,
    Second,
    Branch,
}

pub trait ResProver {
    fn propose(&mut self, pos: &ResPosition) -> Result<ResMove>;
    /// `true` takes `u`, `false` takes `w`.
    fn pick(&mut self, pos: &ResPosition, mv: &ResMove) -> Result<bool>;
}

pub trait ResDelayer {
    /// The decision and whether it was a fallback.
    fn decide(&mut self, pos: &ResPosition, mv: &ResMove) -> Result<(ResDecision, bool)>;
    /// Told which inequality was added (`true` for `u`), after a choice or a branch.
    fn resolved(&mut self, _pos: &ResPosition, _mv: &ResMove, _took_first: bool) -> Result<()> {
        Ok(())
    }
}

/// A nonzero form with random support and coefficients; prefers forms not
/// already determined by the position.
pub struct RandomProver {
    rng: ChaCha8Rng,
}

impl RandomProver {
    pub fn new(seed: u64) -> Self {
        RandomProver {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn random_form(&mut self, field: crate::gf::Field, n: usize) -> AffinePoly {
        let w = self.rng.gen_range(1..=n.max(1)).min(n);
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..w {
            let j = self.rng.gen_range(i..n);
            idx.swap(i, j);
        }
        let mut c = vec![0; n];
        for &j in &idx[..w] {
            c[j] = self.rng.gen_range(1..field.p());
        }
        AffinePoly::form(field, &c)
    }
}

impl LinProver for RandomProver {
    fn propose(&mut self, pos: &LinPosition) -> Result<AffinePoly> {
        let linear = crate::gf::AffineSpan::new(
            pos.field,
            pos.n,
            &pos.all()
                .iter()
                .map(AffinePoly::linear_part)
                .collect::<Vec<_>>(),
        );
        let mut l = self.random_form(pos.field, pos.n);
        for _ in 0..32 {
            if !linear.contains(&l) {
                break;
            }
            l = self.random_form(pos.field, pos.n);
        }
        Ok(l)
    }

    fn pick(
        &mut self,
        _pos: &LinPosition,
        _l: &AffinePoly,
        a1: Residue,
        a2: Residue,
    ) -> Result<Residue> {
        Ok(if self.rng.gen_bool(0.5) { a1 } else { a2 })
    }
}

/// Queries the first variable whose value in `{0, 1}` is not yet implied
/// by the position; takes the smaller value at branching points.
pub struct GreedyProver;

impl LinProver for GreedyProver {
    fn propose(&mut self, pos: &LinPosition) -> Result<AffinePoly> {
        let span = pos.span();
        let f = pos.field;
        let j = (0..pos.n)
            .find(|&j| {
                let x = AffinePoly::variable(f, pos.n, j);
                !span.contains(&x) && !span.contains(&x.shift_constant(f.neg(1)))
            })
            .unwrap_or(0);
        Ok(AffinePoly::variable(f, pos.n, j))
    }

    fn pick(
        &mut self,
        _pos: &LinPosition,
        _l: &AffinePoly,
        a1: Residue,
        a2: Residue,
    ) -> Result<Residue> {
        Ok(a1.min(a2))
    }
}

/// Replays a fixed list of forms and branch picks.
pub struct ScriptedProver {
    forms: VecDeque<Vec<Residue>>,
    picks: VecDeque<Residue>,
}

impl ScriptedProver {
    pub fn new(forms: Vec<Vec<Residue>>, picks: Vec<Residue>) -> Self {
        ScriptedProver {
            forms: forms.into(),
            picks: picks.into(),
        }
    }
}

impl LinProver for ScriptedProver {
    fn propose(&mut self, pos: &LinPosition) -> Result<AffinePoly> {
        let c = self
            .forms
            .pop_front()
            .ok_or_else(|| Error::IllegalMove("script has no more forms".into()))?;
        if c.len() != pos.n {
            return Err(Error::IllegalMove(
                "scripted form has the wrong length".into(),
            ));
        }
        Ok(AffinePoly::form(pos.field, &c))
    }

    fn pick(
        &mut self,
        _pos: &LinPosition,
        _l: &AffinePoly,
        a1: Residue,
        a2: Residue,
    ) -> Result<Residue> {
        Ok(self.picks.pop_front().unwrap_or(a1.min(a2)))
    }
}

/// The Delayer that always proposes a split of the chosen inequality into
/// the first summand.
pub struct FirstDelayer;

impl ResDelayer for FirstDelayer {
    fn decide(&mut self, _pos: &ResPosition, _mv: &ResMove) -> Result<(ResDecision, bool)> {
        Ok((ResDecision::First, false))
    }
}

/// Random prover for the tree-like Res(lin) game. It splits a random
/// inequality of the position, aiming the first part at an instance
/// equation, a boolean endgame literal, or a random polynomial.
pub struct RandomResProver {
    rng: ChaCha8Rng,
}

impl RandomResProver {
    pub fn new(seed: u64) -> Self {
        RandomResProver {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl ResProver for RandomResProver {
    fn propose(&mut self, pos: &ResPosition) -> Result<ResMove> {
        let f = pos.field;
        let h = self.rng.gen_range(0..pos.inequalities.len());
        let target = &pos.inequalities[h];
        let u = match self.rng.gen_range(0..3) {
            0 if !pos.instance.is_empty() => {
                let q = &pos.instance[self.rng.gen_range(0..pos.instance.len())];
                q.scale(self.rng.gen_range(1..f.p()))
            }
            1 | 0 => {
                let x = AffinePoly::variable(f, pos.n, self.rng.gen_range(0..pos.n));
                x.shift_constant(f.neg(self.rng.gen_range(0..2)))
            }
            _ => {
                let mut terms: Vec<Residue> =
                    (0..=pos.n).map(|_| self.rng.gen_range(0..f.p())).collect();
                terms[pos.n] = self.rng.gen_range(0..f.p());
                AffinePoly::from_terms(f, terms).expect("reduced")
            }
        };
        let w = target.sub(&u);
        Ok(ResMove { h, u, w })
    }

    fn pick(&mut self, _pos: &ResPosition, _mv: &ResMove) -> Result<bool> {
        Ok(self.rng.gen_bool(0.5))
    }
}

/// The Delayer strategy built on minimal-weight reduction and truncated spans.
///
/// With `P = <F + G>` (`G` the branching equations) and `T = [P]_{w <= tau}`,
/// a query `l` is reduced to `h' = alpha l + r`, `r in P`. Writing
/// `h' = L + kappa` with `L` linear, the Delayer collects the values of `L`
/// on the 0-1 models of `T`. One value `c` forces the edge `l = (c + kappa) / alpha`;
/// otherwise the two smallest values are offered as a branching point. When
/// `T` has no 0-1 model or a lifted value is not attained by `l` on the cube,
/// it falls back to the smallest legal value that keeps the position solvable.
pub struct PaperDelayer {
    pub params: StrategyParams,
    pub budget: Budget,
}

impl PaperDelayer {
    pub fn new(params: StrategyParams, budget: Budget) -> Self {
        PaperDelayer { params, budget }
    }

    fn fallback(&self, pos: &LinPosition, l: &AffinePoly, legal: &[Residue]) -> DelayerMove {
        let span = pos.span();
        let a = legal
            .iter()
            .copied()
            .find(|&a| {
                !span
                    .extend(&[l.shift_constant(pos.field.neg(a))])
                    .is_inconsistent()
            })
            .unwrap_or(0);
        DelayerMove {
            decision: LinDecision::Choose(a),
            fallback: true,
        }
    }
}

/// Values of the linear form `lin` over the 0-1 models of `eqs`, as a membership table.
pub(crate) fn model_values(
    pos: &LinPosition,
    eqs: &[AffinePoly],
    lin: &AffinePoly,
    budget: Budget,
) -> Result<Vec<bool>> {
    let p = pos.field.p() as usize;
    let mut seen = vec![false; p];
    let mut count = 0;
    cube::for_each_zero_one_solution(pos.field, pos.n, eqs, budget, |x| {
        let v = lin.eval_bool(x) as usize;
        if !seen[v] {
            seen[v] = true;
            count += 1;
        }
        if count == p {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(seen)
}

impl LinDelayer for PaperDelayer {
    fn decide(&mut self, pos: &LinPosition, l: &AffinePoly) -> Result<DelayerMove> {
        let field = pos.field;
        let legal = l.cube_values();
        let p_span = pos.instance_plus_branching();
        let t = p_span.truncated(self.params.tau, self.budget)?;
        let red = p_span.reduce_min_weight(l, self.budget)?;
        let lin = red.poly.linear_part();
        let kappa = red.poly.constant();
        let inv_alpha = field.inv(red.alpha);
        let lift = |c: Residue| field.mul(field.add(c, kappa), inv_alpha);

        let seen = model_values(pos, t.basis(), &lin, self.budget)?;
        let values: Vec<Residue> = (0..field.p()).filter(|&c| seen[c as usize]).collect();
        let decision = match values.as_slice() {
            [] => return Ok(self.fallback(pos, l, &legal)),
            [c] => LinDecision::Choose(lift(*c)),
            [c1, c2, ..] => LinDecision::Branch(lift(*c1), lift(*c2)),
        };
        let ok = match decision {
            LinDecision::Choose(a) => legal.contains(&a),
            LinDecision::Branch(a1, a2) => legal.contains(&a1) && legal.contains(&a2),
        };
        if !ok {
            return Ok(self.fallback(pos, l, &legal));
        }
        Ok(DelayerMove {
            decision,
            fallback: false,
        })
    }
}
