use super::engine::{
    form_text, validate_lin_move, EndReason, GameKind, Round, RoundDecision, Transcript,
};
use super::position::{LinPosition, ResPosition};
use super::strategy::{LinDecision, LinDelayer, ResDecision, ResDelayer, ResMove};
use crate::error::{Error, Result};
use crate::gf::{AffinePoly, Residue};
use crate::instances::LinearSystem;

enum Pending {
    /// The next inequality of the host is paired with this shadow value.
    Forced { first: bool, pair: Residue },
    Branch {
        f: AffinePoly,
        b1: Residue,
        b2: Residue,
    },
    /// The shadow game is over; host inequalities are no longer paired.
    Idle,
}

/// Turns a LinTrees Delayer into a Delayer for the tree-like Res(lin) game.
///
/// A shadow LinTrees game runs alongside the host game. Each host
/// inequality `h != a` is paired with a value `a' != a` such that the shadow
/// position implies `h = a'`. When the host Prover splits `h != a` into
/// `f != b` and `g != c`, the shadow Prover asks for `f`. If the inner Delayer
/// answers `f = b'` with `b' != b` the host keeps `f != b`; otherwise the
/// shadow implies `g = a' - b' != c` and the host keeps `g != c`. Branching
/// points of the shadow game become branching points of the host game.
pub struct TransferDelayer<D: LinDelayer> {
    inner: D,
    shadow: LinPosition,
    pairs: Vec<Option<Residue>>,
    pending: Pending,
    rounds: Vec<Round>,
    fell_back: bool,
    host_rounds: usize,
    /// Number of host rounds played when the shadow game reached its endgame.
    pub shadow_end: Option<usize>,
}

impl<D: LinDelayer> TransferDelayer<D> {
    pub fn new(inst: &LinearSystem, inner: D) -> Self {
        let shadow = LinPosition::start(inst);
        let pairs = vec![Some(0); inst.field().p() as usize - 1];
        let shadow_end = shadow.is_endgame().then_some(0);
        TransferDelayer {
            inner,
            shadow,
            pairs,
            pending: Pending::Idle,
            rounds: Vec::new(),
            fell_back: false,
            host_rounds: 0,
            shadow_end,
        }
    }

    pub fn shadow_position(&self) -> &LinPosition {
        &self.shadow
    }

    pub fn shadow_transcript(&self) -> Transcript {
        let ended = self.shadow.is_endgame();
        Transcript {
            kind: GameKind::LinTrees,
            rounds: self.rounds.clone(),
            reason: match (ended, self.fell_back) {
                (true, true) => EndReason::Fallback,
                (true, false) => EndReason::Endgame,
                _ => EndReason::Budget,
            },
            endgame: ended.then(|| "no solution over F_p".into()),
        }
    }

    /// Shadow value paired with host inequality `i`, if any.
    pub fn pair(&self, i: usize) -> Option<Residue> {
        self.pairs.get(i).copied().flatten()
    }

    fn add_shadow(
        &mut self,
        f: &AffinePoly,
        v: Residue,
        branching: bool,
        decision: RoundDecision,
        fallback: bool,
    ) {
        self.shadow
            .added
            .push((f.shift_constant(self.shadow.field.neg(v)), branching));
        self.rounds.push(Round {
            prover: form_text(f),
            decision,
            pos: self.shadow.fingerprint(),
            fallback,
        });
        if self.shadow_end.is_none() && self.shadow.is_endgame() {
            self.shadow_end = Some(self.host_rounds + 1);
        }
    }
}

impl<D: LinDelayer> ResDelayer for TransferDelayer<D> {
    fn decide(&mut self, pos: &ResPosition, mv: &ResMove) -> Result<(ResDecision, bool)> {
        if self.shadow.is_endgame() {
            self.pending = Pending::Idle;
            return Ok((ResDecision::First, false));
        }
        let field = pos.field;
        let a = pos.inequalities[mv.h].rhs();
        let a_shadow = self.pair(mv.h).ok_or_else(|| {
            Error::IllegalMove(format!("inequality {} has no shadow equation", mv.h))
        })?;
        let f = mv.u.linear_part();
        let b = mv.u.rhs();
        let c = mv.w.rhs();
        let dm = self.inner.decide(&self.shadow, &f)?;
        validate_lin_move(&self.shadow, &f, &dm)?;
        self.fell_back |= dm.fallback;
        match dm.decision {
            LinDecision::Choose(b_shadow) => {
                self.add_shadow(
                    &f,
                    b_shadow,
                    false,
                    RoundDecision::Choose(b_shadow),
                    dm.fallback,
                );
                if b != b_shadow {
                    self.pending = Pending::Forced {
                        first: true,
                        pair: b_shadow,
                    };
                    Ok((ResDecision::First, dm.fallback))
                } else {
                    // g = h - f = a' - b' in the shadow, and a' - b' != a - b = c
                    let pair =
                        field.add(c, field.sub(field.add(a_shadow, b), field.add(a, b_shadow)));
                    self.pending = Pending::Forced { first: false, pair };
                    Ok((ResDecision::Second, dm.fallback))
                }
            }
            LinDecision::Branch(b1, b2) => {
                self.pending = Pending::Branch { f, b1, b2 };
                Ok((ResDecision::Branch, dm.fallback))
            }
        }
    }

    fn resolved(&mut self, pos: &ResPosition, mv: &ResMove, took_first: bool) -> Result<()> {
        let pending = std::mem::replace(&mut self.pending, Pending::Idle);
        let pair = match pending {
            Pending::Idle => None,
            Pending::Forced { first, pair } => {
                if first != took_first {
                    return Err(Error::IllegalMove(
                        "host took the other inequality of a forced split".into(),
                    ));
                }
                Some(pair)
            }
            Pending::Branch { f, b1, b2 } => {
                let field = pos.field;
                let a = pos.inequalities[mv.h].rhs();
                let a_shadow = self.pair(mv.h).expect("checked in decide");
                let b = mv.u.rhs();
                let c = mv.w.rhs();
                let avoid = if took_first {
                    b
                } else {
                    field.add(b, field.sub(a_shadow, a))
                };
                let bi = if b1 != avoid { b1 } else { b2 };
                self.add_shadow(
                    &f,
                    bi,
                    true,
                    RoundDecision::Branch {
                        c1: b1,
                        c2: b2,
                        picked: bi,
                    },
                    false,
                );
                Some(if took_first {
                    bi
                } else {
                    field.add(c, field.sub(field.add(a_shadow, b), field.add(a, bi)))
                })
            }
        };
        self.pairs.push(pair);
        self.host_rounds += 1;
        Ok(())
    }
}
