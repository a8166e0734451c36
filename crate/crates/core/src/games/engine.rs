use std::fmt::{self, Write as _};

use super::position::{LinPosition, ResPosition};
use super::strategy::{
    DelayerMove, LinDecision, LinDelayer, LinProver, ResDecision, ResDelayer, ResProver,
};
use crate::error::{Error, Result};
use crate::gf::{AffinePoly, Budget, Residue};
use crate::instances::{format_row, zero_one_sat, LinearSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GameKind {
    LinTrees,
    TreelikeResLin,
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameKind::LinTrees => "lintrees",
            GameKind::TreelikeResLin => "treelike-reslin",
        })
    }
}

impl std::str::FromStr for GameKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "lintrees" => Ok(GameKind::LinTrees),
            "treelike-reslin" | "reslin" => Ok(GameKind::TreelikeResLin),
            _ => Err(format!("unknown game `{s}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EndReason {
    Endgame,
    Budget,
    /// The endgame was reached after the Delayer had to fall back at least once.
    Fallback,
}

impl fmt::Display for EndReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EndReason::Endgame => "endgame",
            EndReason::Budget => "budget",
            EndReason::Fallback => "fallback",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundDecision {
    Choose(Residue),
    Branch {
        c1: Residue,
        c2: Residue,
        picked: Residue,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub prover: String,
    pub decision: RoundDecision,
    /// Fingerprint of the position after the round.
    pub pos: u64,
    pub fallback: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub kind: GameKind,
    pub rounds: Vec<Round>,
    pub reason: EndReason,
    /// Which endgame condition was met, if the game reached one.
    pub endgame: Option<String>,
}

impl Transcript {
    pub fn branchings(&self) -> usize {
        self.rounds
            .iter()
            .filter(|r| matches!(r.decision, RoundDecision::Branch { .. }))
            .count()
    }

    pub fn any_fallback(&self) -> bool {
        self.rounds.iter().any(|r| r.fallback)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, r) in self.rounds.iter().enumerate() {
            let d = match r.decision {
                RoundDecision::Choose(v) => format!("choose {v}"),
                RoundDecision::Branch { c1, c2, picked } => {
                    format!("branch {c1} {c2} picked {picked}")
                }
            };
            write!(
                out,
                "round {i} prover {} delayer {d} pos {:016x}",
                r.prover, r.pos
            )
            .unwrap();
            if r.fallback {
                out.push_str(" fallback");
            }
            out.push('\n');
        }
        writeln!(
            out,
            "branchings {} reason {}",
            self.branchings(),
            self.reason
        )
        .unwrap();
        out
    }

    /// One CSV row: `seed,n,k,d,rounds,branchings,reason`.
    pub fn csv_row(&self, seed: u64, n: usize, k: usize, d: usize) -> String {
        format!(
            "{seed},{n},{k},{d},{},{},{}",
            self.rounds.len(),
            self.branchings(),
            self.reason
        )
    }
}

pub const CSV_HEADER: &str = "seed,n,k,d,rounds,branchings,reason";

#[derive(Clone, Copy, Debug)]
pub struct GameConfig {
    pub max_rounds: usize,
    pub budget: Budget,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            max_rounds: 1000,
            budget: Budget::DEFAULT,
        }
    }
}

fn require_unsat(inst: &LinearSystem, budget: Budget) -> Result<()> {
    match zero_one_sat(inst, budget)? {
        Some(_) => Err(Error::NotUnsat),
        None => Ok(()),
    }
}

/// Check a LinTrees query and the Delayer's answer against the round rules.
/// Values must be attained by `l` somewhere on the cube; a branching point
/// offers two distinct such values.
pub(crate) fn validate_lin_move(pos: &LinPosition, l: &AffinePoly, mv: &DelayerMove) -> Result<()> {
    if l.n() != pos.n || l.constant() != 0 {
        return Err(Error::IllegalMove(
            "the query must be a linear form over the instance variables".into(),
        ));
    }
    let legal = l.cube_values();
    let ok = |v: Residue| legal.contains(&v);
    match mv.decision {
        LinDecision::Choose(a) if !ok(a) => Err(Error::IllegalMove(format!(
            "{l} never takes the value {a} on the cube"
        ))),
        LinDecision::Branch(a1, a2) if a1 == a2 => Err(Error::IllegalMove(
            "a branching point needs two distinct values".into(),
        )),
        LinDecision::Branch(a1, a2) if !ok(a1) || !ok(a2) => Err(Error::IllegalMove(format!(
            "{l} does not take both {a1} and {a2} on the cube"
        ))),
        _ => Ok(()),
    }
}

pub(crate) fn form_text(l: &AffinePoly) -> String {
    let c: Vec<String> = l.coeffs().iter().map(|c| c.to_string()).collect();
    format!("form {}", c.join(" "))
}

/// Play LinTrees. `observe` sees every position reached, together with
/// whether a fallback has happened so far.
pub fn play_lintrees_observed(
    inst: &LinearSystem,
    prover: &mut dyn LinProver,
    delayer: &mut dyn LinDelayer,
    cfg: GameConfig,
    observe: &mut dyn FnMut(&LinPosition, bool) -> Result<()>,
) -> Result<Transcript> {
    require_unsat(inst, cfg.budget)?;
    let mut pos = LinPosition::start(inst);
    let mut rounds: Vec<Round> = Vec::new();
    let mut fell_back = false;
    loop {
        observe(&pos, fell_back)?;
        if pos.is_endgame() {
            let reason = if fell_back {
                EndReason::Fallback
            } else {
                EndReason::Endgame
            };
            return Ok(Transcript {
                kind: GameKind::LinTrees,
                rounds,
                reason,
                endgame: Some("no solution over F_p".into()),
            });
        }
        if rounds.len() >= cfg.max_rounds {
            return Ok(Transcript {
                kind: GameKind::LinTrees,
                rounds,
                reason: EndReason::Budget,
                endgame: None,
            });
        }
        let l = prover.propose(&pos)?;
        let mv = delayer.decide(&pos, &l)?;
        validate_lin_move(&pos, &l, &mv)?;
        fell_back |= mv.fallback;
        let decision = match mv.decision {
            LinDecision::Choose(a) => {
                pos.added.push((l.shift_constant(pos.field.neg(a)), false));
                RoundDecision::Choose(a)
            }
            LinDecision::Branch(c1, c2) => {
                let picked = prover.pick(&pos, &l, c1, c2)?;
                if picked != c1 && picked != c2 {
                    return Err(Error::IllegalMove(format!(
                        "prover picked {picked}, offered {c1} and {c2}"
                    )));
                }
                pos.added
                    .push((l.shift_constant(pos.field.neg(picked)), true));
                RoundDecision::Branch { c1, c2, picked }
            }
        };
        rounds.push(Round {
            prover: form_text(&l),
            decision,
            pos: pos.fingerprint(),
            fallback: mv.fallback,
        });
    }
}

pub fn play_lintrees(
    inst: &LinearSystem,
    prover: &mut dyn LinProver,
    delayer: &mut dyn LinDelayer,
    cfg: GameConfig,
) -> Result<Transcript> {
    play_lintrees_observed(inst, prover, delayer, cfg, &mut |_, _| Ok(()))
}

fn lit_text(q: &AffinePoly) -> String {
    format_row(q.coeffs(), q.rhs())
}

/// Play the tree-like Res(lin) game.
pub fn play_reslin(
    inst: &LinearSystem,
    prover: &mut dyn ResProver,
    delayer: &mut dyn ResDelayer,
    cfg: GameConfig,
) -> Result<Transcript> {
    require_unsat(inst, cfg.budget)?;
    let mut pos = ResPosition::start(inst);
    let mut rounds: Vec<Round> = Vec::new();
    let mut fell_back = false;
    loop {
        if let Some(why) = pos.endgame() {
            let reason = if fell_back {
                EndReason::Fallback
            } else {
                EndReason::Endgame
            };
            return Ok(Transcript {
                kind: GameKind::TreelikeResLin,
                rounds,
                reason,
                endgame: Some(why),
            });
        }
        if rounds.len() >= cfg.max_rounds {
            return Ok(Transcript {
                kind: GameKind::TreelikeResLin,
                rounds,
                reason: EndReason::Budget,
                endgame: None,
            });
        }
        let mv = prover.propose(&pos)?;
        let target = pos
            .inequalities
            .get(mv.h)
            .ok_or_else(|| Error::IllegalMove(format!("no inequality {}", mv.h)))?;
        if mv.u.n() != pos.n || mv.w.n() != pos.n || mv.u.add(&mv.w) != *target {
            return Err(Error::IllegalMove(format!(
                "({}) + ({}) is not ({})",
                lit_text(&mv.u),
                lit_text(&mv.w),
                lit_text(target)
            )));
        }
        let (d, fb) = delayer.decide(&pos, &mv)?;
        fell_back |= fb;
        let (took_first, decision) = match d {
            ResDecision::First => (true, RoundDecision::Choose(1)),
            ResDecision::Second => (false, RoundDecision::Choose(2)),
            ResDecision::Branch => {
                let first = prover.pick(&pos, &mv)?;
                (
                    first,
                    RoundDecision::Branch {
                        c1: 1,
                        c2: 2,
                        picked: if first { 1 } else { 2 },
                    },
                )
            }
        };
        delayer.resolved(&pos, &mv, took_first)?;
        let prover_text = format!("split {} u {} w {}", mv.h, lit_text(&mv.u), lit_text(&mv.w));
        pos.inequalities.push(if took_first { mv.u } else { mv.w });
        rounds.push(Round {
            prover: prover_text,
            decision,
            pos: pos.fingerprint(),
            fallback: fb,
        });
    }
}
