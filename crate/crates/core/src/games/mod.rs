//! The LinTrees and tree-like Res(lin) Prover-Delayer games, the Delayer
//! strategy for code instances, and the adapter between the two games.

mod engine;
mod invariants;
mod params;
mod position;
mod strategy;
mod transfer;

pub use engine::{
    play_lintrees, play_lintrees_observed, play_reslin, EndReason, GameConfig, GameKind, Round,
    RoundDecision, Transcript, CSV_HEADER,
};
pub use invariants::{check_position, play_checked, InvariantRecord};
pub use params::{c_e, c_i, StrategyParams};
pub use position::{LinPosition, ResPosition};
pub use strategy::{
    DelayerMove, FirstDelayer, GreedyProver, LinDecision, LinDelayer, LinProver, PaperDelayer,
    RandomProver, RandomResProver, ResDecision, ResDelayer, ResMove, ResProver, ScriptedProver,
};
pub use transfer::TransferDelayer;
