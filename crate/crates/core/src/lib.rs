//! Polyadic modal mu-calculus: formulas over tuples of states, a naive
//! fixpoint evaluator, parity-game model checking, and the diagonal
//! encodings of formulas into transition systems.

pub mod alternation;
pub mod bisim;
pub mod cli;
pub mod diagonal;
pub mod fixed_sig;
pub mod formula;
pub mod games;
pub mod generator;
pub mod lts;
pub mod semantics;

use std::fmt;
use std::str::FromStr;

use formula::Formula;
use lts::{Lts, StateId};

/// Which decision procedure answers a satisfaction query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Fixpoint iteration over explicit tuple relations.
    Naive,
    /// Solving the model-checking parity game.
    Game,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Naive => "naive",
            Engine::Game => "game",
        })
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Engine::Naive),
            "game" => Ok(Engine::Game),
            _ => Err(format!("unknown engine `{s}` (expected naive or game)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Semantics(#[from] semantics::SemanticsError),
    #[error(transparent)]
    Game(#[from] games::GameError),
}

/// `lts, tuple ⊨ phi` for a closed formula, decided by `engine`.
pub fn holds(engine: Engine, phi: &Formula, lts: &Lts, tuple: &[StateId]) -> Result<bool, EngineError> {
    match engine {
        Engine::Naive => Ok(semantics::check(phi, lts, tuple)?),
        Engine::Game => Ok(games::check_via_game(phi, lts, tuple)?),
    }
}
