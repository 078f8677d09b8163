//! Model-checking parity games: construction from (formula, system) pairs,
//! a recursive attractor solver, a strategy checker and a debug dump format.

mod build;
mod dump;
mod exhaustive;
mod verify;
mod zielonka;

use std::fmt;

pub use build::{build_game, build_game_from, check_via_game, priority_of, GameError, ModelCheckingGame};
pub use dump::{dump_game, parse_game, DumpError};
pub use exhaustive::solve_exhaustive;
pub use verify::{verify_solution, VerifyError};
pub use zielonka::solve_parity;

pub type PositionId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    /// Wins plays whose highest recurring priority is even.
    Verifier,
    Refuter,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Verifier => Player::Refuter,
            Player::Refuter => Player::Verifier,
        }
    }

    /// The player favoured by a priority.
    pub fn of_priority(p: usize) -> Player {
        if p.is_multiple_of(2) {
            Player::Verifier
        } else {
            Player::Refuter
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Verifier => "Verifier",
            Player::Refuter => "Refuter",
        })
    }
}

/// A finite parity game. A position without successors is a dead end: its
/// owner cannot move and loses. Infinite plays are won by Verifier iff the
/// largest priority seen infinitely often is even.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParityGame {
    owner: Vec<Player>,
    priority: Vec<usize>,
    succ: Vec<Vec<PositionId>>,
}

impl ParityGame {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_position(&mut self, owner: Player, priority: usize) -> PositionId {
        self.owner.push(owner);
        self.priority.push(priority);
        self.succ.push(Vec::new());
        self.owner.len() - 1
    }

    /// Adds an edge; duplicates are ignored.
    pub fn add_edge(&mut self, from: PositionId, to: PositionId) {
        assert!(to < self.len(), "edge target {to} out of range");
        if !self.succ[from].contains(&to) {
            self.succ[from].push(to);
        }
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn positions(&self) -> std::ops::Range<PositionId> {
        0..self.len()
    }

    pub fn owner(&self, v: PositionId) -> Player {
        self.owner[v]
    }

    pub fn priority(&self, v: PositionId) -> usize {
        self.priority[v]
    }

    pub fn successors(&self, v: PositionId) -> &[PositionId] {
        &self.succ[v]
    }

    pub fn max_priority(&self) -> usize {
        self.priority.iter().copied().max().unwrap_or(0)
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }
}

/// Winning regions and positional strategies. `strategy[v]` is set exactly
/// for positions that are owned by their winner and have a successor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub strategy: Vec<Option<PositionId>>,
}

impl Solution {
    pub fn region(&self, p: Player) -> Vec<PositionId> {
        (0..self.winner.len()).filter(|&v| self.winner[v] == p).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn priority_parity() {
        assert_eq!(Player::of_priority(0), Player::Verifier);
        assert_eq!(Player::of_priority(3), Player::Refuter);
        assert_eq!(Player::Verifier.opponent(), Player::Refuter);
    }
}
