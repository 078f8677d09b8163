//! Independent check of a claimed solution: each winner's strategy must keep
//! plays inside its region and every cycle consistent with it must have a
//! top priority of the winner's parity.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::{ParityGame, Player, PositionId, Solution};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("solution covers {got} positions, game has {want}")]
    Size { got: usize, want: usize },
    #[error("position {0}: winner has no valid strategy move")]
    MissingMove(PositionId),
    #[error("position {0}: a play escapes the winning region")]
    Escape(PositionId),
    #[error("{player} can be forced into a cycle with top priority {priority} through position {at}")]
    BadCycle {
        player: Player,
        priority: usize,
        at: PositionId,
    },
}

pub fn verify_solution(game: &ParityGame, sol: &Solution) -> Result<(), VerifyError> {
    let n = game.len();
    if sol.winner.len() != n || sol.strategy.len() != n {
        return Err(VerifyError::Size {
            got: sol.winner.len(),
            want: n,
        });
    }
    for p in [Player::Verifier, Player::Refuter] {
        // Restrict to p's region with p's moves fixed by the strategy.
        let mut edges: Vec<Vec<PositionId>> = vec![Vec::new(); n];
        for v in (0..n).filter(|&v| sol.winner[v] == p) {
            if game.owner(v) == p {
                match sol.strategy[v] {
                    Some(w) if game.successors(v).contains(&w) => edges[v].push(w),
                    _ => return Err(VerifyError::MissingMove(v)),
                }
            } else {
                edges[v] = game.successors(v).to_vec();
            }
            if edges[v].iter().any(|&w| sol.winner[w] != p) {
                return Err(VerifyError::Escape(v));
            }
        }
        // For each priority q of the opponent's parity: no cycle through a
        // q-position using only positions of priority <= q.
        let mut bad: Vec<usize> = (0..n)
            .filter(|&v| sol.winner[v] == p && Player::of_priority(game.priority(v)) != p)
            .map(|v| game.priority(v))
            .collect();
        bad.sort_unstable();
        bad.dedup();
        for q in bad {
            let keep = |v: usize| sol.winner[v] == p && game.priority(v) <= q;
            let mut g = DiGraph::<(), ()>::new();
            let ids: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
            for v in (0..n).filter(|&v| keep(v)) {
                for &w in edges[v].iter().filter(|&&w| keep(w)) {
                    g.add_edge(ids[v], ids[w], ());
                }
            }
            for scc in tarjan_scc(&g) {
                let cyclic = scc.len() > 1 || edges[scc[0].index()].contains(&scc[0].index());
                if !cyclic {
                    continue;
                }
                if let Some(at) = scc
                    .iter()
                    .map(|x| x.index())
                    .find(|&v| keep(v) && game.priority(v) == q)
                {
                    return Err(VerifyError::BadCycle {
                        player: p,
                        priority: q,
                        at,
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_a_wrong_claim() {
        let mut g = ParityGame::new();
        let v = g.add_position(Player::Refuter, 1);
        g.add_edge(v, v);
        let claim = Solution {
            winner: vec![Player::Verifier],
            strategy: vec![None],
        };
        assert!(matches!(verify_solution(&g, &claim), Err(VerifyError::BadCycle { .. })));
        let right = Solution {
            winner: vec![Player::Refuter],
            strategy: vec![Some(0)],
        };
        assert_eq!(verify_solution(&g, &right), Ok(()));
    }

    #[test]
    fn stuck_winner_is_rejected() {
        let mut g = ParityGame::new();
        g.add_position(Player::Verifier, 0);
        let claim = Solution {
            winner: vec![Player::Verifier],
            strategy: vec![None],
        };
        assert_eq!(verify_solution(&g, &claim), Err(VerifyError::MissingMove(0)));
    }
}
