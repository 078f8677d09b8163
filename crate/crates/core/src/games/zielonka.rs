//! Recursive attractor decomposition with positional strategies.
//!
//! Dead ends are removed by totalizing: a stuck Verifier position moves to a
//! sink with an odd self-loop, a stuck Refuter position to one with an even
//! self-loop. The second recursive call of the classic algorithm is turned
//! into a loop, so recursion depth is bounded by the number of priorities.

use std::collections::VecDeque;

use super::{ParityGame, Player, PositionId, Solution};

/// Adjacency in compressed rows: the neighbours of `v` are
/// `targets[offsets[v]..offsets[v + 1]]`.
struct Csr {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl Csr {
    fn from_rows(rows: impl Iterator<Item = impl Iterator<Item = PositionId>>) -> Csr {
        let mut offsets = vec![0u32];
        let mut targets = Vec::new();
        for row in rows {
            targets.extend(row.map(|w| w as u32));
            offsets.push(targets.len() as u32);
        }
        Csr { offsets, targets }
    }

    fn row(&self, v: PositionId) -> impl Iterator<Item = PositionId> + '_ {
        self.targets[self.offsets[v] as usize..self.offsets[v + 1] as usize]
            .iter()
            .map(|&w| w as PositionId)
    }

    fn transpose(&self, n: usize) -> Csr {
        let mut count = vec![0u32; n + 1];
        for &w in &self.targets {
            count[w as usize + 1] += 1;
        }
        for i in 0..n {
            count[i + 1] += count[i];
        }
        let offsets = count.clone();
        let mut targets = vec![0u32; self.targets.len()];
        for v in 0..n {
            for w in self.row(v) {
                targets[count[w] as usize] = v as u32;
                count[w] += 1;
            }
        }
        Csr { offsets, targets }
    }
}

struct Arena {
    owner: Vec<Player>,
    priority: Vec<usize>,
    succ: Csr,
    pred: Csr,
}

impl Arena {
    fn totalize(game: &ParityGame) -> Arena {
        let n = game.len();
        assert!(n + 2 <= u32::MAX as usize, "game too large");
        let (win_v, win_r) = (n, n + 1);
        let mut owner: Vec<Player> = game.positions().map(|v| game.owner(v)).collect();
        let mut priority: Vec<usize> = game.positions().map(|v| game.priority(v)).collect();
        owner.extend([Player::Verifier, Player::Verifier]);
        priority.extend([0, 1]);
        let rows = (0..n + 2).map(|v| {
            let out: Vec<PositionId> = if v >= n {
                vec![v]
            } else if game.successors(v).is_empty() {
                vec![match owner[v] {
                    Player::Verifier => win_r,
                    Player::Refuter => win_v,
                }]
            } else {
                game.successors(v).to_vec()
            };
            out.into_iter()
        });
        let succ = Csr::from_rows(rows);
        let pred = succ.transpose(n + 2);
        Arena {
            owner,
            priority,
            succ,
            pred,
        }
    }

    /// Attractor of `target` for `p` inside `alive`; records attracting moves
    /// of `p` in `strategy`.
    fn attractor(
        &self,
        alive: &[bool],
        target: &[PositionId],
        p: Player,
        strategy: &mut [Option<PositionId>],
    ) -> Vec<bool> {
        let mut attr = vec![false; alive.len()];
        let mut missing: Vec<u32> = vec![u32::MAX; alive.len()];
        let mut queue = VecDeque::new();
        for &v in target {
            if !attr[v] {
                attr[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(w) = queue.pop_front() {
            for v in self.pred.row(w) {
                if !alive[v] || attr[v] {
                    continue;
                }
                if self.owner[v] == p {
                    attr[v] = true;
                    strategy[v] = Some(w);
                    queue.push_back(v);
                } else {
                    if missing[v] == u32::MAX {
                        missing[v] = self.succ.row(v).filter(|&u| alive[u]).count() as u32;
                    }
                    missing[v] -= 1;
                    if missing[v] == 0 {
                        attr[v] = true;
                        queue.push_back(v);
                    }
                }
            }
        }
        attr
    }

    /// Solves the subgame on `alive` (a trap for both players), writing
    /// winners and the winners' strategies for those positions.
    fn solve(&self, mut alive: Vec<bool>, winner: &mut [Player], strategy: &mut [Option<PositionId>]) {
        loop {
            let Some(top) = (0..alive.len()).filter(|&v| alive[v]).map(|v| self.priority[v]).max() else {
                return;
            };
            let i = Player::of_priority(top);
            let target: Vec<PositionId> = (0..alive.len())
                .filter(|&v| alive[v] && self.priority[v] == top)
                .collect();
            let mut attr_strategy = vec![None; alive.len()];
            let attr = self.attractor(&alive, &target, i, &mut attr_strategy);

            let rest: Vec<bool> = alive.iter().zip(&attr).map(|(&a, &t)| a && !t).collect();
            let mut sub_winner = winner.to_vec();
            let mut sub_strategy = vec![None; alive.len()];
            self.solve(rest.clone(), &mut sub_winner, &mut sub_strategy);

            let lost: Vec<PositionId> = (0..alive.len()).filter(|&v| rest[v] && sub_winner[v] != i).collect();
            if lost.is_empty() {
                // i wins everything that is left.
                for v in (0..alive.len()).filter(|&v| alive[v]) {
                    winner[v] = i;
                    strategy[v] = None;
                    if self.owner[v] != i {
                        continue;
                    }
                    strategy[v] = if rest[v] {
                        sub_strategy[v]
                    } else if self.priority[v] == top && attr_strategy[v].is_none() {
                        self.succ.row(v).find(|&w| alive[w])
                    } else {
                        attr_strategy[v]
                    };
                }
                return;
            }

            let j = i.opponent();
            let mut b_strategy = vec![None; alive.len()];
            let b = self.attractor(&alive, &lost, j, &mut b_strategy);
            for v in (0..alive.len()).filter(|&v| b[v]) {
                winner[v] = j;
                strategy[v] = None;
                if self.owner[v] == j {
                    strategy[v] = if rest[v] && sub_winner[v] == j {
                        sub_strategy[v]
                    } else {
                        b_strategy[v]
                    };
                }
                alive[v] = false;
            }
        }
    }
}

/// Solves a parity game. Debug builds re-check the strategies of games up
/// to [`SELF_CHECK_LIMIT`] positions.
pub fn solve_parity(game: &ParityGame) -> Solution {
    let sol = solve_unchecked(game);
    if cfg!(debug_assertions) && game.len() <= SELF_CHECK_LIMIT {
        assert_eq!(super::verify_solution(game, &sol), Ok(()));
    }
    sol
}

pub const SELF_CHECK_LIMIT: usize = 100_000;

pub(crate) fn solve_unchecked(game: &ParityGame) -> Solution {
    let arena = Arena::totalize(game);
    let total = arena.owner.len();
    let mut winner = vec![Player::Verifier; total];
    let mut strategy = vec![None; total];
    arena.solve(vec![true; total], &mut winner, &mut strategy);
    let n = game.len();
    winner.truncate(n);
    strategy.truncate(n);
    for (v, s) in strategy.iter_mut().enumerate() {
        if s.is_some_and(|w| w >= n) || game.owner(v) != winner[v] {
            *s = None;
        }
    }
    Solution { winner, strategy }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_loop(priority: usize) -> ParityGame {
        let mut g = ParityGame::new();
        let v = g.add_position(Player::Verifier, priority);
        g.add_edge(v, v);
        g
    }

    #[test]
    fn even_self_loop_is_won_by_verifier() {
        let sol = solve_parity(&single_loop(2));
        assert_eq!(sol.winner, vec![Player::Verifier]);
        assert_eq!(sol.strategy, vec![Some(0)]);
    }

    #[test]
    fn odd_self_loop_is_won_by_refuter() {
        let sol = solve_parity(&single_loop(1));
        assert_eq!(sol.winner, vec![Player::Refuter]);
        assert_eq!(sol.strategy, vec![None]);
    }

    #[test]
    fn stuck_player_loses() {
        let mut g = ParityGame::new();
        let a = g.add_position(Player::Verifier, 0);
        let b = g.add_position(Player::Refuter, 0);
        let c = g.add_position(Player::Verifier, 0);
        g.add_edge(c, a);
        g.add_edge(c, b);
        let sol = solve_parity(&g);
        assert_eq!(sol.winner, vec![Player::Refuter, Player::Verifier, Player::Verifier]);
        assert_eq!(sol.strategy[c], Some(b));
    }

    #[test]
    fn verifier_escapes_odd_cycle() {
        // 0 (V, 1) <-> 1 (R, 0), and 0 -> 2 (even loop).
        let mut g = ParityGame::new();
        let a = g.add_position(Player::Verifier, 1);
        let b = g.add_position(Player::Refuter, 0);
        let c = g.add_position(Player::Refuter, 2);
        g.add_edge(a, b);
        g.add_edge(b, a);
        g.add_edge(a, c);
        g.add_edge(c, c);
        let sol = solve_parity(&g);
        assert!(sol.winner.iter().all(|&p| p == Player::Verifier));
        assert_eq!(sol.strategy[a], Some(c));
    }
}
