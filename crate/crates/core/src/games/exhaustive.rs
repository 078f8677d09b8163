//! Brute-force oracle for tiny games: enumerate every positional strategy
//! of both players. Exponential; meant for games with a handful of positions.

use super::{ParityGame, Player, PositionId};

/// All positional strategies of `p`, as one successor per position (or
/// `usize::MAX` where `p` does not choose).
fn strategies(game: &ParityGame, p: Player) -> Vec<Vec<PositionId>> {
    let mut out = vec![vec![usize::MAX; game.len()]];
    for v in game.positions() {
        if game.owner(v) != p || game.successors(v).is_empty() {
            continue;
        }
        out = out
            .into_iter()
            .flat_map(|s| {
                game.successors(v).iter().map(move |&w| {
                    let mut s = s.clone();
                    s[v] = w;
                    s
                })
            })
            .collect();
    }
    out
}

/// Winner of the unique play from `start` when both players are fixed.
fn play(game: &ParityGame, verifier: &[PositionId], refuter: &[PositionId], start: PositionId) -> Player {
    let mut seen = vec![usize::MAX; game.len()];
    let mut path = Vec::new();
    let mut v = start;
    loop {
        if game.successors(v).is_empty() {
            return game.owner(v).opponent();
        }
        if seen[v] != usize::MAX {
            let top = path[seen[v]..].iter().map(|&u| game.priority(u)).max().unwrap();
            return Player::of_priority(top);
        }
        seen[v] = path.len();
        path.push(v);
        v = match game.owner(v) {
            Player::Verifier => verifier[v],
            Player::Refuter => refuter[v],
        };
    }
}

pub fn solve_exhaustive(game: &ParityGame) -> Vec<Player> {
    let refuter_all = strategies(game, Player::Refuter);
    let mut verifier_wins = vec![false; game.len()];
    for sv in strategies(game, Player::Verifier) {
        for v in game.positions() {
            if !verifier_wins[v] && refuter_all.iter().all(|sr| play(game, &sv, sr, v) == Player::Verifier) {
                verifier_wins[v] = true;
            }
        }
    }
    verifier_wins
        .into_iter()
        .map(|w| if w { Player::Verifier } else { Player::Refuter })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refuter_avoids_even_loop() {
        let mut g = ParityGame::new();
        let a = g.add_position(Player::Refuter, 0);
        let b = g.add_position(Player::Verifier, 2);
        let c = g.add_position(Player::Verifier, 1);
        g.add_edge(a, b);
        g.add_edge(a, c);
        g.add_edge(b, b);
        g.add_edge(c, c);
        assert_eq!(
            solve_exhaustive(&g),
            vec![Player::Refuter, Player::Verifier, Player::Refuter]
        );
    }
}
