use std::collections::{HashMap, VecDeque};

use rustc_hash::FxHashMap;

use super::{ParityGame, Player, PositionId};
use crate::alternation::alternation_depth;
use crate::formula::{FixKind, Formula, FormulaError, Literal, Modality, Node, NodeId, SubformulaGraph};
use crate::lts::{Lts, StateId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("arity {k} is smaller than the formula's arity {arity}")]
    ArityTooSmall { k: usize, arity: usize },
    #[error("state {0} is not a state of the system")]
    UnknownState(StateId),
    #[error("too many configurations to index")]
    TooLarge,
}

/// Priority of a variable of type `kind` and alternation depth `ad`: the
/// least number `>= ad` whose parity matches the type (ν even, μ odd).
pub fn priority_of(kind: FixKind, ad: usize) -> usize {
    let want = match kind {
        FixKind::Nu => 0,
        FixKind::Mu => 1,
    };
    if ad % 2 == want {
        ad
    } else {
        ad + 1
    }
}

/// The game for a formula on a system, together with the configuration
/// `(pebbles, subformula)` behind every position.
///
/// Configurations are packed into one integer: the pebble tuple in base `n`
/// (position 1 least significant), times the number of subformulas, plus
/// the subformula id.
#[derive(Clone, Debug)]
pub struct ModelCheckingGame {
    pub game: ParityGame,
    pub graph: SubformulaGraph,
    pub k: usize,
    n: usize,
    configs: Vec<u64>,
    index: FxHashMap<u64, PositionId>,
}

impl ModelCheckingGame {
    fn key(&self, tuple: &[StateId], node: NodeId) -> Option<u64> {
        if tuple.len() != self.k || tuple.iter().any(|&s| s >= self.n) {
            return None;
        }
        let code = tuple.iter().rev().fold(0u64, |acc, &s| acc * self.n as u64 + s as u64);
        Some(code * self.graph.len() as u64 + node as u64)
    }

    pub fn config(&self, v: PositionId) -> (Vec<StateId>, NodeId) {
        let key = self.configs[v];
        let nodes = self.graph.len() as u64;
        let mut code = key / nodes;
        let tuple = (0..self.k)
            .map(|_| {
                let s = code % self.n as u64;
                code /= self.n as u64;
                s as StateId
            })
            .collect();
        (tuple, (key % nodes) as NodeId)
    }

    pub fn position(&self, tuple: &[StateId], node: NodeId) -> Option<PositionId> {
        self.index.get(&self.key(tuple, node)?).copied()
    }

    /// Position of `tuple ⊢ phi` for the whole formula.
    pub fn seed(&self, tuple: &[StateId]) -> Option<PositionId> {
        self.position(tuple, self.graph.root())
    }

    /// `s1,..,sk |- psi`
    pub fn label(&self, v: PositionId) -> String {
        let (t, n) = self.config(v);
        let pebbles: Vec<String> = t.iter().map(|s| s.to_string()).collect();
        format!("{} |- {}", pebbles.join(","), self.graph.formula(n))
    }
}

/// The game over every configuration reachable from `tuple ⊢ phi` for all
/// `k`-tuples.
pub fn build_game(phi: &Formula, lts: &Lts, k: usize) -> Result<ModelCheckingGame, GameError> {
    let n = lts.num_states();
    let total = n.checked_pow(k as u32).ok_or(GameError::TooLarge)?;
    let seeds: Vec<Vec<StateId>> = (0..total)
        .map(|mut i| {
            (0..k)
                .map(|_| {
                    let s = i % n;
                    i /= n;
                    s
                })
                .collect()
        })
        .collect();
    build_game_from(phi, lts, k, &seeds)
}

pub fn build_game_from(
    phi: &Formula,
    lts: &Lts,
    k: usize,
    seeds: &[Vec<StateId>],
) -> Result<ModelCheckingGame, GameError> {
    phi.validate_closed()?;
    let arity = phi.arity();
    if k < arity {
        return Err(GameError::ArityTooSmall { k, arity });
    }
    let n = lts.num_states();
    for s in seeds.iter().flatten() {
        if *s >= n {
            return Err(GameError::UnknownState(*s));
        }
    }
    let graph = SubformulaGraph::new(phi)?;
    let nodes = graph.len() as u64;
    // place[i] = n^i
    let place: Vec<u64> = (0..=k)
        .map(|i| (n as u64).checked_pow(i as u32))
        .collect::<Option<_>>()
        .ok_or(GameError::TooLarge)?;
    place[k].checked_mul(nodes).ok_or(GameError::TooLarge)?;

    let info = alternation_depth(phi);
    let var_priority: HashMap<&str, usize> = info
        .depth
        .iter()
        .map(|(x, &d)| (x.as_str(), priority_of(info.kind[x], d)))
        .collect();
    // Per node: owner, priority, and what a move does.
    enum Step<'a> {
        Dead(&'a Literal),
        To(Vec<NodeId>),
        Move(usize, &'a str, NodeId),
        Replace(Vec<usize>, NodeId),
    }
    let mut shape = Vec::with_capacity(graph.len());
    for (_, node) in graph.nodes() {
        let (owner, priority) = match node {
            Node::Var(x) => (Player::Verifier, var_priority[x.as_str()]),
            Node::And(..)
            | Node::Modal {
                modality: Modality::Box,
                ..
            } => (Player::Refuter, 0),
            _ => (Player::Verifier, 0),
        };
        let step = match node {
            Node::Lit(l) => Step::Dead(l),
            Node::Or(a, b) | Node::And(a, b) => Step::To(vec![*a, *b]),
            Node::Modal { action, pos, body, .. } => Step::Move(pos.offset(), action, *body),
            Node::Fix { body, .. } => Step::To(vec![*body]),
            Node::Var(x) => Step::To(vec![graph.unfold(x).expect("closed formula")]),
            Node::Repl(kappa, body) => Step::Replace((1..=k).map(|p| kappa.apply(p) - 1).collect(), *body),
        };
        shape.push((owner, priority, step));
    }
    let digit = |code: u64, i: usize| ((code / place[i]) % n as u64) as StateId;

    let mut mc = ModelCheckingGame {
        game: ParityGame::new(),
        graph: graph.clone(),
        k,
        n,
        configs: Vec::new(),
        index: FxHashMap::default(),
    };
    let mut queue = VecDeque::new();
    let intern = |mc: &mut ModelCheckingGame, queue: &mut VecDeque<PositionId>, code: u64, node: NodeId| {
        let key = code * nodes + node as u64;
        if let Some(&v) = mc.index.get(&key) {
            return v;
        }
        let (mut owner, priority, step) = &shape[node];
        if let Step::Dead(l) = step {
            // A dead end: the owner is stuck and loses.
            let holds = lts.has_label(digit(code, l.pos.offset()), &l.prop) != l.negated;
            owner = if holds { Player::Refuter } else { Player::Verifier };
        }
        let v = mc.game.add_position(owner, *priority);
        mc.configs.push(key);
        mc.index.insert(key, v);
        queue.push_back(v);
        v
    };

    for t in seeds {
        let code = t.iter().zip(&place).map(|(&s, &p)| s as u64 * p).sum();
        intern(&mut mc, &mut queue, code, graph.root());
    }
    let mut moves: Vec<(u64, NodeId)> = Vec::new();
    while let Some(v) = queue.pop_front() {
        let key = mc.configs[v];
        let (code, node) = (key / nodes, (key % nodes) as NodeId);
        moves.clear();
        match &shape[node].2 {
            Step::Dead(_) => {}
            Step::To(next) => moves.extend(next.iter().map(|&b| (code, b))),
            Step::Move(i, action, body) => {
                let here = digit(code, *i);
                let base = code - here as u64 * place[*i];
                moves.extend(
                    lts.succ_unchecked(here, action)
                        .iter()
                        .map(|&s| (base + s as u64 * place[*i], *body)),
                );
            }
            Step::Replace(src, body) => {
                let u = src.iter().zip(&place).map(|(&j, &p)| digit(code, j) as u64 * p).sum();
                moves.push((u, *body));
            }
        }
        for &(u, w) in &moves {
            let w = intern(&mut mc, &mut queue, u, w);
            mc.game.add_edge(v, w);
        }
    }
    Ok(mc)
}

/// Decides `tuple ⊨ phi` by solving the game built from that single seed.
pub fn check_via_game(phi: &Formula, lts: &Lts, tuple: &[StateId]) -> Result<bool, GameError> {
    let mc = build_game_from(phi, lts, tuple.len(), &[tuple.to_vec()])?;
    let sol = super::solve_parity(&mc.game);
    let seed = mc.seed(tuple).expect("seed position exists");
    Ok(sol.winner[seed] == Player::Verifier)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::lts::parse_lts;

    #[test]
    fn disjunction_position_belongs_to_verifier() {
        let phi = parse_formula("p(1) | q(1)").unwrap();
        let lts = parse_lts("states 1\ninit 0\nlabel 0 q\n").unwrap();
        let mc = build_game(&phi, &lts, 1).unwrap();
        let v = mc.seed(&[0]).unwrap();
        assert_eq!(mc.game.owner(v), Player::Verifier);
        assert_eq!(mc.game.successors(v).len(), 2);
        let q = mc.game.successors(v)[1];
        assert_eq!(mc.label(q), "0 |- q(1)");
        // A true literal is a dead end for the refuter.
        assert_eq!(mc.game.owner(q), Player::Refuter);
        assert!(mc.game.successors(q).is_empty());
    }

    #[test]
    fn position_bound() {
        let phi = parse_formula("nu X. (p(1) -> p(2)) & [a]_1 <a>_2 X & {1<->2} X").unwrap();
        let lts = parse_lts("states 3\ninit 0\nlabel 1 p\ntrans 0 a 1\ntrans 1 a 2\ntrans 2 a 0\n").unwrap();
        let mc = build_game(&phi, &lts, 2).unwrap();
        assert!(mc.game.len() <= 9 * phi.subformulas().len());
    }

    #[test]
    fn priorities_follow_depth_and_type() {
        assert_eq!(priority_of(FixKind::Nu, 1), 2);
        assert_eq!(priority_of(FixKind::Mu, 1), 1);
        assert_eq!(priority_of(FixKind::Nu, 2), 2);
        assert_eq!(priority_of(FixKind::Mu, 2), 3);
    }

    #[test]
    fn game_verdicts() {
        let lts = parse_lts("states 2\ninit 0\ntrans 0 a 1\ntrans 1 a 0\n").unwrap();
        assert!(!check_via_game(&parse_formula("mu X. X").unwrap(), &lts, &[0]).unwrap());
        assert!(check_via_game(&parse_formula("nu X. <a>_1 X").unwrap(), &lts, &[0]).unwrap());
        assert!(check_via_game(&parse_formula("nu X. <a>_1 {2<->1} X").unwrap(), &lts, &[0, 1]).unwrap());
        assert!(matches!(
            check_via_game(&parse_formula("<a>_1 X").unwrap(), &lts, &[0]),
            Err(GameError::Formula(FormulaError::NotClosed(_)))
        ));
    }
}
