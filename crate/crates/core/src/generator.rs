//! Seeded random formulas, systems and parity games for property suites.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alternation::{type_from_depth, Class};
use crate::formula::{FixKind, Formula, Replacement};
use crate::games::{ParityGame, Player};
use crate::lts::Lts;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReplMode {
    None,
    /// Single swaps and copies only.
    Simple,
    /// Any map on `1..=k`.
    Arbitrary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    /// Largest position index.
    pub k: usize,
    /// Alternation target: binders get depths `<= m` and the types the class
    /// dictates for them.
    pub m: usize,
    pub class: Class,
    /// Upper bound on formula nodes.
    pub budget: usize,
    pub props: Vec<String>,
    pub acts: Vec<String>,
    /// Upper bound on system size.
    pub states: usize,
    pub repl: ReplMode,
    pub seed: u64,
}

impl GenConfig {
    pub fn new(k: usize, m: usize, class: Class) -> Self {
        GenConfig {
            k,
            m,
            class,
            budget: 12,
            props: vec!["p".into(), "q".into()],
            acts: vec!["a".into()],
            states: 4,
            repl: ReplMode::Simple,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<(), GenError> {
        let bad = |what: &str| Err(GenError::Invalid(what.to_string()));
        if self.k == 0 {
            return bad("k must be at least 1");
        }
        if self.props.is_empty() || self.acts.is_empty() {
            return bad("need at least one proposition and one action");
        }
        if self.states == 0 {
            return bad("state bound must be at least 1");
        }
        if self.budget < self.m + 1 {
            return Err(GenError::Budget {
                budget: self.budget,
                m: self.m,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("a node budget of {budget} cannot fit {m} nested binders and a body")]
    Budget { budget: usize, m: usize },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// A closed formula of arity at most `k` admitted by `class` at level `m`
/// (see [`AlternationInfo::admits`](crate::alternation::AlternationInfo::admits)).
pub fn gen_formula(cfg: &GenConfig) -> Result<Formula, GenError> {
    cfg.validate()?;
    let mut g = FormulaGen {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        fresh: 0,
        spine: BTreeSet::new(),
    };
    let raw = g.node(cfg.budget, &mut Vec::new(), cfg.m);
    Ok(g.assign_types(raw).0)
}

struct FormulaGen<'a> {
    cfg: &'a GenConfig,
    rng: ChaCha8Rng,
    fresh: usize,
    spine: BTreeSet<String>,
}

impl FormulaGen<'_> {
    /// A formula of at most `b` nodes containing a chain of `s` nested binders.
    fn node(&mut self, b: usize, scope: &mut Vec<String>, s: usize) -> Formula {
        if s > 0 {
            if b <= s + 1 || self.rng.gen_bool(0.4) {
                return self.binder(b, scope, s, true);
            }
            if b >= s + 3 && self.rng.gen_bool(0.5) {
                return self.binary(b, scope, s);
            }
            return self.unary(b, scope, s);
        }
        if b == 1 || self.rng.gen_bool(0.15) {
            return self.leaf(scope);
        }
        let binder_ok = self.cfg.m >= 1;
        let repl_ok = self.cfg.repl != ReplMode::None && self.cfg.k >= 2;
        match self.rng.gen_range(0..8) {
            0..=2 if b >= 3 => self.binary(b, scope, 0),
            3 if binder_ok => self.binder(b, scope, 0, false),
            4 if repl_ok => self.repl(b, scope, 0),
            _ => self.modal(b, scope, 0),
        }
    }

    fn leaf(&mut self, scope: &[String]) -> Formula {
        if !scope.is_empty() && self.rng.gen_bool(0.5) {
            return Formula::var(scope.choose(&mut self.rng).unwrap().clone());
        }
        let prop = self.cfg.props.choose(&mut self.rng).unwrap().clone();
        let pos = self.rng.gen_range(1..=self.cfg.k);
        if self.rng.gen_bool(0.5) {
            Formula::lit(prop, pos)
        } else {
            Formula::neg_lit(prop, pos)
        }
    }

    fn binder(&mut self, b: usize, scope: &mut Vec<String>, s: usize, spine: bool) -> Formula {
        self.fresh += 1;
        let var = format!("X{}", self.fresh);
        if spine {
            self.spine.insert(var.clone());
        }
        scope.push(var.clone());
        let body = self.node(b - 1, scope, s.saturating_sub(spine as usize));
        scope.pop();
        Formula::mu(var, body)
    }

    fn binary(&mut self, b: usize, scope: &mut Vec<String>, s: usize) -> Formula {
        let left_min = s.max(1) + if s > 0 { 1 } else { 0 };
        let b1 = self.rng.gen_range(left_min.min(b - 2)..=b - 2);
        let b2 = self.rng.gen_range(1..=b - 1 - b1);
        let heavy = self.node(b1, scope, s);
        let light = self.node(b2, scope, 0);
        let (l, r) = if self.rng.gen_bool(0.5) {
            (heavy, light)
        } else {
            (light, heavy)
        };
        if self.rng.gen_bool(0.5) {
            Formula::or(l, r)
        } else {
            Formula::and(l, r)
        }
    }

    fn unary(&mut self, b: usize, scope: &mut Vec<String>, s: usize) -> Formula {
        let repl_ok = self.cfg.repl != ReplMode::None && self.cfg.k >= 2;
        if repl_ok && self.rng.gen_bool(0.3) {
            self.repl(b, scope, s)
        } else {
            self.modal(b, scope, s)
        }
    }

    fn modal(&mut self, b: usize, scope: &mut Vec<String>, s: usize) -> Formula {
        let action = self.cfg.acts.choose(&mut self.rng).unwrap().clone();
        let pos = self.rng.gen_range(1..=self.cfg.k);
        let body = self.node(b - 1, scope, s);
        if self.rng.gen_bool(0.5) {
            Formula::diamond(action, pos, body)
        } else {
            Formula::box_(action, pos, body)
        }
    }

    fn repl(&mut self, b: usize, scope: &mut Vec<String>, s: usize) -> Formula {
        let kappa = self.replacement();
        let body = self.node(b - 1, scope, s);
        Formula::Repl(kappa, Box::new(body))
    }

    fn replacement(&mut self) -> Replacement {
        let k = self.cfg.k;
        loop {
            let kappa = match self.cfg.repl {
                ReplMode::Arbitrary => {
                    let table: Vec<usize> = (0..k).map(|_| self.rng.gen_range(1..=k)).collect();
                    Replacement::from_table(&table).expect("table within range")
                }
                _ => {
                    let i = self.rng.gen_range(1..=k);
                    let j = self.rng.gen_range(1..=k);
                    if self.rng.gen_bool(0.5) {
                        Replacement::swap(i, j)
                    } else {
                        Replacement::copy(i, j)
                    }
                }
            };
            if !kappa.is_identity() {
                return kappa;
            }
        }
    }

    fn kind_at(&self, depth: usize) -> FixKind {
        let t = type_from_depth(self.cfg.m, depth).expect("depth within level");
        match self.cfg.class {
            Class::Sigma => t,
            Class::Pi => t.dual(),
        }
    }

    /// Fixes binder types bottom-up. A binder whose deepest nested binder has
    /// depth `h` may take depth `h` (same type) or `h + 1` (flipped type);
    /// spine binders flip whenever the level allows. Returns the maximal depth
    /// in the subtree.
    fn assign_types(&mut self, f: Formula) -> (Formula, usize) {
        match f {
            Formula::Lit(_) | Formula::Var(_) => (f, 0),
            Formula::Or(a, b) => {
                let (a, ha) = self.assign_types(*a);
                let (b, hb) = self.assign_types(*b);
                (Formula::or(a, b), ha.max(hb))
            }
            Formula::And(a, b) => {
                let (a, ha) = self.assign_types(*a);
                let (b, hb) = self.assign_types(*b);
                (Formula::and(a, b), ha.max(hb))
            }
            Formula::Modal {
                modality,
                action,
                pos,
                body,
            } => {
                let (body, h) = self.assign_types(*body);
                (
                    Formula::Modal {
                        modality,
                        action,
                        pos,
                        body: Box::new(body),
                    },
                    h,
                )
            }
            Formula::Repl(kappa, body) => {
                let (body, h) = self.assign_types(*body);
                (Formula::Repl(kappa, Box::new(body)), h)
            }
            Formula::Fix { var, body, .. } => {
                let (body, h) = self.assign_types(*body);
                let can_flip = h < self.cfg.m;
                let flip = if h == 0 {
                    true
                } else if self.spine.contains(&var) {
                    can_flip
                } else {
                    can_flip && self.rng.gen_bool(0.5)
                };
                let d = if flip { h + 1 } else { h };
                (Formula::fix(self.kind_at(d), var, body), d)
            }
        }
    }
}

/// A random system with every state reachable from state 0.
pub fn gen_lts(cfg: &GenConfig) -> Result<Lts, GenError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_1a75);
    let n = rng.gen_range(1..=cfg.states);
    let density = (1.5 / n as f64).clamp(0.3, 1.0);
    loop {
        let mut lts = Lts::new(n);
        for s in 0..n {
            for p in &cfg.props {
                if rng.gen_bool(0.5) {
                    lts.add_label(s, p).unwrap();
                }
            }
            for a in &cfg.acts {
                for t in 0..n {
                    if rng.gen_bool(density) {
                        lts.add_transition(s, a, t).unwrap();
                    }
                }
            }
        }
        if lts.reachable().len() == n {
            return Ok(lts);
        }
    }
}

/// A random game with `1..=max_positions` positions, priorities
/// `0..=max_priority` and out-degree at most 3 (dead ends included).
pub fn gen_game(seed: u64, max_positions: usize, max_priority: usize) -> ParityGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_positions.max(1));
    let mut g = ParityGame::new();
    for _ in 0..n {
        let owner = if rng.gen_bool(0.5) {
            Player::Verifier
        } else {
            Player::Refuter
        };
        g.add_position(owner, rng.gen_range(0..=max_priority));
    }
    for v in 0..n {
        let degree = if rng.gen_bool(0.1) {
            0
        } else {
            rng.gen_range(1..=3.min(n))
        };
        for _ in 0..degree {
            g.add_edge(v, rng.gen_range(0..n));
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alternation::alternation_depth;

    #[test]
    fn smallest_sigma_one_shape() {
        let mut cfg = GenConfig::new(1, 1, Class::Sigma);
        cfg.budget = 3;
        for seed in 0..20 {
            let f = gen_formula(&cfg.clone().with_seed(seed)).unwrap();
            assert!(f.size() <= 3 && f.is_closed());
            assert!(alternation_depth(&f).admits(Class::Sigma, 1, 1), "{f}");
        }
    }

    #[test]
    fn class_targeting_and_determinism() {
        for (k, m, class) in [(1, 2, Class::Sigma), (2, 3, Class::Pi), (3, 1, Class::Pi)] {
            for seed in 0..200 {
                let cfg = GenConfig::new(k, m, class).with_seed(seed);
                let f = gen_formula(&cfg).unwrap();
                assert!(f.is_closed() && f.validate().is_ok());
                assert!(f.size() <= cfg.budget);
                assert!(alternation_depth(&f).admits(class, k, m), "{f}");
                assert_eq!(gen_formula(&cfg).unwrap(), f);
            }
        }
    }

    #[test]
    fn budget_too_small() {
        let mut cfg = GenConfig::new(1, 3, Class::Sigma);
        cfg.budget = 3;
        assert_eq!(gen_formula(&cfg), Err(GenError::Budget { budget: 3, m: 3 }));
    }

    #[test]
    fn systems_are_reachable_and_deterministic() {
        let mut cfg = GenConfig::new(1, 1, Class::Sigma);
        cfg.states = 1;
        assert_eq!(gen_lts(&cfg).unwrap().num_states(), 1);
        cfg.states = 6;
        for seed in 0..200 {
            let cfg = cfg.clone().with_seed(seed);
            let lts = gen_lts(&cfg).unwrap();
            assert_eq!(lts.reachable().len(), lts.num_states());
            assert_eq!(gen_lts(&cfg).unwrap(), lts);
        }
    }
}
