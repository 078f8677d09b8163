//! Finite labelled transition systems and their line-based text format.
//!
//! ```text
//! # comment
//! states <n>
//! init <id>
//! label <id> <prop>*
//! trans <src> <act> <dst>
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LtsError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: state {state} is not declared (states 0..{declared})")]
    UndeclaredState { line: usize, state: usize, declared: usize },
    #[error("missing `states` declaration")]
    MissingStates,
    #[error("missing `init` declaration")]
    MissingInit,
    #[error("unknown state {0}")]
    UnknownState(StateId),
}

/// A finite LTS with states `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lts {
    init: StateId,
    labels: Vec<BTreeSet<String>>,
    actions: Vec<String>,
    // succ[s][a] for interned action a.
    succ: Vec<Vec<Vec<StateId>>>,
    names: Vec<Option<String>>,
}

impl Lts {
    /// `n >= 1` states without transitions or labels; state 0 is initial.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "an LTS has at least one state");
        Lts {
            init: 0,
            labels: vec![BTreeSet::new(); n],
            actions: Vec::new(),
            succ: vec![Vec::new(); n],
            names: vec![None; n],
        }
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.num_states()
    }

    pub fn init(&self) -> StateId {
        self.init
    }

    pub fn set_init(&mut self, s: StateId) -> Result<(), LtsError> {
        self.check(s)?;
        self.init = s;
        Ok(())
    }

    fn check(&self, s: StateId) -> Result<(), LtsError> {
        if s < self.num_states() {
            Ok(())
        } else {
            Err(LtsError::UnknownState(s))
        }
    }

    fn action_id(&mut self, action: &str) -> usize {
        match self.actions.iter().position(|a| a == action) {
            Some(i) => i,
            None => {
                self.actions.push(action.to_string());
                for row in &mut self.succ {
                    row.push(Vec::new());
                }
                self.actions.len() - 1
            }
        }
    }

    /// Adds `src -a-> dst`; duplicates are ignored.
    pub fn add_transition(&mut self, src: StateId, action: &str, dst: StateId) -> Result<(), LtsError> {
        self.check(src)?;
        self.check(dst)?;
        let a = self.action_id(action);
        let targets = &mut self.succ[src][a];
        if let Err(at) = targets.binary_search(&dst) {
            targets.insert(at, dst);
        }
        Ok(())
    }

    pub fn add_label(&mut self, s: StateId, prop: &str) -> Result<(), LtsError> {
        self.check(s)?;
        self.labels[s].insert(prop.to_string());
        Ok(())
    }

    /// Appends a fresh unlabelled state and returns its id.
    pub fn add_state(&mut self) -> StateId {
        self.labels.push(BTreeSet::new());
        self.succ.push(vec![Vec::new(); self.actions.len()]);
        self.names.push(None);
        self.num_states() - 1
    }

    pub fn set_name(&mut self, s: StateId, name: impl Into<String>) {
        self.names[s] = Some(name.into());
    }

    /// Display name, if one was attached (not part of the identity of the LTS).
    pub fn name(&self, s: StateId) -> Option<&str> {
        self.names[s].as_deref()
    }

    pub fn labels(&self, s: StateId) -> &BTreeSet<String> {
        &self.labels[s]
    }

    pub fn has_label(&self, s: StateId, prop: &str) -> bool {
        self.labels[s].contains(prop)
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    /// The `a`-successors of `s`, sorted.
    pub fn successors(&self, s: StateId, action: &str) -> Result<&[StateId], LtsError> {
        self.check(s)?;
        Ok(self.succ_unchecked(s, action))
    }

    pub(crate) fn succ_unchecked(&self, s: StateId, action: &str) -> &[StateId] {
        match self.actions.iter().position(|a| a == action) {
            Some(a) => &self.succ[s][a],
            None => &[],
        }
    }

    /// Successors over all actions, sorted and deduplicated.
    pub fn all_successors(&self, s: StateId) -> Vec<StateId> {
        let mut out: Vec<StateId> = self.succ[s].iter().flatten().copied().collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Outgoing `(action, target)` pairs of `s`.
    pub fn transitions_from(&self, s: StateId) -> impl Iterator<Item = (&str, StateId)> + '_ {
        self.succ[s]
            .iter()
            .enumerate()
            .flat_map(move |(a, ts)| ts.iter().map(move |&t| (self.actions[a].as_str(), t)))
    }

    pub fn transitions(&self) -> Vec<(StateId, &str, StateId)> {
        let mut out = Vec::new();
        for (s, row) in self.succ.iter().enumerate() {
            for (a, targets) in row.iter().enumerate() {
                for &t in targets {
                    out.push((s, self.actions[a].as_str(), t));
                }
            }
        }
        out.sort();
        out
    }

    pub fn num_transitions(&self) -> usize {
        self.succ.iter().flatten().map(Vec::len).sum()
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> BTreeSet<StateId> {
        let mut seen = BTreeSet::from([self.init]);
        let mut stack = vec![self.init];
        while let Some(s) = stack.pop() {
            for t in self.all_successors(s) {
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Structural equality ignoring action interning order and display names.
    pub fn same_system(&self, other: &Lts) -> bool {
        self.init == other.init && self.labels == other.labels && self.transitions() == other.transitions()
    }
}

/// Parses the line-based LTS format.
pub fn parse_lts(text: &str) -> Result<Lts, LtsError> {
    let mut declared: Option<usize> = None;
    let mut init: Option<(usize, usize)> = None;
    let mut labels: Vec<(usize, usize, Vec<String>)> = Vec::new();
    let mut trans: Vec<(usize, usize, String, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        let Some((&head, rest)) = toks.split_first() else {
            continue;
        };
        let malformed = |message: &str| LtsError::Malformed {
            line,
            message: message.to_string(),
        };
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| malformed(&format!("expected a number, found `{s}`")))
        };
        match head {
            "states" => {
                if rest.len() != 1 {
                    return Err(malformed("usage: states <n>"));
                }
                if declared.is_some() {
                    return Err(malformed("duplicate `states` declaration"));
                }
                let n = num(rest[0])?;
                if n == 0 {
                    return Err(malformed("an LTS has at least one state"));
                }
                declared = Some(n);
            }
            "init" => {
                if rest.len() != 1 {
                    return Err(malformed("usage: init <id>"));
                }
                if init.is_some() {
                    return Err(malformed("duplicate `init` declaration"));
                }
                init = Some((line, num(rest[0])?));
            }
            "label" => {
                let Some((s, props)) = rest.split_first() else {
                    return Err(malformed("usage: label <id> <prop>*"));
                };
                labels.push((line, num(s)?, props.iter().map(|p| p.to_string()).collect()));
            }
            "trans" => {
                if rest.len() != 3 {
                    return Err(malformed("usage: trans <src> <act> <dst>"));
                }
                trans.push((line, num(rest[0])?, rest[1].to_string(), num(rest[2])?));
            }
            other => return Err(malformed(&format!("unknown directive `{other}`"))),
        }
    }

    let n = declared.ok_or(LtsError::MissingStates)?;
    let undeclared = |line, state| LtsError::UndeclaredState {
        line,
        state,
        declared: n,
    };
    let (init_line, init) = init.ok_or(LtsError::MissingInit)?;
    if init >= n {
        return Err(undeclared(init_line, init));
    }
    let mut lts = Lts::new(n);
    lts.init = init;
    for (line, s, props) in labels {
        if s >= n {
            return Err(undeclared(line, s));
        }
        for p in props {
            lts.labels[s].insert(p);
        }
    }
    for (line, s, a, t) in trans {
        for x in [s, t] {
            if x >= n {
                return Err(undeclared(line, x));
            }
        }
        lts.add_transition(s, &a, t)?;
    }
    Ok(lts)
}

impl fmt::Display for Lts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "states {}", self.num_states())?;
        writeln!(f, "init {}", self.init)?;
        for s in self.states() {
            if !self.labels[s].is_empty() || self.names[s].is_some() {
                write!(f, "label {s}")?;
                for p in &self.labels[s] {
                    write!(f, " {p}")?;
                }
                if let Some(name) = &self.names[s] {
                    write!(f, " # {name}")?;
                }
                writeln!(f)?;
            }
        }
        let mut by_src: BTreeMap<StateId, Vec<(&str, StateId)>> = BTreeMap::new();
        for (s, a, t) in self.transitions() {
            by_src.entry(s).or_default().push((a, t));
        }
        for (s, out) in by_src {
            for (a, t) in out {
                writeln!(f, "trans {s} {a} {t}")?;
            }
        }
        Ok(())
    }
}
