//! Abstract syntax of the polyadic modal mu-calculus in positive normal form.
//!
//! Formulas are immutable trees. Every bound variable must be bound by exactly
//! one fixpoint quantifier in the whole formula; [`Formula::validate`] checks
//! this and the parser enforces it on input.

mod graph;
mod normalize;
mod parser;
mod print;
mod replacement;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use graph::{Node, NodeId, SubformulaGraph};
pub use normalize::{decompose_replacement, normalize_replacements};
pub use parser::{parse_formula, parse_formula_with, ParseError, ParseOptions};
pub use replacement::{Replacement, ReplacementError};

/// A 1-based index into a tuple of states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PositionIndex(usize);

impl PositionIndex {
    pub fn new(value: usize) -> Option<Self> {
        (value >= 1).then_some(PositionIndex(value))
    }

    /// Panics if `value` is zero.
    pub fn of(value: usize) -> Self {
        Self::new(value).expect("position indices start at 1")
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Zero-based offset into a tuple.
    pub fn offset(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for PositionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modality {
    Diamond,
    Box,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FixKind {
    Mu,
    Nu,
}

impl FixKind {
    pub fn dual(self) -> FixKind {
        match self {
            FixKind::Mu => FixKind::Nu,
            FixKind::Nu => FixKind::Mu,
        }
    }
}

impl fmt::Display for FixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixKind::Mu => "mu",
            FixKind::Nu => "nu",
        })
    }
}

/// A literal `p(i)` or `~p(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub prop: String,
    pub pos: PositionIndex,
    pub negated: bool,
}

impl Literal {
    pub fn complement(&self) -> Literal {
        Literal {
            negated: !self.negated,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Lit(Literal),
    Var(String),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Modal {
        modality: Modality,
        action: String,
        pos: PositionIndex,
        body: Box<Formula>,
    },
    Fix {
        kind: FixKind,
        var: String,
        body: Box<Formula>,
    },
    Repl(Replacement, Box<Formula>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("variable {0} is bound by more than one fixpoint quantifier")]
    DuplicateBinder(String),
    #[error("formula is not closed: free variable(s) {}", .0.join(", "))]
    NotClosed(Vec<String>),
}

impl Formula {
    pub fn lit(prop: impl Into<String>, pos: usize) -> Formula {
        Formula::Lit(Literal {
            prop: prop.into(),
            pos: PositionIndex::of(pos),
            negated: false,
        })
    }

    pub fn neg_lit(prop: impl Into<String>, pos: usize) -> Formula {
        Formula::Lit(Literal {
            prop: prop.into(),
            pos: PositionIndex::of(pos),
            negated: true,
        })
    }

    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction; `None` for an empty iterator.
    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction; `None` for an empty iterator.
    pub fn or_all(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    pub fn diamond(action: impl Into<String>, pos: usize, body: Formula) -> Formula {
        Formula::Modal {
            modality: Modality::Diamond,
            action: action.into(),
            pos: PositionIndex::of(pos),
            body: Box::new(body),
        }
    }

    pub fn box_(action: impl Into<String>, pos: usize, body: Formula) -> Formula {
        Formula::Modal {
            modality: Modality::Box,
            action: action.into(),
            pos: PositionIndex::of(pos),
            body: Box::new(body),
        }
    }

    pub fn mu(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Fix {
            kind: FixKind::Mu,
            var: var.into(),
            body: Box::new(body),
        }
    }

    pub fn nu(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Fix {
            kind: FixKind::Nu,
            var: var.into(),
            body: Box::new(body),
        }
    }

    pub fn fix(kind: FixKind, var: impl Into<String>, body: Formula) -> Formula {
        Formula::Fix {
            kind,
            var: var.into(),
            body: Box::new(body),
        }
    }

    /// `κ body`; an identity replacement is dropped.
    pub fn repl(kappa: Replacement, body: Formula) -> Formula {
        if kappa.is_identity() {
            body
        } else {
            Formula::Repl(kappa, Box::new(body))
        }
    }

    /// The abbreviation `l -> body`, i.e. the complementary literal or `body`.
    pub fn implies(guard: Literal, body: Formula) -> Formula {
        Formula::or(Formula::Lit(guard.complement()), body)
    }

    /// The complement in positive normal form: literals, connectives,
    /// modalities and fixpoints are dualized; variables stay. On a closed
    /// formula this denotes the complement relation.
    pub fn negation(&self) -> Formula {
        match self {
            Formula::Lit(l) => Formula::Lit(l.complement()),
            Formula::Var(x) => Formula::Var(x.clone()),
            Formula::Or(a, b) => Formula::and(a.negation(), b.negation()),
            Formula::And(a, b) => Formula::or(a.negation(), b.negation()),
            Formula::Modal {
                modality,
                action,
                pos,
                body,
            } => Formula::Modal {
                modality: match modality {
                    Modality::Diamond => Modality::Box,
                    Modality::Box => Modality::Diamond,
                },
                action: action.clone(),
                pos: *pos,
                body: Box::new(body.negation()),
            },
            Formula::Fix { kind, var, body } => Formula::fix(kind.dual(), var.clone(), body.negation()),
            Formula::Repl(kappa, body) => Formula::Repl(kappa.clone(), Box::new(body.negation())),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Lit(_) | Formula::Var(_) => vec![],
            Formula::Or(a, b) | Formula::And(a, b) => vec![a, b],
            Formula::Modal { body, .. } | Formula::Fix { body, .. } | Formula::Repl(_, body) => {
                vec![body]
            }
        }
    }

    /// Pre-order traversal over every node occurrence.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        for c in self.children() {
            c.walk(visit);
        }
    }

    /// Number of node occurrences in the syntax tree.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// The set of subformulas under structural equality, including `self`.
    pub fn subformulas(&self) -> BTreeSet<&Formula> {
        let mut set = BTreeSet::new();
        self.walk(&mut |f| {
            set.insert(f);
        });
        set
    }

    /// Largest position index mentioned by a literal, modality or replacement;
    /// 1 when there is none.
    pub fn arity(&self) -> usize {
        let mut k = 1;
        self.walk(&mut |f| match f {
            Formula::Lit(l) => k = k.max(l.pos.get()),
            Formula::Modal { pos, .. } => k = k.max(pos.get()),
            Formula::Repl(kappa, _) => k = k.max(kappa.max_index()),
            _ => {}
        });
        k
    }

    /// Names of all binders in pre-order (duplicates included).
    pub fn binders(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |f| {
            if let Formula::Fix { var, .. } = f {
                out.push(var.as_str());
            }
        });
        out
    }

    /// Checks the unique-binding convention.
    pub fn validate(&self) -> Result<(), FormulaError> {
        let mut seen = BTreeSet::new();
        for v in self.binders() {
            if !seen.insert(v) {
                return Err(FormulaError::DuplicateBinder(v.to_string()));
            }
        }
        Ok(())
    }

    /// Variables with an occurrence outside the scope of a binder of the same name.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Var(x) => {
                    if !bound.iter().any(|b| b == x) {
                        out.insert(x.clone());
                    }
                }
                Formula::Fix { var, body, .. } => {
                    bound.push(var.clone());
                    go(body, bound, out);
                    bound.pop();
                }
                _ => {
                    for c in f.children() {
                        go(c, bound, out);
                    }
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Validates unique binding and closedness.
    pub fn validate_closed(&self) -> Result<(), FormulaError> {
        self.validate()?;
        let free = self.free_vars();
        if free.is_empty() {
            Ok(())
        } else {
            Err(FormulaError::NotClosed(free.into_iter().collect()))
        }
    }

    /// The map `fp`: each bound variable to its binding subformula.
    pub fn binder_map(&self) -> BinderMap<'_> {
        let mut map = BTreeMap::new();
        self.walk(&mut |f| {
            if let Formula::Fix { var, .. } = f {
                map.entry(var.as_str()).or_insert(f);
            }
        });
        BinderMap(map)
    }

    pub fn propositions(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Lit(l) = f {
                out.insert(l.prop.as_str());
            }
        });
        out
    }

    pub fn actions(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Modal { action, .. } = f {
                out.insert(action.as_str());
            }
        });
        out
    }

    /// All replacements occurring in the formula.
    pub fn replacements(&self) -> BTreeSet<&Replacement> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Repl(kappa, _) = f {
                out.insert(kappa);
            }
        });
        out
    }

    /// Every replacement is of the form `[i <- j]` or `[i <-> j]`.
    pub fn is_normalized(&self) -> bool {
        self.replacements().iter().all(|k| k.is_simple())
    }
}

/// Each bound variable mapped to the unique `mu X.psi` / `nu X.psi` binding it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinderMap<'a>(BTreeMap<&'a str, &'a Formula>);

impl<'a> BinderMap<'a> {
    pub fn get(&self, var: &str) -> Option<&'a Formula> {
        self.0.get(var).copied()
    }

    pub fn kind(&self, var: &str) -> Option<FixKind> {
        match self.get(var)? {
            Formula::Fix { kind, .. } => Some(*kind),
            _ => None,
        }
    }

    pub fn body(&self, var: &str) -> Option<&'a Formula> {
        match self.get(var)? {
            Formula::Fix { body, .. } => Some(body),
            _ => None,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &'a str> + '_ {
        self.0.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
