//! Fixpoint dependency order, alternation depth and Σ/Π classification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::formula::{FixKind, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    Sigma,
    Pi,
}

impl Class {
    pub fn dual(self) -> Class {
        match self {
            Class::Sigma => Class::Pi,
            Class::Pi => Class::Sigma,
        }
    }

    /// Outermost binder type of a full-length chain in this class.
    pub fn head(self) -> FixKind {
        match self {
            Class::Sigma => FixKind::Mu,
            Class::Pi => FixKind::Nu,
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Sigma => "Sigma",
            Class::Pi => "Pi",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlternationError {
    #[error("depth {i} is outside 1..={m}")]
    DepthOutOfRange { m: usize, i: usize },
}

/// `X > Y` iff the binder of `Y` lies strictly inside the binder of `X`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DependencyOrder {
    pairs: BTreeSet<(String, String)>,
}

impl DependencyOrder {
    pub fn greater(&self, x: &str, y: &str) -> bool {
        self.pairs.contains(&(x.to_string(), y.to_string()))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.pairs.iter().map(|(x, y)| (x.as_str(), y.as_str()))
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }
}

pub fn dependency_order(phi: &Formula) -> DependencyOrder {
    let mut pairs = BTreeSet::new();
    phi.walk(&mut |f| {
        if let Formula::Fix { var, body, .. } = f {
            for inner in body.binders() {
                pairs.insert((var.clone(), inner.to_string()));
            }
        }
    });
    DependencyOrder { pairs }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternationInfo {
    pub arity: usize,
    pub depth: BTreeMap<String, usize>,
    pub kind: BTreeMap<String, FixKind>,
    /// A longest strictly alternating chain of binder types, outermost first.
    pub alternation_type: Vec<FixKind>,
    pub sigma_level: usize,
    pub pi_level: usize,
}

impl AlternationInfo {
    pub fn max_depth(&self) -> usize {
        self.depth.values().copied().max().unwrap_or(0)
    }

    /// Chain-based membership: every alternating chain has length at most
    /// `m`, and every chain of length exactly `m` starts with the class head.
    pub fn is_member(&self, class: Class, m: usize) -> bool {
        let level = match class {
            Class::Sigma => self.sigma_level,
            Class::Pi => self.pi_level,
        };
        level <= m
    }

    /// Depth-consistent membership in the class with arity bound `k`: every
    /// binder has depth at most `m` and the type that its depth dictates.
    ///
    /// This is stronger than [`is_member`](Self::is_member) (which accepts
    /// e.g. `mu X. X` at level 2 of Σ) and is what the diagonal construction
    /// needs, since the simulating formula hands out binder types by depth.
    pub fn admits(&self, class: Class, k: usize, m: usize) -> bool {
        self.arity <= k
            && self.depth.iter().all(|(x, &d)| {
                d <= m
                    && type_from_depth(m, d).map(|t| match class {
                        Class::Sigma => t,
                        Class::Pi => t.dual(),
                    }) == Ok(self.kind[x])
            })
    }

    /// Smallest `m` for which [`admits`](Self::admits) holds, if any.
    pub fn admitted_level(&self, class: Class) -> Option<usize> {
        let top = self.max_depth();
        (top..=top + 1).find(|&m| self.admits(class, self.arity, m))
    }
}

pub fn alternation_depth(phi: &Formula) -> AlternationInfo {
    let mut depth = BTreeMap::new();
    let mut kind = BTreeMap::new();
    compute_depths(phi, &mut depth, &mut kind);

    let alternation_type = longest_chain(phi, &depth);
    let top = depth.values().copied().max().unwrap_or(0);
    let top_kinds: BTreeSet<FixKind> = depth.iter().filter(|(_, &d)| d == top).map(|(x, _)| kind[x]).collect();
    let (sigma_level, pi_level) = if top == 0 {
        (0, 0)
    } else if top_kinds.len() > 1 {
        (top + 1, top + 1)
    } else if top_kinds.contains(&FixKind::Mu) {
        (top, top + 1)
    } else {
        (top + 1, top)
    };

    AlternationInfo {
        arity: phi.arity(),
        depth,
        kind,
        alternation_type,
        sigma_level,
        pi_level,
    }
}

/// Returns the binders occurring in `f` with their depth, filling the maps.
fn compute_depths(
    f: &Formula,
    depth: &mut BTreeMap<String, usize>,
    kind: &mut BTreeMap<String, FixKind>,
) -> Vec<(FixKind, usize)> {
    let mut below = Vec::new();
    for c in f.children() {
        below.extend(compute_depths(c, depth, kind));
    }
    if let Formula::Fix { kind: k, var, .. } = f {
        let d = 1 + below.iter().filter(|(t, _)| t != k).map(|&(_, d)| d).max().unwrap_or(0);
        depth.insert(var.clone(), d);
        kind.insert(var.clone(), *k);
        below.push((*k, d));
    }
    below
}

/// Follows, from the first binder (pre-order) of maximal depth, the first
/// nested binder of opposite type and depth one less, and so on.
fn longest_chain(phi: &Formula, depth: &BTreeMap<String, usize>) -> Vec<FixKind> {
    fn find<'a>(
        f: &'a Formula,
        want: usize,
        not: Option<FixKind>,
        depth: &BTreeMap<String, usize>,
    ) -> Option<&'a Formula> {
        let mut hit = None;
        f.walk(&mut |g| {
            if hit.is_none() {
                if let Formula::Fix { kind, var, .. } = g {
                    if depth[var] == want && Some(*kind) != not {
                        hit = Some(g);
                    }
                }
            }
        });
        hit
    }

    let top = depth.values().copied().max().unwrap_or(0);
    let mut chain = Vec::new();
    let mut scope = phi;
    let mut last = None;
    for want in (1..=top).rev() {
        let start = if chain.is_empty() { scope } else { fix_body(scope) };
        match find(start, want, last, depth) {
            Some(g @ Formula::Fix { kind, .. }) => {
                chain.push(*kind);
                last = Some(*kind);
                scope = g;
            }
            _ => break,
        }
    }
    chain
}

fn fix_body(f: &Formula) -> &Formula {
    match f {
        Formula::Fix { body, .. } => body,
        _ => f,
    }
}

/// The binder type forced by depth `i` in a formula of level `m` of Σ:
/// μ iff `m` and `i` have the same parity.
pub fn type_from_depth(m: usize, i: usize) -> Result<FixKind, AlternationError> {
    if i < 1 || i > m {
        return Err(AlternationError::DepthOutOfRange { m, i });
    }
    Ok(if (m - i).is_multiple_of(2) {
        FixKind::Mu
    } else {
        FixKind::Nu
    })
}
