//! Naive denotational evaluator: formulas denote sets of k-tuples of states,
//! fixpoints are computed by Knaster-Tarski iteration from the bottom (μ) or
//! top (ν) of the lattice.

use std::collections::BTreeMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::formula::{FixKind, Formula, Modality, Replacement};
use crate::lts::{Lts, StateId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("arity {k} is smaller than the formula's arity {arity}")]
    ArityTooSmall { k: usize, arity: usize },
    #[error("variable {0} is free and not bound by the environment")]
    Unbound(String),
    #[error("replacement {kappa} mentions positions beyond {k}")]
    ReplacementBeyondArity { kappa: String, k: usize },
    #[error("state {0} is not a state of the system")]
    UnknownState(StateId),
    #[error("relation for {0} has the wrong shape")]
    ShapeMismatch(String),
}

/// A set of `k`-tuples over states `0..n`. Tuples are stored as a bitset
/// indexed in mixed radix, position 1 least significant.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TupleRelation {
    n: usize,
    k: usize,
    bits: FixedBitSet,
}

impl TupleRelation {
    pub fn empty(n: usize, k: usize) -> Self {
        TupleRelation {
            n,
            k,
            bits: FixedBitSet::with_capacity(n.pow(k as u32)),
        }
    }

    pub fn full(n: usize, k: usize) -> Self {
        let mut r = Self::empty(n, k);
        r.bits.insert_range(..);
        r
    }

    pub fn from_tuples<'a>(n: usize, k: usize, tuples: impl IntoIterator<Item = &'a [StateId]>) -> Self {
        let mut r = Self::empty(n, k);
        for t in tuples {
            r.insert(t);
        }
        r
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    /// Number of slots, `n^k`.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn index(&self, tuple: &[StateId]) -> usize {
        debug_assert_eq!(tuple.len(), self.k);
        tuple.iter().rev().fold(0, |acc, &s| acc * self.n + s)
    }

    pub fn tuple(&self, mut index: usize) -> Vec<StateId> {
        let mut t = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            t.push(index % self.n);
            index /= self.n;
        }
        t
    }

    pub fn contains(&self, tuple: &[StateId]) -> bool {
        tuple.len() == self.k && tuple.iter().all(|&s| s < self.n) && self.bits.contains(self.index(tuple))
    }

    pub fn insert(&mut self, tuple: &[StateId]) {
        let i = self.index(tuple);
        self.bits.insert(i);
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<StateId>> + '_ {
        self.bits.ones().map(|i| self.tuple(i))
    }

    pub fn is_subset(&self, other: &TupleRelation) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union(&self, other: &TupleRelation) -> TupleRelation {
        let mut r = self.clone();
        r.bits.union_with(&other.bits);
        r
    }

    pub fn intersection(&self, other: &TupleRelation) -> TupleRelation {
        let mut r = self.clone();
        r.bits.intersect_with(&other.bits);
        r
    }

    pub fn complement(&self) -> TupleRelation {
        let mut r = self.clone();
        r.bits.toggle_range(..);
        r
    }
}

impl fmt::Debug for TupleRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TupleRelation(n={}, k={}) ", self.n, self.k)?;
        f.debug_set().entries(self.iter()).finish()
    }
}

pub type Environment = BTreeMap<String, TupleRelation>;

/// `(s_1..s_k)` is in the result iff `(s_κ(1)..s_κ(k))` is in `rel`.
pub fn apply_replacement(kappa: &Replacement, rel: &TupleRelation) -> Result<TupleRelation, SemanticsError> {
    let table = kappa.table(rel.k).map_err(|_| SemanticsError::ReplacementBeyondArity {
        kappa: kappa.to_string(),
        k: rel.k,
    })?;
    Ok(replace(&table, rel))
}

fn replace(table: &[usize], rel: &TupleRelation) -> TupleRelation {
    let mut out = TupleRelation::empty(rel.n, rel.k);
    let mut src = vec![0; rel.k];
    for idx in 0..rel.universe() {
        let t = rel.tuple(idx);
        for (p, slot) in src.iter_mut().enumerate() {
            *slot = t[table[p] - 1];
        }
        if rel.bits.contains(rel.index(&src)) {
            out.bits.insert(idx);
        }
    }
    out
}

/// The denotation of `phi` as a `k`-ary relation over `lts`, with free
/// variables interpreted by `rho`.
pub fn evaluate(phi: &Formula, lts: &Lts, k: usize, rho: &Environment) -> Result<TupleRelation, SemanticsError> {
    let arity = phi.arity();
    if k < arity {
        return Err(SemanticsError::ArityTooSmall { k, arity });
    }
    for x in phi.free_vars() {
        match rho.get(&x) {
            None => return Err(SemanticsError::Unbound(x)),
            Some(r) if r.n != lts.num_states() || r.k != k => return Err(SemanticsError::ShapeMismatch(x)),
            Some(_) => {}
        }
    }
    let mut ev = Evaluator {
        lts,
        n: lts.num_states(),
        k,
        env: rho.clone(),
    };
    Ok(ev.eval(phi))
}

/// Whether `tuple` satisfies the closed formula `phi`; `k` is the tuple length.
pub fn check(phi: &Formula, lts: &Lts, tuple: &[StateId]) -> Result<bool, SemanticsError> {
    for &s in tuple {
        if s >= lts.num_states() {
            return Err(SemanticsError::UnknownState(s));
        }
    }
    let rel = evaluate(phi, lts, tuple.len(), &Environment::new())?;
    Ok(rel.contains(tuple))
}

/// `check` on the diagonal tuple `(s, .., s)` of length `arity(phi)`.
pub fn check_state(phi: &Formula, lts: &Lts, s: StateId) -> Result<bool, SemanticsError> {
    check(phi, lts, &vec![s; phi.arity()])
}

struct Evaluator<'a> {
    lts: &'a Lts,
    n: usize,
    k: usize,
    env: Environment,
}

impl Evaluator<'_> {
    fn eval(&mut self, f: &Formula) -> TupleRelation {
        match f {
            Formula::Lit(l) => {
                let i = l.pos.offset();
                let mut r = TupleRelation::empty(self.n, self.k);
                for idx in 0..r.universe() {
                    let s = (idx / self.n.pow(i as u32)) % self.n;
                    if self.lts.has_label(s, &l.prop) != l.negated {
                        r.bits.insert(idx);
                    }
                }
                r
            }
            Formula::Var(x) => self.env[x].clone(),
            Formula::Or(a, b) => self.eval(a).union(&self.eval(b)),
            Formula::And(a, b) => self.eval(a).intersection(&self.eval(b)),
            Formula::Modal {
                modality,
                action,
                pos,
                body,
            } => {
                let inner = self.eval(body);
                let stride = self.n.pow(pos.offset() as u32);
                let mut r = TupleRelation::empty(self.n, self.k);
                for idx in 0..r.universe() {
                    let s = (idx / stride) % self.n;
                    let base = idx - s * stride;
                    let mut succ = self.lts.succ_unchecked(s, action).iter();
                    let holds = match modality {
                        Modality::Diamond => succ.any(|&t| inner.bits.contains(base + t * stride)),
                        Modality::Box => succ.all(|&t| inner.bits.contains(base + t * stride)),
                    };
                    if holds {
                        r.bits.insert(idx);
                    }
                }
                r
            }
            Formula::Fix { kind, var, body } => {
                let mut cur = match kind {
                    FixKind::Mu => TupleRelation::empty(self.n, self.k),
                    FixKind::Nu => TupleRelation::full(self.n, self.k),
                };
                let saved = self.env.remove(var);
                loop {
                    self.env.insert(var.clone(), cur.clone());
                    let next = self.eval(body);
                    if next == cur {
                        break;
                    }
                    cur = next;
                }
                match saved {
                    Some(r) => self.env.insert(var.clone(), r),
                    None => self.env.remove(var),
                };
                cur
            }
            Formula::Repl(kappa, body) => {
                let inner = self.eval(body);
                let table = kappa.table(self.k).expect("replacement within arity");
                replace(&table, &inner)
            }
        }
    }
}
