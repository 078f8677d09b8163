//! Self-application: a formula's syntax DAG as a transition system `T_φ`
//! labelled with operator kinds, and the arity-(k+1) formula `Φ^{k+1}_m`
//! that plays the dual of any level-m, arity-k formula on its own encoding.
//!
//! Labels of `T_φ` (`j` indexes the supplied proposition list):
//!
//! | node              | label            |
//! |-------------------|------------------|
//! | `q_j(i)`          | `ppos_{j}_{i}`   |
//! | `~q_j(i)`         | `pneg_{j}_{i}`   |
//! | `&`, `|`          | `pand`, `por`    |
//! | `<a>_i`, `[a]_i`  | `pdia_{i}`, `pbox_{i}` |
//! | binder / variable of depth `d` | `pfp_{d}` |
//! | replacement `κ`   | `prp_{code}` with items `κ(i)` `l` `i` joined by `_` |

use std::collections::BTreeSet;

use crate::alternation::{alternation_depth, Class};
use crate::formula::{FixKind, Formula, FormulaError, Literal, Node, PositionIndex, Replacement, SubformulaGraph};
use crate::lts::{Lts, StateId};
use crate::{holds, Engine, EngineError};

/// The single action used by encodings and simulating formulas.
pub const ACTION: &str = "a";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagonalError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("the level m must be at least 1")]
    ZeroLevel,
    #[error("the arity k must be at least 1")]
    ZeroArity,
    #[error("formula has arity {arity}, more than k = {k}")]
    ArityExceeded { arity: usize, k: usize },
    #[error("the proposition list is empty")]
    NoPropositions,
    #[error("proposition {0} is not in the proposition list")]
    UnknownProposition(String),
    #[error("action {0} is used; encodings support the single action `a`")]
    ForeignAction(String),
    #[error("formula is not in {class} at arity {k}, level {m}")]
    NotAdmitted { class: Class, k: usize, m: usize },
    #[error("formula is not normalized: {0} is not a single swap or copy")]
    NotNormalized(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

pub fn literal_label(j: usize, i: usize, negated: bool) -> String {
    if negated {
        format!("pneg_{j}_{i}")
    } else {
        format!("ppos_{j}_{i}")
    }
}

pub fn fixpoint_label(depth: usize) -> String {
    format!("pfp_{depth}")
}

pub fn modal_label(diamond: bool, i: usize) -> String {
    if diamond {
        format!("pdia_{i}")
    } else {
        format!("pbox_{i}")
    }
}

pub fn replacement_label(kappa: &Replacement) -> String {
    let items: Vec<String> = kappa.entries().map(|(i, v)| format!("{v}l{i}")).collect();
    format!("prp_{}", items.join("_"))
}

fn prop_index(props: &[String], p: &str) -> Result<usize, DiagonalError> {
    props
        .iter()
        .position(|q| q == p)
        .ok_or_else(|| DiagonalError::UnknownProposition(p.to_string()))
}

/// `T_φ`: one state per distinct subformula (the root is initial), edges
/// from connectives and modalities to their operands, from binders to their
/// bodies and from variables to the body of their binder.
pub fn encode_lts(phi: &Formula, props: &[String]) -> Result<Lts, DiagonalError> {
    phi.validate_closed()?;
    let graph = SubformulaGraph::new(phi)?;
    let depth = alternation_depth(phi).depth;
    let mut lts = Lts::new(graph.len());
    lts.set_init(graph.root()).expect("root is a state");
    for (id, node) in graph.nodes() {
        let label = match node {
            Node::Lit(l) => literal_label(prop_index(props, &l.prop)?, l.pos.get(), l.negated),
            Node::Or(..) => "por".to_string(),
            Node::And(..) => "pand".to_string(),
            Node::Modal { modality, pos, .. } => modal_label(*modality == crate::formula::Modality::Diamond, pos.get()),
            Node::Fix { var, .. } | Node::Var(var) => fixpoint_label(depth[var]),
            Node::Repl(kappa, _) => replacement_label(kappa),
        };
        lts.add_label(id, &label).expect("state exists");
        lts.set_name(id, graph.formula(id).to_string());
        let targets = match node {
            Node::Var(x) => vec![graph.unfold(x).expect("closed formula")],
            other => other.children(),
        };
        for t in targets {
            lts.add_transition(id, ACTION, t).expect("state exists");
        }
    }
    Ok(lts)
}

/// Every single swap and copy over positions `1..=k`.
pub fn simple_replacements(k: usize) -> Vec<Replacement> {
    let mut out = Vec::new();
    for i in 1..=k {
        for j in 1..=k {
            if i < j {
                out.push(Replacement::swap(i, j));
            }
            if i != j {
                out.push(Replacement::copy(i, j));
            }
        }
    }
    out
}

pub(crate) fn guard(prop: impl Into<String>, pos: usize) -> Literal {
    Literal {
        prop: prop.into(),
        pos: PositionIndex::of(pos),
        negated: false,
    }
}

pub(crate) fn var(i: usize) -> Formula {
    Formula::var(format!("X{i}"))
}

/// Wraps `body` in the prefix `ν X_m. μ X_{m-1}. ... X_1` (every binder
/// flipped when `dual`).
pub(crate) fn prefix(m: usize, dual: bool, body: Formula) -> Formula {
    (1..=m).fold(body, |acc, i| {
        let kind = if (m - i).is_multiple_of(2) {
            FixKind::Nu
        } else {
            FixKind::Mu
        };
        let kind = if dual { kind.dual() } else { kind };
        Formula::fix(kind, format!("X{i}"), acc)
    })
}

/// `Φ^{k+1}_m` over `props`, with replacement clauses for every simple
/// replacement over `1..=k`.
pub fn diagonal_formula(k: usize, m: usize, props: &[String], dual: bool) -> Result<Formula, DiagonalError> {
    diagonal_formula_with(k, m, props, &simple_replacements(k), dual)
}

/// `Φ^{k+1}_m` with replacement clauses for exactly `kappas`.
pub fn diagonal_formula_with(
    k: usize,
    m: usize,
    props: &[String],
    kappas: &[Replacement],
    dual: bool,
) -> Result<Formula, DiagonalError> {
    if k < 1 {
        return Err(DiagonalError::ZeroArity);
    }
    if m < 1 {
        return Err(DiagonalError::ZeroLevel);
    }
    if props.is_empty() {
        return Err(DiagonalError::NoPropositions);
    }
    let n = k + 1;
    let next = |f: Formula| Formula::box_(ACTION, n, f);
    let mut clauses = Vec::new();
    for (j, q) in props.iter().enumerate() {
        for i in 1..=k {
            clauses.push(Formula::implies(
                guard(literal_label(j, i, false), n),
                Formula::neg_lit(q, i),
            ));
            clauses.push(Formula::implies(
                guard(literal_label(j, i, true), n),
                Formula::lit(q, i),
            ));
        }
    }
    clauses.push(Formula::implies(guard("pand", n), Formula::diamond(ACTION, n, var(1))));
    clauses.push(Formula::implies(guard("por", n), next(var(1))));
    for i in 1..=k {
        clauses.push(Formula::implies(
            guard(modal_label(true, i), n),
            Formula::box_(ACTION, i, next(var(1))),
        ));
        clauses.push(Formula::implies(
            guard(modal_label(false, i), n),
            Formula::diamond(ACTION, i, next(var(1))),
        ));
    }
    let kappas: BTreeSet<&Replacement> = kappas.iter().filter(|r| !r.is_identity()).collect();
    for kappa in kappas {
        clauses.push(Formula::implies(
            guard(replacement_label(kappa), n),
            Formula::repl(kappa.clone(), next(var(1))),
        ));
    }
    for i in 1..=m {
        clauses.push(Formula::implies(guard(fixpoint_label(i), n), next(var(i))));
    }
    let body = Formula::and_all(clauses).expect("clauses are nonempty");
    Ok(prefix(m, dual, body))
}

/// Verdicts of `φ` and of the simulating formula at the root of the encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiagReport {
    pub phi_holds: bool,
    pub diag_holds: bool,
    pub states: usize,
}

impl DiagReport {
    /// Exactly one of the two holds.
    pub fn ok(&self) -> bool {
        self.phi_holds != self.diag_holds
    }
}

/// Checks the preconditions shared by both diagonal pipelines.
pub(crate) fn check_admissible(phi: &Formula, k: usize, m: usize, class: Class) -> Result<(), DiagonalError> {
    if k < 1 {
        return Err(DiagonalError::ZeroArity);
    }
    if m < 1 {
        return Err(DiagonalError::ZeroLevel);
    }
    phi.validate_closed()?;
    if let Some(a) = phi.actions().into_iter().find(|&a| a != ACTION) {
        return Err(DiagonalError::ForeignAction(a.to_string()));
    }
    if !alternation_depth(phi).admits(class, k, m) {
        return Err(DiagonalError::NotAdmitted { class, k, m });
    }
    Ok(())
}

/// Evaluates `φ` at `(root, .., root)` (length `k`) and `Φ^{k+1}_m` at the
/// root tuple of length `k + 1` on `T_φ`. For `class = Pi` the dual
/// simulating formula is used.
pub fn diagonal_check(
    phi: &Formula,
    k: usize,
    m: usize,
    props: &[String],
    class: Class,
    engine: Engine,
) -> Result<DiagReport, DiagonalError> {
    check_admissible(phi, k, m, class)?;
    for p in phi.propositions() {
        prop_index(props, p)?;
    }
    let lts = encode_lts(phi, props)?;
    let mut kappas = simple_replacements(k);
    kappas.extend(phi.replacements().into_iter().cloned());
    let big = diagonal_formula_with(k, m, props, &kappas, class == Class::Pi)?;
    report(phi, &big, &lts, k, engine)
}

pub(crate) fn report(
    phi: &Formula,
    big: &Formula,
    lts: &Lts,
    k: usize,
    engine: Engine,
) -> Result<DiagReport, DiagonalError> {
    let root: StateId = lts.init();
    Ok(DiagReport {
        phi_holds: holds(engine, phi, lts, &vec![root; k])?,
        diag_holds: holds(engine, big, lts, &vec![root; k + 1])?,
        states: lts.num_states(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn props(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn encode_least_fixpoint_loop() {
        let lts = encode_lts(&parse_formula("mu X. X").unwrap(), &props(&["q0"])).unwrap();
        assert_eq!(lts.num_states(), 2);
        let root = lts.init();
        let x = 1 - root;
        assert_eq!(lts.successors(root, "a").unwrap(), &[x]);
        assert_eq!(lts.successors(x, "a").unwrap(), &[x]);
        assert!(lts.has_label(root, "pfp_1") && lts.has_label(x, "pfp_1"));
    }

    #[test]
    fn encode_literal_disjunction() {
        let lts = encode_lts(&parse_formula("q0(1) | ~q0(1)").unwrap(), &props(&["q0"])).unwrap();
        assert_eq!(lts.num_states(), 3);
        assert!(lts.has_label(lts.init(), "por"));
        assert_eq!(lts.successors(lts.init(), "a").unwrap().len(), 2);
        let leaves: BTreeSet<&String> = lts
            .successors(lts.init(), "a")
            .unwrap()
            .iter()
            .flat_map(|&s| lts.labels(s))
            .collect();
        assert_eq!(leaves, [&"pneg_0_1".to_string(), &"ppos_0_1".to_string()].into());
    }

    #[test]
    fn encoding_roundtrips_through_text() {
        let lts = encode_lts(&parse_formula("mu X. X").unwrap(), &props(&["q0"])).unwrap();
        assert!(crate::lts::parse_lts(&lts.to_string()).unwrap().same_system(&lts));
    }

    #[test]
    fn replacement_labels() {
        assert_eq!(replacement_label(&Replacement::swap(1, 2)), "prp_2l1_1l2");
        assert_eq!(replacement_label(&Replacement::copy(1, 2)), "prp_1l2");
    }

    #[test]
    fn simulating_formula_shape() {
        let phi = diagonal_formula(1, 1, &props(&["q0"]), false).unwrap();
        assert!(matches!(&phi, Formula::Fix { kind: FixKind::Nu, var, .. } if var == "X1"));
        assert_eq!(phi.arity(), 2);
        let info = alternation_depth(&phi);
        assert!(info.is_member(Class::Pi, 1) && info.admits(Class::Pi, 2, 1));
        assert_eq!(
            diagonal_formula(1, 0, &props(&["q0"]), false),
            Err(DiagonalError::ZeroLevel)
        );
        assert_eq!(
            diagonal_formula(0, 1, &props(&["q0"]), false),
            Err(DiagonalError::ZeroArity)
        );
    }

    #[test]
    fn classification_up_to_arity_three_level_four() {
        for k in 1..=3 {
            for m in 1..=4 {
                let info = alternation_depth(&diagonal_formula(k, m, &props(&["q0", "q1"]), false).unwrap());
                assert_eq!(info.pi_level, m);
                assert!(info.admits(Class::Pi, k + 1, m));
                let dual = alternation_depth(&diagonal_formula(k, m, &props(&["q0"]), true).unwrap());
                assert_eq!(dual.sigma_level, m);
            }
        }
    }

    #[test]
    fn least_and_greatest_loops() {
        let p = props(&["q0"]);
        for engine in [Engine::Naive, Engine::Game] {
            let r = diagonal_check(&parse_formula("mu X. X").unwrap(), 1, 1, &p, Class::Sigma, engine).unwrap();
            assert!(!r.phi_holds && r.diag_holds);
            let r = diagonal_check(&parse_formula("nu X. X").unwrap(), 1, 2, &p, Class::Sigma, engine).unwrap();
            assert!(r.phi_holds && !r.diag_holds);
        }
    }

    #[test]
    fn precondition_errors() {
        let p = props(&["q0"]);
        let mu = parse_formula("mu X. X").unwrap();
        assert!(matches!(
            diagonal_check(
                &parse_formula("nu X. X").unwrap(),
                1,
                1,
                &p,
                Class::Sigma,
                Engine::Naive
            ),
            Err(DiagonalError::NotAdmitted { .. })
        ));
        assert!(matches!(
            diagonal_check(
                &parse_formula("<b>_1 q0(1)").unwrap(),
                1,
                1,
                &p,
                Class::Sigma,
                Engine::Naive
            ),
            Err(DiagonalError::ForeignAction(_))
        ));
        assert!(matches!(
            diagonal_check(&parse_formula("r(1)").unwrap(), 1, 1, &p, Class::Sigma, Engine::Naive),
            Err(DiagonalError::UnknownProposition(_))
        ));
        assert_eq!(
            diagonal_check(&mu, 1, 0, &p, Class::Sigma, Engine::Naive),
            Err(DiagonalError::ZeroLevel)
        );
    }
}
