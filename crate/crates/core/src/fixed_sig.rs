//! The diagonal construction over a fixed signature of ten propositions.
//!
//! Indices that `T_φ` carries in its labels (proposition and pebble numbers,
//! depths, replacement maps) are instead spelled out as gadget paths hanging
//! off the host state. A path is a sequence of segments; `SEG(c)` is `c`
//! unmarked states followed by one `pdot` state. See `GADGETS.md` for the
//! frozen offset table.
//!
//! | host              | label  | gadget                           | then        |
//! |-------------------|--------|----------------------------------|-------------|
//! | `q_j(i)` / `~q_j(i)` | `ppos` / `pneg` | `SEG(i-1) SEG(j)`    | dead end    |
//! | binder / variable, depth `d` | `pfp` | `SEG(d-1)`           | body        |
//! | `<a>_i` / `[a]_i` | `pdia` / `pbox` | `SEG(i-1) SEG(i-1)`     | operand     |
//! | `{x<->y}`, x < y  | `psw`  | `SEG(a) SEG(b) SEG(b) SEG(a)`, a = x-1, b = y-x-1 | operand |
//! | `{x<-y}`          | `prp`  | same, a = x-1, b = ((y-x) mod k)-1 | operand   |
//! | `&` / `|`         | `pand` / `por` | none                     | operands    |

use crate::alternation::Class;
use crate::diagonal::{check_admissible, guard, prefix, report, var, DiagReport, DiagonalError, ACTION};
use crate::formula::{decompose_replacement, Formula, Modality, Node, Replacement, SubformulaGraph};
use crate::lts::{Lts, StateId};
use crate::Engine;

/// The fixed signature, in enumeration order: formulas over it use these
/// names as `q0..q9`.
pub const PROP1: [&str; 10] = [
    "ppos", "pneg", "pand", "por", "pdia", "pbox", "pfp", "prp", "psw", "pdot",
];

pub const DOT: &str = "pdot";

/// Data encoded by a gadget path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Datum {
    /// Proposition `q_j` tested at position `i`.
    Literal {
        j: usize,
        i: usize,
    },
    Fixpoint {
        depth: usize,
    },
    Modality {
        i: usize,
    },
    /// `{x<->y}` with `x < y`.
    Swap {
        x: usize,
        y: usize,
    },
    /// Position `to` reads pebble `from`.
    Copy {
        from: usize,
        to: usize,
    },
}

fn seg(c: usize) -> impl Iterator<Item = bool> {
    std::iter::repeat_n(false, c).chain(std::iter::once(true))
}

/// Marker pattern of a gadget path for arity `k`: one entry per fresh
/// state, `true` where it carries `pdot`.
pub fn gadget_path(datum: Datum, k: usize) -> Vec<bool> {
    let choreography = |a: usize, b: usize| seg(a).chain(seg(b)).chain(seg(b)).chain(seg(a)).collect();
    match datum {
        Datum::Literal { j, i } => seg(i - 1).chain(seg(j)).collect(),
        Datum::Fixpoint { depth } => seg(depth - 1).collect(),
        Datum::Modality { i } => seg(i - 1).chain(seg(i - 1)).collect(),
        Datum::Swap { x, y } => choreography(x - 1, y - x - 1),
        Datum::Copy { from, to } => choreography(from - 1, (to + k - from) % k - 1),
    }
}

fn prop1_index(p: &str) -> Result<usize, DiagonalError> {
    PROP1
        .iter()
        .position(|&q| q == p)
        .ok_or_else(|| DiagonalError::UnknownProposition(p.to_string()))
}

fn replacement_datum(kappa: &Replacement) -> Result<Datum, DiagonalError> {
    if let Some((x, y)) = kappa.as_swap() {
        Ok(Datum::Swap { x, y })
    } else if let Some((from, to)) = kappa.as_copy() {
        Ok(Datum::Copy { from, to })
    } else {
        Err(DiagonalError::NotNormalized(kappa.to_string()))
    }
}

/// `T′_φ` for a normalized formula of arity at most `k` over [`PROP1`].
/// Hosts keep the state ids of [`SubformulaGraph`]; gadget states follow.
pub fn encode_lts_fixed(phi: &Formula, k: usize) -> Result<Lts, DiagonalError> {
    phi.validate_closed()?;
    if k < phi.arity() {
        return Err(DiagonalError::ArityExceeded { arity: phi.arity(), k });
    }
    let graph = SubformulaGraph::new(phi)?;
    let depth = crate::alternation::alternation_depth(phi).depth;
    let mut lts = Lts::new(graph.len());
    lts.set_init(graph.root()).expect("root is a state");

    let attach = |lts: &mut Lts, host: StateId, path: Vec<bool>, target: Option<StateId>| {
        let mut cur = host;
        for mark in path {
            let s = lts.add_state();
            if mark {
                lts.add_label(s, DOT).unwrap();
            }
            lts.add_transition(cur, ACTION, s).unwrap();
            cur = s;
        }
        if let Some(t) = target {
            lts.add_transition(cur, ACTION, t).unwrap();
        }
    };

    for (id, node) in graph.nodes() {
        lts.set_name(id, graph.formula(id).to_string());
        let (label, gadget, target) = match node {
            Node::Lit(l) => {
                let j = prop1_index(&l.prop)?;
                let label = if l.negated { "pneg" } else { "ppos" };
                (label, Some(Datum::Literal { j, i: l.pos.get() }), None)
            }
            Node::And(..) | Node::Or(..) => {
                let label = if matches!(node, Node::And(..)) { "pand" } else { "por" };
                lts.add_label(id, label).unwrap();
                for c in node.children() {
                    lts.add_transition(id, ACTION, c).unwrap();
                }
                continue;
            }
            Node::Modal {
                modality, pos, body, ..
            } => {
                let label = if *modality == Modality::Diamond { "pdia" } else { "pbox" };
                (label, Some(Datum::Modality { i: pos.get() }), Some(*body))
            }
            Node::Fix { var, body, .. } => ("pfp", Some(Datum::Fixpoint { depth: depth[var] }), Some(*body)),
            Node::Var(x) => (
                "pfp",
                Some(Datum::Fixpoint { depth: depth[x] }),
                Some(graph.unfold(x).expect("closed formula")),
            ),
            Node::Repl(kappa, body) => {
                let datum = replacement_datum(kappa)?;
                let label = if matches!(datum, Datum::Swap { .. }) {
                    "psw"
                } else {
                    "prp"
                };
                (label, Some(datum), Some(*body))
            }
        };
        lts.add_label(id, label).unwrap();
        if let Some(d) = gadget {
            attach(&mut lts, id, gadget_path(d, k), target);
        }
    }
    Ok(lts)
}

/// Cyclic shift of positions `lo..=k` by one: position `p` reads pebble
/// `p + 1` (`left`) or `p - 1` (otherwise), wrapping around.
fn shift(k: usize, lo: usize, left: bool) -> Replacement {
    let mut table: Vec<usize> = (1..=k).collect();
    if lo < k {
        for p in lo..=k {
            table[p - 1] = match (left, p) {
                (true, p) if p == k => lo,
                (true, p) => p + 1,
                (false, p) if p == lo => k,
                (false, p) => p - 1,
            };
        }
    }
    Replacement::from_table(&table).expect("shift stays within 1..=k")
}

/// `kappa body` written with simple replacements only.
fn replace(kappa: &Replacement, k: usize, body: Formula) -> Formula {
    decompose_replacement(kappa, k)
        .into_iter()
        .rev()
        .fold(body, |acc, t| Formula::repl(t, acc))
}

struct Builder {
    k: usize,
}

impl Builder {
    fn n(&self) -> usize {
        self.k + 1
    }

    fn next(&self, f: Formula) -> Formula {
        Formula::box_(ACTION, self.n(), f)
    }

    fn dot(&self) -> Formula {
        Formula::lit(DOT, self.n())
    }

    /// At a marked state continue with `then`, else with `otherwise`;
    /// `None` for `otherwise` means the segment must end here.
    fn branch(&self, then: Formula, otherwise: Option<Formula>) -> Formula {
        let marked = Formula::and(self.dot(), then);
        match otherwise {
            Some(o) => Formula::or(marked, Formula::and(Formula::neg_lit(DOT, self.n()), o)),
            None => marked,
        }
    }

    /// Walks a segment of up to `levels - 1` unmarked states, applying `step`
    /// at each one, and continues with `end` at the marker.
    fn walk(&self, levels: usize, step: &Replacement, end: &Formula) -> Formula {
        (1..levels).fold(self.branch(end.clone(), None), |inner, _| {
            let more = replace(step, self.k, self.next(inner));
            self.branch(end.clone(), Some(more))
        })
    }
}

/// Decodes a pebble number from a segment: after `i - 1` unmarked states
/// the pebble that was at position `i` sits at position 1, and `leaf`
/// is evaluated at the marker. At most `k - 1` shifts occur.
pub fn search_peb_formula(k: usize, leaf: Formula) -> Formula {
    Builder { k }.walk(k, &shift(k, 1, true), &leaf)
}

/// Decodes a proposition index `j < h` from a segment of `j` unmarked states
/// and tests `q_j` at position 1 (negated when `negate`).
pub fn search_prop_formula(k: usize, h: usize, negate: bool) -> Result<Formula, DiagonalError> {
    if !(1..=PROP1.len()).contains(&h) {
        return Err(DiagonalError::UnknownProposition(format!("index {h} out of 1..=10")));
    }
    let b = Builder { k };
    let leaf = |t: usize| {
        if negate {
            Formula::neg_lit(PROP1[t], 1)
        } else {
            Formula::lit(PROP1[t], 1)
        }
    };
    let last = b.branch(leaf(h - 1), None);
    Ok((0..h - 1)
        .rev()
        .fold(last, |inner, t| b.branch(leaf(t), Some(b.next(inner)))))
}

/// `Φ′^{k+1}_m`: the simulating formula over [`PROP1`].
pub fn diagonal_formula_fixed(k: usize, m: usize, dual: bool) -> Result<Formula, DiagonalError> {
    if k < 1 {
        return Err(DiagonalError::ZeroArity);
    }
    if m < 1 {
        return Err(DiagonalError::ZeroLevel);
    }
    let b = Builder { k };
    let n = b.n();
    let back = b.next(var(1));
    let clause = |label: &str, body: Formula| Formula::implies(guard(label, n), body);
    let mut clauses = Vec::new();

    for (label, negate) in [("ppos", true), ("pneg", false)] {
        let prop = b.next(search_prop_formula(k, PROP1.len(), negate)?);
        clauses.push(clause(label, b.next(search_peb_formula(k, prop))));
    }
    clauses.push(clause("pand", Formula::diamond(ACTION, n, var(1))));
    clauses.push(clause("por", back.clone()));

    let (left, right) = (shift(k, 1, true), shift(k, 1, false));
    let go_back = b.walk(k, &right, &back);
    for (label, modality) in [("pdia", Modality::Box), ("pbox", Modality::Diamond)] {
        let op = Formula::Modal {
            modality,
            action: ACTION.to_string(),
            pos: crate::formula::PositionIndex::of(1),
            body: Box::new(b.next(go_back.clone())),
        };
        clauses.push(clause(label, b.next(b.walk(k, &left, &op))));
    }

    if k >= 2 {
        let (left2, right2) = (shift(k, 2, true), shift(k, 2, false));
        for (label, core) in [("psw", Replacement::swap(1, 2)), ("prp", Replacement::copy(1, 2))] {
            let rd = b.walk(k, &right, &back);
            let rc = b.walk(k - 1, &right2, &b.next(rd));
            let rb = b.walk(k - 1, &left2, &Formula::repl(core, b.next(rc)));
            let ra = b.walk(k, &left, &b.next(rb));
            clauses.push(clause(label, b.next(ra)));
        }
    }

    let fp = (1..m).rev().fold(b.branch(b.next(var(m)), None), |inner, r| {
        b.branch(b.next(var(r)), Some(b.next(inner)))
    });
    clauses.push(clause("pfp", b.next(fp)));

    let body = Formula::and_all(clauses).expect("clauses are nonempty");
    Ok(prefix(m, dual, body))
}

/// The fixed-signature counterpart of
/// [`diagonal_check`](crate::diagonal::diagonal_check), on `T′_φ`.
pub fn diagonal_check_fixed(
    phi: &Formula,
    k: usize,
    m: usize,
    class: Class,
    engine: Engine,
) -> Result<DiagReport, DiagonalError> {
    check_admissible(phi, k, m, class)?;
    if let Some(kappa) = phi.replacements().into_iter().find(|r| !r.is_simple()) {
        return Err(DiagonalError::NotNormalized(kappa.to_string()));
    }
    for p in phi.propositions() {
        prop1_index(p)?;
    }
    let lts = encode_lts_fixed(phi, k)?;
    let big = diagonal_formula_fixed(k, m, class == Class::Pi)?;
    report(phi, &big, &lts, k, engine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alternation::alternation_depth;
    use crate::formula::parse_formula;
    use crate::semantics::check;

    fn marks(path: &[bool]) -> String {
        path.iter().map(|&m| if m { '*' } else { '.' }).collect()
    }

    #[test]
    fn golden_gadget_shapes() {
        assert_eq!(marks(&gadget_path(Datum::Literal { j: 3, i: 2 }, 2)), ".*...*");
        assert_eq!(marks(&gadget_path(Datum::Literal { j: 0, i: 1 }, 1)), "**");
        assert_eq!(marks(&gadget_path(Datum::Fixpoint { depth: 1 }, 1)), "*");
        assert_eq!(marks(&gadget_path(Datum::Fixpoint { depth: 3 }, 1)), "..*");
        assert_eq!(marks(&gadget_path(Datum::Modality { i: 2 }, 2)), ".*.*");
        assert_eq!(marks(&gadget_path(Datum::Swap { x: 1, y: 3 }, 3)), "*.*.**");
        assert_eq!(marks(&gadget_path(Datum::Copy { from: 3, to: 1 }, 3)), "..***..*");
        assert_eq!(marks(&gadget_path(Datum::Copy { from: 1, to: 2 }, 2)), "****");
    }

    #[test]
    fn shifts_are_inverse_cycles() {
        assert_eq!(shift(3, 1, true).table(3).unwrap(), vec![2, 3, 1]);
        assert_eq!(shift(3, 1, false).table(3).unwrap(), vec![3, 1, 2]);
        assert_eq!(shift(3, 2, true).table(3).unwrap(), vec![1, 3, 2]);
        assert!(shift(2, 2, true).is_identity());
        assert!(shift(1, 1, true).is_identity());
    }

    #[test]
    fn literal_gadget_host() {
        let phi = parse_formula("pand(2) | ppos(1)").unwrap();
        let lts = encode_lts_fixed(&phi, 2).unwrap();
        // Hosts: 2 literals + disjunction; SEG(1) SEG(2) and SEG(0) SEG(0).
        assert_eq!(lts.num_states(), 3 + 5 + 2);
        for s in 0..3 {
            let kinds = lts.labels(s).iter().filter(|l| PROP1.contains(&l.as_str())).count();
            assert_eq!(kinds, 1);
        }
    }

    #[test]
    fn fixpoint_gadget_of_depth_one() {
        let lts = encode_lts_fixed(&parse_formula("mu X. X").unwrap(), 1).unwrap();
        // Two hosts, each with a one-state marked path back to the variable.
        assert_eq!(lts.num_states(), 4);
        let root = lts.init();
        let d = lts.successors(root, "a").unwrap()[0];
        assert!(lts.has_label(d, DOT));
    }

    #[test]
    fn search_prop_shapes() {
        assert_eq!(
            search_prop_formula(1, 1, false).unwrap().to_string(),
            "pdot(2) & ppos(1)"
        );
        assert!(search_prop_formula(1, 0, false).is_err());
        assert!(search_prop_formula(1, 11, false).is_err());
        assert_eq!(
            search_peb_formula(1, Formula::lit("ppos", 1)).to_string(),
            "pdot(2) & ppos(1)"
        );
    }

    #[test]
    fn search_peb_reads_the_indexed_pebble() {
        // Host 0 with a SEG(i-1) path; pebble i sits on the only p-state.
        for k in 1..=3 {
            for i in 1..=k {
                let mut lts = Lts::new(1);
                let mut cur = 0;
                for mark in seg(i - 1) {
                    let s = lts.add_state();
                    if mark {
                        lts.add_label(s, DOT).unwrap();
                    }
                    lts.add_transition(cur, ACTION, s).unwrap();
                    cur = s;
                }
                let p = lts.add_state();
                lts.add_label(p, "ppos").unwrap();
                let f = Formula::box_(ACTION, k + 1, search_peb_formula(k, Formula::lit("ppos", 1)));
                let mut tuple = vec![0; k + 1];
                tuple[i - 1] = p;
                assert!(check(&f, &lts, &tuple).unwrap(), "k={k} i={i}");
                if k > 1 {
                    tuple[i - 1] = 0;
                    tuple[i % k] = p;
                    assert!(!check(&f, &lts, &tuple).unwrap(), "k={k} i={i}");
                }
            }
        }
    }

    #[test]
    fn fixed_formula_signature_and_class() {
        for k in 1..=3 {
            for m in 1..=4 {
                let f = diagonal_formula_fixed(k, m, false).unwrap();
                assert_eq!(f.arity(), k + 1);
                assert!(f.is_normalized());
                assert!(f.propositions().iter().all(|p| PROP1.contains(p)));
                let info = alternation_depth(&f);
                assert_eq!(info.pi_level, m);
                assert!(info.admits(Class::Pi, k + 1, m));
            }
        }
    }

    #[test]
    fn loops_on_the_gadget_structure() {
        for engine in [Engine::Naive, Engine::Game] {
            let r = diagonal_check_fixed(&parse_formula("mu X. X").unwrap(), 1, 1, Class::Sigma, engine).unwrap();
            assert!(!r.phi_holds && r.diag_holds);
            let r = diagonal_check_fixed(&parse_formula("nu X. ppos(1)").unwrap(), 1, 2, Class::Sigma, engine).unwrap();
            assert!(r.ok(), "{r:?}");
        }
    }

    #[test]
    fn rejects_non_normalized_and_foreign_props() {
        let f = parse_formula("{2<-1, 3<-2, 1<-3} ppos(1)").unwrap();
        assert!(matches!(
            diagonal_check_fixed(&f, 3, 1, Class::Sigma, Engine::Game),
            Err(DiagonalError::NotNormalized(_))
        ));
        assert!(matches!(
            diagonal_check_fixed(&parse_formula("q(1)").unwrap(), 1, 1, Class::Sigma, Engine::Game),
            Err(DiagonalError::UnknownProposition(_))
        ));
    }
}
