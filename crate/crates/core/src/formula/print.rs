use std::fmt;

use super::{Formula, Modality};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Disj,
    Conj,
    Unit,
}

/// `tail` is true when nothing follows the subterm before the enclosing
/// closing parenthesis or end of input, so a fixpoint may extend to the right.
fn write_formula(f: &Formula, out: &mut fmt::Formatter<'_>, ctx: Prec, tail: bool) -> fmt::Result {
    let own = match f {
        Formula::Or(..) => Prec::Disj,
        Formula::And(..) => Prec::Conj,
        _ => Prec::Unit,
    };
    let needs_parens = own < ctx || (matches!(f, Formula::Fix { .. }) && !tail);
    if needs_parens {
        out.write_str("(")?;
        write_formula(f, out, Prec::Disj, true)?;
        return out.write_str(")");
    }
    match f {
        Formula::Lit(l) => {
            if l.negated {
                out.write_str("~")?;
            }
            write!(out, "{}({})", l.prop, l.pos)
        }
        Formula::Var(x) => out.write_str(x),
        Formula::Or(a, b) => {
            write_formula(a, out, Prec::Disj, false)?;
            out.write_str(" | ")?;
            write_formula(b, out, Prec::Conj, tail)
        }
        Formula::And(a, b) => {
            write_formula(a, out, Prec::Conj, false)?;
            out.write_str(" & ")?;
            write_formula(b, out, Prec::Unit, tail)
        }
        Formula::Modal {
            modality,
            action,
            pos,
            body,
        } => {
            match modality {
                Modality::Diamond => write!(out, "<{action}>_{pos} ")?,
                Modality::Box => write!(out, "[{action}]_{pos} ")?,
            }
            write_formula(body, out, Prec::Unit, tail)
        }
        Formula::Fix { kind, var, body } => {
            write!(out, "{kind} {var}. ")?;
            write_formula(body, out, Prec::Disj, true)
        }
        Formula::Repl(kappa, body) => {
            write!(out, "{kappa} ")?;
            write_formula(body, out, Prec::Unit, tail)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, f, Prec::Disj, true)
    }
}
