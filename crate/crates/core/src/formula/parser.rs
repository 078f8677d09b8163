//! Recursive-descent parser for the textual formula syntax.
//!
//! ```text
//! phi  := disj
//! disj := conj { "|" conj }
//! conj := unit { "&" unit }
//! unit := lit | lit "->" phi | VAR
//!       | "<" act ">" "_" nat unit | "[" act "]" "_" nat unit
//!       | ("mu" | "nu") VAR "." phi | "{" repl "}" unit | "(" phi ")"
//! lit  := PROP "(" nat ")" | "~" PROP "(" nat ")"
//! repl := item { "," item } ;  item := nat "<-" nat | nat "<->" nat
//! ```
//!
//! `#` starts a comment that runs to the end of the line.

use std::collections::BTreeSet;
use std::fmt;

use super::{Formula, FormulaError, Literal, Modality, PositionIndex, Replacement};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(usize),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Nat(n) => write!(f, "number `{n}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("invalid replacement at offset {offset}: {message}")]
    Replacement { offset: usize, message: String },
    #[error(transparent)]
    Binding(#[from] FormulaError),
}

impl ParseError {
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::Replacement { offset, .. } => Some(*offset),
            ParseError::Binding(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Rename later duplicate binders to fresh names instead of failing.
    pub rename_duplicates: bool,
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_with(text, ParseOptions::default())
}

pub fn parse_formula_with(text: &str, opts: ParseOptions) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0 };
    let f = p.formula()?;
    p.expect_eof()?;
    if opts.rename_duplicates {
        Ok(rename_duplicate_binders(f))
    } else {
        f.validate()?;
        Ok(f)
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse().map_err(|_| ParseError::Syntax {
                offset: start,
                expected: vec!["a small number".into()],
                found: text[start..i].to_string(),
            })?;
            out.push((Tok::Nat(n), start));
            continue;
        }
        let rest = &text[i..];
        let sym = [
            "<->", "<-", "->", "<", ">", "[", "]", "{", "}", "(", ")", "_", ".", ",", "|", "&", "~",
        ]
        .into_iter()
        .find(|s| rest.starts_with(s))
        .ok_or_else(|| ParseError::Syntax {
            offset: start,
            expected: vec!["a token".into()],
            found: rest.chars().next().map(String::from).unwrap_or_default(),
        })?;
        i += sym.len();
        out.push((Tok::Sym(sym), start));
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

fn is_prop(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_lowercase())
}

fn is_var(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase())
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.toks[(self.at + n).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(s) if *s == sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), ParseError> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.error(&[&format!("`{sym}`")])
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error(&["`|`", "`&`", "end of input"])
        }
    }

    fn nat(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Tok::Nat(n) => {
                let n = *n;
                self.bump();
                Ok(n)
            }
            _ => self.error(&["a number"]),
        }
    }

    fn position(&mut self) -> Result<PositionIndex, ParseError> {
        let offset = self.offset();
        let n = self.nat()?;
        PositionIndex::new(n).ok_or(ParseError::Syntax {
            offset,
            expected: vec!["a position index >= 1".into()],
            found: "0".into(),
        })
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conj()?;
        while self.eat("|") {
            let right = self.conj()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unit()?;
        while self.eat("&") {
            let right = self.unit()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn literal(&mut self, negated: bool) -> Result<Literal, ParseError> {
        let prop = match self.peek() {
            Tok::Ident(s) if is_prop(s) => s.clone(),
            _ => return self.error(&["a proposition"]),
        };
        self.bump();
        self.expect("(")?;
        let pos = self.position()?;
        self.expect(")")?;
        Ok(Literal { prop, pos, negated })
    }

    fn after_literal(&mut self, lit: Literal) -> Result<Formula, ParseError> {
        if self.eat("->") {
            let body = self.formula()?;
            Ok(Formula::implies(lit, body))
        } else {
            Ok(Formula::Lit(lit))
        }
    }

    fn action(&mut self) -> Result<String, ParseError> {
        match self.bump() {
            Tok::Ident(s) => Ok(s),
            _ => {
                self.at -= 1;
                self.error(&["an action name"])
            }
        }
    }

    fn unit(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Sym("~") => {
                self.bump();
                let lit = self.literal(true)?;
                self.after_literal(lit)
            }
            Tok::Sym("(") => {
                self.bump();
                let f = self.formula()?;
                self.expect(")")?;
                Ok(f)
            }
            Tok::Sym("<") | Tok::Sym("[") => {
                let (modality, close) = if self.eat("<") {
                    (Modality::Diamond, ">")
                } else {
                    self.bump();
                    (Modality::Box, "]")
                };
                let action = self.action()?;
                self.expect(close)?;
                self.expect("_")?;
                let pos = self.position()?;
                let body = self.unit()?;
                Ok(Formula::Modal {
                    modality,
                    action,
                    pos,
                    body: Box::new(body),
                })
            }
            Tok::Sym("{") => {
                self.bump();
                let kappa = self.replacement()?;
                let body = self.unit()?;
                Ok(Formula::Repl(kappa, Box::new(body)))
            }
            Tok::Ident(s) if (s == "mu" || s == "nu") && !matches!(self.peek_at(1), Tok::Sym("(")) => {
                self.bump();
                let var = match self.peek() {
                    Tok::Ident(v) if is_var(v) => v.clone(),
                    _ => return self.error(&["a variable (uppercase identifier)"]),
                };
                self.bump();
                self.expect(".")?;
                let body = self.formula()?;
                let kind = if s == "mu" {
                    super::FixKind::Mu
                } else {
                    super::FixKind::Nu
                };
                Ok(Formula::fix(kind, var, body))
            }
            Tok::Ident(s) if is_var(&s) => {
                self.bump();
                Ok(Formula::Var(s))
            }
            Tok::Ident(s) if is_prop(&s) => {
                let lit = self.literal(false)?;
                self.after_literal(lit)
            }
            _ => self.error(&["a literal", "a variable", "`<`", "`[`", "`mu`", "`nu`", "`{`", "`(`"]),
        }
    }

    fn replacement(&mut self) -> Result<Replacement, ParseError> {
        let offset = self.offset();
        let mut pairs = Vec::new();
        loop {
            let a = self.nat()?;
            if self.eat("<->") {
                let b = self.nat()?;
                pairs.push((a, b));
                pairs.push((b, a));
            } else if self.eat("<-") {
                let b = self.nat()?;
                pairs.push((b, a));
            } else {
                return self.error(&["`<-`", "`<->`"]);
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect("}")?;
        Replacement::from_pairs(pairs).map_err(|e| ParseError::Replacement {
            offset,
            message: e.to_string(),
        })
    }
}

/// Alpha-renames every binder whose name already occurred earlier in pre-order.
fn rename_duplicate_binders(f: Formula) -> Formula {
    let mut used: BTreeSet<String> = BTreeSet::new();
    f.walk(&mut |g| {
        if let Formula::Var(x) = g {
            used.insert(x.clone());
        }
    });
    let mut seen = BTreeSet::new();
    rename(f, &mut seen, &mut used)
}

fn rename(f: Formula, seen: &mut BTreeSet<String>, used: &mut BTreeSet<String>) -> Formula {
    match f {
        Formula::Fix { kind, var, body } => {
            let (var, body) = if seen.contains(&var) {
                let mut n = 1;
                let fresh = loop {
                    let cand = format!("{var}_{n}");
                    if !used.contains(&cand) && !seen.contains(&cand) {
                        break cand;
                    }
                    n += 1;
                };
                used.insert(fresh.clone());
                let body = substitute_var(*body, &var, &fresh);
                (fresh, body)
            } else {
                (var, *body)
            };
            seen.insert(var.clone());
            Formula::fix(kind, var, rename(body, seen, used))
        }
        Formula::Or(a, b) => {
            let a = rename(*a, seen, used);
            Formula::or(a, rename(*b, seen, used))
        }
        Formula::And(a, b) => {
            let a = rename(*a, seen, used);
            Formula::and(a, rename(*b, seen, used))
        }
        Formula::Modal {
            modality,
            action,
            pos,
            body,
        } => Formula::Modal {
            modality,
            action,
            pos,
            body: Box::new(rename(*body, seen, used)),
        },
        Formula::Repl(k, body) => Formula::Repl(k, Box::new(rename(*body, seen, used))),
        leaf => leaf,
    }
}

/// Replaces free occurrences of `from` by `to`.
fn substitute_var(f: Formula, from: &str, to: &str) -> Formula {
    match f {
        Formula::Var(x) if x == from => Formula::Var(to.to_string()),
        Formula::Fix { ref var, .. } if var == from => f,
        Formula::Fix { kind, var, body } => Formula::fix(kind, var, substitute_var(*body, from, to)),
        Formula::Or(a, b) => Formula::or(substitute_var(*a, from, to), substitute_var(*b, from, to)),
        Formula::And(a, b) => Formula::and(substitute_var(*a, from, to), substitute_var(*b, from, to)),
        Formula::Modal {
            modality,
            action,
            pos,
            body,
        } => Formula::Modal {
            modality,
            action,
            pos,
            body: Box::new(substitute_var(*body, from, to)),
        },
        Formula::Repl(k, body) => Formula::Repl(k, Box::new(substitute_var(*body, from, to))),
        leaf => leaf,
    }
}
