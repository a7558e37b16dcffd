//! Formulas and sequents, with their concrete syntax.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::name::{Name, NameKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    /// A unification variable; only appears during inference.
    Var(u32),
    Arrow(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(s: &str) -> Formula {
        Formula::Atom(s.to_string())
    }

    pub fn arrow(a: Formula, b: Formula) -> Formula {
        Formula::Arrow(Box::new(a), Box::new(b))
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Arrow(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(s) => f.write_str(s),
            Formula::Var(i) => write!(f, "?{i}"),
            Formula::Arrow(a, b) => {
                if matches!(**a, Formula::Arrow(..)) {
                    write!(f, "({a})->{b}")
                } else {
                    write!(f, "{a}->{b}")
                }
            }
        }
    }
}

/// `Γ ⊢ Δ`: types for innames on the left and outnames on the right.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sequent {
    pub gamma: BTreeMap<Name, Formula>,
    pub delta: BTreeMap<Name, Formula>,
}

impl Sequent {
    pub fn get(&self, n: &Name) -> Option<&Formula> {
        match n.kind() {
            NameKind::In => self.gamma.get(n),
            NameKind::Out => self.delta.get(n),
        }
    }

    pub fn insert(&mut self, n: Name, f: Formula) {
        match n.kind() {
            NameKind::In => self.gamma.insert(n, f),
            NameKind::Out => self.delta.insert(n, f),
        };
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.gamma.keys().chain(self.delta.keys())
    }

    /// Renders with `show` for names.
    pub fn display_with(&self, show: impl Fn(&Name) -> String) -> String {
        let side = |m: &BTreeMap<Name, Formula>| {
            m.iter()
                .map(|(n, f)| format!("{}:{f}", show(n)))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let (g, d) = (side(&self.gamma), side(&self.delta));
        match (g.is_empty(), d.is_empty()) {
            (true, true) => "|-".to_string(),
            (true, false) => format!("|- {d}"),
            (false, true) => format!("{g} |-"),
            (false, false) => format!("{g} |- {d}"),
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(|n| n.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {col}: {message}")]
pub struct SyntaxError {
    pub col: usize,
    pub message: String,
}

struct Lexer<'a> {
    s: &'a [u8],
    i: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer { s: s.as_bytes(), i: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            col: self.i + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.s[self.i..].starts_with(tok.as_bytes()) {
            self.i += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), SyntaxError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected {tok:?}"))
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
            self.i += 1;
        }
        if start == self.i {
            return self.err("expected an identifier");
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.i]).into_owned())
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let left = match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let f = self.formula()?;
                self.expect(")")?;
                f
            }
            Some(c) if c.is_ascii_uppercase() => Formula::Atom(self.ident()?),
            _ => return self.err("expected a formula"),
        };
        if self.eat("->") {
            Ok(Formula::arrow(left, self.formula()?))
        } else {
            Ok(left)
        }
    }

    fn end(&mut self) -> Result<(), SyntaxError> {
        if self.peek().is_some() {
            self.err("trailing input")
        } else {
            Ok(())
        }
    }
}

pub fn parse_formula(s: &str) -> Result<Formula, SyntaxError> {
    let mut lx = Lexer::new(s);
    let f = lx.formula()?;
    lx.end()?;
    Ok(f)
}

/// Parses `x:A, y:A->B |- 'a:B`. Names are source names.
pub fn parse_sequent(s: &str) -> Result<Sequent, SyntaxError> {
    let mut lx = Lexer::new(s);
    let mut seq = Sequent::default();
    let mut right = false;
    loop {
        if !right && lx.eat("|-") {
            right = true;
            if lx.peek().is_none() {
                break;
            }
        }
        let out = lx.eat("'");
        if out != right {
            return lx.err(if right {
                "expected an outname"
            } else {
                "expected an inname or |-"
            });
        }
        let id = lx.ident()?;
        if !id.as_bytes()[0].is_ascii_lowercase() {
            return lx.err("names start with a lowercase letter");
        }
        let n = if out {
            Name::outname(&id)
        } else {
            Name::inname(&id)
        };
        lx.expect(":")?;
        let f = lx.formula()?;
        if seq.get(&n).is_some() {
            return lx.err(format!("{n} declared twice"));
        }
        seq.insert(n, f);
        if lx.eat(",") {
            continue;
        }
        if right {
            lx.end()?;
            break;
        }
        lx.expect("|-")?;
        right = true;
        if lx.peek().is_none() {
            break;
        }
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrows_associate_right() {
        let f = parse_formula("A->B->C").unwrap();
        assert_eq!(
            f,
            Formula::arrow(
                Formula::atom("A"),
                Formula::arrow(Formula::atom("B"), Formula::atom("C"))
            )
        );
        assert_eq!(f.to_string(), "A->B->C");
        let g = parse_formula("((A->B)->A)->A").unwrap();
        assert_eq!(g.to_string(), "((A->B)->A)->A");
    }

    #[test]
    fn sequents() {
        let s = parse_sequent("x:A, y:A->B |- 'a:B").unwrap();
        assert_eq!(s.gamma.len(), 2);
        assert_eq!(s.get(&Name::outname("a")), Some(&Formula::atom("B")));
        assert_eq!(s.to_string(), "x:A, y:A->B |- 'a:B");
        let e = parse_sequent("|- 'd:((A->B)->A)->A").unwrap();
        assert!(e.gamma.is_empty());
        assert_eq!(parse_sequent("x:A |-").unwrap().delta.len(), 0);
        assert_eq!(parse_sequent("|-").unwrap(), Sequent::default());
    }

    #[test]
    fn sequent_errors() {
        assert!(parse_sequent("'a:A |- x:A").is_err());
        assert!(parse_sequent("x:A, x:B |-").is_err());
        assert!(parse_sequent("x:a |-").is_err());
        assert!(parse_sequent("x:A |- 'a:A extra").is_err());
    }
}
