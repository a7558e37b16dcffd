//! Concrete syntax: `cap(x,'a)`, `exp(x, P, 'b, 'a)`, ...
//!
//! Parsing runs in two phases. The first builds a raw tree of identifiers,
//! the second resolves scopes, checks name kinds and gives every binder a
//! fresh uid. Identifiers that stay free become source names (uid 0).

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::name::{Name, NameKind};
use crate::term::{CutKind, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Loc {
    line: usize,
    col: usize,
}

impl Loc {
    fn error(self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Out(String),
    LParen,
    RParen,
    Comma,
    Eof,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Out(s) => format!("outname `'{s}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Eof => "end of input".into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, Loc)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1, 1);
    let ident_char = |c: char| c.is_ascii_alphanumeric() || c == '_';
    while let Some(&c) = chars.peek() {
        let loc = Loc { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            '(' => {
                bump(&mut chars);
                out.push((Tok::LParen, loc));
            }
            ')' => {
                bump(&mut chars);
                out.push((Tok::RParen, loc));
            }
            ',' => {
                bump(&mut chars);
                out.push((Tok::Comma, loc));
            }
            '\'' => {
                bump(&mut chars);
                match chars.peek() {
                    Some(c) if c.is_ascii_lowercase() => {}
                    _ => return Err(loc.error("expected a lowercase letter after `'`")),
                }
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if !ident_char(c) {
                        break;
                    }
                    s.push(bump(&mut chars));
                }
                out.push((Tok::Out(s), loc));
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if !ident_char(c) {
                        break;
                    }
                    s.push(bump(&mut chars));
                }
                out.push((Tok::Ident(s), loc));
            }
            other => return Err(loc.error(format!("unexpected character `{other}`"))),
        }
    }
    out.push((Tok::Eof, Loc { line, col }));
    Ok(out)
}

#[derive(Debug)]
enum RawArg {
    Term(Raw),
    Name { text: String, out: bool, loc: Loc },
}

#[derive(Debug)]
struct Raw {
    ctor: String,
    args: Vec<RawArg>,
}

struct Parser {
    toks: Vec<(Tok, Loc)>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, Loc) {
        &self.toks[self.i]
    }

    fn next(&mut self) -> (Tok, Loc) {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let (t, loc) = self.next();
        if t == want {
            Ok(())
        } else {
            Err(loc.error(format!("expected {}, found {}", describe(&want), describe(&t))))
        }
    }

    fn term(&mut self) -> Result<Raw, ParseError> {
        let (t, loc) = self.next();
        let ctor = match t {
            Tok::Ident(s) => s,
            other => return Err(loc.error(format!("expected a term, found {}", describe(&other)))),
        };
        let Some(shape) = shape_of(&ctor) else {
            return Err(loc.error(format!("unknown constructor `{ctor}`")));
        };
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        for (k, slot) in shape.iter().enumerate() {
            if k > 0 {
                self.expect(Tok::Comma)?;
            }
            let arg = match slot {
                Slot::Term => RawArg::Term(self.term()?),
                _ => {
                    let (t, loc) = self.next();
                    match t {
                        Tok::Ident(text) => RawArg::Name {
                            text,
                            out: false,
                            loc,
                        },
                        Tok::Out(text) => RawArg::Name {
                            text,
                            out: true,
                            loc,
                        },
                        other => {
                            return Err(
                                loc.error(format!("expected a name, found {}", describe(&other)))
                            )
                        }
                    }
                }
            };
            args.push(arg);
        }
        let (t, l) = self.next();
        if t != Tok::RParen {
            return Err(l.error(format!(
                "`{ctor}` takes {} arguments; expected `)`, found {}",
                shape.len(),
                describe(&t)
            )));
        }
        Ok(Raw { ctor, args })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Term,
    /// A binder scoping over the listed argument positions.
    Bind(NameKind, &'static [usize]),
    Free(NameKind),
}

fn shape_of(ctor: &str) -> Option<&'static [Slot]> {
    use NameKind::*;
    use Slot::*;
    Some(match ctor {
        "cap" => &[Free(In), Free(Out)],
        "exp" => &[Bind(In, &[1]), Term, Bind(Out, &[1]), Free(Out)],
        "imp" => &[Term, Bind(Out, &[0]), Free(In), Bind(In, &[4]), Term],
        "cut" | "cutL" | "cutR" => &[Term, Bind(Out, &[0]), Bind(In, &[3]), Term],
        "eraL" => &[Free(In), Term],
        "eraR" => &[Term, Free(Out)],
        "dupL" => &[Term, Bind(In, &[0]), Bind(In, &[0]), Free(In)],
        "dupR" => &[Term, Bind(Out, &[0]), Bind(Out, &[0]), Free(Out)],
        _ => return None,
    })
}

type Key = (NameKind, String);

fn collect_binders(raw: &Raw, seen: &mut HashMap<Key, Loc>) -> Result<(), ParseError> {
    let shape = shape_of(&raw.ctor).expect("checked while parsing");
    for (slot, arg) in shape.iter().zip(&raw.args) {
        match (slot, arg) {
            (Slot::Bind(kind, _), RawArg::Name { text, loc, .. }) => {
                if let Some(prev) = seen.insert((*kind, text.clone()), *loc) {
                    return Err(loc.error(format!(
                        "name `{}` is bound twice (first binder at {}:{})",
                        show(*kind, text),
                        prev.line,
                        prev.col
                    )));
                }
            }
            (Slot::Term, RawArg::Term(t)) => collect_binders(t, seen)?,
            _ => {}
        }
    }
    Ok(())
}

fn show(kind: NameKind, text: &str) -> String {
    match kind {
        NameKind::In => text.to_string(),
        NameKind::Out => format!("'{text}"),
    }
}

struct Resolver {
    binders: HashSet<Key>,
}

impl Resolver {
    fn resolve(&self, raw: &Raw, env: &HashMap<Key, Name>) -> Result<Term, ParseError> {
        let shape = shape_of(&raw.ctor).expect("checked while parsing");
        let mut names: Vec<Option<Name>> = vec![None; shape.len()];
        let mut envs: Vec<HashMap<Key, Name>> = vec![env.clone(); shape.len()];
        for (k, (slot, arg)) in shape.iter().zip(&raw.args).enumerate() {
            let (want, text, out, loc) = match (slot, arg) {
                (Slot::Term, _) => continue,
                (Slot::Bind(kind, _) | Slot::Free(kind), RawArg::Name { text, out, loc }) => {
                    (*kind, text, *out, *loc)
                }
                _ => unreachable!("parser follows the shape"),
            };
            let got = if out { NameKind::Out } else { NameKind::In };
            if got != want {
                return Err(loc.error(format!(
                    "kind mismatch in `{}`: expected an {}, found {} `{}`",
                    raw.ctor,
                    want.describe(),
                    got.describe(),
                    show(got, text)
                )));
            }
            let key = (want, text.clone());
            match slot {
                Slot::Bind(_, scope) => {
                    let name = Name::source(want, text).freshen();
                    for &s in *scope {
                        envs[s].insert(key.clone(), name.clone());
                    }
                    names[k] = Some(name);
                }
                _ => {
                    let name = match env.get(&key) {
                        Some(n) => n.clone(),
                        None if self.binders.contains(&key) => {
                            return Err(loc.error(format!(
                                "name `{}` occurs both bound and free",
                                show(want, text)
                            )))
                        }
                        None => Name::source(want, text),
                    };
                    names[k] = Some(name);
                }
            }
        }
        let mut sub = Vec::new();
        for (k, arg) in raw.args.iter().enumerate() {
            if let RawArg::Term(t) = arg {
                sub.push(Some(self.resolve(t, &envs[k])?));
            } else {
                sub.push(None);
            }
        }
        let n = |k: usize| names[k].clone().unwrap();
        let mut t = |k: usize| sub[k].take().unwrap();
        Ok(match raw.ctor.as_str() {
            "cap" => Term::cap(n(0), n(1)),
            "exp" => Term::exp(n(0), t(1), n(2), n(3)),
            "imp" => {
                let l = t(0);
                Term::imp(l, n(1), n(2), n(3), t(4))
            }
            "cut" | "cutL" | "cutR" => {
                let kind = match raw.ctor.as_str() {
                    "cut" => CutKind::Inactive,
                    "cutL" => CutKind::Left,
                    _ => CutKind::Right,
                };
                let l = t(0);
                Term::cut_with(kind, l, n(1), n(2), t(3))
            }
            "eraL" => Term::era_l(n(0), t(1)),
            "eraR" => Term::era_r(t(0), n(1)),
            "dupL" => Term::dup_l(t(0), n(1), n(2), n(3)),
            "dupR" => Term::dup_r(t(0), n(1), n(2), n(3)),
            _ => unreachable!(),
        })
    }
}

/// Parses a single term.
pub fn parse(text: &str) -> Result<Term, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, i: 0 };
    if p.peek().0 == Tok::Eof {
        let loc = p.peek().1;
        return Err(loc.error("empty input"));
    }
    let raw = p.term()?;
    let (t, loc) = p.next();
    if t != Tok::Eof {
        return Err(loc.error(format!("trailing input: {}", describe(&t))));
    }
    let mut seen = HashMap::new();
    collect_binders(&raw, &mut seen)?;
    let r = Resolver {
        binders: seen.into_keys().collect(),
    };
    r.resolve(&raw, &HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_term() {
        let t = parse("cap(x,'a)").unwrap();
        assert_eq!(t, Term::cap(Name::inname("x"), Name::outname("a")));
    }

    #[test]
    fn cut_of_capsules() {
        let t = parse("cut(cap(y,'a),'a,x,cap(x,'b))").unwrap();
        let Term::Cut {
            kind,
            left,
            a,
            x,
            right,
        } = t
        else {
            panic!("not a cut")
        };
        assert_eq!(kind, CutKind::Inactive);
        assert_eq!(*left, Term::cap(Name::inname("y"), a.clone()));
        assert_eq!(*right, Term::cap(x.clone(), Name::outname("b")));
        assert_ne!(a.uid(), 0);
    }

    #[test]
    fn exporter_with_eraser() {
        let t = parse("exp(x, eraR(cap(x,'a1),'b), 'b, 'g)").unwrap();
        let Term::Exporter { x, body, b, a } = t else {
            panic!()
        };
        assert_eq!(a, Name::outname("g"));
        assert_eq!(*body, Term::era_r(Term::cap(x, Name::outname("a1")), b));
    }

    #[test]
    fn kind_mismatch_is_located() {
        let e = parse("cap('x,'a)").unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
        assert!(e.message.contains("kind mismatch"), "{e}");
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(parse("   ").unwrap_err().message.contains("empty"));
        let e = parse("cut(cap(x,'a),'a,y,\n exp(y, cap(y,'a), 'a, 'c))").unwrap_err();
        assert!(e.message.contains("bound twice"), "{e}");
        assert_eq!(e.line, 2);
        let e = parse("exp(x, cap(x,'b), 'b, 'a) junk").unwrap_err();
        assert!(e.message.contains("trailing"));
        assert!(parse("cap(x)").is_err());
        assert!(parse("foo(x,'a)").is_err());
    }

    #[test]
    fn both_bound_and_free() {
        let e = parse("imp(cap(x,'a),'a,y,x,cap(x,'b))").unwrap_err();
        assert!(e.message.contains("bound and free"), "{e}");
    }
}
