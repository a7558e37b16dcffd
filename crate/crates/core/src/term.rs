//! Term representation shared by X and *X.
//!
//! X terms are the fragment without erasers and duplicators. Binders are
//! plain [`Name`]s; the convention that a name is never both bound and free
//! in one term is kept by giving every binder a fresh uid.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::name::Name;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutKind {
    Inactive,
    /// Propagates into the left subterm.
    Left,
    /// Propagates into the right subterm.
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// `cap(x,'a)`: the axiom connecting `x` to `'a`.
    Capsule { x: Name, a: Name },
    /// `exp(x, body, 'b, 'a)`: binds `x` and `'b` in `body`, exports `'a`.
    Exporter {
        x: Name,
        body: Box<Term>,
        b: Name,
        a: Name,
    },
    /// `imp(left, 'a, x, y, right)`: binds `'a` in `left` and `y` in `right`,
    /// imports through `x`.
    Importer {
        left: Box<Term>,
        a: Name,
        x: Name,
        y: Name,
        right: Box<Term>,
    },
    /// `cut`/`cutL`/`cutR(left, 'a, x, right)`: binds `'a` in `left` and `x`
    /// in `right`.
    Cut {
        kind: CutKind,
        left: Box<Term>,
        a: Name,
        x: Name,
        right: Box<Term>,
    },
    /// `eraL(x, body)`: weakening on the left, `x` not free in `body`.
    EraserL { x: Name, body: Box<Term> },
    /// `eraR(body, 'a)`: weakening on the right.
    EraserR { body: Box<Term>, a: Name },
    /// `dupL(body, x1, x2, x)`: contraction of `x1`, `x2` into `x`.
    DuplL {
        body: Box<Term>,
        x1: Name,
        x2: Name,
        x: Name,
    },
    /// `dupR(body, 'a1, 'a2, 'a)`.
    DuplR {
        body: Box<Term>,
        a1: Name,
        a2: Name,
        a: Name,
    },
}

impl Term {
    pub fn cap(x: Name, a: Name) -> Term {
        Term::Capsule { x, a }
    }

    pub fn exp(x: Name, body: Term, b: Name, a: Name) -> Term {
        Term::Exporter {
            x,
            body: Box::new(body),
            b,
            a,
        }
    }

    pub fn imp(left: Term, a: Name, x: Name, y: Name, right: Term) -> Term {
        Term::Importer {
            left: Box::new(left),
            a,
            x,
            y,
            right: Box::new(right),
        }
    }

    pub fn cut_with(kind: CutKind, left: Term, a: Name, x: Name, right: Term) -> Term {
        Term::Cut {
            kind,
            left: Box::new(left),
            a,
            x,
            right: Box::new(right),
        }
    }

    pub fn cut(left: Term, a: Name, x: Name, right: Term) -> Term {
        Term::cut_with(CutKind::Inactive, left, a, x, right)
    }

    pub fn cut_l(left: Term, a: Name, x: Name, right: Term) -> Term {
        Term::cut_with(CutKind::Left, left, a, x, right)
    }

    pub fn cut_r(left: Term, a: Name, x: Name, right: Term) -> Term {
        Term::cut_with(CutKind::Right, left, a, x, right)
    }

    pub fn era_l(x: Name, body: Term) -> Term {
        Term::EraserL {
            x,
            body: Box::new(body),
        }
    }

    pub fn era_r(body: Term, a: Name) -> Term {
        Term::EraserR {
            body: Box::new(body),
            a,
        }
    }

    pub fn dup_l(body: Term, x1: Name, x2: Name, x: Name) -> Term {
        Term::DuplL {
            body: Box::new(body),
            x1,
            x2,
            x,
        }
    }

    pub fn dup_r(body: Term, a1: Name, a2: Name, a: Name) -> Term {
        Term::DuplR {
            body: Box::new(body),
            a1,
            a2,
            a,
        }
    }

    /// Constructor name as written in the concrete syntax.
    pub fn constructor(&self) -> &'static str {
        match self {
            Term::Capsule { .. } => "cap",
            Term::Exporter { .. } => "exp",
            Term::Importer { .. } => "imp",
            Term::Cut {
                kind: CutKind::Inactive,
                ..
            } => "cut",
            Term::Cut {
                kind: CutKind::Left,
                ..
            } => "cutL",
            Term::Cut {
                kind: CutKind::Right,
                ..
            } => "cutR",
            Term::EraserL { .. } => "eraL",
            Term::EraserR { .. } => "eraR",
            Term::DuplL { .. } => "dupL",
            Term::DuplR { .. } => "dupR",
        }
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Capsule { .. } => vec![],
            Term::Exporter { body, .. }
            | Term::EraserL { body, .. }
            | Term::EraserR { body, .. }
            | Term::DuplL { body, .. }
            | Term::DuplR { body, .. } => vec![body],
            Term::Importer { left, right, .. } | Term::Cut { left, right, .. } => {
                vec![left, right]
            }
        }
    }

    fn children_mut(&mut self) -> Vec<&mut Term> {
        match self {
            Term::Capsule { .. } => vec![],
            Term::Exporter { body, .. }
            | Term::EraserL { body, .. }
            | Term::EraserR { body, .. }
            | Term::DuplL { body, .. }
            | Term::DuplR { body, .. } => vec![body],
            Term::Importer { left, right, .. } | Term::Cut { left, right, .. } => {
                vec![left, right]
            }
        }
    }

    /// Names bound by this node in its `i`-th child.
    pub fn binders_of_child(&self, i: usize) -> Vec<&Name> {
        match (self, i) {
            (Term::Exporter { x, b, .. }, 0) => vec![x, b],
            (Term::Importer { a, .. }, 0) => vec![a],
            (Term::Importer { y, .. }, 1) => vec![y],
            (Term::Cut { a, .. }, 0) => vec![a],
            (Term::Cut { x, .. }, 1) => vec![x],
            (Term::DuplL { x1, x2, .. }, 0) => vec![x1, x2],
            (Term::DuplR { a1, a2, .. }, 0) => vec![a1, a2],
            _ => vec![],
        }
    }

    /// All names bound at this node.
    pub fn binders(&self) -> Vec<&Name> {
        (0..2).flat_map(|i| self.binders_of_child(i)).collect()
    }

    /// Names occurring free at this node itself (not in a child).
    pub fn own_names(&self) -> Vec<&Name> {
        match self {
            Term::Capsule { x, a } => vec![x, a],
            Term::Exporter { a, .. } => vec![a],
            Term::Importer { x, .. } => vec![x],
            Term::Cut { .. } => vec![],
            Term::EraserL { x, .. } => vec![x],
            Term::EraserR { a, .. } => vec![a],
            Term::DuplL { x, .. } => vec![x],
            Term::DuplR { a, .. } => vec![a],
        }
    }

    fn own_names_mut(&mut self) -> Vec<&mut Name> {
        match self {
            Term::Capsule { x, a } => vec![x, a],
            Term::Exporter { a, .. } => vec![a],
            Term::Importer { x, .. } => vec![x],
            Term::Cut { .. } => vec![],
            Term::EraserL { x, .. } => vec![x],
            Term::EraserR { a, .. } => vec![a],
            Term::DuplL { x, .. } => vec![x],
            Term::DuplR { a, .. } => vec![a],
        }
    }

    fn binders_mut(&mut self) -> Vec<&mut Name> {
        match self {
            Term::Exporter { x, b, .. } => vec![x, b],
            Term::Importer { a, y, .. } => vec![a, y],
            Term::Cut { a, x, .. } => vec![a, x],
            Term::DuplL { x1, x2, .. } => vec![x1, x2],
            Term::DuplR { a1, a2, .. } => vec![a1, a2],
            _ => vec![],
        }
    }

    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Term::EraserL { .. } | Term::EraserR { .. } | Term::DuplL { .. } | Term::DuplR { .. }
        )
    }

    /// True when no eraser or duplicator occurs anywhere in the term.
    pub fn is_x_term(&self) -> bool {
        !self.is_structural() && self.children().into_iter().all(Term::is_x_term)
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Term::size).sum::<usize>()
    }

    pub fn at(&self, pos: &Position) -> Option<&Term> {
        let mut cur = self;
        for &i in pos.path() {
            cur = *cur.children().get(i as usize)?;
        }
        Some(cur)
    }

    /// The term with the subterm at `pos` replaced by `new`.
    pub fn replace_at(&self, pos: &Position, new: Term) -> Option<Term> {
        let mut out = self.clone();
        let mut cur = &mut out;
        for &i in pos.path() {
            cur = cur.children_mut().into_iter().nth(i as usize)?;
        }
        *cur = new;
        Some(out)
    }

    /// Every subterm with its position, in preorder.
    pub fn subterms(&self) -> Vec<(Position, &Term)> {
        let mut out = Vec::new();
        let mut stack = vec![(Position::root(), self)];
        while let Some((pos, t)) = stack.pop() {
            let kids = t.children();
            for (i, c) in kids.into_iter().enumerate().rev() {
                stack.push((pos.child(i), c));
            }
            out.push((pos, t));
        }
        out
    }

    /// Replaces every free occurrence of `old` by `new`. Binders are left
    /// alone; a subterm where `old` is rebound is not entered.
    pub fn rename_free(&self, old: &Name, new: &Name) -> Term {
        let mut out = self.clone();
        out.rename_free_in_place(old, new);
        out
    }

    pub(crate) fn rename_free_in_place(&mut self, old: &Name, new: &Name) {
        for n in self.own_names_mut() {
            if n == old {
                *n = new.clone();
            }
        }
        let shadow: Vec<bool> = (0..2)
            .map(|i| self.binders_of_child(i).into_iter().any(|b| b == old))
            .collect();
        for (i, c) in self.children_mut().into_iter().enumerate() {
            if !shadow[i] {
                c.rename_free_in_place(old, new);
            }
        }
    }

    /// Applies `f` to every binder, renaming the bound occurrences with it.
    pub(crate) fn map_binders(&self, f: &mut impl FnMut(&Name) -> Name) -> Term {
        let mut out = self.clone();
        out.map_binders_in_place(f);
        out
    }

    fn map_binders_in_place(&mut self, f: &mut impl FnMut(&Name) -> Name) {
        let pairs: Vec<(Name, Name)> = self
            .binders_mut()
            .into_iter()
            .map(|b| {
                let new = f(b);
                let old = std::mem::replace(b, new.clone());
                (old, new)
            })
            .collect();
        let scopes: Vec<Vec<usize>> = match self {
            Term::Exporter { .. } | Term::DuplL { .. } | Term::DuplR { .. } => vec![vec![0, 1]],
            Term::Importer { .. } | Term::Cut { .. } => vec![vec![0], vec![1]],
            Term::EraserL { .. } | Term::EraserR { .. } => vec![vec![]],
            Term::Capsule { .. } => vec![],
        };
        for (ci, c) in self.children_mut().into_iter().enumerate() {
            for &bi in &scopes[ci] {
                let (old, new) = &pairs[bi];
                c.rename_free_in_place(old, new);
            }
            c.map_binders_in_place(f);
        }
    }

    /// Alpha-variant with every binder replaced by a fresh name.
    pub fn freshen_binders(&self) -> Term {
        self.map_binders(&mut |b| b.freshen())
    }
}

/// A path of child indices from the root of a term.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Position(Vec<u8>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn from_path(path: Vec<u8>) -> Position {
        Position(path)
    }

    pub fn path(&self) -> &[u8] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn child(&self, i: usize) -> Position {
        let mut p = self.0.clone();
        p.push(i as u8);
        Position(p)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// Outermost-first, then left-to-right.
    pub fn outermost_cmp(&self, other: &Position) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

impl std::str::FromStr for Position {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "root" || s.is_empty() {
            return Ok(Position::root());
        }
        s.split('.')
            .map(|p| p.parse::<u8>().map_err(|e| format!("bad position {s:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(Position)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(s: &str) -> Name {
        Name::inname(s)
    }
    fn o(s: &str) -> Name {
        Name::outname(s)
    }

    #[test]
    fn replace_and_lookup() {
        let t = Term::cut(Term::cap(x("y"), o("a")), o("a"), x("x"), Term::cap(x("x"), o("b")));
        let p = Position::root().child(1);
        assert_eq!(t.at(&p), Some(&Term::cap(x("x"), o("b"))));
        let u = t.replace_at(&p, Term::cap(x("x"), o("c"))).unwrap();
        assert_eq!(u.at(&p), Some(&Term::cap(x("x"), o("c"))));
        assert_eq!(t.size(), 3);
        assert!(t.at(&Position::from_path(vec![2])).is_none());
    }

    #[test]
    fn rename_free_stops_at_binders() {
        // exp(x, cap(x,'b), 'b, 'a): x is bound, renaming the free x does nothing inside
        let t = Term::exp(x("x"), Term::cap(x("x"), o("b")), o("b"), o("a"));
        assert_eq!(t.rename_free(&x("x"), &x("z")), t);
        let u = t.rename_free(&o("a"), &o("c"));
        assert_eq!(u, Term::exp(x("x"), Term::cap(x("x"), o("b")), o("b"), o("c")));
    }

    #[test]
    fn freshen_keeps_shape() {
        let t = Term::exp(x("x"), Term::cap(x("x"), o("b")), o("b"), o("a"));
        let u = t.freshen_binders();
        match &u {
            Term::Exporter { x: bx, body, b, a } => {
                assert_ne!(bx, &x("x"));
                assert_eq!(**body, Term::cap(bx.clone(), b.clone()));
                assert_eq!(a, &o("a"));
            }
            _ => panic!("shape changed"),
        }
    }

    #[test]
    fn freshen_under_eraser() {
        let t = Term::exp(x("x"), Term::era_r(Term::cap(x("x"), o("c")), o("b")), o("b"), o("a"));
        let u = t.freshen_binders();
        let Term::Exporter { x: bx, body, b, .. } = &u else {
            panic!("shape changed")
        };
        assert_eq!(**body, Term::era_r(Term::cap(bx.clone(), o("c")), b.clone()));
    }

    #[test]
    fn position_roundtrip() {
        let p: Position = "0.1.0".parse().unwrap();
        assert_eq!(p.to_string(), "0.1.0");
        assert_eq!("root".parse::<Position>().unwrap(), Position::root());
    }
}
