//! Printing in the concrete syntax and in an approximation of the usual
//! infix notation.
//!
//! Distinct names always print distinctly: source names keep their text,
//! other names keep their base when it is unused and otherwise get the first
//! free `_k` suffix, in order of first occurrence.

use std::collections::{HashMap, HashSet};

use crate::name::{Name, NameKind};
use crate::term::{CutKind, Term};

#[derive(Default)]
pub struct NameTable {
    assigned: HashMap<Name, String>,
    taken: HashSet<(NameKind, String)>,
}

impl NameTable {
    pub fn for_term(t: &Term) -> NameTable {
        let mut names = Vec::new();
        collect(t, &mut names);
        let mut table = NameTable::default();
        for n in names.iter().filter(|n| n.uid() == 0) {
            table.taken.insert((n.kind(), n.base().to_string()));
            table.assigned.insert(n.clone(), n.base().to_string());
        }
        for n in &names {
            table.text(n);
        }
        table
    }

    fn text(&mut self, n: &Name) -> String {
        if let Some(s) = self.assigned.get(n) {
            return s.clone();
        }
        let mut cand = n.base().to_string();
        let mut k = 1;
        while self.taken.contains(&(n.kind(), cand.clone())) {
            cand = format!("{}_{}", n.root(), k);
            k += 1;
        }
        self.taken.insert((n.kind(), cand.clone()));
        self.assigned.insert(n.clone(), cand.clone());
        cand
    }

    pub fn show(&self, n: &Name) -> String {
        let base = self
            .assigned
            .get(n)
            .cloned()
            .unwrap_or_else(|| n.base().to_string());
        match n.kind() {
            NameKind::In => base,
            NameKind::Out => format!("'{base}"),
        }
    }
}

fn collect(t: &Term, out: &mut Vec<Name>) {
    // field order, so that printing and naming agree
    let mut push = |n: &Name| out.push(n.clone());
    match t {
        Term::Capsule { x, a } => {
            push(x);
            push(a);
        }
        Term::Exporter { x, b, a, .. } => {
            push(x);
            push(b);
            push(a);
        }
        Term::Importer { a, x, y, .. } => {
            push(a);
            push(x);
            push(y);
        }
        Term::Cut { a, x, .. } => {
            push(a);
            push(x);
        }
        Term::EraserL { x, .. } => push(x),
        Term::EraserR { a, .. } => push(a),
        Term::DuplL { x1, x2, x, .. } => {
            push(x1);
            push(x2);
            push(x);
        }
        Term::DuplR { a1, a2, a, .. } => {
            push(a1);
            push(a2);
            push(a);
        }
    }
    for c in t.children() {
        collect(c, out);
    }
}

/// Concrete syntax, accepted back by [`crate::parse::parse`].
pub fn print(t: &Term) -> String {
    let table = NameTable::for_term(t);
    let mut s = String::new();
    write_term(t, &table, &mut s);
    s
}

fn write_term(t: &Term, nt: &NameTable, s: &mut String) {
    let n = |n: &Name| nt.show(n);
    s.push_str(t.constructor());
    s.push('(');
    match t {
        Term::Capsule { x, a } => s.push_str(&format!("{},{}", n(x), n(a))),
        Term::Exporter { x, body, b, a } => {
            s.push_str(&format!("{},", n(x)));
            write_term(body, nt, s);
            s.push_str(&format!(",{},{}", n(b), n(a)));
        }
        Term::Importer {
            left,
            a,
            x,
            y,
            right,
        } => {
            write_term(left, nt, s);
            s.push_str(&format!(",{},{},{},", n(a), n(x), n(y)));
            write_term(right, nt, s);
        }
        Term::Cut {
            left, a, x, right, ..
        } => {
            write_term(left, nt, s);
            s.push_str(&format!(",{},{},", n(a), n(x)));
            write_term(right, nt, s);
        }
        Term::EraserL { x, body } => {
            s.push_str(&format!("{},", n(x)));
            write_term(body, nt, s);
        }
        Term::EraserR { body, a } => {
            write_term(body, nt, s);
            s.push_str(&format!(",{}", n(a)));
        }
        Term::DuplL { body, x1, x2, x } => {
            write_term(body, nt, s);
            s.push_str(&format!(",{},{},{}", n(x1), n(x2), n(x)));
        }
        Term::DuplR { body, a1, a2, a } => {
            write_term(body, nt, s);
            s.push_str(&format!(",{},{},{}", n(a1), n(a2), n(a)));
        }
    }
    s.push(')');
}

/// Infix rendering: `⟨x.'a⟩`, `x̂ P 'b̂ · 'a`, `P 'â [x] ŷ Q`, `P 'â † x̂ Q`
/// (`↙†` / `†↘` when active), `x ⊙ P`, `P ⊙ 'a`, `x<x1,x2< P`, `P >'a1,'a2> 'a`.
/// Output only.
pub fn print_infix(t: &Term) -> String {
    let table = NameTable::for_term(t);
    let mut s = String::new();
    write_infix(t, &table, &mut s, false);
    s
}

fn write_infix(t: &Term, nt: &NameTable, s: &mut String, nested: bool) {
    let n = |n: &Name| nt.show(n);
    let hat = |n: &Name| format!("{}\u{302}", nt.show(n));
    let compound = !matches!(t, Term::Capsule { .. });
    if nested && compound {
        s.push('(');
    }
    match t {
        Term::Capsule { x, a } => s.push_str(&format!("⟨{}.{}⟩", n(x), n(a))),
        Term::Exporter { x, body, b, a } => {
            s.push_str(&format!("{} ", hat(x)));
            write_infix(body, nt, s, true);
            s.push_str(&format!(" {} · {}", hat(b), n(a)));
        }
        Term::Importer {
            left,
            a,
            x,
            y,
            right,
        } => {
            write_infix(left, nt, s, true);
            s.push_str(&format!(" {} [{}] {} ", hat(a), n(x), hat(y)));
            write_infix(right, nt, s, true);
        }
        Term::Cut {
            kind,
            left,
            a,
            x,
            right,
        } => {
            let op = match kind {
                CutKind::Inactive => "†",
                CutKind::Left => "↙†",
                CutKind::Right => "†↘",
            };
            write_infix(left, nt, s, true);
            s.push_str(&format!(" {} {} {} ", hat(a), op, hat(x)));
            write_infix(right, nt, s, true);
        }
        Term::EraserL { x, body } => {
            s.push_str(&format!("{} ⊙ ", n(x)));
            write_infix(body, nt, s, true);
        }
        Term::EraserR { body, a } => {
            write_infix(body, nt, s, true);
            s.push_str(&format!(" ⊙ {}", n(a)));
        }
        Term::DuplL { body, x1, x2, x } => {
            s.push_str(&format!("{}<{},{}< ", n(x), n(x1), n(x2)));
            write_infix(body, nt, s, true);
        }
        Term::DuplR { body, a1, a2, a } => {
            write_infix(body, nt, s, true);
            s.push_str(&format!(" >{},{}> {}", n(a1), n(a2), n(a)));
        }
    }
    if nested && compound {
        s.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    #[test]
    fn round_trips() {
        for src in [
            "cap(x,'a)",
            "cut(cap(y,'a),'a,x,cap(x,'b))",
            "exp(x,eraR(cap(x,'a1),'b),'b,'g)",
        ] {
            assert_eq!(print(&parse(src).unwrap()), src);
        }
    }

    #[test]
    fn distinct_names_print_distinctly() {
        let a = Name::outname("a");
        let a2 = a.freshen();
        let t = Term::dup_r(
            Term::imp(
                Term::cap(Name::inname("x"), a2.clone()),
                a2.clone(),
                Name::inname("y"),
                Name::inname("z"),
                Term::cap(Name::inname("z"), Name::outname("b")),
            ),
            Name::outname("p").freshen(),
            Name::outname("q").freshen(),
            a.clone(),
        );
        let s = print(&t);
        assert!(s.contains("'a_1"), "{s}");
        let again = parse(&print(&Term::exp(
            Name::inname("x").freshen(),
            Term::cap(Name::inname("y"), a2.clone()),
            a2,
            a,
        )))
        .unwrap();
        assert!(print(&again).starts_with("exp("));
    }

    #[test]
    fn infix_notation() {
        let t = parse("cut(cap(y,'a),'a,x,eraL(z,cap(x,'b)))").unwrap();
        assert_eq!(print_infix(&t), "⟨y.'a⟩ 'a\u{302} † x\u{302} (z ⊙ ⟨x.'b⟩)");
    }
}
