//! Encodings between the calculi.
//!
//! `x_to_star` makes an X term linear: vacuous binders get erasers, and a
//! free name used by several parts of a node is split into indexed copies
//! joined again by duplicators right above that node. `star_to_x` forgets
//! erasers and duplicators, renaming the copies back to their source.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::name::Name;
use crate::names::{free_names, NameSets};
use crate::print::print;
use crate::reduction::erase;
use crate::term::{Position, Term};

/// Erasers for those of `names` that are not free in `t`.
fn potential_erasers(t: Term, names: &[&Name]) -> Term {
    let free = free_names(&t);
    let missing: NameSets = names
        .iter()
        .filter(|n| !free.contains(n))
        .map(|n| (*n).clone())
        .collect();
    erase(t, &missing)
}

/// Joins the copies `copies[0..k]` of `n` back into `n`, left-nested.
fn join(body: Term, n: &Name, copies: &[Name]) -> Term {
    let mk = |acc: Term, c1: Name, c2: Name, src: Name| {
        if n.is_in() {
            Term::dup_l(acc, c1, c2, src)
        } else {
            Term::dup_r(acc, c1, c2, src)
        }
    };
    // copies[0], copies[1] meet innermost; the last copy meets at the top
    let k = copies.len();
    let mut sources: Vec<Name> = (0..k - 2).map(|_| n.freshen()).collect();
    sources.push(n.clone());
    let mut acc = mk(body, copies[0].clone(), copies[1].clone(), sources[0].clone());
    for i in 2..k {
        acc = mk(acc, sources[i - 2].clone(), copies[i].clone(), sources[i - 1].clone());
    }
    acc
}

/// Own names of `t` that are not binders.
fn own_free(t: &Term) -> Vec<Name> {
    let binders = t.binders();
    t.own_names()
        .into_iter()
        .filter(|n| !binders.contains(n))
        .cloned()
        .collect()
}

fn with_own(t: &Term, old: &Name, new: &Name) -> Term {
    let mut out = t.clone();
    match &mut out {
        Term::Capsule { x, a } => {
            if x == old {
                *x = new.clone();
            } else if a == old {
                *a = new.clone();
            }
        }
        Term::Exporter { a, .. } if a == old => *a = new.clone(),
        Term::Importer { x, .. } if x == old => *x = new.clone(),
        _ => {}
    }
    out
}

/// Encodes an X term (possibly non-linear, with vacuous binders) as a
/// linear *X term with the same free names.
pub fn x_to_star(p: &Term) -> Term {
    let children: Vec<Term> = p
        .children()
        .into_iter()
        .enumerate()
        .map(|(i, c)| potential_erasers(x_to_star(c), &p.binders_of_child(i)))
        .collect();
    // occurrences of each free name: Some(i) for child i, None for the node
    let mut parts: BTreeMap<Name, Vec<Option<usize>>> = BTreeMap::new();
    for (i, c) in children.iter().enumerate() {
        let binders = p.binders_of_child(i);
        for n in free_names(c).all().filter(|n| !binders.contains(n)) {
            parts.entry(n.clone()).or_default().push(Some(i));
        }
    }
    for n in own_free(p) {
        parts.entry(n).or_default().push(None);
    }
    let mut children = children;
    let mut node = p.clone();
    let mut joins = Vec::new();
    for (n, at) in parts.into_iter().filter(|(_, at)| at.len() > 1) {
        let copies: Vec<Name> = (1..=at.len()).map(|i| n.indexed(i)).collect();
        for (place, c) in at.iter().zip(&copies) {
            match place {
                Some(i) => children[*i] = children[*i].rename_free(&n, c),
                None => node = with_own(&node, &n, c),
            }
        }
        joins.push((n, copies));
    }
    for (i, c) in children.into_iter().enumerate() {
        node = node
            .replace_at(&Position::root().child(i), c)
            .expect("child exists");
    }
    joins
        .iter()
        .rev()
        .fold(node, |acc, (n, copies)| join(acc, n, copies))
}

/// Forgets erasers and duplicators.
pub fn star_to_x(q: &Term) -> Term {
    match q {
        Term::EraserL { body, .. } | Term::EraserR { body, .. } => star_to_x(body),
        Term::DuplL { body, x1, x2, x } | Term::DuplR { body, a1: x1, a2: x2, a: x } => {
            star_to_x(body).rename_free(x1, x).rename_free(x2, x)
        }
        _ => {
            let mut out = q.clone();
            for (i, c) in q.children().into_iter().enumerate() {
                out = out
                    .replace_at(&Position::root().child(i), star_to_x(c))
                    .expect("child exists");
            }
            out
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EncodeReport {
    pub input: String,
    pub output: String,
    pub erasers: usize,
    pub duplicators: usize,
}

fn count(t: &Term, f: impl Fn(&Term) -> bool) -> usize {
    t.subterms().into_iter().filter(|(_, s)| f(s)).count()
}

fn is_eraser(t: &Term) -> bool {
    matches!(t, Term::EraserL { .. } | Term::EraserR { .. })
}

fn is_dup(t: &Term) -> bool {
    matches!(t, Term::DuplL { .. } | Term::DuplR { .. })
}

/// Encodes into *X; the counts are the nodes inserted.
pub fn encode_to_star(p: &Term) -> EncodeReport {
    let out = x_to_star(p);
    EncodeReport {
        input: print(p),
        output: print(&out),
        erasers: count(&out, is_eraser) - count(p, is_eraser),
        duplicators: count(&out, is_dup) - count(p, is_dup),
    }
}

/// Encodes into X; the counts are the nodes removed.
pub fn encode_to_x(q: &Term) -> EncodeReport {
    let out = star_to_x(q);
    EncodeReport {
        input: print(q),
        output: print(&out),
        erasers: count(q, is_eraser),
        duplicators: count(q, is_dup),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::{alpha_eq, congruent};
    use crate::names::check_linear;
    use crate::parse::parse;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn linear_terms_are_unchanged() {
        for s in [
            "cap(x,'a)",
            "exp(x,cap(x,'b),'b,'a)",
            "cut(cap(y,'a),'a,x,cap(x,'b))",
            "imp(cap(w,'a),'a,x,y,cap(y,'b))",
        ] {
            let t = p(s);
            assert_eq!(x_to_star(&t), t);
        }
    }

    #[test]
    fn shared_outname_example() {
        let t = p("imp(exp(x,cap(x,'a),'b,'g),'g,z,y,cap(y,'a))");
        let e = x_to_star(&t);
        assert!(check_linear(&e).is_ok());
        assert_eq!(free_names(&e), free_names(&t));
        let want = p("dupR(imp(exp(x,eraR(cap(x,'a1),'b),'b,'g),'g,z,y,cap(y,'a2)),'a1,'a2,'a)");
        assert!(congruent(&e, &want), "{}", print(&e));
        let r = encode_to_star(&t);
        assert_eq!((r.erasers, r.duplicators), (1, 1));
    }

    #[test]
    fn three_copies() {
        let t = p("imp(cut(cap(x,'a),'a,v,cap(v,'c)),'c,x,y,cap(x,'d))");
        let e = x_to_star(&t);
        assert!(check_linear(&e).is_ok(), "{}", print(&e));
        assert_eq!(free_names(&e), free_names(&t));
        assert!(alpha_eq(&star_to_x(&e), &t));
    }

    #[test]
    fn exporter_reusing_its_name() {
        let t = p("exp(x,imp(cap(x,'c),'c,w,z,cap(z,'a)),'b,'a)");
        let e = x_to_star(&t);
        assert!(check_linear(&e).is_ok(), "{}", print(&e));
        assert!(matches!(e, Term::DuplR { .. }));
    }

    #[test]
    fn forgetting_structure() {
        assert_eq!(star_to_x(&p("eraL(x,cap(y,'a))")), p("cap(y,'a)"));
        let q = p("dupL(imp(cap(x1,'c),'c,x2,y,cap(y,'b)),x1,x2,x)");
        let x = star_to_x(&q);
        assert!(x.is_x_term());
        assert!(alpha_eq(&x, &p("imp(cap(x,'c),'c,x,y,cap(y,'b))")));
    }
}
