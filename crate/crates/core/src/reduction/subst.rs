//! Simultaneous substitution: the contracta of the two duplication rules.
//!
//! `P{a1,a2 <- x.Q}` distributes the cut of the left duplication rule over
//! the places where `a1` and `a2` end up in `P`. Once they separate, each
//! side gets its own indexed copy of `Q` and the copies' free names are
//! contracted back together.

use thiserror::Error;

use crate::meta::index_all;
use crate::name::Name;
use crate::names::free_names;
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("{0} is not free in the term")]
    NotFree(Name),
    #[error("both names to substitute sit in a capsule")]
    Capsule,
}

/// Wraps `body` in duplicators joining `n_1`, `n_2` back into `n` for every
/// name in `names`; the first name ends up outermost.
fn contract(body: Term, names: &[(Name, Name, Name)]) -> Term {
    names.iter().rev().fold(body, |acc, (n1, n2, n)| {
        if n.is_in() {
            Term::dup_l(acc, n1.clone(), n2.clone(), n.clone())
        } else {
            Term::dup_r(acc, n1.clone(), n2.clone(), n.clone())
        }
    })
}

struct Copies {
    t1: Term,
    t2: Term,
    /// What the cut name became in each copy.
    k1: Name,
    k2: Name,
    /// Contractions joining the other free names back together.
    names: Vec<(Name, Name, Name)>,
}

/// Two indexed copies of `t`; `keep` is the name cut on.
fn copies(t: &Term, keep: &Name) -> Copies {
    let (t1, m1) = index_all(t, 1);
    let (t2, m2) = index_all(t, 2);
    let names = free_names(t)
        .all()
        .filter(|n| *n != keep)
        .map(|n| (m1[n].clone(), m2[n].clone(), n.clone()))
        .collect();
    Copies {
        k1: m1[keep].clone(),
        k2: m2[keep].clone(),
        t1,
        t2,
        names,
    }
}

/// One-hole node with its body replaced.
fn with_body(node: &Term, body: Term) -> Term {
    let body = Box::new(body);
    match node.clone() {
        Term::Exporter { x, b, a, .. } => Term::Exporter { x, body, b, a },
        Term::EraserL { x, .. } => Term::EraserL { x, body },
        Term::EraserR { a, .. } => Term::EraserR { body, a },
        Term::DuplL { x1, x2, x, .. } => Term::DuplL { body, x1, x2, x },
        Term::DuplR { a1, a2, a, .. } => Term::DuplR { body, a1, a2, a },
        _ => unreachable!("not a one-hole node"),
    }
}

fn body_of(node: &Term) -> &Term {
    match node {
        Term::Exporter { body, .. }
        | Term::EraserL { body, .. }
        | Term::EraserR { body, .. }
        | Term::DuplL { body, .. }
        | Term::DuplR { body, .. } => body,
        _ => unreachable!("not a one-hole node"),
    }
}

fn with_sides(node: &Term, l: Term, r: Term) -> Term {
    let (left, right) = (Box::new(l), Box::new(r));
    match node.clone() {
        Term::Importer { a, x, y, .. } => Term::Importer {
            left,
            a,
            x,
            y,
            right,
        },
        Term::Cut { kind, a, x, .. } => Term::Cut {
            kind,
            left,
            a,
            x,
            right,
        },
        _ => unreachable!("not a two-hole node"),
    }
}

fn sides(node: &Term) -> (&Term, &Term) {
    match node {
        Term::Importer { left, right, .. } | Term::Cut { left, right, .. } => (left, right),
        _ => unreachable!("not a two-hole node"),
    }
}

/// The principal name of a one-hole node.
fn principal(node: &Term) -> &Name {
    match node {
        Term::Exporter { a, .. } | Term::EraserR { a, .. } | Term::DuplR { a, .. } => a,
        Term::EraserL { x, .. } | Term::DuplL { x, .. } => x,
        _ => unreachable!("not a one-hole node"),
    }
}

/// `p{a1,a2 <- x.q}`: the contractum of
/// `cutL(dupR(p,a1,a2,'h),'h,x,q)`. Pushing the duplicator further in uses
/// a fresh handle.
pub fn dup_subst_left(
    p: &Term,
    a1: &Name,
    a2: &Name,
    x: &Name,
    q: &Term,
) -> Result<Term, SubstError> {
    let fp = free_names(p);
    for n in [a1, a2] {
        if !fp.contains(n) {
            return Err(SubstError::NotFree(n.clone()));
        }
    }
    if !free_names(q).contains(x) {
        return Err(SubstError::NotFree(x.clone()));
    }
    let push = |r: &Term| {
        let h = a1.freshen();
        Term::cut_l(
            Term::dup_r(r.clone(), a1.clone(), a2.clone(), h.clone()),
            h,
            x.clone(),
            q.clone(),
        )
    };
    let split = |ai: &Name, r: &Term, copy: &Term, xi: &Name| {
        Term::cut_l(r.clone(), ai.clone(), xi.clone(), copy.clone())
    };
    Ok(match p {
        Term::Capsule { .. } => return Err(SubstError::Capsule),
        Term::Importer { .. } | Term::Cut { .. } => {
            let (r1, r2) = sides(p);
            let (f1, f2) = (free_names(r1), free_names(r2));
            match (f1.contains(a1), f1.contains(a2)) {
                (true, true) => with_sides(p, push(r1), r2.clone()),
                (false, false) => with_sides(p, r1.clone(), push(r2)),
                (in1, _) => {
                    let c = copies(q, x);
                    let (l, r) = if in1 {
                        (split(a1, r1, &c.t1, &c.k1), split(a2, r2, &c.t2, &c.k2))
                    } else {
                        (split(a2, r1, &c.t2, &c.k2), split(a1, r2, &c.t1, &c.k1))
                    };
                    debug_assert!(f2.contains(if in1 { a2 } else { a1 }));
                    contract(with_sides(p, l, r), &c.names)
                }
            }
        }
        _ => {
            let pr = principal(p);
            if pr == a1 || pr == a2 {
                let c = copies(q, x);
                let ((qi, xi), (qj, xj), aj) = if pr == a1 {
                    ((&c.t1, &c.k1), (&c.t2, &c.k2), a2)
                } else {
                    ((&c.t2, &c.k2), (&c.t1, &c.k1), a1)
                };
                let inner = with_body(p, split(aj, body_of(p), qj, xj));
                contract(Term::cut(inner, pr.clone(), xi.clone(), qi.clone()), &c.names)
            } else {
                with_body(p, push(body_of(p)))
            }
        }
    })
}

/// `q{x1,x2 <- 'a.p}`: the contractum of
/// `cutR(p,'a,'h,dupL(q,x1,x2,'h))`.
pub fn dup_subst_right(
    p: &Term,
    a: &Name,
    x1: &Name,
    x2: &Name,
    q: &Term,
) -> Result<Term, SubstError> {
    let fq = free_names(q);
    for n in [x1, x2] {
        if !fq.contains(n) {
            return Err(SubstError::NotFree(n.clone()));
        }
    }
    if !free_names(p).contains(a) {
        return Err(SubstError::NotFree(a.clone()));
    }
    let push = |r: &Term| {
        let h = x1.freshen();
        Term::cut_r(
            p.clone(),
            a.clone(),
            h.clone(),
            Term::dup_l(r.clone(), x1.clone(), x2.clone(), h),
        )
    };
    let split = |pi: &Term, ai: &Name, xi: &Name, r: &Term| {
        Term::cut_r(pi.clone(), ai.clone(), xi.clone(), r.clone())
    };
    Ok(match q {
        Term::Capsule { .. } => return Err(SubstError::Capsule),
        Term::Importer { .. } | Term::Cut { .. } => {
            let (r1, r2) = sides(q);
            let f1 = free_names(r1);
            let own = match q {
                Term::Importer { x: w, .. } if w == x1 || w == x2 => Some(w),
                _ => None,
            };
            if let Some(xi) = own {
                // the importer itself is one of the two occurrences
                let xj = if xi == x1 { x2 } else { x1 };
                let c = copies(p, a);
                let node = if f1.contains(xj) {
                    with_sides(q, split(&c.t2, &c.k2, xj, r1), r2.clone())
                } else {
                    with_sides(q, r1.clone(), split(&c.t2, &c.k2, xj, r2))
                };
                contract(Term::cut(c.t1, c.k1, xi.clone(), node), &c.names)
            } else {
                match (f1.contains(x1), f1.contains(x2)) {
                    (true, true) => with_sides(q, push(r1), r2.clone()),
                    (false, false) => with_sides(q, r1.clone(), push(r2)),
                    (in1, _) => {
                        let c = copies(p, a);
                        let (l, r) = if in1 {
                            (split(&c.t1, &c.k1, x1, r1), split(&c.t2, &c.k2, x2, r2))
                        } else {
                            (split(&c.t2, &c.k2, x2, r1), split(&c.t1, &c.k1, x1, r2))
                        };
                        contract(with_sides(q, l, r), &c.names)
                    }
                }
            }
        }
        _ => {
            let pr = principal(q);
            if pr == x1 || pr == x2 {
                let xj = if pr == x1 { x2 } else { x1 };
                let c = copies(p, a);
                let inner = with_body(q, split(&c.t2, &c.k2, xj, body_of(q)));
                contract(Term::cut(c.t1, c.k1, pr.clone(), inner), &c.names)
            } else {
                with_body(q, push(body_of(q)))
            }
        }
    })
}
