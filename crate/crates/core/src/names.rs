//! Free names, linearity and logical outnames.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::name::{Name, NameKind};
use crate::term::{Position, Term};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NameSets {
    pub innames: BTreeSet<Name>,
    pub outnames: BTreeSet<Name>,
}

impl NameSets {
    pub fn insert(&mut self, n: Name) {
        match n.kind() {
            NameKind::In => self.innames.insert(n),
            NameKind::Out => self.outnames.insert(n),
        };
    }

    pub fn remove(&mut self, n: &Name) {
        match n.kind() {
            NameKind::In => self.innames.remove(n),
            NameKind::Out => self.outnames.remove(n),
        };
    }

    pub fn contains(&self, n: &Name) -> bool {
        match n.kind() {
            NameKind::In => self.innames.contains(n),
            NameKind::Out => self.outnames.contains(n),
        }
    }

    pub fn extend(&mut self, other: NameSets) {
        self.innames.extend(other.innames);
        self.outnames.extend(other.outnames);
    }

    /// All names, innames first, each group in name order.
    pub fn all(&self) -> impl Iterator<Item = &Name> {
        self.innames.iter().chain(self.outnames.iter())
    }

    pub fn len(&self) -> usize {
        self.innames.len() + self.outnames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn difference(&self, other: &NameSets) -> NameSets {
        NameSets {
            innames: self.innames.difference(&other.innames).cloned().collect(),
            outnames: self.outnames.difference(&other.outnames).cloned().collect(),
        }
    }

    pub fn is_subset(&self, other: &NameSets) -> bool {
        self.innames.is_subset(&other.innames) && self.outnames.is_subset(&other.outnames)
    }
}

impl FromIterator<Name> for NameSets {
    fn from_iter<I: IntoIterator<Item = Name>>(iter: I) -> Self {
        let mut s = NameSets::default();
        for n in iter {
            s.insert(n);
        }
        s
    }
}

/// N(t) split by kind. Binders are removed and eraser names added.
pub fn free_names(t: &Term) -> NameSets {
    let mut out = NameSets::default();
    for n in t.own_names() {
        out.insert(n.clone());
    }
    for (i, c) in t.children().into_iter().enumerate() {
        let mut fc = free_names(c);
        for b in t.binders_of_child(i) {
            fc.remove(b);
        }
        out.extend(fc);
    }
    out
}

pub fn is_free(t: &Term, n: &Name) -> bool {
    free_names(t).contains(n)
}

/// Number of free occurrences of each name.
pub fn occurrences(t: &Term) -> BTreeMap<Name, usize> {
    let mut out = BTreeMap::new();
    for n in t.own_names() {
        *out.entry(n.clone()).or_insert(0) += 1;
    }
    for (i, c) in t.children().into_iter().enumerate() {
        let mut oc = occurrences(c);
        for b in t.binders_of_child(i) {
            oc.remove(b);
        }
        for (n, k) in oc {
            *out.entry(n).or_insert(0) += k;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    /// A free name with more than one free occurrence.
    Repeated { name: Name, count: usize },
    /// A binder with no occurrence to bind.
    Vacuous { binder: Name },
    /// A binder binding more than one occurrence.
    Overbinding { binder: Name, count: usize },
    /// An eraser whose name is already free in its body.
    ErasedNameFree { name: Name },
    /// The same name used by two binders, or both bound and free.
    Rebound { name: Name },
    /// Both binders of a duplicator are the same name.
    SameBinders { name: Name },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub position: Position,
    pub problem: Problem,
}

impl Diagnostic {
    pub fn message(&self) -> String {
        match &self.problem {
            Problem::Repeated { name, count } => {
                format!("{name} occurs free {count} times")
            }
            Problem::Vacuous { binder } => format!("binder {binder} binds no occurrence"),
            Problem::Overbinding { binder, count } => {
                format!("binder {binder} binds {count} occurrences")
            }
            Problem::ErasedNameFree { name } => {
                format!("{name} occurs free in eraser body")
            }
            Problem::Rebound { name } => format!("{name} is bound more than once"),
            Problem::SameBinders { name } => {
                format!("duplicator binds {name} twice")
            }
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.position, self.message())
    }
}

/// Checks that `t` is a linear *X term. Active cuts are accepted.
pub fn check_linear(t: &Term) -> Result<(), Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut bound = BTreeSet::new();
    let occ = linear_walk(t, &Position::root(), &mut diags, &mut bound);
    for (name, count) in occ {
        if count > 1 {
            diags.push(Diagnostic {
                position: Position::root(),
                problem: Problem::Repeated { name, count },
            });
        }
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}

fn linear_walk(
    t: &Term,
    pos: &Position,
    diags: &mut Vec<Diagnostic>,
    bound: &mut BTreeSet<Name>,
) -> BTreeMap<Name, usize> {
    let mut report = |problem| {
        diags.push(Diagnostic {
            position: pos.clone(),
            problem,
        })
    };
    for b in t.binders() {
        if !bound.insert(b.clone()) {
            report(Problem::Rebound { name: b.clone() });
        }
    }
    if let Term::DuplL { x1, x2, .. } | Term::DuplR { a1: x1, a2: x2, .. } = t {
        if x1 == x2 {
            report(Problem::SameBinders { name: x1.clone() });
        }
    }
    let mut out = BTreeMap::new();
    let kids: Vec<(usize, &Term)> = t.children().into_iter().enumerate().collect();
    for (i, c) in kids {
        let mut oc = linear_walk(c, &pos.child(i), diags, bound);
        for b in t.binders_of_child(i) {
            match oc.remove(b).unwrap_or(0) {
                1 => {}
                0 => diags.push(Diagnostic {
                    position: pos.clone(),
                    problem: Problem::Vacuous { binder: b.clone() },
                }),
                count => diags.push(Diagnostic {
                    position: pos.clone(),
                    problem: Problem::Overbinding {
                        binder: b.clone(),
                        count,
                    },
                }),
            }
        }
        for (n, k) in oc {
            *out.entry(n).or_insert(0) += k;
        }
    }
    if let Term::EraserL { x: e, .. } | Term::EraserR { a: e, .. } = t {
        if out.contains_key(e) {
            diags.push(Diagnostic {
                position: pos.clone(),
                problem: Problem::ErasedNameFree { name: e.clone() },
            });
        }
    }
    for n in t.own_names() {
        *out.entry(n.clone()).or_insert(0) += 1;
    }
    out
}

/// Free outnames introduced by a logical constructor rather than by
/// weakening.
pub fn logical_outnames(t: &Term) -> BTreeSet<Name> {
    match t {
        Term::Capsule { a, .. } => BTreeSet::from([a.clone()]),
        Term::Exporter { body, b, a, .. } => {
            let mut s = logical_outnames(body);
            s.remove(b);
            s.insert(a.clone());
            s
        }
        Term::Importer { left, a, right, .. } | Term::Cut { left, a, right, .. } => {
            let mut s = logical_outnames(left);
            s.remove(a);
            s.extend(logical_outnames(right));
            s
        }
        Term::EraserL { body, .. } | Term::EraserR { body, .. } | Term::DuplL { body, .. } => {
            logical_outnames(body)
        }
        Term::DuplR { body, a1, a2, a } => {
            let mut s = logical_outnames(body);
            let hit = s.remove(a1) | s.remove(a2);
            if hit {
                s.insert(a.clone());
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn set(t: &str) -> (Vec<String>, Vec<String>) {
        let f = free_names(&parse(t).unwrap());
        (
            f.innames.iter().map(|n| n.to_string()).collect(),
            f.outnames.iter().map(|n| n.to_string()).collect(),
        )
    }

    #[test]
    fn free_names_examples() {
        assert_eq!(set("cap(x,'a)"), (vec!["x".into()], vec!["'a".into()]));
        assert_eq!(
            set("eraR(cap(x,'a1),'b)"),
            (vec!["x".into()], vec!["'a1".into(), "'b".into()])
        );
        assert_eq!(
            set("dupR(imp(cap(x,'a1),'c,z,y,cap(y,'a2)),'a1,'a2,'a)"),
            (vec!["x".into(), "z".into()], vec!["'a".into()])
        );
    }

    #[test]
    fn vacuous_binder() {
        let d = check_linear(&parse("exp(x, cap(x,'a), 'b, 'g)").unwrap()).unwrap_err();
        assert_eq!(d.len(), 1);
        assert!(matches!(&d[0].problem, Problem::Vacuous { binder } if binder.base() == "b"));
        assert_eq!(d[0].message(), "binder 'b binds no occurrence");
    }

    #[test]
    fn eraser_over_free_name() {
        let d = check_linear(&parse("eraR(cap(x,'a),'a)").unwrap()).unwrap_err();
        assert!(d
            .iter()
            .any(|d| matches!(&d.problem, Problem::ErasedNameFree { .. })));
    }

    #[test]
    fn repeated_and_overbinding() {
        let d = check_linear(&parse("imp(cap(x,'a),'a,x,y,cap(y,'b))").unwrap()).unwrap_err();
        assert!(matches!(&d[0].problem, Problem::Repeated { count: 2, .. }));
        let d = check_linear(&parse("exp(x, imp(cap(x,'b),'c,x,y,cap(y,'c2)), 'b, 'g)").unwrap())
            .unwrap_err();
        assert!(d
            .iter()
            .any(|d| matches!(&d.problem, Problem::Overbinding { count: 2, .. })));
    }

    #[test]
    fn peirce_is_linear() {
        let t = parse(
            "exp(z, dupR(imp(exp(x, eraR(cap(x,'a1),'b),'b,'g),'g,z,y,cap(y,'a2)),'a1,'a2,'a),'a,'d)",
        )
        .unwrap();
        assert_eq!(check_linear(&t), Ok(()));
        let lo: Vec<_> = logical_outnames(&t).into_iter().map(|n| n.to_string()).collect();
        assert_eq!(lo, vec!["'d"]);
    }

    #[test]
    fn weakened_outname_is_not_logical() {
        let t = parse("eraR(cap(x,'a),'b)").unwrap();
        let lo = logical_outnames(&t);
        assert_eq!(lo.len(), 1);
        assert_eq!(lo.iter().next().unwrap().base(), "a");
    }
}
