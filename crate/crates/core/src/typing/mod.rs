//! Simple types for *X (explicit structural rules, exact contexts) and X
//! (shared contexts, implicit weakening), checking and principal inference.
//!
//! Both checkers are syntax directed: each constructor determines its rule,
//! and since binders are unique every name carries one type throughout the
//! term. Checking therefore amounts to solving the equations the rules put
//! on the types of names, with the given sequent fixing the free ones.

pub mod formula;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::name::Name;
use crate::names::{check_linear, free_names, Diagnostic};
use crate::print::NameTable;
use crate::reduction::{StarConfig, StarRule, StarSystem};
use crate::rewrite::{Chooser, RewriteSystem, RuleTag, Seeded, Side};
use crate::term::{Position, Term};

pub use formula::{parse_formula, parse_sequent, Formula, Sequent, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("term is not linear: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    NotLinear(Vec<Diagnostic>),
    #[error("X terms have no erasers or duplicators")]
    NotXTerm,
    #[error("context does not match the free names (missing: {missing:?}, not free: {extra:?})")]
    Domain {
        missing: Vec<String>,
        extra: Vec<String>,
    },
    #[error("at {position} ({rule}): cannot match {left} with {right}")]
    Mismatch {
        position: Position,
        rule: &'static str,
        left: Formula,
        right: Formula,
    },
    #[error("at {position} ({rule}): {var} would occur in its own type {formula}")]
    Occurs {
        position: Position,
        rule: &'static str,
        var: Formula,
        formula: Formula,
    },
}

/// One inference: rule name, conclusion and premises (one per child).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: &'static str,
    pub conclusion: Sequent,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    /// Rule names, premises before conclusions.
    pub fn rules_postorder(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        self.collect_rules(&mut out);
        out
    }

    fn collect_rules(&self, out: &mut Vec<&'static str>) {
        for p in &self.premises {
            p.collect_rules(out);
        }
        out.push(self.rule);
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Indented tree, conclusion first, names shown as in `print`.
    pub fn render(&self, names: &NameTable) -> String {
        let mut out = String::new();
        self.render_into(names, 0, &mut out);
        out
    }

    fn render_into(&self, names: &NameTable, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!(
            "({}) {}\n",
            self.rule,
            self.conclusion.display_with(|n| names.show(n))
        ));
        for p in &self.premises {
            p.render_into(names, depth + 1, out);
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        fn go(d: &Derivation, depth: usize, out: &mut String) {
            out.push_str(&"  ".repeat(depth));
            out.push_str(&format!("({}) {}\n", d.rule, d.conclusion));
            for p in &d.premises {
                go(p, depth + 1, out);
            }
        }
        go(self, 0, &mut out);
        f.write_str(&out)
    }
}

pub fn rule_name(t: &Term) -> &'static str {
    match t {
        Term::Capsule { .. } => "ax",
        Term::Exporter { .. } => "->R",
        Term::Importer { .. } => "->L",
        Term::Cut { .. } => "cut",
        Term::EraserL { .. } => "weak-L",
        Term::EraserR { .. } => "weak-R",
        Term::DuplL { .. } => "cont-L",
        Term::DuplR { .. } => "cont-R",
    }
}

enum Clash {
    Mismatch(Formula, Formula),
    Occurs(Formula, Formula),
}

/// First-order unification over formulas; atoms are rigid.
#[derive(Default)]
struct Unifier {
    bound: Vec<Option<Formula>>,
}

impl Unifier {
    fn fresh(&mut self) -> Formula {
        self.bound.push(None);
        Formula::Var(self.bound.len() as u32 - 1)
    }

    fn walk(&self, f: &Formula) -> Formula {
        let mut cur = f.clone();
        while let Formula::Var(i) = cur {
            match &self.bound[i as usize] {
                Some(g) => cur = g.clone(),
                None => break,
            }
        }
        cur
    }

    fn resolve(&self, f: &Formula) -> Formula {
        match self.walk(f) {
            Formula::Arrow(a, b) => Formula::arrow(self.resolve(&a), self.resolve(&b)),
            g => g,
        }
    }

    fn occurs(&self, v: u32, f: &Formula) -> bool {
        match self.walk(f) {
            Formula::Var(w) => v == w,
            Formula::Arrow(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
            Formula::Atom(_) => false,
        }
    }

    fn unify(&mut self, a: &Formula, b: &Formula) -> Result<(), Clash> {
        let (a, b) = (self.walk(a), self.walk(b));
        match (&a, &b) {
            (Formula::Var(i), Formula::Var(j)) if i == j => Ok(()),
            (Formula::Var(i), _) => self.bind(*i, &a, &b),
            (_, Formula::Var(j)) => self.bind(*j, &b, &a),
            (Formula::Atom(x), Formula::Atom(y)) if x == y => Ok(()),
            (Formula::Arrow(a1, a2), Formula::Arrow(b1, b2)) => {
                self.unify(a1, b1).map_err(|_| self.clash(&a, &b))?;
                self.unify(a2, b2).map_err(|_| self.clash(&a, &b))
            }
            _ => Err(self.clash(&a, &b)),
        }
    }

    fn bind(&mut self, v: u32, var: &Formula, f: &Formula) -> Result<(), Clash> {
        if self.occurs(v, f) {
            return Err(Clash::Occurs(var.clone(), self.resolve(f)));
        }
        self.bound[v as usize] = Some(f.clone());
        Ok(())
    }

    fn clash(&self, a: &Formula, b: &Formula) -> Clash {
        Clash::Mismatch(self.resolve(a), self.resolve(b))
    }
}

/// Types of all names of one term, solved together.
struct Solver {
    u: Unifier,
    vars: HashMap<Name, Formula>,
}

impl Solver {
    fn new() -> Solver {
        Solver {
            u: Unifier::default(),
            vars: HashMap::new(),
        }
    }

    fn var(&mut self, n: &Name) -> Formula {
        if let Some(v) = self.vars.get(n) {
            return v.clone();
        }
        let v = self.u.fresh();
        self.vars.insert(n.clone(), v.clone());
        v
    }

    fn eq(&mut self, pos: &Position, t: &Term, a: &Formula, b: &Formula) -> Result<(), TypeError> {
        self.u.unify(a, b).map_err(|c| match c {
            Clash::Mismatch(left, right) => TypeError::Mismatch {
                position: pos.clone(),
                rule: rule_name(t),
                left,
                right,
            },
            Clash::Occurs(var, formula) => TypeError::Occurs {
                position: pos.clone(),
                rule: rule_name(t),
                var,
                formula,
            },
        })
    }

    fn seed(&mut self, s: &Sequent, t: &Term) -> Result<(), TypeError> {
        for n in s.names() {
            let v = self.var(n);
            self.eq(&Position::root(), t, &v, s.get(n).expect("listed name"))?;
        }
        Ok(())
    }

    /// Adds the equations of every node, children before parents.
    fn constrain(&mut self, t: &Term, pos: &Position) -> Result<(), TypeError> {
        for (i, c) in t.children().into_iter().enumerate() {
            self.constrain(c, &pos.child(i))?;
        }
        match t {
            Term::Capsule { x, a } => {
                let (vx, va) = (self.var(x), self.var(a));
                self.eq(pos, t, &vx, &va)
            }
            Term::Exporter { x, b, a, .. } => {
                let f = Formula::arrow(self.var(x), self.var(b));
                let va = self.var(a);
                self.eq(pos, t, &va, &f)
            }
            Term::Importer { a, x, y, .. } => {
                let f = Formula::arrow(self.var(a), self.var(y));
                let vx = self.var(x);
                self.eq(pos, t, &vx, &f)
            }
            Term::Cut { a, x, .. } => {
                let (va, vx) = (self.var(a), self.var(x));
                self.eq(pos, t, &va, &vx)
            }
            Term::EraserL { x, .. } => {
                self.var(x);
                Ok(())
            }
            Term::EraserR { a, .. } => {
                self.var(a);
                Ok(())
            }
            Term::DuplL { x1, x2, x, .. } | Term::DuplR { a1: x1, a2: x2, a: x, .. } => {
                let (v1, v2, v) = (self.var(x1), self.var(x2), self.var(x));
                self.eq(pos, t, &v1, &v)?;
                self.eq(pos, t, &v2, &v)
            }
        }
    }

    fn ty(&self, n: &Name) -> Formula {
        self.u.resolve(&self.vars[n])
    }

    fn sequent<'a>(&self, names: impl Iterator<Item = &'a Name>) -> Sequent {
        let mut s = Sequent::default();
        for n in names {
            s.insert(n.clone(), self.ty(n));
        }
        s
    }

    /// *X derivation: each conclusion is typed exactly by its free names.
    fn derive_star(&self, t: &Term) -> Derivation {
        Derivation {
            rule: rule_name(t),
            conclusion: self.sequent(free_names(t).all()),
            premises: t.children().into_iter().map(|c| self.derive_star(c)).collect(),
        }
    }

    /// X derivation: the root context plus the binders in scope.
    fn derive_x(&self, t: &Term, ctx: &Sequent) -> Derivation {
        let premises = t
            .children()
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                let mut inner = ctx.clone();
                for b in t.binders_of_child(i) {
                    inner.insert(b.clone(), self.ty(b));
                }
                self.derive_x(c, &inner)
            })
            .collect();
        Derivation {
            rule: rule_name(t),
            conclusion: ctx.clone(),
            premises,
        }
    }
}

fn domain_error(t: &Term, s: &Sequent, exact: bool) -> Option<TypeError> {
    let free = free_names(t);
    let missing: Vec<String> = free
        .all()
        .filter(|n| s.get(n).is_none())
        .map(|n| n.to_string())
        .collect();
    let extra: Vec<String> = if exact {
        s.names()
            .filter(|n| !free.contains(n))
            .map(|n| n.to_string())
            .collect()
    } else {
        vec![]
    };
    (!missing.is_empty() || !extra.is_empty()).then_some(TypeError::Domain { missing, extra })
}

/// Checks `t ∴ s` in the system with explicit structural rules.
pub fn typecheck_star(t: &Term, s: &Sequent) -> Result<Derivation, TypeError> {
    check_linear(t).map_err(TypeError::NotLinear)?;
    if let Some(e) = domain_error(t, s, true) {
        return Err(e);
    }
    let mut sv = Solver::new();
    sv.seed(s, t)?;
    sv.constrain(t, &Position::root())?;
    Ok(sv.derive_star(t))
}

/// Checks `t ∴ s` in the context-sharing system; `s` may declare names that
/// are not free in `t`.
pub fn typecheck_x(t: &Term, s: &Sequent) -> Result<Derivation, TypeError> {
    if !t.is_x_term() {
        return Err(TypeError::NotXTerm);
    }
    if let Some(e) = domain_error(t, s, false) {
        return Err(e);
    }
    let mut sv = Solver::new();
    sv.seed(s, t)?;
    sv.constrain(t, &Position::root())?;
    let mut root = Sequent::default();
    for n in s.names() {
        root.insert(n.clone(), sv.ty(n));
    }
    Ok(sv.derive_x(t, &root))
}

/// Replaces variables by atoms `T0`, `T1`, … in order of first appearance.
fn name_variables(s: &Sequent) -> Sequent {
    fn go(f: &Formula, map: &mut BTreeMap<u32, usize>) -> Formula {
        match f {
            Formula::Var(v) => {
                let k = map.len();
                let i = *map.entry(*v).or_insert(k);
                Formula::Atom(format!("T{i}"))
            }
            Formula::Arrow(a, b) => {
                let a = go(a, map);
                Formula::arrow(a, go(b, map))
            }
            Formula::Atom(_) => f.clone(),
        }
    }
    let mut map = BTreeMap::new();
    let mut out = Sequent::default();
    for n in s.gamma.keys().chain(s.delta.keys()) {
        let f = go(s.get(n).expect("listed"), &mut map);
        out.insert(n.clone(), f);
    }
    out
}

fn infer_with(t: &Term) -> Result<Sequent, TypeError> {
    let mut sv = Solver::new();
    sv.constrain(t, &Position::root())?;
    Ok(name_variables(&sv.sequent(free_names(t).all())))
}

/// The most general sequent for `t` in the system with explicit structural
/// rules.
pub fn infer_star(t: &Term) -> Result<Sequent, TypeError> {
    check_linear(t).map_err(TypeError::NotLinear)?;
    infer_with(t)
}

/// The most general sequent over the free names of an X term.
pub fn infer_x(t: &Term) -> Result<Sequent, TypeError> {
    if !t.is_x_term() {
        return Err(TypeError::NotXTerm);
    }
    infer_with(t)
}

#[derive(Clone, Debug)]
pub struct Violation {
    /// Number of the step after which the check failed.
    pub step: usize,
    pub rule: &'static str,
    pub term: Term,
    pub error: TypeError,
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub steps: usize,
    pub reached_normal_form: bool,
    pub violation: Option<Violation>,
}

/// Takes up to `steps` seeded random *X steps from `t`, checking after each
/// step and after each simplification that `t` still has sequent `s`.
pub fn witness_reduction_check(
    t: &Term,
    s: &Sequent,
    steps: usize,
    seed: u64,
    cfg: StarConfig,
) -> WitnessReport {
    let sys = StarSystem { cfg };
    let mut chooser = Seeded::new(seed);
    let mut cur = t.clone();
    let mut report = WitnessReport {
        steps: 0,
        reached_normal_form: false,
        violation: None,
    };
    let fail = |step, rule, term: &Term, error| Violation {
        step,
        rule,
        term: term.clone(),
        error,
    };
    for n in 0..=steps {
        let simp = sys.prepare(&cur);
        if simp != cur {
            if let Err(e) = typecheck_star(&simp, s) {
                report.violation = Some(fail(n, "simp", &simp, e));
                return report;
            }
            cur = simp;
        }
        let redexes = sys.redexes(&cur);
        if redexes.is_empty() {
            report.reached_normal_form = true;
            return report;
        }
        if n == steps {
            break;
        }
        let listed: Vec<(Position, &'static str, Side)> = redexes
            .iter()
            .map(|(p, r)| (p.clone(), r.tag(), r.side()))
            .collect();
        let i = chooser.choose(&cur, &listed).expect("redexes listed");
        let (pos, rule): &(Position, StarRule) = &redexes[i];
        cur = sys.step(&cur, pos, *rule).expect("listed redexes apply");
        report.steps += 1;
        if let Err(e) = typecheck_star(&cur, s) {
            report.violation = Some(fail(n + 1, rule.tag(), &cur, e));
            return report;
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    pub(crate) const PEIRCE: &str =
        "exp(z,dupR(imp(exp(x,eraR(cap(x,'a1),'b),'b,'g),'g,z,y,cap(y,'a2)),'a1,'a2,'a),'a,'d)";

    #[test]
    fn axiom() {
        let t = parse("cap(x,'a)").unwrap();
        let d = typecheck_star(&t, &parse_sequent("x:A |- 'a:A").unwrap()).unwrap();
        assert_eq!(d.rules_postorder(), ["ax"]);
        assert!(typecheck_star(&t, &parse_sequent("x:A |- 'a:B").unwrap()).is_err());
        assert_eq!(infer_star(&t).unwrap().to_string(), "x:T0 |- 'a:T0");
    }

    #[test]
    fn peirce() {
        let t = parse(PEIRCE).unwrap();
        let s = parse_sequent("|- 'd:((A->B)->A)->A").unwrap();
        let d = typecheck_star(&t, &s).unwrap();
        assert_eq!(
            d.rules_postorder(),
            ["ax", "weak-R", "->R", "ax", "->L", "cont-R", "->R"]
        );
        assert_eq!(d.size(), t.size());
        let bad = parse_sequent("|- 'd:A->A").unwrap();
        assert!(matches!(typecheck_star(&t, &bad), Err(TypeError::Mismatch { .. })));
        assert_eq!(
            infer_star(&t).unwrap().to_string(),
            "|- 'd:((T0->T1)->T0)->T0"
        );
    }

    #[test]
    fn domain_must_be_exact_for_star_only() {
        let t = parse("cap(x,'a)").unwrap();
        let s = parse_sequent("x:A, y:B |- 'a:A").unwrap();
        assert!(matches!(typecheck_star(&t, &s), Err(TypeError::Domain { .. })));
        let d = typecheck_x(&t, &s).unwrap();
        assert_eq!(d.conclusion, s);
        let missing = parse_sequent("|- 'a:A").unwrap();
        assert!(typecheck_x(&t, &missing).is_err());
    }

    #[test]
    fn cut_formula_mismatch_in_x() {
        let t = parse("cut(exp(y,cap(y,'b),'b,'a),'a,x,cap(x,'c))").unwrap();
        assert!(typecheck_x(&t, &parse_sequent("|- 'c:A->A").unwrap()).is_ok());
        assert!(typecheck_x(&t, &parse_sequent("|- 'c:A").unwrap()).is_err());
    }

    #[test]
    fn occurs_check() {
        let t = parse("dupL(imp(cap(x1,'a),'a,x2,z,cap(z,'b)),x1,x2,x)").unwrap();
        assert!(matches!(infer_star(&t), Err(TypeError::Occurs { .. })));
    }

    #[test]
    fn witness_on_peirce() {
        let t = parse(PEIRCE).unwrap();
        let s = parse_sequent("|- 'd:((A->B)->A)->A").unwrap();
        let r = witness_reduction_check(&t, &s, 50, 1, StarConfig::default());
        assert!(r.violation.is_none());
        assert!(r.reached_normal_form);
    }

    #[test]
    fn x_derivation_carries_binders() {
        let t = parse("exp(x,cap(x,'b),'b,'a)").unwrap();
        let d = typecheck_x(&t, &parse_sequent("w:C |- 'a:A->A").unwrap()).unwrap();
        let leaf = &d.premises[0].conclusion;
        assert_eq!(leaf.gamma.len(), 2);
        assert_eq!(leaf.delta.len(), 2);
    }
}
