//! The X calculus: cut elimination with implicit weakening and contraction.
//!
//! X terms use only capsules, exporters, importers and cuts. Names may occur
//! several times and binders may bind nothing. Whenever a rule copies a
//! subterm every copy gets fresh binders, so no name is ever bound twice.

use crate::names::free_names;
use crate::rewrite::{sort_redexes, RewriteSystem, RuleTag, Side, StepError};
use crate::canon::alpha_normalize;
use crate::name::Name;
use crate::term::{CutKind, Position, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum XRule {
    CapRen,
    ExpRen,
    ImpRen,
    ExpImpIns,
    ActL,
    ActR,
    DeactL,
    GcL,
    ExpPropL,
    PropDuplDeactL,
    ImpPropL,
    CutPropL,
    CutcPropL,
    DeactR,
    GcR,
    ExpPropR,
    PropDuplDeactR,
    ImpPropR,
    CutPropR,
    CutcPropR,
}

impl XRule {
    pub const ALL: [XRule; 20] = [
        XRule::CapRen,
        XRule::ExpRen,
        XRule::ImpRen,
        XRule::ExpImpIns,
        XRule::ActL,
        XRule::ActR,
        XRule::DeactL,
        XRule::GcL,
        XRule::ExpPropL,
        XRule::PropDuplDeactL,
        XRule::ImpPropL,
        XRule::CutPropL,
        XRule::CutcPropL,
        XRule::DeactR,
        XRule::GcR,
        XRule::ExpPropR,
        XRule::PropDuplDeactR,
        XRule::ImpPropR,
        XRule::CutPropR,
        XRule::CutcPropR,
    ];

    pub fn from_tag(s: &str) -> Option<XRule> {
        XRule::ALL.into_iter().find(|r| r.tag() == s)
    }
}

impl RuleTag for XRule {
    fn tag(self) -> &'static str {
        match self {
            XRule::CapRen => "cap-ren",
            XRule::ExpRen => "exp-ren",
            XRule::ImpRen => "imp-ren",
            XRule::ExpImpIns => "exp-imp-ins",
            XRule::ActL => "act-L",
            XRule::ActR => "act-R",
            XRule::DeactL => "deact-L",
            XRule::GcL => "gc-L",
            XRule::ExpPropL => "exp-prop-L",
            XRule::PropDuplDeactL => "prop-dupl-deact-L",
            XRule::ImpPropL => "imp-prop-L",
            XRule::CutPropL => "cut-prop-L",
            XRule::CutcPropL => "cutc-prop-L",
            XRule::DeactR => "deact-R",
            XRule::GcR => "gc-R",
            XRule::ExpPropR => "exp-prop-R",
            XRule::PropDuplDeactR => "prop-dupl-deact-R",
            XRule::ImpPropR => "imp-prop-R",
            XRule::CutPropR => "cut-prop-R",
            XRule::CutcPropR => "cutc-prop-R",
        }
    }

    fn side(self) -> Side {
        match self {
            XRule::ActL => Side::Left,
            XRule::ActR => Side::Right,
            _ => Side::Neutral,
        }
    }
}

/// Which way the insertion rule associates the two new cuts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InsertAssoc {
    /// `(Q ĝ†ŷ R) b̂†ẑ S`
    #[default]
    Left,
    /// `Q ĝ†ŷ (R b̂†ẑ S)`
    Right,
}

impl std::str::FromStr for InsertAssoc {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" => Ok(InsertAssoc::Left),
            "right" => Ok(InsertAssoc::Right),
            _ => Err(format!("expected left or right, found {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XConfig {
    /// The capsule exception rules for cuts over a cut with a capsule.
    pub cutc: bool,
    pub insert_assoc: InsertAssoc,
    /// Forbid activating a cut towards a side that is itself an active cut.
    pub strict_activation: bool,
}

impl Default for XConfig {
    fn default() -> Self {
        XConfig {
            cutc: true,
            insert_assoc: InsertAssoc::Left,
            strict_activation: false,
        }
    }
}

pub fn freshly_introduces(t: &Term, n: &Name) -> bool {
    match t {
        Term::Capsule { x, a } => x == n || a == n,
        Term::Importer { left, x, right, .. } => {
            x == n && !free_names(left).contains(n) && !free_names(right).contains(n)
        }
        Term::Exporter { body, a, .. } => a == n && !free_names(body).contains(n),
        _ => false,
    }
}

fn is_active(t: &Term) -> bool {
    matches!(
        t,
        Term::Cut {
            kind: CutKind::Left | CutKind::Right,
            ..
        }
    )
}

/// A cut whose binders are fresh and whose subterms have fresh binders, so
/// that it can be used as one of several copies.
fn cut_copy(kind: CutKind, p: &Term, a: &Name, x: &Name, q: &Term) -> Term {
    let (a2, x2) = (a.freshen(), x.freshen());
    Term::cut_with(
        kind,
        p.freshen_binders().rename_free(a, &a2),
        a2,
        x2.clone(),
        q.freshen_binders().rename_free(x, &x2),
    )
}

/// Rules applicable at the root of `t`, in rule order.
pub fn x_rules_at(t: &Term, cfg: &XConfig) -> Vec<XRule> {
    let Term::Cut {
        kind,
        left: p,
        a,
        x,
        right: q,
    } = t
    else {
        return vec![];
    };
    let p: &Term = p;
    let q: &Term = q;
    match kind {
        CutKind::Inactive => {
            let (fp, fq) = (freshly_introduces(p, a), freshly_introduces(q, x));
            let mut out = Vec::new();
            if fp && fq {
                out.push(match (p, q) {
                    (Term::Capsule { .. }, Term::Capsule { .. }) => XRule::CapRen,
                    (Term::Exporter { .. }, Term::Capsule { .. }) => XRule::ExpRen,
                    (Term::Capsule { .. }, Term::Importer { .. }) => XRule::ImpRen,
                    _ => XRule::ExpImpIns,
                });
            }
            if !fp && !(cfg.strict_activation && is_active(p)) {
                out.push(XRule::ActL);
            }
            if !fq && !(cfg.strict_activation && is_active(q)) {
                out.push(XRule::ActR);
            }
            out
        }
        CutKind::Left => left_rules(p, a, cfg),
        CutKind::Right => right_rules(x, q, cfg),
    }
}

/// Propagation needs the cut name to occur; otherwise only garbage
/// collection applies.
fn left_rules(p: &Term, a: &Name, cfg: &XConfig) -> Vec<XRule> {
    if freshly_introduces(p, a) {
        return vec![XRule::DeactL];
    }
    if !free_names(p).contains(a) {
        return vec![XRule::GcL];
    }
    left_prop(p, a, cfg).into_iter().collect()
}

fn left_prop(p: &Term, a: &Name, cfg: &XConfig) -> Option<XRule> {
    match p {
        Term::Exporter { a: g, .. } if g != a => Some(XRule::ExpPropL),
        Term::Exporter { .. } => Some(XRule::PropDuplDeactL),
        Term::Importer { .. } => Some(XRule::ImpPropL),
        Term::Cut {
            kind: CutKind::Inactive,
            right,
            x: y,
            ..
        } => {
            let capsule = matches!(&**right, Term::Capsule { x, a: c } if x == y && c == a);
            if cfg.cutc && capsule {
                Some(XRule::CutcPropL)
            } else {
                Some(XRule::CutPropL)
            }
        }
        _ => None,
    }
}

fn right_rules(x: &Name, q: &Term, cfg: &XConfig) -> Vec<XRule> {
    if freshly_introduces(q, x) {
        return vec![XRule::DeactR];
    }
    if !free_names(q).contains(x) {
        return vec![XRule::GcR];
    }
    right_prop(x, q, cfg).into_iter().collect()
}

fn right_prop(x: &Name, q: &Term, cfg: &XConfig) -> Option<XRule> {
    match q {
        Term::Exporter { .. } => Some(XRule::ExpPropR),
        Term::Importer { x: w, .. } if w == x => Some(XRule::PropDuplDeactR),
        Term::Importer { .. } => Some(XRule::ImpPropR),
        Term::Cut {
            kind: CutKind::Inactive,
            left,
            a: b,
            ..
        } => {
            let capsule = matches!(&**left, Term::Capsule { x: w, a: c } if w == x && c == b);
            if cfg.cutc && capsule {
                Some(XRule::CutcPropR)
            } else {
                Some(XRule::CutPropR)
            }
        }
        _ => None,
    }
}

/// Contracts the redex at the root of `t`.
pub fn x_contract(t: &Term, rule: XRule, cfg: &XConfig) -> Option<Term> {
    if !x_rules_at(t, cfg).contains(&rule) {
        return None;
    }
    let Term::Cut {
        left: p,
        a,
        x,
        right: q,
        ..
    } = t
    else {
        return None;
    };
    let (p, q): (&Term, &Term) = (p, q);
    use CutKind::*;
    Some(match rule {
        XRule::CapRen => {
            let (Term::Capsule { x: y, .. }, Term::Capsule { a: b, .. }) = (p, q) else {
                return None;
            };
            Term::cap(y.clone(), b.clone())
        }
        XRule::ExpRen => {
            let (Term::Exporter { x: y, body, b, .. }, Term::Capsule { a: g, .. }) = (p, q) else {
                return None;
            };
            Term::exp(y.clone(), (**body).clone(), b.clone(), g.clone())
        }
        XRule::ImpRen => {
            let (
                Term::Capsule { x: y, .. },
                Term::Importer {
                    left: r,
                    a: b,
                    y: z,
                    right: s,
                    ..
                },
            ) = (p, q)
            else {
                return None;
            };
            Term::imp((**r).clone(), b.clone(), y.clone(), z.clone(), (**s).clone())
        }
        XRule::ExpImpIns => {
            let (
                Term::Exporter {
                    x: y, body: r, b, ..
                },
                Term::Importer {
                    left: s,
                    a: g,
                    y: z,
                    right: u,
                    ..
                },
            ) = (p, q)
            else {
                return None;
            };
            let (r, s, u) = ((**r).clone(), (**s).clone(), (**u).clone());
            match cfg.insert_assoc {
                InsertAssoc::Left => Term::cut(
                    Term::cut(s, g.clone(), y.clone(), r),
                    b.clone(),
                    z.clone(),
                    u,
                ),
                InsertAssoc::Right => Term::cut(
                    s,
                    g.clone(),
                    y.clone(),
                    Term::cut(r, b.clone(), z.clone(), u),
                ),
            }
        }
        XRule::ActL => Term::cut_l(p.clone(), a.clone(), x.clone(), q.clone()),
        XRule::ActR => Term::cut_r(p.clone(), a.clone(), x.clone(), q.clone()),
        XRule::DeactL | XRule::DeactR => Term::cut(p.clone(), a.clone(), x.clone(), q.clone()),
        XRule::GcL => p.clone(),
        XRule::GcR => q.clone(),
        XRule::ExpPropL => {
            let Term::Exporter { x: y, body, b, a: g } = p else {
                return None;
            };
            Term::exp(y.clone(), cut_copy(Left, body, a, x, q), b.clone(), g.clone())
        }
        XRule::PropDuplDeactL => {
            let Term::Exporter { x: y, body, b, .. } = p else {
                return None;
            };
            let a0 = a.freshen();
            let inner = Term::exp(y.clone(), cut_copy(Left, body, a, x, q), b.clone(), a0.clone());
            let x0 = x.freshen();
            Term::cut(inner, a0, x0.clone(), q.freshen_binders().rename_free(x, &x0))
        }
        XRule::ImpPropL => {
            let Term::Importer {
                left: r,
                a: b,
                x: y,
                y: z,
                right: s,
            } = p
            else {
                return None;
            };
            Term::imp(
                cut_copy(Left, r, a, x, q),
                b.clone(),
                y.clone(),
                z.clone(),
                cut_copy(Left, s, a, x, q),
            )
        }
        XRule::CutPropL => {
            let Term::Cut {
                left: r,
                a: b,
                x: y,
                right: s,
                ..
            } = p
            else {
                return None;
            };
            Term::cut(
                cut_copy(Left, r, a, x, q),
                b.clone(),
                y.clone(),
                cut_copy(Left, s, a, x, q),
            )
        }
        XRule::CutcPropL => {
            let Term::Cut { left: r, a: b, .. } = p else {
                return None;
            };
            let x0 = x.freshen();
            Term::cut(
                cut_copy(Left, r, a, x, q),
                b.clone(),
                x0.clone(),
                q.freshen_binders().rename_free(x, &x0),
            )
        }
        XRule::ExpPropR => {
            let Term::Exporter { x: y, body, b, a: g } = q else {
                return None;
            };
            Term::exp(y.clone(), cut_copy(Right, p, a, x, body), b.clone(), g.clone())
        }
        XRule::PropDuplDeactR => {
            let Term::Importer {
                left: r,
                a: b,
                y: z,
                right: s,
                ..
            } = q
            else {
                return None;
            };
            let x0 = x.freshen();
            let imp = Term::imp(
                cut_copy(Right, p, a, x, r),
                b.clone(),
                x0.clone(),
                z.clone(),
                cut_copy(Right, p, a, x, s),
            );
            let a0 = a.freshen();
            Term::cut(p.freshen_binders().rename_free(a, &a0), a0, x0, imp)
        }
        XRule::ImpPropR => {
            let Term::Importer {
                left: r,
                a: b,
                x: w,
                y: z,
                right: s,
            } = q
            else {
                return None;
            };
            Term::imp(
                cut_copy(Right, p, a, x, r),
                b.clone(),
                w.clone(),
                z.clone(),
                cut_copy(Right, p, a, x, s),
            )
        }
        XRule::CutPropR => {
            let Term::Cut {
                left: r,
                a: b,
                x: y,
                right: s,
                ..
            } = q
            else {
                return None;
            };
            Term::cut(
                cut_copy(Right, p, a, x, r),
                b.clone(),
                y.clone(),
                cut_copy(Right, p, a, x, s),
            )
        }
        XRule::CutcPropR => {
            let Term::Cut { x: y, right: s, .. } = q else {
                return None;
            };
            let a0 = a.freshen();
            Term::cut(
                p.freshen_binders().rename_free(a, &a0),
                a0,
                y.clone(),
                cut_copy(Right, p, a, x, s),
            )
        }
    })
}

pub fn x_redexes(t: &Term, cfg: &XConfig) -> Vec<(Position, XRule)> {
    let mut out: Vec<(Position, XRule)> = t
        .subterms()
        .into_iter()
        .flat_map(|(pos, s)| {
            x_rules_at(s, cfg)
                .into_iter()
                .map(move |r| (pos.clone(), r))
        })
        .collect();
    sort_redexes(&mut out);
    out
}

pub fn x_step(t: &Term, pos: &Position, rule: XRule, cfg: &XConfig) -> Result<Term, StepError> {
    let sub = t.at(pos).ok_or_else(|| StepError::BadPosition(pos.clone()))?;
    let new = x_contract(sub, rule, cfg).ok_or_else(|| StepError::NotApplicable {
        rule: rule.tag().to_string(),
        position: pos.clone(),
    })?;
    Ok(t.replace_at(pos, new).expect("position resolved above"))
}

/// X as a rewrite system; graph keys are alpha-normal forms.
#[derive(Clone, Copy, Debug, Default)]
pub struct XSystem {
    pub cfg: XConfig,
}

impl RewriteSystem for XSystem {
    type Rule = XRule;

    fn redexes(&self, t: &Term) -> Vec<(Position, XRule)> {
        x_redexes(t, &self.cfg)
    }

    fn step(&self, t: &Term, pos: &Position, rule: XRule) -> Result<Term, StepError> {
        x_step(t, pos, rule, &self.cfg)
    }

    fn key(&self, t: &Term) -> Term {
        alpha_normalize(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::alpha_eq;
    use crate::parse::parse;
    use crate::rewrite::{explore_graph, normalize, LeftFirst, RightFirst};

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn fresh_introduction() {
        assert!(freshly_introduces(&p("cap(x,'a)"), &Name::inname("x")));
        let e = p("exp(x, imp(cap(x,'c),'c,y,z,cap(z,'a)), 'b, 'a)");
        assert!(!freshly_introduces(&e, &Name::outname("a")));
        let c = p("cut(cap(y,'a),'a,x,cap(x,'b))");
        assert!(!freshly_introduces(&c, &Name::outname("b")));
        assert!(!freshly_introduces(&c, &Name::inname("y")));
    }

    #[test]
    fn cap_ren_redex_and_step() {
        let t = p("cut(cap(y,'a),'a,x,cap(x,'b))");
        let cfg = XConfig::default();
        assert_eq!(x_redexes(&t, &cfg), vec![(Position::root(), XRule::CapRen)]);
        let u = x_step(&t, &Position::root(), XRule::CapRen, &cfg).unwrap();
        assert_eq!(u, p("cap(y,'b)"));
        assert!(x_redexes(&p("cap(y,'b)"), &cfg).is_empty());
    }

    #[test]
    fn lafont_pair_activates_both_ways() {
        // 'a and x do not occur: the X form of two weakenings
        let t = p("cut(cap(u,'c),'a,x,cap(v,'d))");
        let r = x_redexes(&t, &XConfig::default());
        assert_eq!(
            r,
            vec![(Position::root(), XRule::ActL), (Position::root(), XRule::ActR)]
        );
        let sys = XSystem::default();
        let l = normalize(&sys, &t, &mut LeftFirst, 100);
        let rr = normalize(&sys, &t, &mut RightFirst, 100);
        assert_eq!(l.outcome.term(), &p("cap(u,'c)"));
        assert_eq!(rr.outcome.term(), &p("cap(v,'d)"));
    }

    #[test]
    fn prop_dupl_deact_right() {
        let t = p("cutR(cap(w,'a),'a,x,imp(cap(x,'g),'g,x,z,cap(z,'b)))");
        let cfg = XConfig::default();
        assert_eq!(x_rules_at(&t, &cfg), vec![XRule::PropDuplDeactR]);
        let u = x_contract(&t, XRule::PropDuplDeactR, &cfg).unwrap();
        let want = p("cut(cap(w,'a0),'a0,x0,imp(cutR(cap(w,'a1),'a1,x1,cap(x1,'g)),'g,x0,z,cutR(cap(w,'a2),'a2,x2,cap(z,'b))))");
        assert!(alpha_eq(&u, &want), "{}", crate::print::print(&u));
    }

    #[test]
    fn garbage_collection() {
        let t = p("cutL(cap(y,'b),'a,x,cap(x,'c))");
        let cfg = XConfig::default();
        assert_eq!(x_rules_at(&t, &cfg), vec![XRule::GcL]);
        assert_eq!(x_contract(&t, XRule::GcL, &cfg).unwrap(), p("cap(y,'b)"));
    }

    #[test]
    fn independent_renamings() {
        // k independent cap-ren redexes take k steps
        for k in 1..6 {
            let mut s = "cap(z1,'e)".to_string();
            for i in 1..=k {
                s = format!(
                    "imp(cut(cap(y{i},'a{i}),'a{i},x{i},cap(x{i},'c{i})),'c{i},z{},z{i},{s})",
                    i + 1
                );
            }
            let run = normalize(&XSystem::default(), &p(&s), &mut LeftFirst, 100);
            assert!(run.outcome.is_normal());
            assert_eq!(run.steps(), k);
            assert!(run.trace.iter().all(|t| t.rule == "cap-ren"));
        }
    }

    #[test]
    fn insertion_associations() {
        let t = p("cut(exp(y,cap(y,'b),'b,'a),'a,x,imp(cap(u,'g),'g,x,z,cap(z,'c)))");
        let l = x_contract(&t, XRule::ExpImpIns, &XConfig::default()).unwrap();
        assert!(alpha_eq(&l, &p("cut(cut(cap(u,'g),'g,y,cap(y,'b)),'b,z,cap(z,'c))")));
        let cfg = XConfig {
            insert_assoc: InsertAssoc::Right,
            ..Default::default()
        };
        let r = x_contract(&t, XRule::ExpImpIns, &cfg).unwrap();
        assert!(alpha_eq(&r, &p("cut(cap(u,'g),'g,y,cut(cap(y,'b),'b,z,cap(z,'c)))")));
    }

    #[test]
    fn loop_needs_capsule_exception() {
        let t = p("cut(cut(cap(u,'a),'a,x,cap(x,'b)),'b,y,cap(y,'c))");
        let off = XSystem {
            cfg: XConfig {
                cutc: false,
                ..Default::default()
            },
        };
        let g = explore_graph(&off, &t, 1000, 100);
        assert!(!g.is_acyclic());
        let g = explore_graph(&XSystem::default(), &t, 1000, 100);
        assert!(g.is_acyclic());
        assert!(!g.is_truncated());
    }
}
