//! *X reduction: activation, structural actions, deactivation, logical
//! actions and propagation, with simplification run before every step.

pub mod simplify;
pub mod subst;

use std::fmt;

use thiserror::Error;

use crate::canon::{canonicalize, lift, split_chain};
use crate::name::Name;
use crate::names::{check_linear, free_names, Diagnostic, NameSets};
use crate::principal::is_l_principal;
use crate::rewrite::{sort_redexes, RewriteSystem, RuleTag, Side, StepError};
use crate::term::{CutKind, Position, Term};
use crate::xcalc::InsertAssoc;

pub use simplify::{simp_redexes, simp_step, simplify, simplify_with, SimpRedex};
pub use subst::{dup_subst_left, dup_subst_right, SubstError};

/// The node an active cut propagates over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropKind {
    Exporter,
    Importer,
    Cut,
    /// The exception for a cut whose side facing the propagated cut is a
    /// capsule on both cut names.
    CutCapsule,
    EraserL,
    EraserR,
    DuplL,
    DuplR,
}

impl PropKind {
    pub const ALL: [PropKind; 8] = [
        PropKind::Exporter,
        PropKind::Importer,
        PropKind::Cut,
        PropKind::CutCapsule,
        PropKind::EraserL,
        PropKind::EraserR,
        PropKind::DuplL,
        PropKind::DuplR,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StarRule {
    ActL,
    ActR,
    RenL,
    RenR,
    EiInsert,
    ErasL,
    ErasR,
    DuplL,
    DuplR,
    DeactL,
    DeactR,
    PropL(PropKind),
    PropR(PropKind),
    SimpL,
    SimpR,
}

impl StarRule {
    pub fn all() -> Vec<StarRule> {
        use StarRule::*;
        let mut v = vec![
            ActL, ActR, RenL, RenR, EiInsert, ErasL, ErasR, DuplL, DuplR, DeactL, DeactR,
        ];
        v.extend(PropKind::ALL.map(PropL));
        v.extend(PropKind::ALL.map(PropR));
        v.extend([SimpL, SimpR]);
        v
    }

    pub fn from_tag(s: &str) -> Option<StarRule> {
        StarRule::all().into_iter().find(|r| r.tag() == s)
    }
}

impl RuleTag for StarRule {
    fn tag(self) -> &'static str {
        use PropKind as K;
        use StarRule::*;
        match self {
            ActL => "act-L",
            ActR => "act-R",
            RenL => "ren-L",
            RenR => "ren-R",
            EiInsert => "ei-insert",
            ErasL => "eras-L",
            ErasR => "eras-R",
            DuplL => "dupl-L",
            DuplR => "dupl-R",
            DeactL => "deact-L",
            DeactR => "deact-R",
            PropL(K::Exporter) => "exp-prop-L",
            PropL(K::Importer) => "imp-prop-L",
            PropL(K::Cut) => "cut-prop-L",
            PropL(K::CutCapsule) => "cutc-prop-L",
            PropL(K::EraserL) => "eraL-prop-L",
            PropL(K::EraserR) => "eraR-prop-L",
            PropL(K::DuplL) => "dupL-prop-L",
            PropL(K::DuplR) => "dupR-prop-L",
            PropR(K::Exporter) => "exp-prop-R",
            PropR(K::Importer) => "imp-prop-R",
            PropR(K::Cut) => "cut-prop-R",
            PropR(K::CutCapsule) => "cutc-prop-R",
            PropR(K::EraserL) => "eraL-prop-R",
            PropR(K::EraserR) => "eraR-prop-R",
            PropR(K::DuplL) => "dupL-prop-R",
            PropR(K::DuplR) => "dupR-prop-R",
            SimpL => "simp-L",
            SimpR => "simp-R",
        }
    }

    fn side(self) -> Side {
        match self {
            StarRule::ActL => Side::Left,
            StarRule::ActR => Side::Right,
            _ => Side::Neutral,
        }
    }
}

impl fmt::Display for StarRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StarConfig {
    /// The capsule exception rules for cuts over a cut with a capsule.
    pub cutc: bool,
    pub insert_assoc: InsertAssoc,
}

impl Default for StarConfig {
    fn default() -> Self {
        StarConfig {
            cutc: true,
            insert_assoc: InsertAssoc::Left,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("term is not linear: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
pub struct NotLinear(pub Vec<Diagnostic>);

/// Wraps `body` in erasers for `names`; the first name ends up outermost.
pub fn erase(body: Term, names: &NameSets) -> Term {
    let names: Vec<&Name> = names.all().collect();
    names.into_iter().rev().fold(body, |acc, n| {
        if n.is_in() {
            Term::era_l(n.clone(), acc)
        } else {
            Term::era_r(acc, n.clone())
        }
    })
}


/// Whether the top chain of `t` holds a node whose source is `n`, and if so
/// whether it is an eraser.
fn chain_source(t: &Term, n: &Name) -> Option<bool> {
    let (ops, _) = split_chain(t);
    ops.iter().find(|op| op.source() == n).map(|op| op.is_eraser())
}

/// Rules applicable at the root of `t`, in rule order.
pub fn star_rules_at(t: &Term, cfg: &StarConfig) -> Vec<StarRule> {
    let mut out = Vec::new();
    if let Some(e) = simplify::simp_at(t) {
        out.push(if e.is_in() {
            StarRule::SimpL
        } else {
            StarRule::SimpR
        });
    }
    let Term::Cut {
        kind,
        left: p,
        a,
        x,
        right: q,
    } = t
    else {
        return out;
    };
    match kind {
        CutKind::Inactive => {
            let (lp, lq) = (is_l_principal(p, a), is_l_principal(q, x));
            if lp && lq {
                match (&**p, &**q) {
                    (Term::Capsule { .. }, _) => out.push(StarRule::RenL),
                    (_, Term::Capsule { .. }) => {}
                    _ => out.push(StarRule::EiInsert),
                }
                if matches!(&**q, Term::Capsule { .. }) {
                    out.push(StarRule::RenR);
                }
            }
            if !lp {
                out.push(StarRule::ActL);
            }
            if !lq {
                out.push(StarRule::ActR);
            }
        }
        CutKind::Left => out.extend(left_rule(p, a, cfg)),
        CutKind::Right => out.extend(right_rule(x, q, cfg)),
    }
    out
}

fn left_rule(p: &Term, a: &Name, cfg: &StarConfig) -> Option<StarRule> {
    if is_l_principal(p, a) {
        return Some(StarRule::DeactL);
    }
    if let Some(eraser) = chain_source(p, a) {
        return Some(if eraser {
            StarRule::ErasL
        } else {
            StarRule::DuplL
        });
    }
    let kind = match p {
        Term::Exporter { .. } => PropKind::Exporter,
        Term::Importer { .. } => PropKind::Importer,
        Term::Cut {
            kind: CutKind::Inactive,
            right,
            x: y,
            ..
        } => {
            let capsule = matches!(&**right, Term::Capsule { x, a: c } if x == y && c == a);
            if cfg.cutc && capsule {
                PropKind::CutCapsule
            } else {
                PropKind::Cut
            }
        }
        Term::EraserL { .. } => PropKind::EraserL,
        Term::EraserR { .. } => PropKind::EraserR,
        Term::DuplL { .. } => PropKind::DuplL,
        Term::DuplR { .. } => PropKind::DuplR,
        _ => return None,
    };
    Some(StarRule::PropL(kind))
}

fn right_rule(x: &Name, q: &Term, cfg: &StarConfig) -> Option<StarRule> {
    if is_l_principal(q, x) {
        return Some(StarRule::DeactR);
    }
    if let Some(eraser) = chain_source(q, x) {
        return Some(if eraser {
            StarRule::ErasR
        } else {
            StarRule::DuplR
        });
    }
    let kind = match q {
        Term::Exporter { .. } => PropKind::Exporter,
        Term::Importer { .. } => PropKind::Importer,
        Term::Cut {
            kind: CutKind::Inactive,
            left,
            a: b,
            ..
        } => {
            let capsule = matches!(&**left, Term::Capsule { x: w, a: c } if w == x && c == b);
            if cfg.cutc && capsule {
                PropKind::CutCapsule
            } else {
                PropKind::Cut
            }
        }
        Term::EraserL { .. } => PropKind::EraserL,
        Term::EraserR { .. } => PropKind::EraserR,
        Term::DuplL { .. } => PropKind::DuplL,
        Term::DuplR { .. } => PropKind::DuplR,
        _ => return None,
    };
    Some(StarRule::PropR(kind))
}

/// Replaces the one child of a one-hole node, or the child containing `n`
/// of a two-hole node, by `f` applied to it.
fn push_into(node: &Term, n: &Name, f: impl FnOnce(&Term) -> Term) -> Term {
    let mut out = node.clone();
    let i = node
        .children()
        .iter()
        .position(|c| free_names(c).contains(n))
        .expect("name occurs in a child");
    let target = node.children()[i];
    let new = f(target);
    out = out
        .replace_at(&Position::root().child(i), new)
        .expect("child exists");
    out
}

/// Contracts the redex at the root of `t`.
pub fn star_contract(t: &Term, rule: StarRule, cfg: &StarConfig) -> Option<Term> {
    if !star_rules_at(t, cfg).contains(&rule) {
        return None;
    }
    match rule {
        StarRule::SimpL | StarRule::SimpR => {
            let e = simplify::simp_at(t)?;
            return simplify::simp_contract(t, &e);
        }
        _ => {}
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
    Some(match rule {
        StarRule::ActL => Term::cut_l(p.clone(), a.clone(), x.clone(), q.clone()),
        StarRule::ActR => Term::cut_r(p.clone(), a.clone(), x.clone(), q.clone()),
        StarRule::DeactL | StarRule::DeactR => {
            Term::cut(p.clone(), a.clone(), x.clone(), q.clone())
        }
        StarRule::RenL => {
            let Term::Capsule { x: y, .. } = p else {
                return None;
            };
            q.rename_free(x, y)
        }
        StarRule::RenR => {
            let Term::Capsule { a: b, .. } = q else {
                return None;
            };
            p.rename_free(a, b)
        }
        StarRule::EiInsert => {
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
        StarRule::ErasL => {
            let Term::EraserR { body, .. } = lift(p, a)? else {
                return None;
            };
            let mut names = free_names(q);
            names.remove(x);
            erase(*body, &names)
        }
        StarRule::ErasR => {
            let Term::EraserL { body, .. } = lift(q, x)? else {
                return None;
            };
            let mut names = free_names(p);
            names.remove(a);
            erase(*body, &names)
        }
        StarRule::DuplL => {
            let Term::DuplR { body, a1, a2, .. } = lift(p, a)? else {
                return None;
            };
            dup_subst_left(&body, &a1, &a2, x, q).ok()?
        }
        StarRule::DuplR => {
            let Term::DuplL { body, x1, x2, .. } = lift(q, x)? else {
                return None;
            };
            dup_subst_right(p, a, &x1, &x2, &body).ok()?
        }
        StarRule::PropL(PropKind::CutCapsule) => {
            let Term::Cut { left: r, a: b, .. } = p else {
                return None;
            };
            Term::cut((**r).clone(), b.clone(), x.clone(), q.clone())
        }
        StarRule::PropR(PropKind::CutCapsule) => {
            let Term::Cut { x: y, right: r, .. } = q else {
                return None;
            };
            Term::cut(p.clone(), a.clone(), y.clone(), (**r).clone())
        }
        StarRule::PropL(_) => push_into(p, a, |r| {
            Term::cut_l(r.clone(), a.clone(), x.clone(), q.clone())
        }),
        StarRule::PropR(_) => push_into(q, x, |r| {
            Term::cut_r(p.clone(), a.clone(), x.clone(), r.clone())
        }),
        StarRule::SimpL | StarRule::SimpR => unreachable!("handled above"),
    })
}

/// Every rule instance in `t`, without checking linearity.
pub(crate) fn redexes_unchecked(t: &Term, cfg: &StarConfig) -> Vec<(Position, StarRule)> {
    let mut out: Vec<(Position, StarRule)> = t
        .subterms()
        .into_iter()
        .flat_map(|(pos, s)| {
            star_rules_at(s, cfg)
                .into_iter()
                .map(move |r| (pos.clone(), r))
        })
        .collect();
    sort_redexes(&mut out);
    out
}

pub fn star_redexes(t: &Term, cfg: &StarConfig) -> Result<Vec<(Position, StarRule)>, NotLinear> {
    check_linear(t).map_err(NotLinear)?;
    Ok(redexes_unchecked(t, cfg))
}

pub fn star_step(
    t: &Term,
    pos: &Position,
    rule: StarRule,
    cfg: &StarConfig,
) -> Result<Term, StepError> {
    let sub = t.at(pos).ok_or_else(|| StepError::BadPosition(pos.clone()))?;
    let new = star_contract(sub, rule, cfg).ok_or_else(|| StepError::NotApplicable {
        rule: rule.tag().to_string(),
        position: pos.clone(),
    })?;
    Ok(t.replace_at(pos, new).expect("position resolved above"))
}

/// *X as a rewrite system: simplification runs before every step and graph
/// keys are canonical forms.
#[derive(Clone, Copy, Debug, Default)]
pub struct StarSystem {
    pub cfg: StarConfig,
}

impl RewriteSystem for StarSystem {
    type Rule = StarRule;

    fn redexes(&self, t: &Term) -> Vec<(Position, StarRule)> {
        redexes_unchecked(t, &self.cfg)
    }

    fn step(&self, t: &Term, pos: &Position, rule: StarRule) -> Result<Term, StepError> {
        star_step(t, pos, rule, &self.cfg)
    }

    fn prepare(&self, t: &Term) -> Term {
        simplify(t)
    }

    fn key(&self, t: &Term) -> Term {
        canonicalize(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::{alpha_eq, congruent};
    use crate::parse::parse;
    use crate::rewrite::{explore_graph, normalize, LeftFirst, RightFirst};

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    fn tags(t: &Term) -> Vec<&'static str> {
        star_redexes(t, &StarConfig::default())
            .unwrap()
            .into_iter()
            .map(|(_, r)| r.tag())
            .collect()
    }

    #[test]
    fn tags_round_trip() {
        for r in StarRule::all() {
            assert_eq!(StarRule::from_tag(r.tag()), Some(r));
        }
        assert_eq!(StarRule::all().len(), 29);
    }

    #[test]
    fn capsule_cut_renames_both_ways() {
        let t = p("cut(cap(y,'a),'a,x,cap(x,'b))");
        assert_eq!(tags(&t), ["ren-L", "ren-R"]);
        let cfg = StarConfig::default();
        for r in [StarRule::RenL, StarRule::RenR] {
            let s = star_step(&t, &Position::root(), r, &cfg).unwrap();
            assert_eq!(s, p("cap(y,'b)"));
        }
    }

    #[test]
    fn lafont_both_activations() {
        let t = p("cut(eraR(cap(u,'c),'a),'a,x,eraL(x,cap(v,'d)))");
        assert_eq!(tags(&t), ["act-L", "act-R"]);
        let sys = StarSystem::default();
        let l = normalize(&sys, &t, &mut LeftFirst, 100);
        let r = normalize(&sys, &t, &mut RightFirst, 100);
        assert!(l.outcome.is_normal() && r.outcome.is_normal());
        assert!(congruent(l.outcome.term(), &p("eraL(v,eraR(cap(u,'c),'d))")));
        assert!(congruent(r.outcome.term(), &p("eraL(u,eraR(cap(v,'d),'c))")));
        assert_eq!(free_names(l.outcome.term()), free_names(&t));
    }

    #[test]
    fn erasure_contractum() {
        let t = p("cutL(eraR(cap(u,'c),'a),'a,x,imp(cap(w,'b),'b,x,z,cap(z,'d)))");
        let s = star_step(&t, &Position::root(), StarRule::ErasL, &StarConfig::default()).unwrap();
        assert!(congruent(&s, &p("eraL(w,eraR(cap(u,'c),'d))")));
    }

    #[test]
    fn erasure_lifts_from_chain() {
        let t = p("cutL(eraL(w,eraR(cap(u,'c),'a)),'a,x,cap(x,'d))");
        assert_eq!(tags(&t), ["eras-L"]);
        let s = star_step(&t, &Position::root(), StarRule::ErasL, &StarConfig::default()).unwrap();
        assert!(congruent(&s, &p("eraL(w,eraR(cap(u,'c),'d))")));
    }

    #[test]
    fn deactivation_blocks_activation_loop() {
        let t = p("cut(cap(y,'a),'a,x,exp(v,imp(cap(v,'e),'e,x,z,cap(z,'b)),'b,'c))");
        // x is not L-principal for the exporter, 'a is for the capsule
        assert_eq!(tags(&t), ["act-R"]);
        let u = star_step(&t, &Position::root(), StarRule::ActR, &StarConfig::default()).unwrap();
        assert_eq!(tags(&u), ["exp-prop-R"]);
    }

    #[test]
    fn capsule_exception() {
        let t = p("cutL(cut(cap(u,'a),'a,x,cap(x,'b)),'b,y,cap(y,'c))");
        assert_eq!(tags(&t), ["cutc-prop-L", "ren-L", "ren-R"]);
        let s = star_step(
            &t,
            &Position::root(),
            StarRule::PropL(PropKind::CutCapsule),
            &StarConfig::default(),
        )
        .unwrap();
        assert!(alpha_eq(&s, &p("cut(cap(u,'a),'a,y,cap(y,'c))")));
    }

    #[test]
    fn loop_without_capsule_exception() {
        let t = p("cut(cut(cap(u,'a),'a,x,cap(x,'b)),'b,y,cap(y,'c))");
        let off = StarSystem {
            cfg: StarConfig {
                cutc: false,
                ..StarConfig::default()
            },
        };
        let g = explore_graph(&off, &t, 1000, 100);
        assert_eq!(g.shortest_cycle().map(|c| c.len()), Some(6));
        let g = explore_graph(&StarSystem::default(), &t, 1000, 100);
        assert!(g.is_acyclic() && !g.is_truncated());
    }

    #[test]
    fn duplication_over_exporter() {
        let t = p(
            "cutL(dupR(exp(y,imp(eraR(cap(w,'h),'a1),'h,y,z,eraR(cap(z,'a2),'g)),'g,'b),\
             'a1,'a2,'a),'a,x,cap(x,'d))",
        );
        let cfg = StarConfig::default();
        assert_eq!(tags(&t), ["dupl-L"]);
        let s = star_step(&t, &Position::root(), StarRule::DuplL, &cfg).unwrap();
        assert_eq!(free_names(&s), free_names(&t));
        assert!(check_linear(&s).is_ok());
    }

    #[test]
    fn nonlinear_input_rejected() {
        let t = p("imp(cap(x,'a),'a,y,z,cap(x,'b))");
        assert!(star_redexes(&t, &StarConfig::default()).is_err());
    }
}
