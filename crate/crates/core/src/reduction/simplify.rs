//! Simplification: a duplicator one of whose copies is immediately erased
//! is dropped together with the eraser.
//!
//! Up to the congruence, an eraser anywhere in the same run of structural
//! nodes below the duplicator counts as immediately erased.

use crate::canon::{rebuild, split_chain, Op};
use crate::name::Name;
use crate::term::{Position, Term};

/// A simplification redex: the duplicator at `position` and the binder of it
/// that is erased.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpRedex {
    pub position: Position,
    pub erased: Name,
}

impl SimpRedex {
    /// `true` for a duplicator of innames.
    pub fn is_left(&self) -> bool {
        self.erased.is_in()
    }
}

/// Erased binder of the duplicator at the root of `t`, if any.
pub(crate) fn simp_at(t: &Term) -> Option<Name> {
    let (ops, _) = split_chain(t);
    let (b1, b2) = ops.first()?.binders()?;
    let erased = |b: &Name| ops[1..].iter().any(|op| op.is_eraser() && op.source() == b);
    let found = [b1, b2].into_iter().find(|b| erased(b)).cloned();
    found
}

pub fn simp_redexes(t: &Term) -> Vec<SimpRedex> {
    t.subterms()
        .into_iter()
        .filter_map(|(position, s)| simp_at(s).map(|erased| SimpRedex { position, erased }))
        .collect()
}

/// Contracts the duplicator at the root of `t` against the eraser of `erased`.
pub(crate) fn simp_contract(t: &Term, erased: &Name) -> Option<Term> {
    let (ops, body) = split_chain(t);
    let (first, rest) = ops.split_first()?;
    let (b1, b2) = first.binders()?;
    let other = if b1 == erased {
        b2
    } else if b2 == erased {
        b1
    } else {
        return None;
    };
    let i = rest
        .iter()
        .position(|op| op.is_eraser() && op.source() == erased)?;
    let kept: Vec<Op> = rest
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, op)| op.clone())
        .collect();
    Some(rebuild(&kept, body.clone()).rename_free(other, first.source()))
}

pub fn simp_step(t: &Term, r: &SimpRedex) -> Option<Term> {
    let new = simp_contract(t.at(&r.position)?, &r.erased)?;
    t.replace_at(&r.position, new)
}

/// Applies simplification until none is left, always picking the redex
/// chosen by `pick` among the current ones.
pub fn simplify_with(t: &Term, mut pick: impl FnMut(&[SimpRedex]) -> usize) -> Term {
    let mut cur = t.clone();
    loop {
        let rs = simp_redexes(&cur);
        if rs.is_empty() {
            return cur;
        }
        let i = pick(&rs).min(rs.len() - 1);
        cur = simp_step(&cur, &rs[i]).expect("listed redex applies");
    }
}

pub fn simplify(t: &Term) -> Term {
    simplify_with(t, |_| 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::congruent;
    use crate::names::{check_linear, free_names};
    use crate::parse::parse;

    #[test]
    fn left_rule() {
        let t = parse("dupL(eraL(z,cap(y,'a)),y,z,x)").unwrap();
        assert_eq!(simplify(&t), parse("cap(x,'a)").unwrap());
    }

    #[test]
    fn right_rule_with_swapped_binders() {
        let t = parse("dupR(eraR(cap(x,'b),'g),'g,'b,'a)").unwrap();
        assert_eq!(simplify(&t), parse("cap(x,'a)").unwrap());
    }

    #[test]
    fn eraser_deeper_in_chain() {
        let t = parse("dupL(eraR(eraL(z,cap(y,'a)),'c),y,z,x)").unwrap();
        let s = simplify(&t);
        assert!(congruent(&s, &parse("eraR(cap(x,'a),'c)").unwrap()));
        assert_eq!(free_names(&s), free_names(&t));
    }

    #[test]
    fn both_copies_erased() {
        let t = parse("dupL(eraL(y,eraL(z,cap(w,'a))),y,z,x)").unwrap();
        let s = simplify(&t);
        assert!(check_linear(&s).is_ok());
        assert!(congruent(&s, &parse("eraL(x,cap(w,'a))").unwrap()));
    }

    #[test]
    fn untouched_without_eraser() {
        let t = parse("dupL(imp(cap(y,'b),'b,w,v,cap(v,'a)),y,w,x)").unwrap();
        assert!(simp_redexes(&t).is_empty());
        assert_eq!(simplify(&t), t);
    }

    #[test]
    fn eraser_in_other_chain_is_not_a_redex() {
        let t = parse("dupL(imp(eraL(z,cap(y,'b)),'b,w,v,cap(v,'a)),y,z,x)").unwrap();
        assert!(check_linear(&t).is_ok());
        assert!(simp_redexes(&t).is_empty());
    }
}
