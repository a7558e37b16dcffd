//! Principal names.
//!
//! | constructor | L-principal | S-principal |
//! |-------------|-------------|-------------|
//! | `cap(x,'a)` | `x`, `'a`   |             |
//! | `exp(..,'a)`| `'a`        |             |
//! | `imp(..,x,..)` | `x`      |             |
//! | cuts        | none        |             |
//! | `eraL(x,..)`, `eraR(..,'a)` | | `x`, `'a` |
//! | `dupL(..,x)`, `dupR(..,'a)` | | `x`, `'a` |

use thiserror::Error;

use crate::name::Name;
use crate::names::free_names;
use crate::term::{Position, Term};

pub fn l_principal(t: &Term) -> Vec<&Name> {
    match t {
        Term::Capsule { x, a } => vec![x, a],
        Term::Exporter { a, .. } => vec![a],
        Term::Importer { x, .. } => vec![x],
        _ => vec![],
    }
}

pub fn s_principal(t: &Term) -> Option<&Name> {
    match t {
        Term::EraserL { x, .. } | Term::DuplL { x, .. } => Some(x),
        Term::EraserR { a, .. } | Term::DuplR { a, .. } => Some(a),
        _ => None,
    }
}

pub fn is_l_principal(t: &Term, n: &Name) -> bool {
    l_principal(t).contains(&n)
}

pub fn is_principal(t: &Term, n: &Name) -> bool {
    is_l_principal(t, n) || s_principal(t) == Some(n)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0} is not free in the term")]
pub struct NotFree(pub Name);

/// The subterm of `t` for which the free name `n` is principal.
///
/// In a linear term the free occurrence of `n` is unique and every
/// occurrence of a name sits at a node where that name is principal.
pub fn subterm_with_principal<'a>(
    t: &'a Term,
    n: &Name,
) -> Result<(Position, &'a Term), NotFree> {
    if !free_names(t).contains(n) {
        return Err(NotFree(n.clone()));
    }
    find(t, n, Position::root()).ok_or_else(|| NotFree(n.clone()))
}

fn find<'a>(t: &'a Term, n: &Name, pos: Position) -> Option<(Position, &'a Term)> {
    if t.own_names().contains(&n) {
        return Some((pos, t));
    }
    for (i, c) in t.children().into_iter().enumerate() {
        if t.binders_of_child(i).contains(&n) {
            continue;
        }
        if let Some(r) = find(c, n, pos.child(i)) {
            return Some(r);
        }
    }
    None
}
