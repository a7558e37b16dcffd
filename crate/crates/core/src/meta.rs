//! Renaming and indexing of free names.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::name::Name;
use crate::names::{free_names, NameSets};
use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetaError {
    #[error("{0} is not free in the term")]
    NotFree(Name),
    #[error("{0} is not fresh for the term")]
    NotFresh(Name),
    #[error("cannot rename {old} to {new}: kinds differ")]
    KindMismatch { old: Name, new: Name },
}

fn all_names(t: &Term, out: &mut std::collections::BTreeSet<Name>) {
    out.extend(t.own_names().into_iter().cloned());
    out.extend(t.binders().into_iter().cloned());
    for c in t.children() {
        all_names(c, out);
    }
}

/// `t` with the free name `old` replaced by `new`.
pub fn rename(t: &Term, new: &Name, old: &Name) -> Result<Term, MetaError> {
    if new.kind() != old.kind() {
        return Err(MetaError::KindMismatch {
            old: old.clone(),
            new: new.clone(),
        });
    }
    if !free_names(t).contains(old) {
        return Err(MetaError::NotFree(old.clone()));
    }
    let mut used = Default::default();
    all_names(t, &mut used);
    if new != old && used.contains(new) {
        return Err(MetaError::NotFresh(new.clone()));
    }
    Ok(t.rename_free(old, new))
}

/// Replaces each name in `names` by a fresh name indexed with `i`, and
/// freshens every binder so the result shares no bound name with `t`.
pub fn index(
    t: &Term,
    names: &NameSets,
    i: usize,
) -> Result<(Term, BTreeMap<Name, Name>), MetaError> {
    let free = free_names(t);
    if let Some(n) = names.all().find(|n| !free.contains(n)) {
        return Err(MetaError::NotFree(n.clone()));
    }
    let mut out = t.freshen_binders();
    let mut map = BTreeMap::new();
    for n in names.all() {
        let m = n.indexed(i);
        out.rename_free_in_place(n, &m);
        map.insert(n.clone(), m);
    }
    Ok((out, map))
}

/// `index(t, N(t), i)`.
pub fn index_all(t: &Term, i: usize) -> (Term, BTreeMap<Name, Name>) {
    index(t, &free_names(t), i).expect("free names are free")
}
