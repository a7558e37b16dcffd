//! Names: innames (plug "in", variable-like) and outnames (plug "out",
//! continuation-like).
//!
//! A name is a `(kind, base, uid)` triple. Names read from source text carry
//! uid 0, so the same identifier always denotes the same free name. Every
//! binder and every name created by a meta-operation gets a fresh uid from a
//! process-wide counter.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

/// First uid used for binder names produced by canonicalization. Fresh uids
/// never reach this range.
pub(crate) const CANONICAL_UID_BASE: u64 = 1 << 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NameKind {
    In,
    Out,
}

impl NameKind {
    pub fn describe(self) -> &'static str {
        match self {
            NameKind::In => "inname",
            NameKind::Out => "outname",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name {
    kind: NameKind,
    base: Arc<str>,
    uid: u64,
}

impl Name {
    /// The name written `base` in source text.
    pub fn source(kind: NameKind, base: &str) -> Name {
        Name {
            kind,
            base: Arc::from(base),
            uid: 0,
        }
    }

    pub fn inname(base: &str) -> Name {
        Name::source(NameKind::In, base)
    }

    pub fn outname(base: &str) -> Name {
        Name::source(NameKind::Out, base)
    }

    /// A name distinct from every name created so far.
    pub fn fresh(kind: NameKind, base: &str) -> Name {
        Name {
            kind,
            base: Arc::from(base),
            uid: NEXT_UID.fetch_add(1, Ordering::Relaxed),
        }
    }

    /// A fresh name of the same kind with the same base.
    pub fn freshen(&self) -> Name {
        Name {
            kind: self.kind,
            base: self.base.clone(),
            uid: NEXT_UID.fetch_add(1, Ordering::Relaxed),
        }
    }

    /// A fresh name whose base carries the index `i` (`a` becomes `a_1`).
    pub fn indexed(&self, i: usize) -> Name {
        Name::fresh(self.kind, &format!("{}_{}", self.root(), i))
    }

    pub(crate) fn canonical(kind: NameKind, index: u64) -> Name {
        let base = match kind {
            NameKind::In => "x",
            NameKind::Out => "a",
        };
        Name {
            kind,
            base: Arc::from(base),
            uid: CANONICAL_UID_BASE + index,
        }
    }

    pub fn kind(&self) -> NameKind {
        self.kind
    }

    pub fn is_in(&self) -> bool {
        self.kind == NameKind::In
    }

    pub fn is_out(&self) -> bool {
        self.kind == NameKind::Out
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn uid(&self) -> u64 {
        self.uid
    }

    /// The base with any `_<digits>` index suffixes stripped.
    pub fn root(&self) -> &str {
        let mut s: &str = &self.base;
        while let Some(pos) = s.rfind('_') {
            let tail = &s[pos + 1..];
            if pos > 0 && !tail.is_empty() && tail.bytes().all(|b| b.is_ascii_digit()) {
                s = &s[..pos];
            } else {
                break;
            }
        }
        s
    }
}

/// Renders the base only; terms are printed through [`crate::print`], which
/// keeps distinct names distinct.
impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            NameKind::In => write!(f, "{}", self.base),
            NameKind::Out => write!(f, "'{}", self.base),
        }
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self, self.uid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_names_are_distinct() {
        let a = Name::fresh(NameKind::Out, "a");
        let b = Name::fresh(NameKind::Out, "a");
        assert_ne!(a, b);
        assert_eq!(a.base(), b.base());
    }

    #[test]
    fn kinds_never_compare_equal() {
        assert_ne!(Name::inname("a"), Name::outname("a"));
        assert!(Name::inname("z") < Name::outname("a"));
    }

    #[test]
    fn indexing_replaces_suffix() {
        let a = Name::outname("a");
        let a1 = a.indexed(1);
        assert_eq!(a1.base(), "a_1");
        assert_eq!(a1.indexed(2).base(), "a_2");
        assert_eq!(Name::inname("x_").root(), "x_");
    }
}
