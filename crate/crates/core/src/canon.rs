//! Canonical representatives of congruence classes.
//!
//! The congruence lets structural nodes (erasers and duplicators) move past
//! each other as long as no binder is crossed, swap the two binders of a
//! duplicator, and reassociate nested duplicators of the same source. We
//! additionally let an eraser move past an independent duplicator.
//!
//! A maximal run of structural nodes (a *chain*) is therefore determined by
//! its contraction trees (a free source name fanning out into leaves, some
//! of which are erased) plus the erasers of free names. The canonical chain
//! emits the trees sorted by source, each as a left-nested run of
//! duplicators whose leaves are ordered by where they occur in the body,
//! followed by all erasers. Binders are then numbered in preorder.

use std::collections::{HashMap, HashSet};

use crate::name::{Name, NameKind};
use crate::term::Term;

/// A structural node without its body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Op {
    EraL(Name),
    EraR(Name),
    DupL(Name, Name, Name),
    DupR(Name, Name, Name),
}

impl Op {
    pub(crate) fn source(&self) -> &Name {
        match self {
            Op::EraL(n) | Op::EraR(n) | Op::DupL(_, _, n) | Op::DupR(_, _, n) => n,
        }
    }

    pub(crate) fn binders(&self) -> Option<(&Name, &Name)> {
        match self {
            Op::DupL(a, b, _) | Op::DupR(a, b, _) => Some((a, b)),
            _ => None,
        }
    }

    pub(crate) fn is_eraser(&self) -> bool {
        matches!(self, Op::EraL(_) | Op::EraR(_))
    }

    pub(crate) fn wrap(&self, body: Term) -> Term {
        match self.clone() {
            Op::EraL(x) => Term::era_l(x, body),
            Op::EraR(a) => Term::era_r(body, a),
            Op::DupL(x1, x2, x) => Term::dup_l(body, x1, x2, x),
            Op::DupR(a1, a2, a) => Term::dup_r(body, a1, a2, a),
        }
    }

    fn dup(kind: NameKind, b1: Name, b2: Name, src: Name) -> Op {
        match kind {
            NameKind::In => Op::DupL(b1, b2, src),
            NameKind::Out => Op::DupR(b1, b2, src),
        }
    }

    fn eraser(n: Name) -> Op {
        match n.kind() {
            NameKind::In => Op::EraL(n),
            NameKind::Out => Op::EraR(n),
        }
    }
}

/// Splits `t` into its top chain of structural nodes (outermost first) and
/// the body below it.
pub(crate) fn split_chain(t: &Term) -> (Vec<Op>, &Term) {
    let mut ops = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::EraserL { x, body } => {
                ops.push(Op::EraL(x.clone()));
                cur = body;
            }
            Term::EraserR { body, a } => {
                ops.push(Op::EraR(a.clone()));
                cur = body;
            }
            Term::DuplL { body, x1, x2, x } => {
                ops.push(Op::DupL(x1.clone(), x2.clone(), x.clone()));
                cur = body;
            }
            Term::DuplR { body, a1, a2, a } => {
                ops.push(Op::DupR(a1.clone(), a2.clone(), a.clone()));
                cur = body;
            }
            _ => return (ops, cur),
        }
    }
}

pub(crate) fn rebuild(ops: &[Op], body: Term) -> Term {
    ops.iter().rev().fold(body, |acc, op| op.wrap(acc))
}

/// Moves the structural node of the top chain whose principal name is the
/// free name `n` to the top. `None` when no such node exists.
pub(crate) fn lift(t: &Term, n: &Name) -> Option<Term> {
    let (mut ops, body) = split_chain(t);
    let bound: HashSet<&Name> = ops
        .iter()
        .filter_map(Op::binders)
        .flat_map(|(a, b)| [a, b])
        .collect();
    if bound.contains(n) {
        return None;
    }
    let i = ops.iter().position(|op| op.source() == n)?;
    let op = ops.remove(i);
    ops.insert(0, op);
    Some(rebuild(&ops, body.clone()))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Step {
    Child(usize),
    Own(usize),
    Chain,
    ChainRoot(Vec<LeafKey>),
    ChainEraser,
    Missing,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum LeafKey {
    Body(Vec<Step>),
    Erased,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Label {
    Bound(u64),
    Free(Name),
}

/// What a chain binder leads to.
enum Leaf<'a> {
    Dup(usize),
    Erased,
    Body(&'a Name),
}

struct ChainInfo<'a> {
    ops: &'a [Op],
    by_source: HashMap<&'a Name, usize>,
    bound: HashSet<&'a Name>,
}

impl<'a> ChainInfo<'a> {
    fn new(ops: &'a [Op]) -> ChainInfo<'a> {
        let bound = ops
            .iter()
            .filter_map(Op::binders)
            .flat_map(|(a, b)| [a, b])
            .collect();
        let by_source = ops.iter().enumerate().map(|(i, op)| (op.source(), i)).collect();
        ChainInfo {
            ops,
            by_source,
            bound,
        }
    }

    fn leaf(&self, b: &'a Name) -> Leaf<'a> {
        match self.by_source.get(b) {
            Some(&i) if self.ops[i].is_eraser() => Leaf::Erased,
            Some(&i) => Leaf::Dup(i),
            None => Leaf::Body(b),
        }
    }

    /// Leaves of the contraction tree rooted at duplicator `i`.
    fn leaves(&self, i: usize, out: &mut Vec<Leaf<'a>>) {
        let (b1, b2) = self.ops[i].binders().expect("duplicator");
        for b in [b1, b2] {
            match self.leaf(b) {
                Leaf::Dup(j) if j != i => self.leaves(j, out),
                l => out.push(l),
            }
        }
    }

    fn is_root(&self, i: usize) -> bool {
        !self.bound.contains(self.ops[i].source())
    }
}

fn path_to(t: &Term, n: &Name, path: &mut Vec<usize>) -> bool {
    if t.own_names().contains(&n) {
        return true;
    }
    for (i, c) in t.children().into_iter().enumerate() {
        if t.binders_of_child(i).contains(&n) {
            continue;
        }
        path.push(i);
        if path_to(c, n, path) {
            return true;
        }
        path.pop();
    }
    false
}

/// Where the free name `n` occurs in `t`, described so that congruent terms
/// give equal keys.
fn occ_key(t: &Term, n: &Name) -> Vec<Step> {
    let mut path = Vec::new();
    if !path_to(t, n, &mut path) {
        return vec![Step::Missing];
    }
    let mut steps = Vec::new();
    let mut cur = t;
    let mut k = 0;
    loop {
        if cur.is_structural() {
            let (ops, body) = split_chain(cur);
            if k + ops.len() > path.len() {
                let info = ChainInfo::new(&ops);
                let i = path.len() - k;
                if ops[i].is_eraser() {
                    steps.push(Step::ChainEraser);
                } else {
                    steps.push(Step::ChainRoot(tree_key(&info, i, body)));
                }
                return steps;
            }
            steps.push(Step::Chain);
            k += ops.len();
            cur = body;
            continue;
        }
        if k == path.len() {
            let idx = cur.own_names().iter().position(|m| *m == n).unwrap_or(0);
            steps.push(Step::Own(idx));
            return steps;
        }
        let i = path[k];
        steps.push(Step::Child(i));
        cur = cur.children()[i];
        k += 1;
    }
}

fn tree_key(info: &ChainInfo, root: usize, body: &Term) -> Vec<LeafKey> {
    let mut leaves = Vec::new();
    info.leaves(root, &mut leaves);
    let mut keys: Vec<LeafKey> = leaves
        .into_iter()
        .map(|l| match l {
            Leaf::Body(b) => LeafKey::Body(occ_key(body, b)),
            _ => LeafKey::Erased,
        })
        .collect();
    keys.sort();
    keys
}

struct Canon {
    next: u64,
}

impl Canon {
    fn fresh(&mut self, kind: NameKind) -> Name {
        let n = Name::canonical(kind, self.next);
        self.next += 1;
        n
    }

    fn bind(&mut self, b: &Name, env: &mut HashMap<Name, Name>) -> Name {
        let c = self.fresh(b.kind());
        env.insert(b.clone(), c.clone());
        c
    }

    fn go(&mut self, t: &Term, env: &HashMap<Name, Name>) -> Term {
        let look = |n: &Name| env.get(n).cloned().unwrap_or_else(|| n.clone());
        match t {
            Term::Capsule { x, a } => Term::cap(look(x), look(a)),
            Term::Exporter { x, body, b, a } => {
                let mut e = env.clone();
                let cx = self.bind(x, &mut e);
                let cb = self.bind(b, &mut e);
                Term::exp(cx, self.go(body, &e), cb, look(a))
            }
            Term::Importer {
                left,
                a,
                x,
                y,
                right,
            } => {
                let (mut el, mut er) = (env.clone(), env.clone());
                let ca = self.bind(a, &mut el);
                let cy = self.bind(y, &mut er);
                let l = self.go(left, &el);
                Term::imp(l, ca, look(x), cy, self.go(right, &er))
            }
            Term::Cut {
                kind,
                left,
                a,
                x,
                right,
            } => {
                let (mut el, mut er) = (env.clone(), env.clone());
                let ca = self.bind(a, &mut el);
                let cx = self.bind(x, &mut er);
                let l = self.go(left, &el);
                Term::cut_with(*kind, l, ca, cx, self.go(right, &er))
            }
            _ => self.chain(t, env),
        }
    }

    fn chain(&mut self, t: &Term, env: &HashMap<Name, Name>) -> Term {
        let (ops, body) = split_chain(t);
        let info = ChainInfo::new(&ops);
        let label = |n: &Name| match env.get(n) {
            Some(c) => Label::Bound(c.uid()),
            None => Label::Free(n.clone()),
        };
        let mut roots: Vec<usize> = (0..ops.len())
            .filter(|&i| !ops[i].is_eraser() && info.is_root(i))
            .collect();
        roots.sort_by_key(|&i| label(ops[i].source()));
        let mut env = env.clone();
        let look = |env: &HashMap<Name, Name>, n: &Name| env.get(n).cloned().unwrap_or_else(|| n.clone());
        let mut out_ops = Vec::new();
        let mut erasers: Vec<Name> = ops
            .iter()
            .enumerate()
            .filter(|(i, op)| op.is_eraser() && !info.bound.contains(ops[*i].source()))
            .map(|(_, op)| look(&env, op.source()))
            .collect();
        for r in roots {
            let mut leaves = Vec::new();
            info.leaves(r, &mut leaves);
            let mut keyed: Vec<(LeafKey, Option<&Name>)> = leaves
                .into_iter()
                .map(|l| match l {
                    Leaf::Body(b) => (LeafKey::Body(occ_key(body, b)), Some(b)),
                    _ => (LeafKey::Erased, None),
                })
                .collect();
            keyed.sort_by(|a, b| a.0.cmp(&b.0));
            let kind = ops[r].source().kind();
            let mut target = look(&env, ops[r].source());
            // outermost duplicator combines the last leaf
            for j in (1..keyed.len()).rev() {
                let inner = if j == 1 {
                    self.leaf_name(kind, keyed[0].1, &mut env, &mut erasers)
                } else {
                    self.fresh(kind)
                };
                let last = self.leaf_name(kind, keyed[j].1, &mut env, &mut erasers);
                out_ops.push(Op::dup(kind, inner.clone(), last, target));
                target = inner;
            }
        }
        erasers.sort_by_key(label_of);
        out_ops.extend(erasers.into_iter().map(Op::eraser));
        let body = self.go(body, &env);
        rebuild(&out_ops, body)
    }

    fn leaf_name(
        &mut self,
        kind: NameKind,
        leaf: Option<&Name>,
        env: &mut HashMap<Name, Name>,
        erasers: &mut Vec<Name>,
    ) -> Name {
        match leaf {
            Some(b) => self.bind(b, env),
            None => {
                let c = self.fresh(kind);
                erasers.push(c.clone());
                c
            }
        }
    }
}

fn label_of(n: &Name) -> Label {
    if n.uid() >= crate::name::CANONICAL_UID_BASE {
        Label::Bound(n.uid())
    } else {
        Label::Free(n.clone())
    }
}

/// The canonical representative of the congruence class of `t`. Two linear
/// terms are congruent (up to renaming of bound names) iff their canonical
/// forms are equal.
pub fn canonicalize(t: &Term) -> Term {
    Canon { next: 0 }.go(t, &HashMap::new())
}

pub fn congruent(a: &Term, b: &Term) -> bool {
    canonicalize(a) == canonicalize(b)
}

/// Preorder renumbering of binders only; equal iff alpha-equivalent.
pub fn alpha_normalize(t: &Term) -> Term {
    let mut k = 0;
    t.map_binders(&mut |b| {
        let n = Name::canonical(b.kind(), k);
        k += 1;
        n
    })
}

pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    alpha_normalize(a) == alpha_normalize(b)
}
