//! Seeded random terms.
//!
//! Linear terms are built the way proofs are: bottom up, each constructor
//! picking the names it binds among the free names of its subterms, and
//! falling back to an eraser when none fits. In typed mode every choice
//! respects the formulas, so the result comes with its sequent.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::name::{Name, NameKind};
use crate::term::{CutKind, Term};
use crate::typing::{Formula, Sequent};

const INS: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
const OUTS: [&str; 6] = ["a", "b", "c", "d", "e", "g"];
const ATOMS: [&str; 3] = ["A", "B", "C"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    pub max_size: usize,
    /// Respect formulas so that the term has a known sequent.
    pub typed: bool,
    /// Allow erasers and duplicators.
    pub structural: bool,
    /// Probability of making a generated cut active.
    pub active: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_size: 14,
            typed: true,
            structural: true,
            active: 0.1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Sample {
    pub term: Term,
    /// The sequent the term was built for; `None` for untyped samples.
    pub sequent: Option<Sequent>,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

struct Part {
    t: Term,
    ctx: Vec<(Name, Formula)>,
}

struct Builder<'r> {
    rng: &'r mut ChaCha8Rng,
    cfg: GenConfig,
}

fn fresh(kind: NameKind, rng: &mut ChaCha8Rng) -> Name {
    let base = match kind {
        NameKind::In => INS.choose(rng),
        NameKind::Out => OUTS.choose(rng),
    };
    Name::fresh(kind, base.expect("nonempty"))
}

impl Builder<'_> {
    fn formula(&mut self, depth: usize) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.6) {
            Formula::atom(ATOMS.choose(self.rng).expect("nonempty"))
        } else {
            Formula::arrow(self.formula(depth - 1), self.formula(depth - 1))
        }
    }

    /// Takes a free name of `kind` out of `p`, preferring type `want`; may
    /// weaken instead. `None` when nothing fits and weakening is off.
    fn take(&mut self, p: &mut Part, kind: NameKind, want: Option<&Formula>) -> Option<(Name, Formula)> {
        let fits: Vec<usize> = p
            .ctx
            .iter()
            .enumerate()
            .filter(|(_, (n, f))| {
                n.kind() == kind && (!self.cfg.typed || want.map_or(true, |w| w == f))
            })
            .map(|(i, _)| i)
            .collect();
        let weaken = self.cfg.structural && (fits.is_empty() || self.rng.gen_bool(0.1));
        if weaken {
            let n = fresh(kind, self.rng);
            let f = match want {
                Some(w) => w.clone(),
                None => self.formula(1),
            };
            p.t = match kind {
                NameKind::In => Term::era_l(n.clone(), p.t.clone()),
                NameKind::Out => Term::era_r(p.t.clone(), n.clone()),
            };
            return Some((n, f));
        }
        let i = *fits.choose(self.rng)?;
        Some(p.ctx.remove(i))
    }

    fn capsule(&mut self) -> Part {
        let (x, a) = (fresh(NameKind::In, self.rng), fresh(NameKind::Out, self.rng));
        let f = self.formula(1);
        Part {
            t: Term::cap(x.clone(), a.clone()),
            ctx: vec![(x, f.clone()), (a, f)],
        }
    }

    fn split(&mut self, budget: usize) -> (usize, usize) {
        let l = self.rng.gen_range(1..budget - 1);
        (l, budget - 1 - l)
    }

    fn exporter(&mut self, budget: usize) -> Option<Part> {
        let mut r = self.build(budget - 1);
        let (y, fy) = self.take(&mut r, NameKind::In, None)?;
        let (b, fb) = self.take(&mut r, NameKind::Out, None)?;
        let a = fresh(NameKind::Out, self.rng);
        r.ctx.push((a.clone(), Formula::arrow(fy, fb)));
        Some(Part {
            t: Term::exp(y, r.t, b, a),
            ctx: r.ctx,
        })
    }

    fn importer(&mut self, budget: usize) -> Option<Part> {
        let (l, rb) = self.split(budget);
        let mut p = self.build(l);
        let mut q = self.build(rb);
        let (g, fg) = self.take(&mut p, NameKind::Out, None)?;
        let (z, fz) = self.take(&mut q, NameKind::In, None)?;
        let x = fresh(NameKind::In, self.rng);
        let mut ctx = p.ctx;
        ctx.extend(q.ctx);
        ctx.push((x.clone(), Formula::arrow(fg, fz)));
        Some(Part {
            t: Term::imp(p.t, g, x, z, q.t),
            ctx,
        })
    }

    fn cut(&mut self, budget: usize) -> Option<Part> {
        let (l, rb) = self.split(budget);
        let mut p = self.build(l);
        let mut q = self.build(rb);
        let (a, fa) = self.take(&mut p, NameKind::Out, None)?;
        let (x, _) = self.take(&mut q, NameKind::In, Some(&fa))?;
        let kind = if self.rng.gen_bool(self.cfg.active) {
            *[CutKind::Left, CutKind::Right].choose(self.rng).expect("nonempty")
        } else {
            CutKind::Inactive
        };
        let mut ctx = p.ctx;
        ctx.extend(q.ctx);
        Some(Part {
            t: Term::cut_with(kind, p.t, a, x, q.t),
            ctx,
        })
    }

    fn eraser(&mut self, budget: usize) -> Part {
        let mut r = self.build(budget - 1);
        let kind = if self.rng.gen_bool(0.5) {
            NameKind::In
        } else {
            NameKind::Out
        };
        let n = fresh(kind, self.rng);
        r.t = match kind {
            NameKind::In => Term::era_l(n.clone(), r.t),
            NameKind::Out => Term::era_r(r.t, n.clone()),
        };
        let f = self.formula(1);
        r.ctx.push((n, f));
        r
    }

    fn duplicator(&mut self, budget: usize) -> Option<Part> {
        let mut r = self.build(budget - 1);
        let mut pairs = Vec::new();
        for i in 0..r.ctx.len() {
            for j in i + 1..r.ctx.len() {
                let ((n1, f1), (n2, f2)) = (&r.ctx[i], &r.ctx[j]);
                if n1.kind() == n2.kind() && (!self.cfg.typed || f1 == f2) {
                    pairs.push((i, j));
                }
            }
        }
        let &(i, j) = pairs.choose(self.rng)?;
        let (n2, _) = r.ctx.remove(j);
        let (n1, f) = r.ctx.remove(i);
        let n = fresh(n1.kind(), self.rng);
        r.t = match n.kind() {
            NameKind::In => Term::dup_l(r.t, n1, n2, n.clone()),
            NameKind::Out => Term::dup_r(r.t, n1, n2, n.clone()),
        };
        r.ctx.push((n, f));
        Some(r)
    }

    fn build(&mut self, budget: usize) -> Part {
        if budget <= 1 {
            return self.capsule();
        }
        for _ in 0..4 {
            let roll = self.rng.gen_range(0..10);
            let part = match roll {
                0..=2 if budget >= 3 => self.cut(budget),
                3..=4 => self.exporter(budget),
                5..=6 if budget >= 3 => self.importer(budget),
                7 if self.cfg.structural => Some(self.eraser(budget)),
                8..=9 if self.cfg.structural => self.duplicator(budget),
                _ => None,
            };
            if let Some(p) = part {
                return p;
            }
        }
        self.capsule()
    }
}

fn sequent(ctx: &[(Name, Formula)]) -> Sequent {
    let mut s = Sequent::default();
    for (n, f) in ctx {
        s.insert(n.clone(), f.clone());
    }
    s
}

/// A linear term of size at most `cfg.max_size`; the sequent is `Some` in
/// typed mode.
pub fn linear_term(rng: &mut ChaCha8Rng, cfg: GenConfig) -> Sample {
    loop {
        let budget = rng.gen_range(1..=cfg.max_size);
        let part = Builder { rng, cfg }.build(budget);
        if part.t.size() <= cfg.max_size {
            return Sample {
                sequent: cfg.typed.then(|| sequent(&part.ctx)),
                term: part.t,
            };
        }
    }
}

/// `count` linear *X terms; every `typed_every`-th one is typed.
pub fn star_corpus(seed: u64, count: usize, max_size: usize, typed_every: usize) -> Vec<Sample> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let cfg = GenConfig {
                max_size,
                typed: i % typed_every == 0,
                ..GenConfig::default()
            };
            linear_term(&mut r, cfg)
        })
        .collect()
}

/// A linear X term (no erasers or duplicators).
pub fn linear_x_term(rng: &mut ChaCha8Rng, max_size: usize, typed: bool) -> Sample {
    linear_term(
        rng,
        GenConfig {
            max_size,
            typed,
            structural: false,
            active: 0.1,
        },
    )
}

/// An X term drawing names from a small pool, so that names repeat and
/// binders may bind nothing.
pub fn x_term(rng: &mut ChaCha8Rng, max_size: usize) -> Term {
    let ins: Vec<Name> = INS[..2].iter().map(|b| Name::fresh(NameKind::In, b)).collect();
    let outs: Vec<Name> = OUTS[..2].iter().map(|b| Name::fresh(NameKind::Out, b)).collect();
    let budget = rng.gen_range(1..=max_size);
    x_build(rng, budget, &ins, &outs)
}

fn x_build(rng: &mut ChaCha8Rng, budget: usize, ins: &[Name], outs: &[Name]) -> Term {
    let pick = |rng: &mut ChaCha8Rng, v: &[Name]| v.choose(rng).expect("nonempty").clone();
    let with = |v: &[Name], n: &Name| {
        let mut v = v.to_vec();
        v.push(n.clone());
        v
    };
    if budget <= 1 {
        return Term::cap(pick(rng, ins), pick(rng, outs));
    }
    let roll = if budget >= 3 { rng.gen_range(0..3) } else { 0 };
    match roll {
        0 => {
            let (y, b) = (fresh(NameKind::In, rng), fresh(NameKind::Out, rng));
            let body = x_build(rng, budget - 1, &with(ins, &y), &with(outs, &b));
            Term::exp(y, body, b, pick(rng, outs))
        }
        1 => {
            let l = rng.gen_range(1..budget - 1);
            let (a, y) = (fresh(NameKind::Out, rng), fresh(NameKind::In, rng));
            let p = x_build(rng, l, ins, &with(outs, &a));
            let q = x_build(rng, budget - 1 - l, &with(ins, &y), outs);
            Term::imp(p, a, pick(rng, ins), y, q)
        }
        _ => {
            let l = rng.gen_range(1..budget - 1);
            let (a, x) = (fresh(NameKind::Out, rng), fresh(NameKind::In, rng));
            let p = x_build(rng, l, ins, &with(outs, &a));
            let q = x_build(rng, budget - 1 - l, &with(ins, &x), outs);
            let kind = match rng.gen_range(0..10) {
                0 => CutKind::Left,
                1 => CutKind::Right,
                _ => CutKind::Inactive,
            };
            Term::cut_with(kind, p, a, x, q)
        }
    }
}
