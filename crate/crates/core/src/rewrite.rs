//! Machinery shared by both calculi: the rewrite-system interface,
//! strategies, the normalization driver, traces and reduction graphs.

use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::print::print;
use crate::term::{Position, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("no subterm at position {0}")]
    BadPosition(Position),
    #[error("rule {rule} does not apply at {position}")]
    NotApplicable { rule: String, position: Position },
}

/// Which side a rule favours, used by the priority strategies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Neutral,
}

pub trait RuleTag: Copy + Eq + Debug {
    fn tag(self) -> &'static str;
    fn side(self) -> Side;
}

pub trait RewriteSystem {
    type Rule: RuleTag;

    /// Every applicable rule instance, outermost positions first.
    fn redexes(&self, t: &Term) -> Vec<(Position, Self::Rule)>;

    fn step(&self, t: &Term, pos: &Position, rule: Self::Rule) -> Result<Term, StepError>;

    /// Normalizes a term before redexes are looked for (simplification in
    /// *X, identity in X).
    fn prepare(&self, t: &Term) -> Term {
        t.clone()
    }

    /// The key under which reduction graphs store a prepared term.
    fn key(&self, t: &Term) -> Term;
}

/// Orders redexes outermost first, then left to right, then by rule order.
pub(crate) fn sort_redexes<R: Ord>(v: &mut [(Position, R)]) {
    v.sort_by(|(p, r), (q, s)| p.outermost_cmp(q).then_with(|| r.cmp(s)));
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    LeftPriority,
    RightPriority,
    Random(u64),
    Interactive,
    Exhaustive,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left-priority" => Ok(Strategy::LeftPriority),
            "right-priority" => Ok(Strategy::RightPriority),
            "interactive" => Ok(Strategy::Interactive),
            "exhaustive" => Ok(Strategy::Exhaustive),
            _ => match s.strip_prefix("random:") {
                Some(seed) => seed
                    .parse()
                    .map(Strategy::Random)
                    .map_err(|e| format!("bad seed {seed:?}: {e}")),
                None => Err(format!(
                    "unknown strategy {s:?} (left-priority, right-priority, random:<seed>, interactive, exhaustive)"
                )),
            },
        }
    }
}

/// Picks the next redex, or stops the run with `None`.
pub trait Chooser {
    fn choose(&mut self, t: &Term, redexes: &[(Position, &'static str, Side)]) -> Option<usize>;
}

pub struct LeftFirst;

impl Chooser for LeftFirst {
    fn choose(&mut self, _: &Term, r: &[(Position, &'static str, Side)]) -> Option<usize> {
        (!r.is_empty()).then_some(0)
    }
}

/// Outermost redex; at that position a right-sided rule wins over a
/// left-sided one.
pub struct RightFirst;

impl Chooser for RightFirst {
    fn choose(&mut self, _: &Term, r: &[(Position, &'static str, Side)]) -> Option<usize> {
        let first = r.first()?;
        let at_first = r.iter().enumerate().take_while(|(_, x)| x.0 == first.0);
        let mut pick = 0;
        for (i, x) in at_first {
            if x.2 == Side::Right {
                return Some(i);
            }
            if x.2 == Side::Neutral && r[pick].2 == Side::Left {
                pick = i;
            }
        }
        Some(pick)
    }
}

pub struct Seeded(ChaCha8Rng);

impl Seeded {
    pub fn new(seed: u64) -> Seeded {
        Seeded(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl Chooser for Seeded {
    fn choose(&mut self, _: &Term, r: &[(Position, &'static str, Side)]) -> Option<usize> {
        (!r.is_empty()).then(|| self.0.gen_range(0..r.len()))
    }
}

impl<F> Chooser for F
where
    F: FnMut(&Term, &[(Position, &'static str, Side)]) -> Option<usize>,
{
    fn choose(&mut self, t: &Term, r: &[(Position, &'static str, Side)]) -> Option<usize> {
        self(t, r)
    }
}

impl Strategy {
    /// The chooser for the non-interactive, single-path strategies.
    pub fn chooser(&self) -> Option<Box<dyn Chooser>> {
        match self {
            Strategy::LeftPriority => Some(Box::new(LeftFirst)),
            Strategy::RightPriority => Some(Box::new(RightFirst)),
            Strategy::Random(seed) => Some(Box::new(Seeded::new(*seed))),
            Strategy::Interactive | Strategy::Exhaustive => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub rule: String,
    pub position: String,
    pub term: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    NormalForm(Term),
    FuelExhausted(Term),
    /// The chooser declined to continue.
    Stopped(Term),
}

impl Outcome {
    pub fn term(&self) -> &Term {
        match self {
            Outcome::NormalForm(t) | Outcome::FuelExhausted(t) | Outcome::Stopped(t) => t,
        }
    }

    pub fn is_normal(&self) -> bool {
        matches!(self, Outcome::NormalForm(_))
    }
}

#[derive(Clone, Debug)]
pub struct Run {
    pub outcome: Outcome,
    pub trace: Vec<TraceStep>,
}

impl Run {
    pub fn steps(&self) -> usize {
        self.trace.len()
    }
}

/// Reduces `t` until no redex is left, the chooser stops, or `fuel` steps
/// have been taken.
pub fn normalize<S: RewriteSystem>(
    sys: &S,
    t: &Term,
    chooser: &mut dyn Chooser,
    fuel: usize,
) -> Run {
    let mut cur = sys.prepare(t);
    let mut trace = Vec::new();
    loop {
        let redexes = sys.redexes(&cur);
        if redexes.is_empty() {
            return Run {
                outcome: Outcome::NormalForm(cur),
                trace,
            };
        }
        if trace.len() >= fuel {
            return Run {
                outcome: Outcome::FuelExhausted(cur),
                trace,
            };
        }
        let listed: Vec<(Position, &'static str, Side)> = redexes
            .iter()
            .map(|(p, r)| (p.clone(), r.tag(), r.side()))
            .collect();
        let Some(i) = chooser.choose(&cur, &listed).filter(|&i| i < redexes.len()) else {
            return Run {
                outcome: Outcome::Stopped(cur),
                trace,
            };
        };
        let (pos, rule) = &redexes[i];
        let next = sys
            .step(&cur, pos, *rule)
            .expect("listed redexes apply");
        cur = sys.prepare(&next);
        trace.push(TraceStep {
            step: trace.len() + 1,
            rule: rule.tag().to_string(),
            position: pos.to_string(),
            term: print(&cur),
        });
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub rule: &'static str,
    pub position: Position,
    pub to: usize,
}

#[derive(Clone, Debug)]
pub struct ReductionGraph {
    /// Node keys; node 0 is the start term.
    pub nodes: Vec<Term>,
    pub edges: Vec<Edge>,
    /// Depth (BFS distance from the start) of each node.
    pub depth: Vec<usize>,
    /// Some node could not be expanded because of the node cap.
    pub hit_node_cap: bool,
    /// Some node was not expanded because it lies at depth `fuel`.
    pub hit_fuel: bool,
    /// Whether every successor of the node is recorded.
    pub expanded: Vec<bool>,
}

impl ReductionGraph {
    pub fn is_truncated(&self) -> bool {
        self.hit_node_cap || self.hit_fuel
    }

    fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            succ[e.from].push(e.to);
        }
        succ
    }

    /// Nodes with no outgoing edge that were fully expanded.
    pub fn normal_forms(&self) -> Vec<usize> {
        let succ = self.successors();
        (0..self.nodes.len())
            .filter(|&i| succ[i].is_empty() && !self.unexpanded(i))
            .collect()
    }

    fn unexpanded(&self, i: usize) -> bool {
        !self.expanded[i]
    }

    pub fn is_acyclic(&self) -> bool {
        let succ = self.successors();
        // iterative three-colour DFS
        let mut colour = vec![0u8; self.nodes.len()];
        for start in 0..self.nodes.len() {
            if colour[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            colour[start] = 1;
            while let Some((v, i)) = stack.pop() {
                if i < succ[v].len() {
                    stack.push((v, i + 1));
                    let w = succ[v][i];
                    match colour[w] {
                        0 => {
                            colour[w] = 1;
                            stack.push((w, 0));
                        }
                        1 => return false,
                        _ => {}
                    }
                } else {
                    colour[v] = 2;
                }
            }
        }
        true
    }

    /// A shortest cycle as a list of nodes, first node repeated implicitly.
    pub fn shortest_cycle(&self) -> Option<Vec<usize>> {
        let succ = self.successors();
        let mut best: Option<Vec<usize>> = None;
        for s in 0..self.nodes.len() {
            // BFS from s back to s
            let mut prev: HashMap<usize, usize> = HashMap::new();
            let mut q = VecDeque::from([s]);
            let mut found = None;
            'bfs: while let Some(v) = q.pop_front() {
                for &w in &succ[v] {
                    if w == s {
                        found = Some(v);
                        break 'bfs;
                    }
                    if w != s && !prev.contains_key(&w) {
                        prev.insert(w, v);
                        q.push_back(w);
                    }
                }
            }
            if let Some(mut v) = found {
                let mut cyc = vec![v];
                while v != s {
                    v = prev[&v];
                    cyc.push(v);
                }
                cyc.reverse();
                if best.as_ref().map_or(true, |b| cyc.len() < b.len()) {
                    best = Some(cyc);
                }
            }
        }
        best
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph reductions {\n  node [shape=box, fontname=\"monospace\"];\n");
        let nf = self.normal_forms();
        for (i, t) in self.nodes.iter().enumerate() {
            let mut label = print(t);
            if label.chars().count() > 120 {
                label = label.chars().take(117).collect::<String>() + "...";
            }
            let style = if nf.contains(&i) { ", peripheries=2" } else { "" };
            s.push_str(&format!(
                "  n{i} [label=\"{}\"{style}];\n",
                label.replace('\\', "\\\\").replace('"', "\\\"")
            ));
        }
        for e in &self.edges {
            s.push_str(&format!("  n{} -> n{} [label=\"{}\"];\n", e.from, e.to, e.rule));
        }
        s.push_str("}\n");
        s
    }
}

/// Breadth-first exploration of every reduction path from `t`, with nodes
/// identified by [`RewriteSystem::key`]. At most `max_nodes` nodes are
/// created and nodes at depth `fuel` are not expanded.
pub fn explore_graph<S: RewriteSystem>(
    sys: &S,
    t: &Term,
    max_nodes: usize,
    fuel: usize,
) -> ReductionGraph {
    let start = sys.key(&sys.prepare(t));
    let mut index: HashMap<Term, usize> = HashMap::from([(start.clone(), 0)]);
    let mut g = ReductionGraph {
        nodes: vec![start],
        edges: Vec::new(),
        depth: vec![0],
        hit_node_cap: false,
        hit_fuel: false,
        expanded: vec![false],
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let term = g.nodes[v].clone();
        let redexes = sys.redexes(&term);
        if redexes.is_empty() {
            g.expanded[v] = true;
            continue;
        }
        if g.depth[v] >= fuel {
            g.hit_fuel = true;
            continue;
        }
        let mut complete = true;
        for (pos, rule) in redexes {
            let next = sys.step(&term, &pos, rule).expect("listed redexes apply");
            let key = sys.key(&sys.prepare(&next));
            let w = match index.get(&key) {
                Some(&w) => w,
                None => {
                    if g.nodes.len() >= max_nodes {
                        g.hit_node_cap = true;
                        complete = false;
                        continue;
                    }
                    let w = g.nodes.len();
                    index.insert(key.clone(), w);
                    g.nodes.push(key);
                    g.depth.push(g.depth[v] + 1);
                    g.expanded.push(false);
                    queue.push_back(w);
                    w
                }
            };
            g.edges.push(Edge {
                from: v,
                rule: rule.tag(),
                position: pos,
                to: w,
            });
        }
        g.expanded[v] = complete;
    }
    g
}
