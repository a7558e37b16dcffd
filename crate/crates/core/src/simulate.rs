//! Simulation of one calculus in the other, checked by search.
//!
//! A single step `p → p'` is simulated when a bounded breadth-first search
//! from the encoding of `p` reaches a term whose graph key equals the key of
//! the expected target.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::encode::{star_to_x, x_to_star};
use crate::names::{free_names, NameSets};
use crate::print::print;
use crate::reduction::{erase, StarConfig, StarSystem};
use crate::rewrite::{RewriteSystem, RuleTag, TraceStep};
use crate::term::Term;
use crate::xcalc::{XConfig, XSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimConfig {
    /// Longest trace searched for.
    pub max_steps: usize,
    /// Most distinct terms visited.
    pub max_nodes: usize,
    /// Accept a zero-step trace when the start already matches.
    pub allow_empty: bool,
    pub star: StarConfig,
    pub x: XConfig,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            max_steps: 200,
            max_nodes: 5000,
            allow_empty: false,
            star: StarConfig::default(),
            x: XConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Simulation {
    pub start: String,
    pub target: String,
    pub trace: Vec<TraceStep>,
}

#[derive(Clone, Debug, Error)]
pub enum SimFailure {
    #[error("no trace to {target} within {depth} steps ({visited} terms visited)")]
    Exhausted {
        start: String,
        target: String,
        visited: usize,
        depth: usize,
    },
}

fn search<S: RewriteSystem>(
    sys: &S,
    start: &Term,
    target: &Term,
    cfg: &SimConfig,
) -> Result<Simulation, SimFailure> {
    let goal = sys.key(&sys.prepare(target));
    let first = sys.prepare(start);
    let done = |trace| Simulation {
        start: print(start),
        target: print(target),
        trace,
    };
    if cfg.allow_empty && sys.key(&first) == goal {
        return Ok(done(Vec::new()));
    }
    // node -> (parent, rule, position, term)
    let mut nodes: Vec<(Option<usize>, &'static str, String, Term)> = vec![(None, "", String::new(), first.clone())];
    let mut seen: HashMap<Term, usize> = HashMap::from([(sys.key(&first), 0)]);
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    let mut depth = 0;
    while let Some((i, d)) = queue.pop_front() {
        depth = depth.max(d);
        if d >= cfg.max_steps {
            continue;
        }
        let cur = nodes[i].3.clone();
        for (pos, rule) in sys.redexes(&cur) {
            let Ok(next) = sys.step(&cur, &pos, rule) else {
                continue;
            };
            let next = sys.prepare(&next);
            let key = sys.key(&next);
            let hit = key == goal;
            if !hit && seen.contains_key(&key) {
                continue;
            }
            nodes.push((Some(i), rule.tag(), pos.to_string(), next));
            let j = nodes.len() - 1;
            if hit {
                let mut path = Vec::new();
                let mut k = j;
                while let (Some(parent), rule, pos, t) = &nodes[k] {
                    path.push((rule.to_string(), pos.clone(), print(t)));
                    k = *parent;
                }
                path.reverse();
                let trace = path
                    .into_iter()
                    .enumerate()
                    .map(|(n, (rule, position, term))| TraceStep {
                        step: n + 1,
                        rule,
                        position,
                        term,
                    })
                    .collect();
                return Ok(done(trace));
            }
            seen.insert(key, j);
            if seen.len() >= cfg.max_nodes {
                queue.clear();
                break;
            }
            queue.push_back((j, d + 1));
        }
    }
    Err(SimFailure::Exhausted {
        start: print(start),
        target: print(target),
        visited: seen.len(),
        depth,
    })
}

/// `⌈p'⌉` wrapped in erasers for the names `p` loses in the step.
pub fn x_step_target(p: &Term, p_next: &Term) -> Term {
    let lost: NameSets = free_names(p).difference(&free_names(p_next));
    erase(x_to_star(p_next), &lost)
}

/// Simulates the X step `p → p_next` by *X steps from `⌈p⌉`.
pub fn simulate_x_in_star(p: &Term, p_next: &Term, cfg: &SimConfig) -> Result<Simulation, SimFailure> {
    let sys = StarSystem { cfg: cfg.star };
    search(&sys, &x_to_star(p), &x_step_target(p, p_next), cfg)
}

/// Simulates the *X step `q → q_next` by X steps from `⌊q⌋`.
pub fn simulate_star_in_x(q: &Term, q_next: &Term, cfg: &SimConfig) -> Result<Simulation, SimFailure> {
    let sys = XSystem { cfg: cfg.x };
    search(&sys, &star_to_x(q), &star_to_x(q_next), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;
    use crate::reduction::star_redexes;
    use crate::xcalc::{x_redexes, XRule};

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn capsule_renaming_in_one_step() {
        let t = p("cut(cap(y,'a),'a,x,exp(z,cap(z,'b),'b,'c))");
        let cfg = SimConfig::default();
        let xs = XSystem::default();
        let (pos, rule) = x_redexes(&t, &xs.cfg)[0].clone();
        let next = xs.step(&t, &pos, rule).unwrap();
        let sim = simulate_x_in_star(&t, &next, &cfg).unwrap();
        assert!(!sim.trace.is_empty());
    }

    #[test]
    fn erasure_then_simplification() {
        // the cut's left side is erased on the right: the whole left side goes
        let t = p("cut(cap(y,'a),'a,x,exp(z,cap(z,'b),'b,'c))");
        let xs = XSystem::default();
        for (pos, rule) in x_redexes(&t, &xs.cfg) {
            let next = xs.step(&t, &pos, rule).unwrap();
            assert!(simulate_x_in_star(&t, &next, &SimConfig::default()).is_ok(), "{rule:?}");
        }
    }

    #[test]
    fn garbage_with_disjoint_names() {
        let t = p("cutR(cap(u,'a),'a,z,cap(y,'c))");
        let xs = XSystem::default();
        let (pos, rule) = x_redexes(&t, &xs.cfg)[0].clone();
        assert_eq!(rule, XRule::GcR);
        let next = xs.step(&t, &pos, rule).unwrap();
        assert_eq!(next, p("cap(y,'c)"));
        let sim = simulate_x_in_star(&t, &next, &SimConfig::default()).unwrap();
        assert_eq!(sim.trace.len(), 1);
    }

    #[test]
    fn garbage_sharing_a_name_with_its_context() {
        // u is shared with the importer, so the duplicator sits above it and
        // the eraser left by the erasure step stays below it
        let t = p("imp(cutR(cap(u,'a),'a,z,cap(y,'c)),'c,u,w,cap(w,'d))");
        let xs = XSystem::default();
        let (pos, rule) = x_redexes(&t, &xs.cfg)[0].clone();
        assert_eq!(rule, XRule::GcR);
        let next = xs.step(&t, &pos, rule).unwrap();
        assert!(simulate_x_in_star(&t, &next, &SimConfig::default()).is_err());
    }

    #[test]
    fn renaming_in_x() {
        let q = p("cut(cap(y,'a),'a,x,imp(cap(w,'d),'d,x,z,cap(z,'c)))");
        let cfg = SimConfig::default();
        for (pos, rule) in star_redexes(&q, &cfg.star).unwrap() {
            let sys = StarSystem { cfg: cfg.star };
            let next = sys.step(&q, &pos, rule).unwrap();
            let sim = simulate_star_in_x(&q, &next, &cfg).unwrap();
            assert!(!sim.trace.is_empty(), "{rule}");
        }
    }

    #[test]
    fn activation_beside_an_eraser() {
        // v is not L-principal under the eraser, but is freshly introduced
        // once the eraser is forgotten, so X cannot activate
        let q = p("cut(cap(z,'d),'d,v,eraR(cap(v,'g),'h))");
        let next = p("cutR(cap(z,'d),'d,v,eraR(cap(v,'g),'h))");
        let cfg = SimConfig {
            allow_empty: true,
            ..SimConfig::default()
        };
        assert!(simulate_star_in_x(&q, &next, &cfg).is_err());
    }

    #[test]
    fn empty_trace_needs_permission() {
        // propagation over an eraser leaves the X image unchanged
        let q = p("cutL(eraR(cap(y,'a),'b),'a,x,cap(x,'c))");
        let next = p("eraR(cutL(cap(y,'a),'a,x,cap(x,'c)),'b)");
        let strict = SimConfig {
            max_steps: 0,
            ..SimConfig::default()
        };
        assert!(simulate_star_in_x(&q, &next, &strict).is_err());
        let relaxed = SimConfig {
            allow_empty: true,
            ..strict
        };
        assert!(simulate_star_in_x(&q, &next, &relaxed).unwrap().trace.is_empty());
    }
}
