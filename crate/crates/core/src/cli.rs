//! The `starx` command line.

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::encode::{encode_to_star, encode_to_x};
use crate::names::check_linear;
use crate::parse::parse;
use crate::print::{print, print_infix, NameTable};
use crate::reduction::{simplify, StarConfig, StarSystem};
use crate::rewrite::{explore_graph, normalize, Outcome, RewriteSystem, RuleTag, Strategy, TraceStep};
use crate::term::Term;
use crate::typing::{infer_star, infer_x, parse_sequent, typecheck_star, typecheck_x, Derivation, TypeError};
use crate::xcalc::{InsertAssoc, XConfig, XSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Calculus {
    X,
    Star,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    Star,
    X,
}

#[derive(Parser, Debug)]
#[command(name = "starx", version, about = "Cut elimination in the X and *X calculi")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[arg(long, value_enum, default_value = "star", global = true)]
    calculus: Calculus,
    /// left-priority, right-priority, random:<seed>, interactive or exhaustive
    #[arg(long, default_value = "left-priority", value_parser = str::parse::<Strategy>, global = true)]
    strategy: Strategy,
    #[arg(long, default_value_t = 10_000, global = true)]
    fuel: usize,
    #[arg(long, default_value_t = 50_000, global = true)]
    max_nodes: usize,
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Replay REPL choices from a file, one per line
    #[arg(long, global = true)]
    choices: Option<PathBuf>,
    /// Turn off the capsule exception rules
    #[arg(long, global = true)]
    disable_cutc: bool,
    #[arg(long, default_value = "left", value_parser = str::parse::<InsertAssoc>, global = true)]
    insert_assoc: InsertAssoc,
    /// Print terms in infix notation
    #[arg(long = "paper-notation", global = true)]
    infix: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check that a term is well formed (linear, for *X)
    Check { input: Option<PathBuf> },
    /// Check a term against a sequent
    Type {
        input: Option<PathBuf>,
        #[arg(long)]
        sequent: String,
    },
    /// Infer the most general sequent of a term
    Infer { input: Option<PathBuf> },
    /// Reduce to normal form or until the fuel runs out
    Reduce { input: Option<PathBuf> },
    /// Step through a reduction, choosing redexes by hand
    Step {
        input: Option<PathBuf>,
        /// Write the choices made to a file
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Explore every reduction path and print the graph
    Graph {
        input: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Encode between the calculi
    Encode {
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        to: Target,
    },
    /// Apply the simplification rules of *X
    Simplify { input: Option<PathBuf> },
}

/// Exit status and message of a failed command.
struct Failure(i32, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(2, msg.into())
}

fn fail(msg: impl Into<String>) -> Failure {
    Failure(1, msg.into())
}

struct Io<'a> {
    stdin: &'a mut dyn BufRead,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn line(&mut self, s: impl AsRef<str>) -> Result<(), Failure> {
        writeln!(self.out, "{}", s.as_ref()).map_err(|e| fail(format!("write failed: {e}")))
    }
}

/// Runs the command line `args` (program name first); returns the exit code.
pub fn run<I, S>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let mut io = Io { stdin, out, err };
    match dispatch(&cli, &mut io) {
        Ok(()) => 0,
        Err(Failure(code, msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            code
        }
    }
}

impl Cli {
    fn star(&self) -> StarSystem {
        StarSystem {
            cfg: StarConfig {
                cutc: !self.disable_cutc,
                insert_assoc: self.insert_assoc,
            },
        }
    }

    fn x(&self) -> XSystem {
        XSystem {
            cfg: XConfig {
                cutc: !self.disable_cutc,
                insert_assoc: self.insert_assoc,
                ..XConfig::default()
            },
        }
    }

    fn show(&self, t: &Term) -> String {
        if self.infix {
            print_infix(t)
        } else {
            print(t)
        }
    }
}

fn read_source(input: Option<&Path>, io: &mut Io, first_line: bool) -> Result<String, Failure> {
    match input {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            let read = if first_line {
                io.stdin.read_line(&mut s)
            } else {
                io.stdin.read_to_string(&mut s)
            };
            read.map_err(|e| usage(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

/// Reads and parses the input; with `checked`, also requires a term of the
/// selected calculus (linear for *X).
fn load(cli: &Cli, input: Option<&Path>, io: &mut Io, first_line: bool, checked: bool) -> Result<Term, Failure> {
    let text = read_source(input, io, first_line)?;
    let t = parse(&text).map_err(|e| fail(format!("parse error at {e}")))?;
    if checked {
        check(cli, &t)?;
    }
    Ok(t)
}

fn check(cli: &Cli, t: &Term) -> Result<(), Failure> {
    match cli.calculus {
        Calculus::X if !t.is_x_term() => Err(fail("X terms have no erasers or duplicators")),
        Calculus::X => Ok(()),
        Calculus::Star => check_linear(t).map_err(|ds| {
            fail(
                ds.iter()
                    .map(|d| format!("not linear: {d}"))
                    .collect::<Vec<_>>()
                    .join("\n"),
            )
        }),
    }
}

fn dispatch(cli: &Cli, io: &mut Io) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Check { input } => {
            let t = load(cli, input.as_deref(), io, false, false)?;
            let verdict = check(cli, &t);
            if cli.format == Format::Json {
                let (ok, msg) = match &verdict {
                    Ok(()) => (true, String::new()),
                    Err(Failure(_, m)) => (false, m.clone()),
                };
                io.line(json!({"ok": ok, "term": print(&t), "diagnostics": msg.lines().collect::<Vec<_>>()}).to_string())?;
                return if ok { Ok(()) } else { Err(Failure(1, "check failed".into())) };
            }
            verdict?;
            io.line(format!("ok: {}", cli.show(&t)))
        }
        Cmd::Type { input, sequent } => {
            let s = parse_sequent(sequent).map_err(|e| usage(format!("bad sequent: {e}")))?;
            let t = load(cli, input.as_deref(), io, false, false)?;
            let d = match cli.calculus {
                Calculus::Star => typecheck_star(&t, &s),
                Calculus::X => typecheck_x(&t, &s),
            };
            report_derivation(cli, io, &t, d)
        }
        Cmd::Infer { input } => {
            let t = load(cli, input.as_deref(), io, false, false)?;
            let s = match cli.calculus {
                Calculus::Star => infer_star(&t),
                Calculus::X => infer_x(&t),
            }
            .map_err(|e| fail(e.to_string()))?;
            let names = NameTable::for_term(&t);
            let shown = s.display_with(|n| names.show(n));
            match cli.format {
                Format::Json => io.line(json!({"ok": true, "sequent": shown}).to_string()),
                _ => io.line(shown),
            }
        }
        Cmd::Reduce { input } => match cli.strategy {
            Strategy::Interactive => {
                let t = load(cli, input.as_deref(), io, true, true)?;
                match cli.calculus {
                    Calculus::Star => repl(cli, &cli.star(), &t, None, io),
                    Calculus::X => repl(cli, &cli.x(), &t, None, io),
                }
            }
            Strategy::Exhaustive => {
                let t = load(cli, input.as_deref(), io, false, true)?;
                match cli.calculus {
                    Calculus::Star => exhaustive(cli, &cli.star(), &t, io),
                    Calculus::X => exhaustive(cli, &cli.x(), &t, io),
                }
            }
            _ => {
                let t = load(cli, input.as_deref(), io, false, true)?;
                match cli.calculus {
                    Calculus::Star => reduce(cli, &cli.star(), &t, io),
                    Calculus::X => reduce(cli, &cli.x(), &t, io),
                }
            }
        },
        Cmd::Step { input, record } => {
            let t = load(cli, input.as_deref(), io, true, true)?;
            match cli.calculus {
                Calculus::Star => repl(cli, &cli.star(), &t, record.as_deref(), io),
                Calculus::X => repl(cli, &cli.x(), &t, record.as_deref(), io),
            }
        }
        Cmd::Graph { input, output } => {
            let t = load(cli, input.as_deref(), io, false, true)?;
            let text = match cli.calculus {
                Calculus::Star => graph(cli, &cli.star(), &t),
                Calculus::X => graph(cli, &cli.x(), &t),
            };
            match output {
                Some(p) => fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
                None => io.line(text.trim_end()),
            }
        }
        Cmd::Encode { input, to } => {
            let t = load(cli, input.as_deref(), io, false, false)?;
            let report = match to {
                Target::Star => {
                    if !t.is_x_term() {
                        return Err(fail("only X terms can be encoded into *X"));
                    }
                    encode_to_star(&t)
                }
                Target::X => {
                    check_linear(&t).map_err(|ds| fail(format!("not linear: {}", ds[0])))?;
                    encode_to_x(&t)
                }
            };
            io.line(serde_json::to_string(&report).expect("report serializes"))
        }
        Cmd::Simplify { input } => {
            if cli.calculus == Calculus::X {
                return Err(usage("simplify applies to *X terms"));
            }
            let t = load(cli, input.as_deref(), io, false, true)?;
            let s = simplify(&t);
            match cli.format {
                Format::Json => io.line(json!({"input": print(&t), "output": print(&s)}).to_string()),
                _ => io.line(cli.show(&s)),
            }
        }
    }
}

fn report_derivation(cli: &Cli, io: &mut Io, t: &Term, d: Result<Derivation, TypeError>) -> Result<(), Failure> {
    match (d, cli.format) {
        (Ok(d), Format::Json) => io.line(
            json!({
                "ok": true,
                "rules": d.rules_postorder(),
                "sequent": d.conclusion.to_string(),
            })
            .to_string(),
        ),
        (Ok(d), _) => io.line(d.render(&NameTable::for_term(t)).trim_end()),
        (Err(e), Format::Json) => {
            io.line(json!({"ok": false, "error": e.to_string()}).to_string())?;
            Err(fail("type check failed"))
        }
        (Err(e), _) => Err(fail(e.to_string())),
    }
}

fn emit_step(cli: &Cli, io: &mut Io, step: &TraceStep, t: &Term) -> Result<(), Failure> {
    match cli.format {
        Format::Json => io.line(serde_json::to_string(step).expect("step serializes")),
        _ => io.line(format!("{:>4}. {} @ {}: {}", step.step, step.rule, step.position, cli.show(t))),
    }
}

fn emit_end(cli: &Cli, io: &mut Io, outcome: &str, steps: usize, t: &Term) -> Result<(), Failure> {
    match cli.format {
        Format::Json => io.line(json!({"outcome": outcome, "steps": steps, "term": print(t)}).to_string()),
        _ => io.line(format!("{outcome} after {steps} steps: {}", cli.show(t))),
    }
}

fn reduce<S: RewriteSystem>(cli: &Cli, sys: &S, t: &Term, io: &mut Io) -> Result<(), Failure> {
    let mut chooser = cli.strategy.chooser().expect("single-path strategy");
    let run = normalize(sys, t, chooser.as_mut(), cli.fuel);
    for step in &run.trace {
        let term = parse(&step.term).expect("printed terms parse");
        emit_step(cli, io, step, &term)?;
    }
    let outcome = match run.outcome {
        Outcome::NormalForm(_) => "normal form",
        Outcome::FuelExhausted(_) => "fuel exhausted",
        Outcome::Stopped(_) => "stopped",
    };
    emit_end(cli, io, outcome, run.steps(), run.outcome.term())
}

fn exhaustive<S: RewriteSystem>(cli: &Cli, sys: &S, t: &Term, io: &mut Io) -> Result<(), Failure> {
    let g = explore_graph(sys, t, cli.max_nodes, cli.fuel);
    let nfs: Vec<String> = g.normal_forms().into_iter().map(|i| print(&g.nodes[i])).collect();
    match cli.format {
        Format::Json => io.line(
            json!({
                "nodes": g.nodes.len(),
                "truncated": g.is_truncated(),
                "normal_forms": nfs,
            })
            .to_string(),
        ),
        _ => {
            for nf in &nfs {
                io.line(nf)?;
            }
            io.line(format!(
                "{} normal forms, {} terms{}",
                nfs.len(),
                g.nodes.len(),
                if g.is_truncated() { ", truncated" } else { "" }
            ))
        }
    }
}

fn graph<S: RewriteSystem>(cli: &Cli, sys: &S, t: &Term) -> String {
    let g = explore_graph(sys, t, cli.max_nodes, cli.fuel);
    match cli.format {
        Format::Text => {
            let cycle = g
                .shortest_cycle()
                .map_or("none".to_string(), |c| c.len().to_string());
            format!(
                "terms: {}\nsteps: {}\nnormal forms: {}\nshortest cycle: {cycle}\ntruncated: {}\n",
                g.nodes.len(),
                g.edges.len(),
                g.normal_forms().len(),
                g.is_truncated()
            )
        }
        Format::Json => json!({
            "nodes": g.nodes.iter().map(print).collect::<Vec<_>>(),
            "edges": g.edges.iter().map(|e| json!({"from": e.from, "to": e.to, "rule": e.rule, "position": e.position.to_string()})).collect::<Vec<_>>(),
            "normal_forms": g.normal_forms(),
            "shortest_cycle": g.shortest_cycle(),
            "truncated": g.is_truncated(),
        })
        .to_string(),
        Format::Dot => g.to_dot(),
    }
}

/// Where REPL choices come from.
enum Choices {
    File(std::vec::IntoIter<String>),
    Stdin,
}

impl Choices {
    fn next(&mut self, io: &mut Io) -> Option<String> {
        match self {
            Choices::File(lines) => lines.next(),
            Choices::Stdin => {
                let mut s = String::new();
                match io.stdin.read_line(&mut s) {
                    Ok(0) | Err(_) => None,
                    Ok(_) => Some(s),
                }
            }
        }
    }
}

fn repl<S: RewriteSystem>(
    cli: &Cli,
    sys: &S,
    t: &Term,
    record: Option<&Path>,
    io: &mut Io,
) -> Result<(), Failure> {
    let mut choices = match &cli.choices {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
            Choices::File(
                text.lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(String::from)
                    .collect::<Vec<_>>()
                    .into_iter(),
            )
        }
        None => Choices::Stdin,
    };
    let mut made: Vec<usize> = Vec::new();
    let mut auto = false;
    let mut cur = sys.prepare(t);
    let mut steps = 0;
    let text = cli.format == Format::Text;
    let outcome = loop {
        let redexes = sys.redexes(&cur);
        if redexes.is_empty() {
            break "normal form";
        }
        if steps >= cli.fuel {
            break "fuel exhausted";
        }
        let pick = if auto {
            1
        } else {
            if text {
                io.line(format!("term: {}", cli.show(&cur)))?;
                for (i, (pos, rule)) in redexes.iter().enumerate() {
                    io.line(format!("  [{}] {} @ {}", i + 1, rule.tag(), pos))?;
                }
            }
            let Some(input) = choices.next(io) else {
                break "stopped";
            };
            match input.trim() {
                "q" => break "stopped",
                "a" => {
                    auto = !auto;
                    continue;
                }
                s => match s.parse::<usize>() {
                    Ok(k) if (1..=redexes.len()).contains(&k) => k,
                    _ => {
                        let _ = writeln!(io.err, "choose 1-{}, a or q", redexes.len());
                        continue;
                    }
                },
            }
        };
        let (pos, rule) = &redexes[pick - 1];
        let next = sys.step(&cur, pos, *rule).map_err(|e| fail(e.to_string()))?;
        cur = sys.prepare(&next);
        steps += 1;
        made.push(pick);
        let step = TraceStep {
            step: steps,
            rule: rule.tag().to_string(),
            position: pos.to_string(),
            term: print(&cur),
        };
        emit_step(cli, io, &step, &cur)?;
    };
    if let Some(p) = record {
        let lines: String = made.iter().map(|k| format!("{k}\n")).collect();
        fs::write(p, lines).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))?;
    }
    emit_end(cli, io, outcome, steps, &cur)
}
