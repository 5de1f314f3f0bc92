//! Thin command-line frontend over the famcheck library.
//!
//! Exit codes: 0 when the requested verdict holds (or the command just
//! succeeds), 1 when the verdict is false, 2 on usage, parse, or
//! validation errors.

use clap::{Parser, Subcommand, ValueEnum};
use famcheck::decide::{classify, Verdict};
use famcheck::grammar::Hrg;
use famcheck::io;
use famcheck::logic::{parse_formula, qpctl_to_ctlstar, Formula, StateFormula};
use famcheck::oracle::differential;
use famcheck::recolor::{recolor_ctlstar, RecoloredGrammar};
use famcheck::refine::refine;
use famcheck::Symbol;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "famcheck",
    about = "Model checking for grammar-defined families of transition systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Does every member satisfy the formula at its initial nodes?
    All,
    /// Does some member satisfy it?
    Some,
    /// Report the satisfying/falsifying counts only.
    Count,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DotKind {
    /// The grammar's rules as boxes.
    Grammar,
    /// Rule-body behaviours under the formula's automaton.
    Behaviours,
    /// The refined grammar in state/transition style.
    Refined,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether all/some members satisfy a formula.
    Check {
        grammar: PathBuf,
        #[arg(short, long)]
        formula: String,
        #[arg(short, long, value_enum, default_value = "all")]
        mode: Mode,
        /// Emit a JSON report instead of text.
        #[arg(long)]
        json: bool,
        /// Worker threads for parallel-safe stages.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Recolor the grammar for a formula and write it back out.
    Recolor {
        grammar: PathBuf,
        #[arg(short, long)]
        formula: String,
        /// Output path; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Compare the recolored grammar against explicit-state checking.
    Oracle {
        grammar: PathBuf,
        #[arg(short, long)]
        formula: String,
        #[arg(short, long, default_value = "5")]
        depth: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Render DOT views of a grammar.
    Dump {
        grammar: PathBuf,
        #[arg(long, value_enum)]
        dot: DotKind,
        /// Required for behaviour and refined views.
        #[arg(short, long)]
        formula: Option<String>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load_grammar(path: &PathBuf) -> Result<Hrg, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let g = if path.extension().is_some_and(|e| e == "json") {
        io::grammar_from_json(&text).map_err(|e| e.to_string())?
    } else {
        io::parse_grammar(&text).map_err(|e| e.to_string())?
    };
    let violations = g.validate();
    if !violations.is_empty() {
        let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(msgs.join("\n"));
    }
    Ok(g)
}

fn load_formula(text: &str, g: &Hrg) -> Result<StateFormula, String> {
    let mut universe = g.colors.clone();
    universe.insert(Symbol::new("init"));
    match parse_formula(text, Some(&universe)).map_err(|e| e.to_string())? {
        Formula::CtlStar(s) => Ok(s),
        Formula::Qpctl(q) => Ok(qpctl_to_ctlstar(&q)),
    }
}

fn recolor(g: &Hrg, phi: &StateFormula) -> Result<RecoloredGrammar, String> {
    recolor_ctlstar(g, phi).map_err(|e| e.to_string())
}

fn configure_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn write_out(out: Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(&path, content)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn verdict_json(formula: &str, mode: &str, verdict: &Verdict, holds: bool, g: &Hrg) -> String {
    let witness = |tree: &Option<famcheck::grammar::DerivationTree>| match tree {
        Some(t) => {
            let mut member = g.assemble(t);
            for colors in member.coloring.values_mut() {
                colors.retain(|c| !c.as_str().starts_with("@phi"));
            }
            io::lts_to_json(&member)
        }
        None => serde_json::Value::Null,
    };
    serde_json::json!({
        "formula": formula,
        "mode": mode,
        "sat": verdict.sat.to_string(),
        "fal": verdict.fal.to_string(),
        "verdict": holds,
        "witness_sat": witness(&verdict.witness_sat),
        "witness_fal": witness(&verdict.witness_fal),
    })
    .to_string()
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Check {
            grammar,
            formula,
            mode,
            json,
            jobs,
        } => {
            configure_jobs(jobs);
            let mut g = load_grammar(&grammar)?;
            g.colors.insert(Symbol::new("init"));
            let phi = load_formula(&formula, &g)?;
            let recolored = recolor(&g, &phi)?;
            let verdict = classify(&recolored.grammar, Symbol::new("init"), recolored.color)
                .map_err(|e| e.to_string())?;
            let (mode_name, holds) = match mode {
                Mode::All => ("all", verdict.holds_for_all()),
                Mode::Some => ("some", verdict.exists_member()),
                Mode::Count => ("count", true),
            };
            if json {
                println!("{}", verdict_json(&formula, mode_name, &verdict, holds, &recolored.grammar));
            } else {
                println!("{}", verdict.render());
                match mode {
                    Mode::All => println!(
                        "all members satisfy `{formula}`: {}",
                        if holds { "yes" } else { "no" }
                    ),
                    Mode::Some => println!(
                        "some member satisfies `{formula}`: {}",
                        if holds { "yes" } else { "no" }
                    ),
                    Mode::Count => {}
                }
            }
            Ok(if holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Recolor {
            grammar,
            formula,
            out,
            json,
        } => {
            let mut g = load_grammar(&grammar)?;
            g.colors.insert(Symbol::new("init"));
            let phi = load_formula(&formula, &g)?;
            let recolored = recolor(&g, &phi)?;
            for (step, rules) in &recolored.refinement_log {
                if step.is_empty() {
                    eprintln!("refined grammar: {rules} rules");
                } else {
                    eprintln!("refined grammar for `{step}`: {rules} rules");
                }
            }
            eprintln!(
                "recolored grammar: {} rules, {} nonterminals; satisfaction color `{}`",
                recolored.grammar.rules.len(),
                recolored.grammar.nonterminals.len(),
                recolored.color
            );
            for (color, denotes) in &recolored.registry {
                eprintln!("  {color} denotes {denotes}");
            }
            let content = if json {
                io::grammar_to_json(&recolored.grammar)
            } else {
                io::serialize_grammar(&recolored.grammar)
            };
            write_out(out, &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle {
            grammar,
            formula,
            depth,
            json,
            jobs,
        } => {
            configure_jobs(jobs);
            let mut g = load_grammar(&grammar)?;
            g.colors.insert(Symbol::new("init"));
            let phi = load_formula(&formula, &g)?;
            let report = differential(&g, &phi, depth).map_err(|e| e.to_string())?;
            if json {
                let mismatches: Vec<_> = report
                    .mismatches
                    .iter()
                    .map(|m| {
                        serde_json::json!({
                            "member": m.member_index,
                            "node": m.node.0,
                            "grammar": m.grammar_says,
                            "oracle": m.oracle_says,
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "formula": formula,
                        "depth": depth,
                        "members_checked": report.members_checked,
                        "mismatches": mismatches,
                    })
                );
            } else {
                println!("{}", report.render());
                for m in report.mismatches.iter().take(5) {
                    println!(
                        "  member {} node n{}: grammar={} oracle={}",
                        m.member_index, m.node.0, m.grammar_says, m.oracle_says
                    );
                }
            }
            Ok(if report.mismatches.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Dump {
            grammar,
            dot,
            formula,
            out,
        } => {
            let g = load_grammar(&grammar)?;
            let content = match dot {
                DotKind::Grammar => io::grammar_to_dot(&g),
                DotKind::Behaviours | DotKind::Refined => {
                    let text = formula
                        .ok_or("this view needs --formula to pick the automaton".to_string())?;
                    let phi = load_formula(&text, &g)?;
                    // one Büchi automaton drives the rendering: take the
                    // outermost path formula
                    let ltl = match &phi {
                        StateFormula::Forall(p) | StateFormula::Exists(p) => state_free_ltl(p)
                            .ok_or(
                                "behaviour views need a formula without nested state quantifiers"
                                    .to_string(),
                            )?,
                        _ => {
                            return Err(
                                "behaviour views need a path-quantified formula, e.g. \"A F blue\""
                                    .to_string(),
                            )
                        }
                    };
                    let m = famcheck::logic::ltl_to_buchi(&ltl, &[]);
                    match dot {
                        DotKind::Behaviours => io::behaviours_to_dot(&g, &m),
                        _ => io::refined_to_dot(&refine(&g, &m), &m),
                    }
                }
            };
            write_out(out, &content)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Converts a path formula without nested state quantifiers to LTL.
fn state_free_ltl(p: &famcheck::logic::PathFormula) -> Option<famcheck::logic::Ltl> {
    use famcheck::logic::{Ltl, PathFormula as P};
    Some(match p {
        P::State(s) => match s.as_ref() {
            StateFormula::True => Ltl::True,
            StateFormula::False => Ltl::False,
            StateFormula::Atom(a) => Ltl::Atom(*a),
            _ => return None,
        },
        P::Not(q) => Ltl::Not(Box::new(state_free_ltl(q)?)),
        P::And(a, b) => Ltl::And(Box::new(state_free_ltl(a)?), Box::new(state_free_ltl(b)?)),
        P::Or(a, b) => Ltl::Or(Box::new(state_free_ltl(a)?), Box::new(state_free_ltl(b)?)),
        P::Next(q) => Ltl::Next(Box::new(state_free_ltl(q)?)),
        P::Eventually(q) => Ltl::Eventually(Box::new(state_free_ltl(q)?)),
        P::Always(q) => Ltl::Always(Box::new(state_free_ltl(q)?)),
        P::Until(a, b) => Ltl::Until(Box::new(state_free_ltl(a)?), Box::new(state_free_ltl(b)?)),
        P::Release(a, b) => {
            Ltl::Release(Box::new(state_free_ltl(a)?), Box::new(state_free_ltl(b)?))
        }
    })
}
