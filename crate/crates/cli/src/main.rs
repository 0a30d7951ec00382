//! `cpref`: classification, compilation and queries over preference
//! statements and LP-trees.
//!
//! Exit codes: 0 answered, 1 negative answer to a check, 2 input error,
//! 3 budget or cap exhausted.

mod input;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use cpref::lexcompat::{
    build_complete_lptree, gen_3sat_reduction, top_p_lexcompat, BuildOutcome, DEFAULT_NODE_BUDGET,
};
use cpref::lptree::{
    compare_lptree, cut_by_enumeration, cut_extract_lptree, is_complete, is_linearisable_lptree,
    lptree_relation, strict_cut_count, top_p_lptree,
};
use cpref::model::{classify, dependency_graph};
use cpref::semantics::{
    closure_oracle, compare, equivalent, geq_cut_extract, linearisable, optimum_check,
    optimum_exists, top_p_general, Bounded, OptimalityKind, SearchBudget, DEFAULT_CAP,
};
use cpref::textio::{parse_dimacs, serialize_lptree, serialize_preorder, serialize_theory};
use cpref::Error;

use input::Doc;

#[derive(Parser)]
#[command(
    name = "cpref",
    version,
    about = "Reason about conditional preference statements and LP-trees"
)]
struct Cli {
    /// Node budget for compilation and state budget for dominance search.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Largest number of relation cells (universe size squared) an oracle may allocate.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u128,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report the sublanguages a theory belongs to, or the shape of a tree.
    Classify { file: PathBuf },
    /// Compare two alternatives.
    Compare {
        file: PathBuf,
        #[arg(short = 'o', value_name = "ALT")]
        first: String,
        #[arg(short = 'p', value_name = "ALT")]
        second: String,
    },
    /// Check that the strict part of the order has no cycle.
    Linearisable { file: PathBuf },
    /// Check that two documents induce the same order.
    Equiv { first: PathBuf, second: PathBuf },
    /// Print p alternatives of a candidate set, best first.
    Top {
        file: PathBuf,
        #[arg(long, value_name = "SETFILE")]
        set: PathBuf,
        #[arg(short = 'p')]
        p: usize,
        /// Use the lexico-compatible path with labels of at most K attributes.
        #[arg(short = 'k')]
        k: Option<usize>,
    },
    /// Find an optimal alternative, or check one.
    Optimal {
        file: PathBuf,
        #[arg(long)]
        kind: OptimalityKind,
        #[arg(long, value_name = "ALT")]
        check: Option<String>,
    },
    /// Count or extract the alternatives better than a given one.
    #[command(group(ArgGroup::new("mode").required(true).args(["count", "extract"])))]
    #[command(group(ArgGroup::new("rel").required(true).args(["strict", "geq"])))]
    Cut {
        file: PathBuf,
        #[arg(long, value_name = "ALT")]
        alt: String,
        #[arg(long)]
        count: bool,
        #[arg(long)]
        extract: bool,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        geq: bool,
        /// Allow enumerating the universe when no direct method applies.
        #[arg(long)]
        enumerate: bool,
    },
    /// Build a complete k-LP-tree extending a theory.
    Compile {
        file: PathBuf,
        #[arg(short = 'k')]
        k: usize,
        #[arg(short = 'o', value_name = "OUT")]
        out: Option<PathBuf>,
    },
    /// Dump the whole order, one `o >= o'` pair per line.
    Oracle {
        file: PathBuf,
        /// Leave out the reflexive pairs.
        #[arg(long)]
        strict: bool,
    },
    /// Turn a DIMACS CNF into the theory of the satisfiability reduction.
    Gen3sat {
        cnf: PathBuf,
        #[arg(short = 'o', value_name = "OUT")]
        out: Option<PathBuf>,
    },
}

/// A command that did not produce an answer.
pub struct Failure {
    code: u8,
    error: anyhow::Error,
    located: bool,
}

impl Failure {
    pub fn input(error: anyhow::Error) -> Self {
        Failure {
            code: 2,
            error,
            located: false,
        }
    }

    /// An input error already prefixed with `file:line:col:`.
    pub fn located(error: anyhow::Error) -> Self {
        Failure {
            code: 2,
            error,
            located: true,
        }
    }

    fn exhausted(error: anyhow::Error) -> Self {
        Failure {
            code: 3,
            error,
            located: false,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExhausted(_) | Error::OracleTooLarge { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            error: e.into(),
            located: false,
        }
    }
}

/// Stdout text and exit code of an answered command.
struct Answer {
    text: String,
    code: u8,
}

impl Answer {
    fn ok(text: impl Into<String>) -> Self {
        Answer {
            text: text.into(),
            code: 0,
        }
    }

    fn check(yes: bool) -> Self {
        Answer {
            text: if yes { "yes" } else { "no" }.into(),
            code: u8::from(!yes),
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn search_budget(budget: Option<usize>) -> Result<SearchBudget, Failure> {
    match budget {
        Some(b) => SearchBudget::new(b, b).map_err(Failure::from),
        None => Ok(SearchBudget::default()),
    }
}

fn run(cli: Cli) -> Result<Answer, Failure> {
    let cap = cli.cap;
    match cli.command {
        Command::Classify { file } => match input::load(&file)? {
            Doc::Theory(t) => {
                let p = classify(&t);
                let g = dependency_graph(&t);
                let s = t.schema();
                let mut out = String::new();
                writeln!(out, "statements: {}", t.len()).unwrap();
                writeln!(out, "size: {}", p.size).unwrap();
                writeln!(out, "max-swap-width: {}", p.max_swap_width).unwrap();
                writeln!(out, "conjunctive: {}", yes_no(p.conjunctive)).unwrap();
                writeln!(out, "free-empty: {}", yes_no(p.free_empty)).unwrap();
                writeln!(out, "acyclic: {}", yes_no(p.acyclic)).unwrap();
                writeln!(out, "polytree: {}", yes_no(p.polytree)).unwrap();
                writeln!(out, "cpnet: {}", yes_no(p.cpnet)).unwrap();
                let edges: Vec<String> = g
                    .edges()
                    .iter()
                    .map(|&(x, y)| format!("{}->{}", s.name(x), s.name(y)))
                    .collect();
                write!(out, "dependency-edges: {}", edges.join(" ")).unwrap();
                Ok(Answer::ok(out))
            }
            Doc::Tree(t) => Ok(Answer::ok(format!(
                "nodes: {}\nwidth: {}\ncomplete: {}\nlinearisable: {}",
                t.node_count(),
                t.width(),
                yes_no(is_complete(&t)),
                yes_no(is_linearisable_lptree(&t))
            ))),
        },
        Command::Compare {
            file,
            first,
            second,
        } => {
            let doc = input::load(&file)?;
            let o = input::alternative(doc.schema(), &first)?;
            let o2 = input::alternative(doc.schema(), &second)?;
            let label = match &doc {
                Doc::Tree(t) => compare_lptree(t, &o, &o2)?,
                Doc::Theory(t) => match compare(t, &o, &o2, search_budget(cli.budget)?)? {
                    Bounded::Answer(l) => l,
                    Bounded::BudgetExhausted => {
                        return Err(Failure::exhausted(anyhow::anyhow!(
                            "dominance search ran out of budget; raise --budget"
                        )))
                    }
                },
            };
            Ok(Answer::ok(label.as_str()))
        }
        Command::Linearisable { file } => match input::load(&file)? {
            Doc::Tree(t) => Ok(Answer::check(is_linearisable_lptree(&t))),
            Doc::Theory(t) => Ok(Answer::check(linearisable(&t, cap)?)),
        },
        Command::Equiv { first, second } => {
            let a = input::load(&first)?.into_theory()?;
            let b = input::load(&second)?.into_theory()?;
            Ok(Answer::check(equivalent(&a, &b, cap)?))
        }
        Command::Top { file, set, p, k } => {
            let doc = input::load(&file)?;
            let s = input::alternative_set(doc.schema(), &set)?;
            let seq = match (&doc, k) {
                (Doc::Tree(t), _) => top_p_lptree(t, &s, p)?,
                (Doc::Theory(t), Some(k)) => top_p_lexcompat(t, k, &s, p)?,
                (Doc::Theory(t), None) => top_p_general(t, &s, p, cap)?,
            };
            let schema = doc.schema();
            let lines: Vec<String> = seq.iter().map(|o| schema.render_alternative(o)).collect();
            Ok(Answer::ok(lines.join("\n")))
        }
        Command::Optimal { file, kind, check } => {
            let t = input::load(&file)?.into_theory()?;
            match check {
                Some(alt) => {
                    let o = input::alternative(t.schema(), &alt)?;
                    Ok(Answer::check(optimum_check(&t, &o, kind, cap)?))
                }
                None => Ok(match optimum_exists(&t, kind, cap)? {
                    Some(o) => Answer::ok(t.schema().render_alternative(&o)),
                    None => Answer {
                        text: "none".into(),
                        code: 1,
                    },
                }),
            }
        }
        Command::Cut {
            file,
            alt,
            count,
            strict,
            enumerate,
            ..
        } => cut(&file, &alt, count, strict, enumerate, cap),
        Command::Compile { file, k, out } => {
            let t = input::load(&file)?.into_theory()?;
            let budget = cli.budget.unwrap_or(DEFAULT_NODE_BUDGET);
            match build_complete_lptree(&t, k, budget)? {
                BuildOutcome::Built(tree) => {
                    let text = serialize_lptree(&tree);
                    match out {
                        Some(path) => {
                            input::write(&path, &text)?;
                            Ok(Answer::ok(format!(
                                "compiled: {} nodes, width {}, written to {}",
                                tree.node_count(),
                                tree.width(),
                                path.display()
                            )))
                        }
                        None => Ok(Answer::ok(text.trim_end())),
                    }
                }
                BuildOutcome::Failure { branch } => {
                    let s = t.schema();
                    let path: Vec<String> =
                        branch.iter().map(|e| s.render_instantiation(e)).collect();
                    eprintln!(
                        "no label fits at the node reached by {}",
                        if path.is_empty() {
                            "the root".to_string()
                        } else {
                            path.join(" / ")
                        }
                    );
                    Ok(Answer {
                        text: format!("FAILURE: not {k}-lexico-compatible"),
                        code: 1,
                    })
                }
                BuildOutcome::NodeBudgetExceeded => Err(Failure::exhausted(anyhow::anyhow!(
                    "compiled tree exceeds {budget} nodes; raise --budget"
                ))),
            }
        }
        Command::Oracle { file, strict } => {
            let p = match input::load(&file)? {
                Doc::Tree(t) => lptree_relation(&t, cap)?,
                Doc::Theory(t) => closure_oracle(&t, cap)?,
            };
            Ok(Answer::ok(serialize_preorder(&p, strict).trim_end()))
        }
        Command::Gen3sat { cnf, out } => {
            let text = input::read(&cnf)?;
            let cnf_val = parse_dimacs(&text)
                .map_err(|d| Failure::located(anyhow::anyhow!("{}:{d}", cnf.display())))?;
            let t = gen_3sat_reduction(&cnf_val)?;
            let doc = serialize_theory(&t);
            match out {
                Some(path) => {
                    input::write(&path, &doc)?;
                    Ok(Answer::ok(format!(
                        "{} statements written to {}",
                        t.len(),
                        path.display()
                    )))
                }
                None => Ok(Answer::ok(doc.trim_end())),
            }
        }
    }
}

fn cut(
    file: &Path,
    alt: &str,
    count: bool,
    strict: bool,
    enumerate: bool,
    cap: u128,
) -> Result<Answer, Failure> {
    let doc = input::load(file)?;
    let schema = doc.schema().clone();
    let o = input::alternative(&schema, alt)?;
    let members = match (&doc, count) {
        (Doc::Tree(t), false) => {
            return Ok(extracted(&schema, cut_extract_lptree(t, &o, strict)?));
        }
        // on a complete tree the order is linear, so both cuts coincide
        (Doc::Tree(t), true) if is_complete(t) => {
            return Ok(Answer::ok(strict_cut_count(t, &o)?.to_string()))
        }
        (Doc::Tree(t), true) => {
            if !enumerate {
                return Err(Failure::input(anyhow::anyhow!(
                    "counting on an incomplete tree enumerates the universe; pass --enumerate"
                )));
            }
            cut_by_enumeration(t, &o, strict, cap)?
        }
        (Doc::Theory(t), false) if !strict => {
            return Ok(extracted(&schema, geq_cut_extract(t, &o)))
        }
        (Doc::Theory(t), _) => {
            eprintln!(
                "warning: no direct method for this cut on statements; enumerating the universe"
            );
            closure_oracle(t, cap)?.cut(&o, strict)
        }
    };
    if count {
        Ok(Answer::ok(members.len().to_string()))
    } else {
        Ok(extracted(&schema, members.into_iter().next()))
    }
}

fn extracted(schema: &cpref::model::Schema, o: Option<cpref::model::Alternative>) -> Answer {
    match o {
        Some(o) => Answer::ok(schema.render_alternative(&o)),
        None => Answer {
            text: "none".into(),
            code: 1,
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(a) => {
            if !a.text.is_empty() {
                println!("{}", a.text);
            }
            ExitCode::from(a.code)
        }
        Err(f) if f.located => {
            eprintln!("{:#}", f.error);
            ExitCode::from(f.code)
        }
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
