//! The `ldq` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};

use crate::algebra::SparqlExpression;
use crate::encoding::{enc_solution_set, enc_valuation};
use crate::engine::{
    exec_full_web, exec_reach_streaming, exec_reach_terminating, ExecutionReport, Status,
    StreamEvent,
};
use crate::parser::parse_expression;
use crate::reach::{self, Budget, ReachabilityCriterion};
use crate::term::Uri;
use crate::web::open_web;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Semantics {
    /// Evaluate over all data of the web.
    Full,
    /// Evaluate over the part reachable from the seeds.
    Reach,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Print the complete result once execution ends.
    Batch,
    /// Print solutions as they are found, tagged with their iteration.
    Stream,
}

/// Evaluate a query over a Web of Linked Data.
#[derive(Debug, Parser)]
#[command(name = "ldq", version)]
pub struct Args {
    /// Web file (JSON) or generator selector: gen:numbers, gen:chain:N|inf, gen:star:N|inf.
    #[arg(long)]
    pub web: String,
    /// Query text, or the path of a file holding it.
    #[arg(long)]
    pub query: String,
    #[arg(long, value_enum, default_value = "full")]
    pub semantics: Semantics,
    /// all | none | match | u:FILE | t:FILE | and:UFILE,TFILE | or:UFILE,TFILE
    #[arg(long)]
    pub criterion: Option<String>,
    /// Comma-separated seed URIs, e.g. '<num:1>,<num:2>'.
    #[arg(long)]
    pub seeds: Option<String>,
    /// File with one seed URI per line.
    #[arg(long, conflicts_with = "seeds")]
    pub seeds_file: Option<PathBuf>,
    /// Maximum number of lookups: a positive integer or `unlimited`.
    #[arg(long)]
    pub budget: Option<String>,
    #[arg(long, value_enum, default_value = "batch")]
    pub mode: Mode,
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub web: String,
    pub query: SparqlExpression,
    pub semantics: Semantics,
    pub criterion: Option<ReachabilityCriterion>,
    pub seeds: Vec<Uri>,
    pub budget: Budget,
    pub mode: Mode,
}

fn parse_budget(text: &str) -> Result<Budget> {
    if text == "unlimited" {
        return Ok(Budget::Unlimited);
    }
    match text.parse::<u64>() {
        Ok(n) if n > 0 => Ok(Budget::Limited(n)),
        _ => bail!("invalid budget {text:?}: expected a positive integer or `unlimited`"),
    }
}

fn parse_seed(text: &str) -> Result<Uri> {
    reach::parse_seed(text).with_context(|| format!("invalid seed {:?}", text.trim()))
}

fn seeds_from_file(path: &Path) -> Result<Vec<Uri>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_seed)
        .collect()
}

fn read_query(arg: &str) -> Result<SparqlExpression> {
    let path = Path::new(arg);
    let text = if path.is_file() {
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?
    } else {
        arg.to_owned()
    };
    parse_expression(&text).context("invalid query")
}

impl RunConfig {
    pub fn from_args(args: &Args) -> Result<RunConfig> {
        let budget = args.budget.as_deref().map(parse_budget).transpose()?;
        let mut seeds = Vec::new();
        if let Some(list) = &args.seeds {
            seeds =
                reach::parse_seed_list(list).with_context(|| format!("invalid seeds {list:?}"))?;
        }
        if let Some(path) = &args.seeds_file {
            seeds = seeds_from_file(path)?;
        }
        let criterion = args
            .criterion
            .as_deref()
            .map(ReachabilityCriterion::from_text)
            .transpose()
            .context("invalid criterion")?;
        match args.semantics {
            Semantics::Full => {
                if criterion.is_some() || args.seeds.is_some() || args.seeds_file.is_some() {
                    bail!("--criterion and seeds are only allowed with --semantics reach");
                }
                if args.mode == Mode::Stream {
                    bail!("--mode stream requires --semantics reach");
                }
                if budget == Some(Budget::Unlimited) {
                    bail!("an unlimited budget is only allowed with --semantics reach");
                }
            }
            Semantics::Reach => {
                if seeds.is_empty() {
                    bail!("--semantics reach requires a nonempty seed set");
                }
                if criterion.is_none() {
                    bail!("--semantics reach requires --criterion");
                }
            }
        }
        Ok(RunConfig {
            web: args.web.clone(),
            query: read_query(&args.query)?,
            semantics: args.semantics,
            criterion,
            seeds,
            budget: budget.unwrap_or(Budget::Unlimited),
            mode: args.mode,
        })
    }
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Complete => 0,
        Status::BudgetExhausted => 2,
    }
}

fn summary(out: &mut dyn Write, report: &ExecutionReport) -> std::io::Result<()> {
    writeln!(out, "status={}", report.status)?;
    writeln!(out, "solutions={}", report.solutions.len())?;
    writeln!(out, "lookups={}", report.lookups_spent)?;
    writeln!(out, "docs={}", report.part_size)
}

/// Runs a validated configuration, writing solutions and the summary to `out`.
pub fn execute(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<Status> {
    let web = open_web(&cfg.web).with_context(|| format!("cannot open web {:?}", cfg.web))?;
    let report = match cfg.semantics {
        Semantics::Full => exec_full_web(&web, &cfg.query, cfg.budget)?,
        Semantics::Reach => {
            let c = cfg.criterion.as_ref().expect("validated");
            if cfg.budget == Budget::Unlimited {
                writeln!(err, "warning: unlimited budget; the run may not terminate")?;
            }
            match cfg.mode {
                Mode::Batch => exec_reach_terminating(&web, &cfg.seeds, c, &cfg.query, cfg.budget),
                Mode::Stream => {
                    if !cfg.query.is_opt_free() {
                        writeln!(err, "warning: the query uses OPT; streamed solutions may not all belong to the final result")?;
                    }
                    let mut stream =
                        exec_reach_streaming(&web, &cfg.seeds, c, &cfg.query, cfg.budget);
                    for event in stream.by_ref() {
                        if let StreamEvent::Solution {
                            iteration,
                            valuation,
                        } = event
                        {
                            writeln!(out, "[iter={iteration}] {}", enc_valuation(&valuation))?;
                            out.flush()?;
                        }
                    }
                    stream.run_to_end()
                }
            }
        }
    };
    if cfg.mode == Mode::Batch {
        write!(out, "{}", enc_solution_set(&report.solutions))?;
    }
    summary(out, &report)?;
    out.flush()?;
    Ok(report.status)
}

fn report_error(err: &mut dyn Write, e: &anyhow::Error) {
    let prefix = if std::env::var("LDQ_COLOR").as_deref() == Ok("1") {
        "\x1b[31merror:\x1b[0m"
    } else {
        "error:"
    };
    let _ = writeln!(err, "{prefix} {e:#}");
}

/// Parses `argv`, runs, and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    let result = RunConfig::from_args(&args).and_then(|cfg| execute(&cfg, out, err));
    match result {
        Ok(status) => exit_code(status),
        Err(e) => {
            report_error(err, &e);
            1
        }
    }
}
