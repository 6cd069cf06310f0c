//! Command-line front end.
//!
//! Exit codes: `check` and `pref` return 0 for yes and 1 for no; every other
//! command returns 0 on success. Any error returns 2.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::json;
use thiserror::Error;

use crate::closure::{pref_entails_with, QueryResult, RationalClosure};
use crate::epsilon::{EpsilonDistribution, EpsilonError};
use crate::kb::{ConditionalAssertion, KbParseError, KnowledgeBase};
use crate::model::{build_closure_model_over, ModelError};
use crate::parse::{parse_assertion, parse_formula, ParseError};
use crate::sat::{SatConfig, SatError};
use crate::witness::{find_witness_with, verify_witness, WitnessError};

#[derive(Debug, Parser)]
#[command(
    name = "ratclos",
    version,
    about = "Rational closure reasoner for conditional knowledge bases"
)]
struct Cli {
    #[command(flatten)]
    options: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Options {
    /// Emit one JSON object instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Largest number of worlds any enumeration may visit
    #[arg(long, global = true, default_value_t = 1 << 24)]
    max_worlds: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rational-closure membership of `a |~ b`
    Check { kb: PathBuf, assertion: String },
    /// Preferential entailment of `a |~ b`
    Pref { kb: PathBuf, assertion: String },
    /// Rank of a formula
    Rank { kb: PathBuf, formula: String },
    /// Print the chain of exceptional sub-bases
    Partition { kb: PathBuf },
    /// Print the ranked model of the rational closure
    Model { kb: PathBuf },
    /// Print a witness of preferential non-entailment
    Witness { kb: PathBuf, assertion: String },
    /// Exact conditional probability under the ε-assignment of the closure model
    Eps {
        kb: PathBuf,
        #[arg(long)]
        epsilon: String,
        assertion: String,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Kb { path: String, source: KbParseError },
    #[error("query: {0}")]
    Query(#[from] ParseError),
    #[error("invalid epsilon `{0}`; expected a fraction such as 1/10")]
    Epsilon(String),
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Prob(#[from] EpsilonError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("output error: {0}")]
    Output(#[from] std::io::Error),
}

fn load(path: &Path) -> Result<KnowledgeBase, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    KnowledgeBase::parse(&text).map_err(|source| CliError::Kb {
        path: path.display().to_string(),
        source,
    })
}

/// Parses `argv` (including the program name) and runs one command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn config(options: &Options) -> SatConfig {
    SatConfig {
        max_worlds: options.max_worlds,
        ..SatConfig::default()
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let opts = &cli.options;
    let config = config(opts);
    match &cli.command {
        Command::Check { kb, assertion } => {
            let kb = load(kb)?;
            let a = parse_assertion(assertion)?;
            let closure = RationalClosure::with_config(kb, config);
            let mut r = closure.query(&a);
            r.sat_calls += closure.partition().sat_calls();
            decision(out, opts.json, "check", &r)
        }
        Command::Pref { kb, assertion } => {
            let kb = load(kb)?;
            let a = parse_assertion(assertion)?;
            let r = pref_entails_with(&kb, &a, config);
            decision(out, opts.json, "pref", &r)
        }
        Command::Rank { kb, formula } => {
            let kb = load(kb)?;
            let f = parse_formula(formula)?;
            let rank = RationalClosure::with_config(kb, config).rank(&f);
            if opts.json {
                writeln!(out, "{}", json!({ "command": "rank", "rank": rank }))?;
            } else {
                writeln!(out, "rank: {rank}")?;
            }
            Ok(0)
        }
        Command::Partition { kb } => {
            let closure = RationalClosure::with_config(load(kb)?, config);
            let p = closure.partition();
            if opts.json {
                let levels: Vec<Vec<String>> = p
                    .levels()
                    .iter()
                    .map(|l| l.iter().map(ToString::to_string).collect())
                    .collect();
                let v = json!({
                    "command": "partition",
                    "levels": levels,
                    "fixpoint": p.height(),
                    "sat_calls": p.sat_calls(),
                });
                writeln!(out, "{v}")?;
            } else {
                for (i, level) in p.levels().iter().enumerate() {
                    if i > 0 {
                        writeln!(out)?;
                    }
                    let tag = if i == p.height() { " (fixpoint)" } else { "" };
                    writeln!(out, "C{i}{tag}:")?;
                    if level.is_empty() {
                        writeln!(out, "  (empty)")?;
                    }
                    for a in level {
                        writeln!(out, "  {a}")?;
                    }
                }
            }
            Ok(0)
        }
        Command::Model { kb } => {
            let kb = load(kb)?;
            let m = build_closure_model_over(&kb, kb.signature(), config)?;
            if opts.json {
                let worlds: Vec<_> = (0..=m.max_rank().unwrap_or(0))
                    .flat_map(|r| m.level(r).into_iter().map(move |w| (r, w)))
                    .map(|(r, w)| json!({ "rank": r, "world": w.to_string() }))
                    .collect();
                writeln!(out, "{}", json!({ "command": "model", "worlds": worlds }))?;
            } else {
                write!(out, "{m}")?;
            }
            Ok(0)
        }
        Command::Witness { kb, assertion } => {
            let kb = load(kb)?;
            let a = parse_assertion(assertion)?;
            let found = find_witness_with(&kb, &a, config)?;
            if let Some(w) = &found {
                if !verify_witness(&kb, &a, w)? {
                    return Err(CliError::Internal("witness failed verification".into()));
                }
            }
            if opts.json {
                let steps: Vec<_> = found
                    .iter()
                    .flat_map(|w| &w.steps)
                    .map(|s| json!({ "indices": s.indices, "world": s.world.to_string() }))
                    .collect();
                let v = json!({
                    "command": "witness",
                    "entailed": found.is_none(),
                    "steps": steps,
                });
                writeln!(out, "{v}")?;
            } else {
                match found {
                    Some(w) => write!(out, "{w}")?,
                    None => writeln!(out, "entailed")?,
                }
            }
            Ok(0)
        }
        Command::Eps {
            kb,
            epsilon,
            assertion,
        } => {
            let kb = load(kb)?;
            let a = parse_assertion(assertion)?;
            let eps: BigRational = epsilon
                .trim()
                .parse()
                .map_err(|_| CliError::Epsilon(epsilon.clone()))?;
            let p = probability(&kb, &a, eps.clone(), config)?;
            if opts.json {
                let v = json!({
                    "command": "eps",
                    "epsilon": eps.to_string(),
                    "probability": p.to_string(),
                });
                writeln!(out, "{v}")?;
            } else {
                writeln!(out, "{p}")?;
            }
            Ok(0)
        }
    }
}

fn probability(
    kb: &KnowledgeBase,
    a: &ConditionalAssertion,
    eps: BigRational,
    config: SatConfig,
) -> Result<BigRational, CliError> {
    let signature = kb
        .signature()
        .extended_with(&a.antecedent)
        .extended_with(&a.consequent);
    let m = build_closure_model_over(kb, &signature, config)?;
    let d = EpsilonDistribution::new(&m, eps)?;
    Ok(d.conditional(&a.consequent, &a.antecedent)?)
}

fn decision(
    out: &mut dyn Write,
    json: bool,
    command: &str,
    r: &QueryResult,
) -> Result<i32, CliError> {
    if json {
        let mut v = serde_json::to_value(r).map_err(|e| CliError::Internal(e.to_string()))?;
        v["command"] = json!(command);
        writeln!(out, "{v}")?;
    } else {
        writeln!(out, "answer: {}", if r.answer { "yes" } else { "no" })?;
        writeln!(out, "rank_antecedent: {}", r.rank_antecedent)?;
        writeln!(out, "rank_refuter: {}", r.rank_refuter)?;
        writeln!(out, "sat_calls: {}", r.sat_calls)?;
    }
    Ok(if r.answer { 0 } else { 1 })
}
