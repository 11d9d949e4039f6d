//! Command-line front end.
//!
//! Every subcommand prints one JSON object on standard output. Exit status 0
//! means success, valid or accepted; 1 means a countermodel, a false
//! evaluation or a rejected check; 2 means a usage or input error.
//! Formula, graph and file arguments written `@path` are read from `path`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::fixtures::run_corpus;
use crate::formula::{parse_formula, Formula};
use crate::graph::{parse_graph, Graph};
use crate::hilbert::{check_proof, deduction_transform, ProofDocument};
use crate::kripke::{
    bounded_valid, FrameClass, KripkeModel, SearchOptions, Verdict, DEFAULT_MODEL_BUDGET,
};
use crate::rewrite::{
    check_derivation, rule_soundness_suite, scroll_theorem, DerivationDocument, GraphSystem,
    RuleId, SuiteOptions,
};
use crate::translate::{formula_roundtrip, graph_roundtrip, to_formula, to_graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    Rejected,
    UsageError,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::Rejected => 1,
            ExitStatus::UsageError => 2,
        }
    }

    fn from_verdict(ok: bool) -> ExitStatus {
        if ok {
            ExitStatus::Success
        } else {
            ExitStatus::Rejected
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "gtlogic",
    version,
    about = "GT/GT4 logic and GET/GET4 existential graphs"
)]
struct Cli {
    /// Worker threads for searches and the soundness suite.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Target {
    Graph,
    Formula,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FrameArg {
    T,
    S4,
    S5,
}

impl FrameArg {
    fn class(self) -> FrameClass {
        match self {
            FrameArg::T => FrameClass::T,
            FrameArg::S4 => FrameClass::S4,
            FrameArg::S5 => FrameClass::S5,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SystemArg {
    Get,
    Get4,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a formula and print its canonical form.
    ParseFormula { expr: String },
    /// Parse a graph and print it with its canonical form.
    ParseGraph { expr: String },
    /// Translate between formulas and graphs.
    Translate {
        #[arg(long, value_enum)]
        to: Target,
        expr: String,
    },
    /// Evaluate a formula in a model document.
    Eval {
        #[arg(long)]
        model: String,
        #[arg(long)]
        formula: String,
        /// World name; defaults to the model's actual world.
        #[arg(long)]
        world: Option<String>,
    },
    /// Search for a countermodel among small frames.
    Valid {
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        #[arg(long, value_enum, default_value = "t")]
        frame: FrameArg,
        #[arg(long, default_value_t = DEFAULT_MODEL_BUDGET)]
        max_models: u64,
    },
    /// Check a Hilbert proof document.
    CheckProof {
        file: String,
        /// Discharge these hypotheses (in order) with the deduction theorem first.
        #[arg(long)]
        discharge: Vec<String>,
    },
    /// Check a graph derivation document.
    CheckDerivation { file: String },
    /// Turn a derivation of Y from X into a derivation of (X (Y)) from the blank sheet.
    Scroll { file: String },
    /// Check every rule step between small graphs against small models.
    SoundnessSuite {
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        max_worlds: usize,
        #[arg(long, value_enum)]
        system: SystemArg,
        /// Frame class of the models; defaults to t for get and s4 for get4.
        #[arg(long, value_enum)]
        frame: Option<FrameArg>,
        /// Comma-separated rule names; defaults to every rule of the system.
        #[arg(long, value_delimiter = ',')]
        rules: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "p,q")]
        atoms: Vec<String>,
        /// Node bound for graphs inserted by R2_write_odd; defaults to min(max-size, 3).
        #[arg(long)]
        payload_size: Option<usize>,
    },
    /// Run the bundled fixtures.
    Corpus,
}

struct Outcome {
    status: ExitStatus,
    body: Value,
}

fn done(ok: bool, body: Value) -> Outcome {
    Outcome {
        status: ExitStatus::from_verdict(ok),
        body,
    }
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> InputError {
        InputError(e.to_string())
    }
}

/// `@path` reads the argument from a file.
fn resolve(arg: &str) -> Result<String, InputError> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map(|s| s.trim_end().to_string())
            .map_err(|e| InputError(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn read_file(arg: &str) -> Result<String, InputError> {
    let path = arg.strip_prefix('@').unwrap_or(arg);
    fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))
}

fn formula_arg(arg: &str) -> Result<Formula, InputError> {
    Ok(parse_formula(&resolve(arg)?)?)
}

fn graph_arg(arg: &str) -> Result<Graph, InputError> {
    Ok(parse_graph(&resolve(arg)?)?)
}

fn execute(cli: Cli) -> Result<Outcome, InputError> {
    let jobs = cli.jobs.max(1);
    Ok(match cli.command {
        Command::ParseFormula { expr } => {
            let f = formula_arg(&expr)?;
            done(
                true,
                json!({
                    "formula": f.to_string(),
                    "expanded": f.expand_defined().to_string(),
                    "complexity": f.complexity(),
                }),
            )
        }
        Command::ParseGraph { expr } => {
            let g = graph_arg(&expr)?;
            done(
                true,
                json!({
                    "graph": g.to_string(),
                    "canonical": g.canonical_form().to_string(),
                    "size": g.size(),
                    "complexity": g.complexity(),
                }),
            )
        }
        Command::Translate { to, expr } => match to {
            Target::Graph => {
                let f = formula_arg(&expr)?;
                done(
                    true,
                    json!({
                        "input": f.to_string(),
                        "output": to_graph(&f).to_string(),
                        "roundtrip": formula_roundtrip(&f)?,
                    }),
                )
            }
            Target::Formula => {
                let g = graph_arg(&expr)?;
                done(
                    true,
                    json!({
                        "input": g.to_string(),
                        "output": to_formula(&g).to_string(),
                        "roundtrip": graph_roundtrip(&g)?,
                    }),
                )
            }
        },
        Command::Eval {
            model,
            formula,
            world,
        } => {
            let m = KripkeModel::from_json(&read_file(&model)?)?;
            let f = formula_arg(&formula)?;
            let world = world.unwrap_or_else(|| m.world_names()[m.actual()].clone());
            let value = m.eval(&world, &f)?;
            done(
                value,
                json!({ "formula": f.to_string(), "world": world, "value": value }),
            )
        }
        Command::Valid {
            formula,
            max_worlds,
            frame,
            max_models,
        } => {
            let f = formula_arg(&formula)?;
            let opts = SearchOptions { max_models, jobs };
            match bounded_valid(&f, max_worlds, frame.class(), &opts)? {
                Verdict::Valid { bound } => done(
                    true,
                    json!({
                        "formula": f.to_string(),
                        "frame": frame.class().name(),
                        "verdict": "valid",
                        "max_worlds": bound,
                    }),
                ),
                Verdict::Countermodel(m) => {
                    let actual = m.world_names()[m.actual()].clone();
                    done(
                        false,
                        json!({
                            "formula": f.to_string(),
                            "frame": frame.class().name(),
                            "verdict": "countermodel",
                            "world": actual,
                            "model": m.to_document(),
                        }),
                    )
                }
            }
        }
        Command::CheckProof { file, discharge } => {
            let mut doc = ProofDocument::from_json(&read_file(&file)?)?;
            for d in &discharge {
                doc = deduction_transform(&doc, &formula_arg(d)?)?;
            }
            let report = check_proof(&doc);
            let mut body = json!({
                "accepted": report.accepted,
                "theorem": report.is_theorem(&doc),
                "conclusion": report.conclusion.as_ref().map(|c| c.to_string()),
                "failure": report.failure.as_ref().map(|f| json!({
                    "line": f.line,
                    "reason": f.reason.to_string(),
                })),
                "axioms": report.axioms.iter().map(|(line, m)| json!({
                    "line": line,
                    "schema": m.schema.to_string(),
                    "peel": m.peel,
                })).collect::<Vec<_>>(),
            });
            if !discharge.is_empty() {
                body["proof"] = serde_json::from_str(&doc.to_json())?;
            }
            done(report.accepted, body)
        }
        Command::CheckDerivation { file } => {
            let doc = DerivationDocument::from_json(&read_file(&file)?)?;
            let report = check_derivation(&doc);
            done(
                report.accepted,
                json!({
                    "accepted": report.accepted,
                    "theorem": report.theorem,
                    "final": report.final_graph.to_string(),
                    "final_formula": to_formula(&report.final_graph).to_string(),
                    "failure": report.failure,
                }),
            )
        }
        Command::Scroll { file } => {
            let inner = DerivationDocument::from_json(&read_file(&file)?)?;
            let doc = scroll_theorem(&inner)?;
            done(true, serde_json::from_str(&doc.to_json())?)
        }
        Command::SoundnessSuite {
            max_size,
            max_worlds,
            system,
            frame,
            rules,
            atoms,
            payload_size,
        } => {
            let system = match system {
                SystemArg::Get => GraphSystem::Get,
                SystemArg::Get4 => GraphSystem::Get4,
            };
            let mut opts = SuiteOptions::new(system, max_size, max_worlds);
            if let Some(fr) = frame {
                opts.frame = fr.class();
            }
            if !rules.is_empty() {
                opts.rules = rules
                    .iter()
                    .map(|r| r.parse::<RuleId>())
                    .collect::<Result<_, _>>()?;
            }
            opts.atoms = atoms;
            if let Some(p) = payload_size {
                opts.payload_size = p;
            }
            opts.jobs = jobs;
            let report = rule_soundness_suite(&opts)?;
            let ok = report.violation_count == 0 && report.checker_disagreements.is_empty();
            done(ok, serde_json::to_value(&report)?)
        }
        Command::Corpus => {
            let report = run_corpus(jobs);
            done(report.all_passed(), serde_json::to_value(&report)?)
        }
    })
}

fn emit(out: &mut dyn Write, body: &Value) {
    let _ = writeln!(out, "{body}");
}

/// Parses `args` (program name first), runs the subcommand and writes its
/// JSON verdict to `out`. Usage text goes to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return ExitStatus::Success;
            }
            let _ = write!(err, "{}", e.render());
            emit(
                out,
                &json!({ "error": "usage", "message": e.kind().to_string() }),
            );
            return ExitStatus::UsageError;
        }
    };
    match execute(cli) {
        Ok(Outcome { status, body }) => {
            emit(out, &body);
            status
        }
        Err(InputError(message)) => {
            emit(out, &json!({ "error": "input", "message": message }));
            ExitStatus::UsageError
        }
    }
}
