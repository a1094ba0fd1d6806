//! Batch driver for PCFSS programs: type checking, both interpreters,
//! distribution estimation, cross-backend comparison and network export.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adequacy::{
    crosscheck_trace, estimate_distribution, observe, Crosscheck, CrosscheckConfig,
    EstimateConfig, EstimateMode,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use interp::{compile_program, CompileOptions, SampleMode};
use lang_ast::{parse_program, PrimRegistry, Term};
use opsem::{eval_sampling, RunOutcome};
use serde_json::json;
use typer::check_closed_real;

#[derive(Parser)]
#[command(
    name = "pcfss",
    about = "Run PCFSS programs on two semantics: a direct sampler and a token dialogue"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse and type check a program.
    Check { path: PathBuf },
    /// Run the direct interpreter on one weighted trace.
    Run {
        path: PathBuf,
        #[command(flatten)]
        input: TraceArgs,
        /// Interpreter step budget.
        #[arg(long, default_value_t = 1_000_000)]
        fuel: u64,
        /// Indent the JSON output.
        #[arg(long)]
        pretty: bool,
    },
    /// Compile to a token network and hold the observation dialogue.
    GoiRun {
        path: PathBuf,
        #[command(flatten)]
        input: TraceArgs,
        /// Bounce budget per composition node.
        #[arg(long, default_value_t = 100_000)]
        bounces: u64,
        /// Replace recursion by its k-th finite unrolling.
        #[arg(long)]
        iterants: Option<u32>,
        /// Indent the JSON output.
        #[arg(long)]
        pretty: bool,
    },
    /// Estimate the result distribution by weighted Monte Carlo.
    Estimate {
        path: PathBuf,
        /// Number of runs.
        #[arg(long, default_value_t = 10_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-run budget; defaults to 10^6 steps or 10^5 bounces.
        #[arg(long)]
        fuel: Option<u64>,
        /// Which backend performs the runs.
        #[arg(long, value_enum, default_value_t = Mode::Opsem)]
        mode: Mode,
        /// Worker threads; the result does not depend on this.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also write the raw samples to this file as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Indent the JSON output.
        #[arg(long)]
        pretty: bool,
    },
    /// Run both backends on one weighted trace and compare.
    Crosscheck {
        path: PathBuf,
        #[command(flatten)]
        input: TraceArgs,
        /// Interpreter step budget.
        #[arg(long, default_value_t = 1_000_000)]
        fuel: u64,
        /// Bounce budget per composition node.
        #[arg(long, default_value_t = 100_000)]
        bounces: u64,
        /// Print a sentence instead of JSON.
        #[arg(long)]
        pretty: bool,
    },
    /// Print the compiled network in DOT format.
    Dot {
        path: PathBuf,
        /// Replace recursion by its k-th finite unrolling.
        #[arg(long)]
        iterants: Option<u32>,
    },
}

#[derive(Args)]
struct TraceArgs {
    /// Uniform draws for `sample`, comma separated, e.g. 0.25,0.5.
    #[arg(long, value_delimiter = ',', conflicts_with = "trace_file")]
    trace: Vec<f64>,
    /// File with one draw per line; blank lines are skipped.
    #[arg(long)]
    trace_file: Option<PathBuf>,
    /// Initial weight.
    #[arg(long, default_value_t = 1.0)]
    weight: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Opsem,
    Goi,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}

/// Read, parse and type check a program; diagnostics are `line:col:
/// message` strings.
fn load(path: &Path) -> Result<(PrimRegistry, Term), String> {
    let src = fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let term = parse_program(&src).map_err(|e| format!("{}: {}", e.span, e.message))?;
    let reg = PrimRegistry::builtin();
    check_closed_real(&reg, &term).map_err(|e| e.to_string())?;
    Ok((reg, term))
}

fn resolve_trace(input: &TraceArgs) -> Result<Vec<f64>, String> {
    let Some(path) = &input.trace_file else {
        return Ok(input.trace.clone());
    };
    let src = fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let mut trace = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let x: f64 = line
            .parse()
            .map_err(|_| format!("{}:{}: not a real number: {line}", path.display(), i + 1))?;
        trace.push(x);
    }
    Ok(trace)
}

fn emit(value: &serde_json::Value, pretty: bool) {
    if pretty {
        println!("{value:#}");
    } else {
        println!("{value}");
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Check { path } => {
            load(&path)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Run {
            path,
            input,
            fuel,
            pretty,
        } => {
            let (reg, term) = load(&path)?;
            let trace = resolve_trace(&input)?;
            let report = match eval_sampling(&reg, &term, input.weight, &trace, fuel) {
                RunOutcome::Terminated {
                    value,
                    weight,
                    leftover,
                    steps,
                } => {
                    let b = match value.node {
                        lang_ast::ValueKind::RealConst(b) => b,
                        _ => unreachable!("a closed value of type Real is a constant"),
                    };
                    json!({
                        "outcome": "terminated",
                        "weight": weight,
                        "value": b,
                        "leftover": leftover,
                        "steps": steps,
                    })
                }
                RunOutcome::Blocked { reason, steps } => json!({
                    "outcome": "blocked",
                    "reason": reason.to_string(),
                    "steps": steps,
                }),
                RunOutcome::FuelExhausted { steps } => json!({
                    "outcome": "fuel-exhausted",
                    "steps": steps,
                }),
            };
            emit(&report, pretty);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::GoiRun {
            path,
            input,
            bounces,
            iterants,
            pretty,
        } => {
            let (reg, term) = load(&path)?;
            let trace = resolve_trace(&input)?;
            let opt = CompileOptions {
                fuel: bounces,
                mode: SampleMode::Trace,
                iterants,
            };
            let compiled =
                compile_program(&reg, &term, &opt).map_err(|e| e.to_string())?;
            let report = match observe(&compiled.machine, input.weight, &trace) {
                Ok(o) => json!({
                    "outcome": "observed",
                    "weight": o.weight,
                    "value": o.value,
                }),
                Err(cause) => json!({
                    "outcome": "undefined",
                    "cause": cause.to_string(),
                }),
            };
            emit(&report, pretty);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Estimate {
            path,
            n,
            seed,
            fuel,
            mode,
            jobs,
            csv,
            pretty,
        } => {
            let (reg, term) = load(&path)?;
            let mode = match mode {
                Mode::Opsem => EstimateMode::Opsem,
                Mode::Goi => EstimateMode::Goi,
            };
            let cfg = EstimateConfig {
                n_runs: n,
                seed,
                fuel: fuel.unwrap_or(match mode {
                    EstimateMode::Opsem => 1_000_000,
                    EstimateMode::Goi => 100_000,
                }),
                mode,
                jobs,
            };
            let set = estimate_distribution(&reg, &term, &cfg).map_err(|e| e.to_string())?;
            if let Some(csv_path) = csv {
                fs::write(&csv_path, set.to_csv())
                    .map_err(|e| format!("{}: {e}", csv_path.display()))?;
            }
            println!("{}", set.report_json(pretty));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Crosscheck {
            path,
            input,
            fuel,
            bounces,
            pretty,
        } => {
            let (reg, term) = load(&path)?;
            let trace = resolve_trace(&input)?;
            let cfg = CrosscheckConfig {
                step_fuel: fuel,
                bounce_fuel: bounces,
            };
            let verdict = crosscheck_trace(&reg, &term, input.weight, &trace, &cfg)
                .map_err(|e| e.to_string())?;
            if pretty {
                println!("{verdict}");
            } else {
                emit(&crosscheck_json(&verdict), false);
            }
            if verdict.is_agreement() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
        Cmd::Dot { path, iterants } => {
            let (reg, term) = load(&path)?;
            let opt = CompileOptions {
                fuel: goi_core::DEFAULT_FUEL,
                mode: SampleMode::Trace,
                iterants,
            };
            let compiled =
                compile_program(&reg, &term, &opt).map_err(|e| e.to_string())?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().replace(['-', '.'], "_"))
                .unwrap_or_else(|| "net".into());
            print!("{}", compiled.graph.to_dot(&name));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn crosscheck_json(verdict: &Crosscheck) -> serde_json::Value {
    match verdict {
        Crosscheck::Agree { weight, value } => json!({
            "verdict": "agree",
            "weight": weight,
            "value": value,
        }),
        Crosscheck::DisagreeValue { direct, dialogue } => json!({
            "verdict": "disagree-value",
            "direct": { "weight": direct.weight, "value": direct.value },
            "dialogue": { "weight": dialogue.weight, "value": dialogue.value },
        }),
        Crosscheck::DisagreeWeight { direct, dialogue } => json!({
            "verdict": "disagree-weight",
            "direct": { "weight": direct.weight, "value": direct.value },
            "dialogue": { "weight": dialogue.weight, "value": dialogue.value },
        }),
        Crosscheck::BothUndefined { direct, dialogue } => json!({
            "verdict": "both-undefined",
            "direct": direct.to_string(),
            "dialogue": dialogue.to_string(),
        }),
        Crosscheck::DirectOnly { direct, dialogue } => json!({
            "verdict": "direct-only",
            "direct": { "weight": direct.weight, "value": direct.value },
            "dialogue": dialogue.to_string(),
        }),
        Crosscheck::DialogueOnly { dialogue, direct } => json!({
            "verdict": "dialogue-only",
            "dialogue": { "weight": dialogue.weight, "value": dialogue.value },
            "direct": direct.to_string(),
        }),
    }
}
