//! `geoplace`: plan, score and check file placements on a storage network.
//!
//! Exit codes:
//!
//! | code | meaning                                                      |
//! |------|--------------------------------------------------------------|
//! | 0    | success                                                      |
//! | 1    | input error: unreadable file, bad JSON/CSV, malformed data   |
//! | 2    | spec validation failed                                       |
//! | 3    | no admissible uncoded placement exists                       |
//! | 4    | the oracle found a counterexample to the planner             |
//! | 5    | search budget exceeded                                       |
//! | 64   | bad command-line usage                                       |

mod summary;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use geoplace_core::assignment::{hungarian_min_assignment, Backend, HungarianOptions};
use geoplace_core::coloring::DEFAULT_COLORING_LIMIT;
use geoplace_core::evaluation::{
    eval_linear_code, eval_multifile, eval_uncoded, DEFAULT_CODE_BUDGET,
};
use geoplace_core::model::{expand_multifile, validate_spec, NetworkSpec};
use geoplace_core::nngraph::{
    build_extended_graph, build_nng, enumerate_nngs, TieBreak, DEFAULT_NNG_CAP,
};
use geoplace_core::oracle::{
    brute_force_placement, verify_plan, OracleMode, Verdict, DEFAULT_ORACLE_BUDGET,
    DEFAULT_ORACLE_NNG_CAP,
};
use geoplace_core::planner::{plan, PlanOptions, PlanOutcome};
use geoplace_core::{dot, io, Error};

const EXIT_INPUT: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_COUNTEREXAMPLE: u8 = 4;
const EXIT_BUDGET: u8 = 5;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "geoplace",
    version,
    about = "Latency-optimal file placement for geo-distributed storage"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SpecArgs {
    /// Network spec (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// RTT matrix as CSV, replacing the spec's `rtt`.
    #[arg(long)]
    rtt_csv: Option<PathBuf>,
    /// Demand matrix as CSV, replacing the per-node `demands`.
    #[arg(long)]
    demands_csv: Option<PathBuf>,
    /// Treat triangle-inequality violations as errors.
    #[arg(long)]
    strict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Matrix,
    ShortestPath,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Admissible,
    Unrestricted,
}

#[derive(Subcommand)]
enum Command {
    /// Check a spec and list violations.
    Validate {
        #[command(flatten)]
        spec: SpecArgs,
        /// Write the validation report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find the lowest-average-latency placement that meets the per-node
    /// worst-case bound.
    Plan {
        #[command(flatten)]
        spec: SpecArgs,
        /// Write the plan report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_COLORING_LIMIT)]
        coloring_limit: usize,
        #[arg(long, default_value_t = DEFAULT_NNG_CAP)]
        nng_cap: usize,
        #[arg(long, value_enum, default_value = "matrix")]
        backend: BackendArg,
        /// Include the assignment trace for the winning cost matrix.
        #[arg(long)]
        trace: bool,
    },
    /// Score a placement or a linear code.
    Eval {
        #[command(flatten)]
        spec: SpecArgs,
        /// Placement file: `[["A", 3], ...]` with 1-based files.
        #[arg(long, conflicts_with = "code", required_unless_present = "code")]
        placement: Option<PathBuf>,
        /// Code file: `{"field_order": q, "generator": [[...]]}`.
        #[arg(long)]
        code: Option<PathBuf>,
        /// Write the latency report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write per-(node, file) latencies as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Maximum recovery vectors enumerated per file (codes only).
        #[arg(long, default_value_t = DEFAULT_CODE_BUDGET)]
        budget: u64,
    },
    /// Exhaustive search over all placements.
    Oracle {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, default_value = "admissible")]
        mode: ModeArg,
        /// Maximum number of placements enumerated.
        #[arg(long, default_value_t = DEFAULT_ORACLE_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = DEFAULT_ORACLE_NNG_CAP)]
        nng_cap: usize,
        /// Also run the planner and check it against the search.
        #[arg(long)]
        verify: bool,
        /// Write the oracle report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write DOT files for the nearest-neighbor and extended graphs, plus
    /// the normalized spec.
    Export {
        #[command(flatten)]
        spec: SpecArgs,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// One pair of graphs per tie-broken nearest-neighbor graph.
        #[arg(long)]
        all_nngs: bool,
        #[arg(long, default_value_t = DEFAULT_NNG_CAP)]
        nng_cap: usize,
    },
    /// Split multi-slot nodes into unit-capacity nodes.
    Expand {
        #[command(flatten)]
        spec: SpecArgs,
        /// Write the expanded spec here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure with a chosen exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(Error::InvalidSpec(_)) => EXIT_VALIDATION,
            Some(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failure { code, error }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        anyhow::Error::from(error).into()
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { spec, out } => cmd_validate(&spec, out.as_deref()),
        Command::Plan {
            spec,
            out,
            coloring_limit,
            nng_cap,
            backend,
            trace,
        } => {
            let opts = PlanOptions {
                nng_cap,
                coloring_limit,
                backend: match backend {
                    BackendArg::Matrix => Backend::Matrix,
                    BackendArg::ShortestPath => Backend::ShortestPath,
                },
                ..Default::default()
            };
            cmd_plan(&spec, &opts, trace, out.as_deref())
        }
        Command::Eval {
            spec,
            placement,
            code,
            out,
            csv,
            budget,
        } => cmd_eval(
            &spec,
            placement.as_deref(),
            code.as_deref(),
            out.as_deref(),
            csv.as_deref(),
            budget,
        ),
        Command::Oracle {
            spec,
            mode,
            budget,
            nng_cap,
            verify,
            out,
        } => {
            let mode = match mode {
                ModeArg::Admissible => OracleMode::AdmissibleOnly,
                ModeArg::Unrestricted => OracleMode::Unrestricted,
            };
            cmd_oracle(&spec, mode, budget, nng_cap, verify, out.as_deref())
        }
        Command::Export {
            spec,
            out,
            all_nngs,
            nng_cap,
        } => cmd_export(&spec, &out, all_nngs, nng_cap),
        Command::Expand { spec, out } => cmd_expand(&spec, out.as_deref()),
    }
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_json(path: &Path, value: &serde_json::Value) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// Reads and validates a spec; warnings go to standard error.
fn load_spec(args: &SpecArgs) -> Result<NetworkSpec, Failure> {
    let text = read_text(&args.spec)?;
    let rtt = args.rtt_csv.as_deref().map(read_text).transpose()?;
    let demands = args.demands_csv.as_deref().map(read_text).transpose()?;
    let spec = io::parse_spec(&text, rtt.as_deref(), demands.as_deref())
        .with_context(|| format!("parsing {}", args.spec.display()))?;
    let report = validate_spec(&spec);
    if !args.strict {
        for w in &report.warnings {
            eprintln!("warning: {w}");
        }
    }
    report.into_result(args.strict)?;
    Ok(spec)
}

fn cmd_validate(args: &SpecArgs, out: Option<&Path>) -> Outcome {
    let text = read_text(&args.spec)?;
    let rtt = args.rtt_csv.as_deref().map(read_text).transpose()?;
    let demands = args.demands_csv.as_deref().map(read_text).transpose()?;
    let spec = io::parse_spec(&text, rtt.as_deref(), demands.as_deref())?;
    let report = validate_spec(&spec);
    print!("{}", summary::validation(&spec, &report, args.strict));
    if let Some(path) = out {
        write_json(path, &io::validation_json(&report, args.strict))?;
    }
    Ok(if report.is_ok(args.strict) {
        0
    } else {
        EXIT_VALIDATION
    })
}

fn cmd_plan(args: &SpecArgs, opts: &PlanOptions, trace: bool, out: Option<&Path>) -> Outcome {
    let spec = load_spec(args)?;
    let outcome = plan(&spec, opts)?;
    let trace = match (&outcome, trace) {
        (PlanOutcome::Planned(r), true) => {
            let hopts = HungarianOptions {
                trace: true,
                ..Default::default()
            };
            hungarian_min_assignment(r.cost_matrix.rows(), &hopts)?.trace
        }
        _ => None,
    };
    print!("{}", summary::plan(&spec, &outcome, trace.as_ref()));
    if let Some(path) = out {
        write_json(path, &io::plan_report_json(&outcome, trace.as_ref()))?;
    }
    Ok(match outcome {
        PlanOutcome::Planned(_) => 0,
        PlanOutcome::Infeasible(_) => EXIT_INFEASIBLE,
    })
}

fn cmd_eval(
    args: &SpecArgs,
    placement: Option<&Path>,
    code: Option<&Path>,
    out: Option<&Path>,
    csv: Option<&Path>,
    budget: u64,
) -> Outcome {
    let spec = load_spec(args)?;
    let (report, recovery) = match (placement, code) {
        (Some(path), _) => {
            let text = read_text(path)?;
            let context = || format!("reading placement {}", path.display());
            let report = if spec.is_unit_capacity() {
                eval_uncoded(
                    &spec,
                    &io::parse_unit_placement(&spec, &text).with_context(context)?,
                )?
            } else {
                eval_multifile(
                    &spec,
                    &io::parse_placement(&spec, &text).with_context(context)?,
                )?
            };
            (report, None)
        }
        (None, Some(path)) => {
            let code = io::parse_code(&read_text(path)?)
                .with_context(|| format!("reading code {}", path.display()))?;
            let (report, plan) = eval_linear_code(&spec, &code, budget)?;
            (report, Some(plan))
        }
        (None, None) => return Err(anyhow!("either --placement or --code is required").into()),
    };
    print!("{}", summary::latency(&spec, &report));
    if let Some(path) = out {
        write_json(
            path,
            &io::latency_report_json(&spec, &report, recovery.as_ref()),
        )?;
    }
    if let Some(path) = csv {
        write_text(path, &io::latency_report_csv(&spec, &report)?)?;
    }
    Ok(0)
}

fn cmd_oracle(
    args: &SpecArgs,
    mode: OracleMode,
    budget: u64,
    nng_cap: usize,
    verify: bool,
    out: Option<&Path>,
) -> Outcome {
    let spec = load_spec(args)?;
    let expanded = expand_multifile(&spec)?;
    let result = brute_force_placement(&spec, mode, budget, nng_cap)?;
    let verdict = if verify {
        let outcome = plan(&spec, &PlanOptions::default())?;
        Some(verify_plan(&spec, &outcome, budget, nng_cap)?)
    } else {
        None
    };
    print!(
        "{}",
        summary::oracle(&expanded.spec, &result, verdict.as_ref())
    );
    if let Some(path) = out {
        write_json(
            path,
            &io::oracle_report_json(&expanded.spec, &result, verdict.as_ref()),
        )?;
    }
    Ok(match verdict {
        Some(Verdict::Counterexample(_)) => EXIT_COUNTEREXAMPLE,
        Some(Verdict::Unverified { .. }) => EXIT_BUDGET,
        _ => 0,
    })
}

fn cmd_export(args: &SpecArgs, out: &Path, all_nngs: bool, nng_cap: usize) -> Outcome {
    let spec = load_spec(args)?;
    let expanded = expand_multifile(&spec)?;
    let unit = &expanded.spec;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut written = Vec::new();
    let mut emit = |name: String, text: String| -> anyhow::Result<()> {
        let path = out.join(name);
        write_text(&path, &text)?;
        written.push(path);
        Ok(())
    };
    if all_nngs {
        let e = enumerate_nngs(unit, nng_cap)?;
        if e.truncated {
            eprintln!(
                "warning: exported {} of {} nearest-neighbor graphs",
                e.graphs.len(),
                e.total
            );
        }
        for (i, g) in e.graphs.iter().enumerate() {
            emit(format!("nng-{i}.dot"), dot::nng_to_dot(unit, g))?;
            emit(
                format!("extended-{i}.dot"),
                dot::extended_to_dot(unit, &build_extended_graph(g)),
            )?;
        }
    } else {
        let g = build_nng(unit, TieBreak::NodeId)?;
        emit("nng.dot".into(), dot::nng_to_dot(unit, &g))?;
        emit(
            "extended.dot".into(),
            dot::extended_to_dot(unit, &build_extended_graph(&g)),
        )?;
    }
    emit("spec.json".into(), io::spec_to_json(&spec) + "\n")?;
    for path in &written {
        println!("{}", path.display());
    }
    Ok(0)
}

fn cmd_expand(args: &SpecArgs, out: Option<&Path>) -> Outcome {
    let spec = load_spec(args)?;
    let expanded = expand_multifile(&spec)?;
    let text = io::spec_to_json(&expanded.spec) + "\n";
    match out {
        Some(path) => write_text(path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}
