//! Command-line front end for `locclab-core`: spec files, the decision
//! pipeline, batch sweeps and proof traces.

pub mod error;
pub mod pipeline;
pub mod spec;
pub mod sweep;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use locclab_core::{prove_infeasible, Outcome, SolverConfig};

pub use error::{CliError, Result};
pub use pipeline::{decide, DecideOptions, DecideReport, ProverStatus};
pub use spec::{load_file, LoadedSet, StateSetSpec};
pub use sweep::{subsets, sweep, SweepOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "locclab",
    version,
    about = "One-way LOCC distinguishability of Bell-type state sets"
)]
pub struct Cli {
    /// Solver restarts (also used for each witness-basis vector).
    #[arg(long, global = true, default_value_t = 200)]
    pub restarts: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report format; `trace` always prints the trace text.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the full pipeline on one spec file.
    Decide {
        file: PathBuf,
        #[arg(long)]
        skip_prover: bool,
        #[arg(long)]
        skip_sim: bool,
        /// Write the proof trace to this path.
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Run the pipeline over every N-subset of Weyl indices in dimension d.
    Sweep {
        #[arg(long)]
        d: usize,
        #[arg(long = "N")]
        n: usize,
        /// Stop after this many subsets.
        #[arg(long)]
        limit: Option<usize>,
        /// Include subsets without (0,0).
        #[arg(long)]
        no_canonical: bool,
    },
    /// Print the infeasibility proof trace of an all-Weyl spec file.
    Trace { file: PathBuf },
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_table(reports: &[DecideReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(pipeline::CSV_HEADER)?;
    for r in reports {
        w.write_record(pipeline::csv_record(r))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Output text and exit code of one invocation.
pub fn execute(cli: &Cli) -> Result<(String, i32)> {
    let solver = SolverConfig {
        restarts: cli.restarts,
        seed: cli.seed,
        ..SolverConfig::default()
    };
    solver.validate()?;
    match &cli.command {
        Command::Decide {
            file,
            skip_prover,
            skip_sim,
            trace_out,
        } => {
            let loaded = load_file(file)?;
            let opts = DecideOptions {
                solver,
                skip_prover: *skip_prover,
                skip_sim: *skip_sim,
            };
            let report = decide(&loaded.set, loaded.weyl.as_deref(), &opts)?;
            let trace_path = match (&report.prover, trace_out) {
                (ProverStatus::Ran(t), Some(p)) => {
                    write_file(p, &t.to_text())?;
                    Some(p.display().to_string())
                }
                _ => None,
            };
            let text = match cli.format {
                Format::Text => pipeline::text_report(&report, trace_path.as_deref()),
                Format::Csv => csv_table(std::slice::from_ref(&report))?,
            };
            Ok((text, report.exit_code()))
        }
        Command::Sweep {
            d,
            n,
            limit,
            no_canonical,
        } => {
            let opts = SweepOptions {
                d: *d,
                n: *n,
                canonical: !no_canonical,
                limit: *limit,
            };
            let reports = sweep(
                &opts,
                &DecideOptions {
                    solver,
                    ..DecideOptions::default()
                },
            )?;
            let text = match cli.format {
                Format::Csv => csv_table(&reports)?,
                Format::Text => reports
                    .iter()
                    .map(|r| pipeline::text_report(r, None))
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            Ok((text, 0))
        }
        Command::Trace { file } => {
            let loaded = load_file(file)?;
            let idx = match (&loaded.weyl, loaded.first_matrix) {
                (Some(idx), _) => idx,
                (None, i) => {
                    return Err(CliError::NotWeyl(format!("unitaries[{}]", i.unwrap_or(0))))
                }
            };
            let trace = prove_infeasible(idx)?;
            let code = if trace.outcome == Outcome::Infeasible {
                0
            } else {
                2
            };
            Ok((trace.to_text(), code))
        }
    }
}

/// Executes `cli` and writes its output to `--out` or stdout.
pub fn run(cli: &Cli) -> Result<i32> {
    let (text, code) = execute(cli)?;
    match &cli.out {
        Some(p) => write_file(p, &text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    Ok(code)
}

/// Sizes the global worker pool, capped by `LOCCLAB_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("LOCCLAB_THREADS") else {
        return Ok(());
    };
    let cap: usize = v.trim().parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
        CliError::Usage(format!(
            "LOCCLAB_THREADS must be a positive integer, got {v:?}"
        ))
    })?;
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    rayon::ThreadPoolBuilder::new()
        .num_threads(cap.min(available))
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}
