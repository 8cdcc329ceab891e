//! `satsched`: generate, preprocess, analyse, export, solve and check
//! observation scheduling instances.

mod commands;
mod io;
mod manifest;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use satsched_core::{Formulation, ObjectiveKind, Style};

/// Bad invocation detected after argument parsing. Exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser, Debug)]
#[command(name = "satsched", version, about = "Observation scheduling pipeline for agile satellites")]
pub struct Cli {
    /// Write the run manifest (command, inputs, seed, digests, wall time) to this file
    #[arg(long, global = true, value_name = "FILE")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a synthetic instance
    Generate(GenerateArgs),
    /// Fix free missions and compute subinterval capacities
    Preprocess(PreprocessArgs),
    /// Per-resource contention and per-instance summary tables
    Stats(StatsArgs),
    /// Export a MILP model as LP or MPS
    Build(BuildArgs),
    /// Solve an instance to optimality or until a limit
    Solve(SolveArgs),
    /// Check a schedule against an instance
    Validate(ValidateArgs),
    /// Merge solve reports into one results table
    Report(ReportArgs),
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, value_parser = parse_style)]
    pub style: Style,
    #[arg(long)]
    pub missions: usize,
    #[arg(long)]
    pub resources: usize,
    /// Scheduling horizon in seconds
    #[arg(long, default_value_t = 86_400.0)]
    pub horizon: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PreprocessArgs {
    /// Instance JSON (stdin if omitted or `-`)
    pub input: Option<PathBuf>,
    /// Emit the untouched normalized instance with nothing fixed
    #[arg(long)]
    pub no_preprocess: bool,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    /// Instance or preprocessing JSON files (stdin if none)
    pub inputs: Vec<PathBuf>,
    /// Instance name for a single input (defaults to the file stem)
    #[arg(long)]
    pub name: Option<String>,
    /// Per-resource table (stdout if omitted)
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Also write the per-instance summary table
    #[arg(long, value_name = "FILE")]
    pub summary: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelFormat {
    Lp,
    Mps,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "improved", value_parser = parse_formulation)]
    pub formulation: Formulation,
    #[arg(long, default_value = "weight", value_parser = parse_objective)]
    pub objective: ObjectiveKind,
    /// Defaults to the output extension, else LP
    #[arg(long, value_enum)]
    pub format: Option<ModelFormat>,
    #[arg(long)]
    pub no_preprocess: bool,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Model statistics sidecar (defaults to `<output>.stats.json`)
    #[arg(long, value_name = "FILE")]
    pub stats: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "weight", value_parser = parse_objective)]
    pub objective: ObjectiveKind,
    /// Seconds
    #[arg(long)]
    pub time_limit: Option<f64>,
    #[arg(long)]
    pub node_limit: Option<u64>,
    #[arg(long, env = "SATSCHED_THREADS", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,
    /// Recorded in the manifest; the solvers are deterministic
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use exhaustive search (small instances only)
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub no_preprocess: bool,
    /// Instance name in the report (defaults to the file stem)
    #[arg(long)]
    pub name: Option<String>,
    /// Solve report JSON (stdout if omitted)
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Also write the schedule as CSV
    #[arg(long, value_name = "FILE")]
    pub schedule: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    /// Instance JSON
    pub instance: PathBuf,
    /// Schedule CSV in absolute time
    pub schedule: PathBuf,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// Solve report JSON files
    #[arg(required = true)]
    pub reports: Vec<PathBuf>,
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

fn parse_style(s: &str) -> Result<Style, String> {
    s.parse()
}

fn parse_formulation(s: &str) -> Result<Formulation, String> {
    s.parse()
}

fn parse_objective(s: &str) -> Result<ObjectiveKind, String> {
    s.parse()
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
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
