//! `guesswork` command-line tool.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use guesswork_core::{OutcomeRule, Parameterization, TieBreak};

use crate::error::CliError;

/// Largest dimension accepted on the command line.
pub const MAX_DIM: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "guesswork", version, about = "Guesswork with quantum side information")]
struct Cli {
    /// Directory for cached optimizer results
    #[arg(long, global = true, env = "GUESSWORK_CACHE_DIR", value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Guesswork of a measurement on the generalized BB84 ensemble
    Evaluate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        opt: OptimizerArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Search for a guesswork-minimizing projective measurement
    Optimize {
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        opt: OptimizerArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Replay the finite-shot guessing game
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        opt: OptimizerArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Theory and simulation for all six standard/optimal scenarios, d = 2, 3, 4
    Table1 {
        #[command(flatten)]
        opt: OptimizerArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeasurementKind {
    Standard,
    Optimal,
    File,
}

#[derive(Args, Debug, Clone)]
pub struct ScenarioArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, value_enum, default_value = "standard")]
    pub measurement: MeasurementKind,
    /// Measurement file (bare basis, optimize output, or evaluate output)
    #[arg(long, value_name = "FILE")]
    pub path: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct OptimizerArgs {
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "general", value_parser = parse_parameterization)]
    pub parameterization: Parameterization,
}

#[derive(Args, Debug, Clone)]
pub struct SimArgs {
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// `identity`, `synthetic`, or a CSV file
    #[arg(long, value_name = "SPEC")]
    pub crosstalk: Option<String>,
    /// Leak strength for the synthetic crosstalk model
    #[arg(long)]
    pub leak: Option<f64>,
    #[arg(long, value_enum, default_value = "relative-rate")]
    pub rule: RuleArg,
    /// Tie convention for the guessing plan (table1 defaults to alternating)
    #[arg(long, value_enum)]
    pub ties: Option<TiesArg>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    RelativeRate,
    Modal,
}

impl From<RuleArg> for OutcomeRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::RelativeRate => OutcomeRule::RelativeRate,
            RuleArg::Modal => OutcomeRule::Modal,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TiesArg {
    Ascending,
    Alternating,
}

impl From<TiesArg> for TieBreak {
    fn from(t: TiesArg) -> Self {
        match t {
            TiesArg::Ascending => TieBreak::Ascending,
            TiesArg::Alternating => TieBreak::Alternating,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
    /// Write the report here (JSON unless --csv) and print a summary
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

fn parse_parameterization(s: &str) -> Result<Parameterization, String> {
    s.parse().map_err(|e: guesswork_core::GuessworkError| e.to_string())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cache = cli.cache_dir.as_deref();
    match cli.command {
        Command::Evaluate { scenario, opt, out } => commands::evaluate(&scenario, &opt, &out, cache),
        Command::Optimize { dim, opt, out } => commands::optimize(dim, &opt, &out, cache),
        Command::Simulate { scenario, opt, sim, out } => commands::simulate(&scenario, &opt, &sim, &out, cache),
        Command::Table1 { opt, sim, out } => commands::table1(&opt, &sim, &out, cache),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(error::EXIT_VALIDATION) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
