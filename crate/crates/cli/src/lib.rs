//! Command-line front end for truncalab: parameter sweeps, single-election
//! evaluation from ballot files, and SVG charts of sweep results.

pub mod ballot_file;
pub mod commands;
pub mod plot;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use truncalab::rules::LastPlaceConvention;
use truncalab::Rule;

use crate::plot::GroupBy;

#[derive(Debug, Parser)]
#[command(
    name = "truncalab",
    version,
    about = "Voting rules under forced ballot truncation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the truncation sweep and write a results CSV.
    Simulate(SimulateArgs),
    /// Apply rules to a single ballot file.
    Evaluate(EvaluateArgs),
    /// Render a results CSV as SVG charts.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_delimiter = ',', default_value = "4,5,6,7")]
    pub candidates: Vec<usize>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "100,200,300,400,500,600,2000"
    )]
    pub voters: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_value = "0.7,0.8,0.9,1.0")]
    pub phi: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "bucklin,coombs,plurality_runoff,schulze"
    )]
    pub rules: Vec<Rule>,
    /// Results CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Append every generated profile to this file, one line per trial.
    #[arg(long, value_name = "PATH")]
    pub store_profiles: Option<PathBuf>,
    /// Thread count, `single`, or `auto`.
    #[arg(long, env = "TRUNCALAB_WORKERS", default_value = "auto")]
    pub workers: String,
    #[arg(long, default_value = "full")]
    pub coombs_last_place: LastPlaceConvention,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long, value_name = "FILE")]
    pub profile: PathBuf,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "bucklin,coombs,plurality_runoff,schulze"
    )]
    pub rules: Vec<Rule>,
    /// Truncate every ballot to this many places before evaluating.
    #[arg(long, value_name = "L")]
    pub truncate: Option<usize>,
    #[arg(long, default_value = "full")]
    pub coombs_last_place: LastPlaceConvention,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long = "in", value_name = "CSV")]
    pub input: PathBuf,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    pub group_by: GroupBy,
}

/// Parses arguments and runs the selected command. Exit status is 0 on
/// success, 1 on I/O failure and 2 on invalid input.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => commands::simulate(&args),
        Command::Evaluate(args) => commands::evaluate(&args),
        Command::Plot(args) => commands::plot(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
