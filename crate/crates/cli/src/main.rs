use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod input;
mod output;

/// Extreme-value analysis of network degree sequences and random-walk
/// first hitting times.
#[derive(Debug, Parser)]
#[command(name = "netextremes", version)]
struct Cli {
    /// Directory for output files and run manifests.
    #[arg(long, env = "NETEXTREMES_OUT_DIR", default_value = ".", global = true)]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract the degree sequence and a summary.
    Degrees(commands::DegreesArgs),
    /// Tail-index estimates (Hill, Ratio, Moment) and the Hill curve.
    Tail(commands::TailArgs),
    /// Sample mean excess curve.
    Mex(commands::MexArgs),
    /// Extremal-index curve and plateau selection.
    Theta(commands::ThetaArgs),
    /// First-hitting-time model and geometric pmf.
    Fht(commands::FhtArgs),
    /// Empirical first hitting times of a sampler.
    Walk(commands::WalkArgs),
    /// Convergence-rate arithmetic for a Metropolis chain.
    Rate(commands::RateArgs),
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn category(err: &anyhow::Error) -> &'static str {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return "usage";
        }
        if let Some(e) = cause.downcast_ref::<netextremes::Error>() {
            return e.category();
        }
        if cause.is::<std::io::Error>() || cause.is::<csv::Error>() || cause.is::<serde_json::Error>() {
            return "io";
        }
    }
    "internal"
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return ExitCode::from(2);
        }
    };
    let out = cli.out_dir.as_path();
    let result = match &cli.command {
        Command::Degrees(a) => commands::degrees(a, out),
        Command::Tail(a) => commands::tail(a, out),
        Command::Mex(a) => commands::mex(a, out),
        Command::Theta(a) => commands::theta(a, out),
        Command::Fht(a) => commands::fht(a, out),
        Command::Walk(a) => commands::walk(a, out),
        Command::Rate(a) => commands::rate(a, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let cat = category(&err);
            let msg = format!("{err:#}").replace('\n', " ");
            eprintln!("error[{cat}]: {msg}");
            ExitCode::from(if cat == "usage" { 2 } else { 1 })
        }
    }
}
