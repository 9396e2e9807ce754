//! `banditbench` — run wheel-versus-policy experiments, compare policies
//! against a control with one-way ANOVA, evaluate the top-reward
//! distribution, and emit plot-ready histogram data.

mod commands;
mod error;
mod histogram;
mod manifest;
mod results;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{GlobalFlags, HistogramArgs};
use histogram::Metric;

#[derive(Parser)]
#[command(name = "banditbench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Override the config's base seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Bound worker parallelism (default: one worker per CPU).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Emit CSV where applicable (per-session dump for `run`, CSV table for
    /// `anova`).
    #[arg(long, global = true)]
    csv: bool,

    /// Suppress console summaries.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config and write results JSON.
    Run {
        /// Experiment config (JSON).
        config: PathBuf,
        /// Results output path (JSON).
        #[arg(short, long)]
        out: PathBuf,
    },
    /// One-way ANOVA of every policy against a control group, plus an
    /// omnibus row over all groups.
    Anova {
        /// Results file produced by `run`.
        results: PathBuf,
        /// Label of the control policy.
        #[arg(long, default_value = "random")]
        control: String,
    },
    /// Closed-form analyses.
    Analyze {
        #[command(subcommand)]
        what: AnalyzeCommand,
    },
    /// Emit histogram CSV (`group,bin_lo,bin_hi,count`) from a results file.
    Histogram {
        /// Results file produced by `run`.
        results: PathBuf,
        #[arg(long, value_enum)]
        metric: Metric,
        /// Number of equal-width bins over the global value range.
        #[arg(long, default_value_t = 20)]
        bins: usize,
        /// Explicit strictly-increasing bin edges (overrides --bins).
        #[arg(long, value_delimiter = ',', conflicts_with = "bins")]
        edges: Option<Vec<f64>>,
        /// Histogram output path (CSV).
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum AnalyzeCommand {
    /// Probability each arm provides the highest realized reward, by closed
    /// form and by exhaustive enumeration.
    Topreward {
        /// Per-arm win probabilities, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        theta: Vec<f64>,
        /// Per-arm net payouts, comma separated (pairwise distinct).
        #[arg(long, value_delimiter = ',', required = true)]
        payout: Vec<i64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags =
        GlobalFlags { seed: cli.seed, threads: cli.threads, csv: cli.csv, quiet: cli.quiet };

    let outcome = match &cli.command {
        Command::Run { config, out } => commands::cmd_run(config, out, &flags),
        Command::Anova { results, control } => commands::cmd_anova(results, control, &flags),
        Command::Analyze { what } => match what {
            AnalyzeCommand::Topreward { theta, payout } => commands::cmd_topreward(theta, payout),
        },
        Command::Histogram { results, metric, bins, edges, out } => commands::cmd_histogram(
            &HistogramArgs {
                results: results.clone(),
                metric: *metric,
                bins: *bins,
                edges: edges.clone(),
                out: out.clone(),
            },
            &flags,
        ),
    };

    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
