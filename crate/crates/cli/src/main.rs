//! `hsprob`: Monte Carlo PPT probabilities of Hilbert-Schmidt random states.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 configuration or
//! I/O error.

mod commands;
mod parse;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hsprob::conjecture::Ranking;
use hsprob::Field;

#[derive(Debug, Parser)]
#[command(name = "hsprob", version, about = "Separability probabilities of Hilbert-Schmidt random states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate the PPT probability of one shape and write a JSON report.
    Estimate(EstimateArgs),
    /// Rank small-prime rationals near an estimate.
    Conjecture(ConjectureArgs),
    /// Run a verification suite; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Write the running estimate as CSV, from a fresh run or a checkpoint.
    Trace(TraceArgs),
}

#[derive(Debug, Args)]
struct ShapeArgs {
    /// Subsystem dimensions as MxN.
    #[arg(long, value_parser = parse::dims, default_value = "2x2")]
    dims: (usize, usize),
    /// Rank of the sampled states [default: M·N].
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, default_value = "complex")]
    field: Field,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Number of trials; scientific notation such as 1e7 is accepted.
    #[arg(long, value_parser = parse::count)]
    trials: Option<u64>,
    #[arg(long, env = "HSPROB_SEED", default_value_t = 1)]
    seed: u64,
    #[arg(long, value_parser = parse::count, default_value = "1e5")]
    batch_size: u64,
    /// Worker threads; 0 uses every available core. Results do not depend on it.
    #[arg(long, env = "HSPROB_WORKERS", default_value_t = 0)]
    workers: usize,
    #[arg(long, value_parser = parse::non_negative_f64, default_value_t = 1e-10)]
    psd_tol: f64,
    #[arg(long, value_parser = parse::non_negative_f64, default_value_t = 1e-10)]
    ppt_tol: f64,
    #[arg(long, value_parser = parse::non_negative_f64, default_value_t = 1e-13)]
    rankdef_tol: f64,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Normal quantile of the reported Wilson interval.
    #[arg(long, value_parser = parse::positive_f64, default_value_t = 1.96)]
    z: f64,
    /// Report path; standard output when absent.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Also write the convergence trace CSV here.
    #[arg(long)]
    trace: Option<std::path::PathBuf>,
    /// Trace row spacing in trials [default: one batch].
    #[arg(long, value_parser = parse::count)]
    trace_stride: Option<u64>,
    /// Rewrite this checkpoint after every completed batch.
    #[arg(long)]
    checkpoint: Option<std::path::PathBuf>,
    /// Continue from a checkpoint written by an identical configuration.
    #[arg(long)]
    resume: Option<std::path::PathBuf>,
    /// Stop after this many batches in total, leaving only the checkpoint.
    #[arg(long, value_parser = parse::count)]
    stop_after: Option<u64>,
    /// Offset added to batch indices when selecting random streams.
    #[arg(long, default_value_t = 0)]
    stream_offset: u64,
}

#[derive(Debug, Args)]
struct ConjectureArgs {
    /// Point estimate.
    #[arg(long, conflicts_with = "report", required_unless_present = "report")]
    phat: Option<f64>,
    /// Sample size behind the estimate; sets the default window.
    #[arg(long, value_parser = parse::count)]
    trials: Option<u64>,
    /// Take the estimate and sample size from an `estimate` report.
    #[arg(long)]
    report: Option<std::path::PathBuf>,
    /// Half-width of the search window around the estimate. Without it the
    /// window is the Wilson interval at --z.
    #[arg(long, value_parser = parse::non_negative_f64, conflicts_with_all = ["lo", "hi"])]
    interval: Option<f64>,
    #[arg(long, requires = "hi")]
    lo: Option<f64>,
    #[arg(long, requires = "lo")]
    hi: Option<f64>,
    #[arg(long, value_parser = parse::positive_f64, default_value_t = 4.0)]
    z: f64,
    /// Allowed prime factors of denominators.
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,11,13")]
    primes: Vec<u64>,
    #[arg(long, value_parser = parse::count, default_value = "1e7")]
    max_den: u64,
    #[arg(long, default_value = "coincidence")]
    ranking: Ranking,
    /// Candidates to keep; 0 keeps all.
    #[arg(long, default_value_t = 20)]
    limit: usize,
    /// Candidate list JSON path; `-` for standard output.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    HalfTheorem,
    ZeroRank,
    DetSplit,
    KnownValues,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Subsystem dimensions [half-theorem: 2x2, zero-rank: 2x3].
    #[arg(long, value_parser = parse::dims)]
    dims: Option<(usize, usize)>,
    /// Field [zero-rank: both].
    #[arg(long)]
    field: Option<Field>,
    /// Rank for zero-rank [default: max(M, N)].
    #[arg(long)]
    rank: Option<usize>,
    #[command(flatten)]
    run: RunArgs,
    /// Tolerance in standard errors.
    #[arg(long, value_parser = parse::positive_f64, default_value_t = 4.0)]
    n_sigma: f64,
    /// Restrict known-values to these catalog entries.
    #[arg(long = "name")]
    names: Vec<String>,
    /// Write the checks as JSON.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
struct TraceArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_parser = parse::positive_f64, default_value_t = 1.96)]
    z: f64,
    /// Row spacing in trials [default: one batch].
    #[arg(long, value_parser = parse::count)]
    stride: Option<u64>,
    /// Trace the batches stored in a checkpoint instead of running.
    #[arg(long)]
    from_checkpoint: Option<std::path::PathBuf>,
    /// CSV path; standard output when absent.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate(a) => commands::estimate(a),
        Command::Conjecture(a) => commands::conjecture(a),
        Command::Verify(a) => commands::verify(a),
        Command::Trace(a) => commands::trace(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(commands::Failure::Checks) => ExitCode::from(1),
        Err(commands::Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
