//! `rfkm`: fit, evaluate and benchmark representativity-fair K-Means.
//!
//! Exit status: 0 on success, 1 on runtime errors (unreadable data,
//! inconsistent inputs, failed self-checks), 2 on usage or configuration
//! errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rfkm_core::harness::ClusterCount;
use rfkm_core::Lambda2;

#[derive(Debug, Parser)]
#[command(name = "rfkm", version, about = "Representativity-fair K-Means clustering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cluster a CSV file, write the clustering as JSON and print its metrics.
    Fit(FitArgs),
    /// Print the metrics of a precomputed clustering.
    Eval(EvalArgs),
    /// Run a multi-restart experiment described by a TOML config.
    Bench(BenchArgs),
    /// Score the two built-in toy examples and check their expected ordering.
    Toy(ToyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Km,
    Rfkm,
}

#[derive(Debug, clap::Args)]
struct InputArgs {
    /// Headered CSV file.
    #[arg(long)]
    input: PathBuf,
    /// Column holding class labels. Defaults to the last column when its
    /// values are not numeric.
    #[arg(long)]
    label_column: Option<String>,
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    /// Min-max scale every attribute to [0, 1] first.
    #[arg(long)]
    normalize: bool,
}

#[derive(Debug, clap::Args)]
struct FitArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Number of clusters, or `auto` for the number of distinct labels.
    #[arg(long, value_parser = parse_k)]
    k: ClusterCount,
    #[arg(long, value_enum, default_value_t = MethodArg::Rfkm)]
    method: MethodArg,
    #[arg(long, default_value_t = 1.0)]
    lambda1: f64,
    /// Weight of the smoothed-max term; `auto` is n/10.
    #[arg(long, default_value_t = Lambda2::Auto)]
    lambda2: Lambda2,
    #[arg(long, default_value_t = 3.0)]
    phi: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on assignment sweeps.
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    /// Where to write the clustering JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, clap::Args)]
struct EvalArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Clustering JSON with `assignment` and `representatives`.
    #[arg(long)]
    clustering: PathBuf,
}

#[derive(Debug, clap::Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `output_dir` from the config.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct ToyArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    case: u8,
}

fn parse_k(s: &str) -> Result<ClusterCount, String> {
    match s.parse::<ClusterCount>()? {
        ClusterCount::Fixed(0) => Err("k must be at least 1".into()),
        k => Ok(k),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let outcome = match cli.command {
        Command::Fit(args) => commands::fit(&args),
        Command::Eval(args) => commands::eval(&args),
        Command::Bench(args) => commands::bench(&args),
        Command::Toy(args) => commands::toy(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
