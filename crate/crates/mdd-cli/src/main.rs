//! `mdd`: time-series similarity experiments from the command line.

mod commands;
mod manifest;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use mdd::envelope::{EpsilonConvention, EpsilonSet};
use mdd::io::Delimiter;
use mdd::measure::{DeltaNormalization, DtwCost};

#[derive(Parser)]
#[command(
    name = "mdd",
    version,
    about = "Multiscale Dubuc distance toolkit: distances, 1NN classification, tuning, evaluation, and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the distance between two inline series
    Compute(ComputeArgs),
    /// 1NN-classify a test set against a training set and write a report
    Classify(ClassifyArgs),
    /// Exhaustive leave-one-out parameter search for dtw or mdd
    Tune(TuneArgs),
    /// Gains, sharpshooter regions, and win significance from an accuracy table
    Eval(EvalArgs),
    /// Generate one of the two synthetic wave studies as UCR-format files
    Simulate(SimulateArgs),
}

/// Measure selection shared by compute and classify.
#[derive(Args, Debug)]
struct MeasureArgs {
    /// Distance measure to use
    #[arg(long, value_name = "NAME")]
    measure: String,

    /// Sakoe-Chiba band half-width in samples (dtw)
    #[arg(long, value_name = "W")]
    window: Option<usize>,

    /// Pointwise cost accumulated by dtw
    #[arg(long, default_value = "squared", value_name = "MODE")]
    dtw_cost: DtwCost,

    /// Comma-separated scale ladder (mdd), e.g. 1,2,4
    #[arg(long, value_name = "SCALES")]
    epsilons: Option<EpsilonSet>,

    /// Neighborhood reading of a scale: |t-s| <= eps or |t-s| < eps
    #[arg(long, default_value = "inclusive", value_name = "CONV")]
    epsilon_convention: EpsilonConvention,

    /// Trapezoid weight: divide by interval count or by scale count
    #[arg(long, default_value = "intervals", value_name = "NORM")]
    delta_normalization: DeltaNormalization,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    measure: MeasureArgs,

    /// First series, comma-separated values
    #[arg(value_name = "SERIES_A")]
    series_a: String,

    /// Second series, comma-separated values
    #[arg(value_name = "SERIES_B")]
    series_b: String,

    /// Write a run manifest to this path
    #[arg(long, value_name = "PATH")]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Training set in UCR text format
    #[arg(long, value_name = "PATH")]
    train: PathBuf,

    /// Test set in UCR text format
    #[arg(long, value_name = "PATH")]
    test: PathBuf,

    #[command(flatten)]
    measure: MeasureArgs,

    /// Field separator of the dataset files
    #[arg(long, default_value = "tab")]
    delimiter: Delimiter,

    /// Standardize both partitions with training-partition statistics
    #[arg(long)]
    zscore: bool,

    /// Write the JSON report here (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Write per-instance predictions as CSV
    #[arg(long, value_name = "PATH")]
    predictions: Option<PathBuf>,

    /// Write a run manifest to this path
    #[arg(long, value_name = "PATH")]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct TuneArgs {
    /// Training set in UCR text format
    #[arg(long, value_name = "PATH")]
    train: PathBuf,

    /// Measure to tune: dtw or mdd
    #[arg(long, value_name = "NAME")]
    measure: String,

    /// Largest scale as a fraction of the series length (mdd)
    #[arg(long, default_value_t = 0.3, value_name = "FRACTION")]
    eta: f64,

    /// Largest window to try (dtw); defaults to the series length
    #[arg(long, value_name = "W")]
    max_window: Option<usize>,

    /// Pointwise cost accumulated by dtw
    #[arg(long, default_value = "squared", value_name = "MODE")]
    dtw_cost: DtwCost,

    /// Neighborhood reading of a scale (mdd)
    #[arg(long, default_value = "inclusive", value_name = "CONV")]
    epsilon_convention: EpsilonConvention,

    /// Trapezoid weight (mdd)
    #[arg(long, default_value = "intervals", value_name = "NORM")]
    delta_normalization: DeltaNormalization,

    /// Field separator of the dataset file
    #[arg(long, default_value = "tab")]
    delimiter: Delimiter,

    /// Standardize the training set with its own statistics before tuning
    #[arg(long)]
    zscore: bool,

    /// Write the JSON tuning result here (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Write a run manifest to this path
    #[arg(long, value_name = "PATH")]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Accuracy table: dataset, acc_expected_mu1, acc_expected_mu2,
    /// acc_actual_mu1, acc_actual_mu2 (CSV with headers)
    #[arg(long, value_name = "PATH")]
    table: PathBuf,

    /// Name of the first measure, for the summary
    #[arg(long, default_value = "mu1", value_name = "NAME")]
    mu1: String,

    /// Name of the second measure, for the summary
    #[arg(long, default_value = "mu2", value_name = "NAME")]
    mu2: String,

    /// Write the per-dataset sharpshooter CSV here (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out_csv: Option<PathBuf>,

    /// Write the win-significance summary JSON here (stdout when omitted)
    #[arg(long, value_name = "PATH")]
    out_json: Option<PathBuf>,

    /// Write a run manifest to this path
    #[arg(long, value_name = "PATH")]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Which study to generate
    #[arg(long, value_parser = ["one", "two"], value_name = "STUDY")]
    which: String,

    /// Generator seed
    #[arg(long, value_name = "N")]
    seed: u64,

    /// Instances generated per class
    #[arg(long, default_value_t = 100, value_name = "N")]
    count_per_class: usize,

    /// Fraction of each class placed in the training split
    #[arg(long, default_value_t = 0.2, value_name = "FRACTION")]
    train_fraction: f64,

    /// Series length
    #[arg(long, default_value_t = 100, value_name = "D")]
    length: usize,

    /// Directory for the generated files
    #[arg(long, value_name = "DIR")]
    out_dir: PathBuf,

    /// Field separator of the written files
    #[arg(long, default_value = "tab")]
    delimiter: Delimiter,

    /// Manifest path; defaults to <out-dir>/manifest.json
    #[arg(long, value_name = "PATH")]
    manifest: Option<PathBuf>,
}

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Compute(args) => commands::compute(args),
        Command::Classify(args) => commands::classify(args),
        Command::Tune(args) => commands::tune(args),
        Command::Eval(args) => commands::eval(args),
        Command::Simulate(args) => commands::simulate(args),
    }
}
