//! flowsieve CLI: synthesize, inspect, train, evaluate and benchmark.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

#[derive(Parser)]
#[command(
    name = "flowsieve",
    version,
    about = "DDoS detection on network-flow records with three from-scratch classifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a deterministic synthetic flow dataset
    Synth(SynthArgs),
    /// Train one classifier and save the model artifact
    Train(TrainArgs),
    /// Evaluate a saved model against a dataset
    Evaluate(EvaluateArgs),
    /// Train all three classifiers on one shared split and compare them
    Bench(BenchArgs),
    /// Print per-class summary statistics and benign/DDoS variance ratios
    Inspect(InspectArgs),
}

#[derive(Args)]
struct DataArgs {
    /// Input dataset CSV
    #[arg(long, value_name = "PATH")]
    data: PathBuf,
    /// Column name-mapping file (`feature = Header Name` lines) for
    /// non-standard CSV headers
    #[arg(long, value_name = "PATH")]
    columns: Option<PathBuf>,
}

#[derive(Args)]
struct FeatureArgs {
    /// Comma-separated training features [default:
    /// total_len_fwd,total_len_bwd,init_win_fwd,init_win_bwd]
    #[arg(long, value_delimiter = ',', value_name = "A,B,C")]
    features: Option<Vec<String>>,
}

#[derive(Args)]
struct SplitArgs {
    /// Fraction of rows held out as the test set, in (0, 1)
    #[arg(long, default_value_t = 0.2)]
    test_fraction: f64,
    /// Seed for the split and for SVM epoch shuffling
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Split without preserving class proportions
    #[arg(long)]
    no_stratify: bool,
}

#[derive(Args)]
struct HyperArgs {
    /// Logistic-regression learning rate
    #[arg(long, default_value_t = 0.1)]
    lr: f64,
    /// Logistic-regression gradient-descent iterations
    #[arg(long, default_value_t = 500)]
    iters: usize,
    /// Logistic-regression L2 penalty
    #[arg(long, default_value_t = 1e-4)]
    l2: f64,
    /// SVM regularization strength λ
    #[arg(long, default_value_t = 1e-4)]
    lambda: f64,
    /// SVM training epochs
    #[arg(long, default_value_t = 100)]
    epochs: usize,
    /// Decision-tree maximum depth
    #[arg(long, default_value_t = 10)]
    max_depth: usize,
    /// Decision-tree minimum samples to split a node
    #[arg(long, default_value_t = 2)]
    min_samples_split: usize,
}

#[derive(Args)]
struct SynthArgs {
    /// Output CSV path
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Benign rows to generate [default: 1000]
    #[arg(long, value_name = "N", allow_negative_numbers = true)]
    n_benign: Option<i64>,
    /// Attack rows to generate [default: 1000]
    #[arg(long, value_name = "N", allow_negative_numbers = true)]
    n_ddos: Option<i64>,
    /// Generator seed [default: 42]
    #[arg(long)]
    seed: Option<u64>,
    /// Class-location overlap in [0, 1] [default: 0.25]
    #[arg(long)]
    overlap: Option<f64>,
    /// Generator config file (`key = value` lines); explicit flags win
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Emit the two-blob separable fixture instead of the phase dataset
    #[arg(long)]
    separable: bool,
    /// Blob margin for --separable
    #[arg(long, default_value_t = 2.0)]
    margin: f64,
    /// Rows per class for --separable
    #[arg(long, default_value_t = 100)]
    n_per_class: usize,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Which classifier to train: logistic, svm or tree
    #[arg(long)]
    algo: String,
    /// Output path for the model artifact
    #[arg(long, value_name = "PATH")]
    model: PathBuf,
    #[command(flatten)]
    features: FeatureArgs,
    #[command(flatten)]
    split: SplitArgs,
    #[command(flatten)]
    hyper: HyperArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Model artifact to evaluate
    #[arg(long, value_name = "PATH")]
    model: PathBuf,
    #[command(flatten)]
    data: DataArgs,
    /// Rows to evaluate: `test` (the model's recorded held-out split),
    /// `train`, or `all`
    #[arg(long, default_value = "test")]
    on: String,
    /// Also write the report as CSV
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    features: FeatureArgs,
    #[command(flatten)]
    split: SplitArgs,
    #[command(flatten)]
    hyper: HyperArgs,
    /// Also write the scoreboard as CSV
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InspectArgs {
    #[command(flatten)]
    data: DataArgs,
}

fn main() -> ExitCode {
    // Die quietly when the read end of a pipe goes away (`flowsieve … | head`)
    // instead of panicking on EPIPE.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(args) => commands::synth(args),
        Command::Train(args) => commands::train(args),
        Command::Evaluate(args) => commands::evaluate(args),
        Command::Bench(args) => commands::bench(args),
        Command::Inspect(args) => commands::inspect(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
