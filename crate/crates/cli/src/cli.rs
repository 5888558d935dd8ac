//! Command-line arguments.

use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};
use coverageability_core::dataset::Variant;
use coverageability_core::inference::DEFAULT_GATE_THRESHOLD;
use coverageability_core::inspection::DEFAULT_REPEATS;
use coverageability_core::report::DEFAULT_BINS;

use crate::config::DEFAULT_TOP;

#[derive(Debug, Parser)]
#[command(name = "coverageability", version, about = "Predict how testable Java classes are from source metrics")]
pub struct Cli {
    /// Seed for every random choice; required by stochastic commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Directory for outputs whose path is not given explicitly.
    #[arg(long, global = true, env = "COVERAGEABILITY_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "COVERAGEABILITY_THREADS")]
    pub threads: Option<usize>,
    /// More log output; repeat for debug level.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the metrics table of a Java source tree.
    Extract(ExtractArgs),
    /// Turn a coverage report into target values.
    Label(LabelArgs),
    /// Join metrics with coverage and build a train/test dataset.
    Dataset(DatasetArgs),
    /// Grid search learners on a dataset and save the winners.
    Train(TrainArgs),
    /// Score a model on a dataset's test rows.
    Evaluate(EvaluateArgs),
    /// Predict Coverageability for classes of a source tree.
    Predict(PredictArgs),
    /// Fail when any class falls below a threshold.
    Gate(GateArgs),
    /// Permutation importance and metric impact of a model.
    Inspect(InspectArgs),
    /// Histogram of the label distribution.
    Report(ReportArgs),
    /// Run every stage from a configuration file.
    Pipeline(PipelineArgs),
    /// Write a synthetic Java project with coverage and a pipeline config.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Root of the Java source tree.
    pub source: PathBuf,
    /// Output table [default: <out-dir>/metrics.csv].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    /// Coverage report with class, statement_coverage, branch_coverage, test_suite_size.
    pub coverage: PathBuf,
    /// Budget of influential test cases.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub b: u64,
    /// Output labels [default: <out-dir>/labels.csv].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DatasetArgs {
    /// Metrics table written by `extract`.
    #[arg(long)]
    pub metrics: PathBuf,
    #[arg(long)]
    pub coverage: PathBuf,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub b: u64,
    #[arg(long, default_value = "DS3")]
    pub variant: Variant,
    #[arg(long)]
    pub train_fraction: Option<f64>,
    #[arg(long)]
    pub lof_k: Option<usize>,
    #[arg(long)]
    pub lof_threshold: Option<f64>,
    #[arg(long)]
    pub select_k: Option<usize>,
    /// Output directory [default: <out-dir>/dataset].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Directory written by `dataset`.
    #[arg(long)]
    pub dataset: PathBuf,
    /// sgdr, mlp, rfr, hgbr, vor or all; repeatable.
    #[arg(long = "learner", default_value = "all")]
    pub learners: Vec<String>,
    /// Grid preset (reduced, full) or a TOML grid file.
    #[arg(long, default_value = "reduced")]
    pub grid: String,
    /// Output directory [default: <out-dir>/models].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub dataset: PathBuf,
    /// Output report [default: <out-dir>/evaluation.json].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Root of the Java source tree.
    pub source: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// Qualified class name; repeatable. All classes when absent.
    #[arg(long = "class")]
    pub classes: Vec<String>,
    /// Output predictions [default: <out-dir>/predictions.csv].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GateArgs {
    /// Predictions written by `predict`.
    pub predictions: PathBuf,
    #[arg(long, default_value_t = DEFAULT_GATE_THRESHOLD)]
    pub threshold: f64,
    /// Also write the report as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, default_value_t = DEFAULT_REPEATS)]
    pub repeats: usize,
    /// Number of top-ranked metrics in the impact table.
    #[arg(long, default_value_t = DEFAULT_TOP)]
    pub top: usize,
    /// Output directory [default: <out-dir>].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Labels written by `label`.
    pub labels: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    /// Also write an SVG chart next to the table.
    #[arg(long)]
    pub svg: bool,
    /// Output table [default: <out-dir>/distribution.csv].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// TOML configuration file.
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 120)]
    pub classes: usize,
    /// Output directory [default: <out-dir>/synthetic].
    #[arg(long)]
    pub out: Option<PathBuf>,
}
