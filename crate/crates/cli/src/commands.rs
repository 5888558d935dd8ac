//! One function per subcommand.

use std::path::{Path, PathBuf};

use coverageability_core::dataset::io::{read_dataset, render_dataset, PROVENANCE_FILE, TEST_FILE, TRAIN_FILE};
use coverageability_core::dataset::PipelineSettings;
use coverageability_core::inference::gate_check;
use coverageability_core::inspection::{write_impact, write_importance};
use coverageability_core::labeling::{load_coverage_report, LabelingConfig};
use coverageability_core::learners::{LearnerKind, TrainedModel};
use coverageability_core::report::histogram;
use coverageability_core::selection::write_trace;
use coverageability_core::synthetic::{coverage_for, java_corpus};
use coverageability_metrics::{extract_features, ProjectModel};

use crate::cli::{
    Cli, Command, DatasetArgs, EvaluateArgs, ExtractArgs, GateArgs, InspectArgs, LabelArgs, PipelineArgs, PredictArgs, ReportArgs,
    SynthArgs, TrainArgs,
};
use crate::config::{load_grid, PipelineConfig};
use crate::error::{CliError, Result};
use crate::output::{write_atomic, write_json, write_with};
use crate::pipeline::{self, model_file, trace_file};
use crate::stages;

/// How a successful run ends; errors are reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    GateFailed,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Done => 0,
            Outcome::GateFailed => 1,
        }
    }
}

/// Exit status for errors, distinct from a failed gate.
pub const ERROR_EXIT: i32 = 2;

struct Context {
    seed: Option<u64>,
    out_dir: PathBuf,
}

impl Context {
    fn seed(&self, command: &'static str) -> Result<u64> {
        self.seed.ok_or(CliError::MissingSeed(command))
    }

    fn out(&self, explicit: &Option<PathBuf>, default: &str) -> PathBuf {
        explicit.clone().unwrap_or_else(|| self.out_dir.join(default))
    }
}

pub fn run(cli: Cli) -> Result<Outcome> {
    let ctx = Context {
        seed: cli.seed,
        out_dir: cli.out_dir,
    };
    match cli.command {
        Command::Extract(a) => extract(&ctx, a),
        Command::Label(a) => label(&ctx, a),
        Command::Dataset(a) => dataset(&ctx, a),
        Command::Train(a) => train(&ctx, a),
        Command::Evaluate(a) => evaluate(&ctx, a),
        Command::Predict(a) => predict(&ctx, a),
        Command::Gate(a) => gate(a),
        Command::Inspect(a) => inspect(&ctx, a),
        Command::Report(a) => report(&ctx, a),
        Command::Pipeline(a) => run_pipeline(&ctx, a),
        Command::Synth(a) => synth(&ctx, a),
    }
}

fn extract(ctx: &Context, a: ExtractArgs) -> Result<Outcome> {
    let table = stages::extract(&a.source)?;
    write_atomic(&ctx.out(&a.out, pipeline::METRICS_FILE), &stages::render_table(&table)?)?;
    Ok(Outcome::Done)
}

fn label(ctx: &Context, a: LabelArgs) -> Result<Outcome> {
    let records = load_coverage_report(&a.coverage)?;
    let labels = stages::label(&records, &LabelingConfig { b: a.b });
    write_atomic(&ctx.out(&a.out, pipeline::LABELS_FILE), &stages::render_labels(&labels)?)?;
    Ok(Outcome::Done)
}

fn dataset(ctx: &Context, a: DatasetArgs) -> Result<Outcome> {
    let seed = ctx.seed("dataset")?;
    let table = stages::read_table(&a.metrics)?;
    let records = load_coverage_report(&a.coverage)?;
    let mut settings = PipelineSettings::new(a.variant, seed);
    if let Some(v) = a.train_fraction {
        settings.train_fraction = v;
    }
    if let Some(v) = a.lof_k {
        settings.lof_k = v;
    }
    if let Some(v) = a.lof_threshold {
        settings.lof_threshold = v;
    }
    if let Some(v) = a.select_k {
        settings.select_k = v;
    }
    let d = stages::build_dataset(&table, &records, &LabelingConfig { b: a.b }, &settings)?;
    let dir = ctx.out(&a.out, pipeline::DATASET_DIR);
    for (name, bytes) in [TRAIN_FILE, TEST_FILE, PROVENANCE_FILE].into_iter().zip(render_dataset(&d)?) {
        write_atomic(&dir.join(name), &bytes)?;
    }
    Ok(Outcome::Done)
}

fn parse_learners(names: &[String]) -> Result<Vec<LearnerKind>> {
    let mut out = Vec::new();
    for n in names {
        if n.eq_ignore_ascii_case("all") {
            out.extend(LearnerKind::ALL);
        } else {
            out.push(n.parse::<LearnerKind>()?);
        }
    }
    Ok(out)
}

fn train(ctx: &Context, a: TrainArgs) -> Result<Outcome> {
    let seed = ctx.seed("train")?;
    let d = read_dataset(&a.dataset)?;
    let spec = load_grid(&a.grid)?;
    let trained = stages::train(&d, &spec, &parse_learners(&a.learners)?, seed)?;
    let dir = ctx.out(&a.out, pipeline::MODELS_DIR);
    for (search, model) in &trained {
        log::info!("{}: best mean RMSE {} with {}", model.kind, search.best_score(), model.hyperparameters);
        write_atomic(&dir.join(model_file(model.kind)), model.to_json()?.as_bytes())?;
        write_with(&dir.join(trace_file(model.kind)), |buf| Ok(write_trace(&search.trace, buf)?))?;
    }
    Ok(Outcome::Done)
}

fn evaluate(ctx: &Context, a: EvaluateArgs) -> Result<Outcome> {
    let model = TrainedModel::load(&a.model)?;
    let d = read_dataset(&a.dataset)?;
    let report = stages::evaluate_model(&model, &d)?;
    write_json(&ctx.out(&a.out, "evaluation.json"), &report)?;
    Ok(Outcome::Done)
}

fn predict(ctx: &Context, a: PredictArgs) -> Result<Outcome> {
    let model = TrainedModel::load(&a.model)?;
    let project = stages::load_project(&a.source)?;
    let outcomes = stages::predict(&project, &model, &a.classes)?;
    write_atomic(&ctx.out(&a.out, "predictions.csv"), &stages::render_predictions(&outcomes)?)?;
    Ok(Outcome::Done)
}

fn gate(a: GateArgs) -> Result<Outcome> {
    let outcomes = stages::read_predictions(&a.predictions)?;
    let report = gate_check(&outcomes, a.threshold);
    print!("{}", report.render());
    if let Some(p) = &a.report {
        write_json(p, &report)?;
    }
    Ok(if report.passed { Outcome::Done } else { Outcome::GateFailed })
}

fn inspect(ctx: &Context, a: InspectArgs) -> Result<Outcome> {
    let seed = ctx.seed("inspect")?;
    let model = TrainedModel::load(&a.model)?;
    let d = read_dataset(&a.dataset)?;
    let (importance, impact) = stages::inspect(&model, &d, a.repeats, a.top, seed)?;
    let dir = a.out.clone().unwrap_or_else(|| ctx.out_dir.clone());
    write_with(&dir.join(pipeline::IMPORTANCE_FILE), |buf| Ok(write_importance(&importance, buf)?))?;
    write_with(&dir.join(pipeline::IMPACT_FILE), |buf| Ok(write_impact(&impact, buf)?))?;
    Ok(Outcome::Done)
}

fn report(ctx: &Context, a: ReportArgs) -> Result<Outcome> {
    let labels = stages::read_labels(&a.labels)?;
    let targets: Vec<_> = labels.iter().map(|(_, t)| *t).collect();
    let h = histogram(&targets, a.bins)?;
    let out = ctx.out(&a.out, pipeline::DISTRIBUTION_FILE);
    write_with(&out, |buf| Ok(h.write_csv(buf)?))?;
    if a.svg {
        write_atomic(&out.with_extension("svg"), h.to_svg().as_bytes())?;
    }
    Ok(Outcome::Done)
}

fn run_pipeline(ctx: &Context, a: PipelineArgs) -> Result<Outcome> {
    let config = PipelineConfig::load(&a.config)?;
    let seed = ctx.seed.or(config.seed).ok_or(CliError::MissingSeed("pipeline"))?;
    let out = config.output.clone().unwrap_or_else(|| ctx.out_dir.clone());
    let written = pipeline::run_pipeline(&config, seed, &out)?;
    println!("{} artifacts written to {}", written.len(), out.display());
    Ok(Outcome::Done)
}

pub const SYNTH_SOURCE_DIR: &str = "src";
pub const SYNTH_COVERAGE: &str = "coverage.csv";
pub const SYNTH_CONFIG: &str = "pipeline.toml";

/// Writes the synthetic project, its coverage report and a config that
/// runs the pipeline on them.
pub fn write_synthetic(dir: &Path, classes: usize, seed: u64) -> Result<()> {
    let sources = java_corpus(classes, seed);
    for (rel, text) in &sources {
        write_atomic(&dir.join(SYNTH_SOURCE_DIR).join(rel), text.as_bytes())?;
    }
    let features = extract_features(&ProjectModel::from_sources(&sources));
    write_atomic(&dir.join(SYNTH_COVERAGE), &stages::render_coverage(&coverage_for(&features, seed))?)?;
    let config = format!(
        "source = \"{SYNTH_SOURCE_DIR}\"\ncoverage = \"{SYNTH_COVERAGE}\"\noutput = \"out\"\nseed = {seed}\n\n\
         [labeling]\nb = 1\n\n[dataset]\nvariant = \"DS3\"\n\n[training]\nlearners = [\"hgbr\"]\ngrid = \"reduced\"\n\n\
         [inspection]\nrepeats = 10\ntop = 15\n\n[report]\nbins = 50\nsvg = true\n"
    );
    write_atomic(&dir.join(SYNTH_CONFIG), config.as_bytes())
}

fn synth(ctx: &Context, a: SynthArgs) -> Result<Outcome> {
    let seed = ctx.seed("synth")?;
    if a.classes == 0 {
        return Err(CliError::Usage("--classes must be positive".into()));
    }
    write_synthetic(&ctx.out(&a.out, "synthetic"), a.classes, seed)?;
    Ok(Outcome::Done)
}
