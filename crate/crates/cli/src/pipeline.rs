//! End-to-end run from a configuration file. Each stage writes its
//! artifacts before the next starts; a failing stage leaves a marker file
//! naming the stage, the cause and what was already written.

use std::path::{Path, PathBuf};

use coverageability_core::dataset::io::{render_dataset, PROVENANCE_FILE, TEST_FILE, TRAIN_FILE};
use coverageability_core::inspection::{write_impact, write_importance};
use coverageability_core::labeling::{load_coverage_report, LabelingConfig};
use coverageability_core::report::histogram;
use coverageability_core::selection::write_trace;

use crate::config::PipelineConfig;
use crate::error::{CliError, Result};
use crate::output::{write_atomic, write_json, write_with};
use crate::stages;

pub const FAILURE_MARKER: &str = "PIPELINE_FAILED";
pub const METRICS_FILE: &str = "metrics.csv";
pub const LABELS_FILE: &str = "labels.csv";
pub const DATASET_DIR: &str = "dataset";
pub const MODELS_DIR: &str = "models";
pub const EVALUATION_DIR: &str = "evaluation";
pub const IMPORTANCE_FILE: &str = "importance.csv";
pub const IMPACT_FILE: &str = "impact.csv";
pub const DISTRIBUTION_FILE: &str = "distribution.csv";
pub const DISTRIBUTION_SVG: &str = "distribution.svg";

pub fn model_file(kind: impl std::fmt::Display) -> String {
    format!("{kind}.json")
}

pub fn trace_file(kind: impl std::fmt::Display) -> String {
    format!("{kind}_trace.csv")
}

struct Run<'a> {
    out: &'a Path,
    written: Vec<PathBuf>,
}

impl Run<'_> {
    fn path(&self, rel: &str) -> PathBuf {
        self.out.join(rel)
    }

    fn record(&mut self, p: PathBuf) {
        self.written.push(p);
    }

    fn stage<T>(&mut self, name: &'static str, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        log::info!("stage {name}");
        f(self).map_err(|e| CliError::Stage {
            stage: name,
            source: Box::new(e),
        })
    }
}

/// Runs every stage and returns the artifacts in the order written.
pub fn run_pipeline(config: &PipelineConfig, seed: u64, out: &Path) -> Result<Vec<PathBuf>> {
    let marker = out.join(FAILURE_MARKER);
    if marker.exists() {
        std::fs::remove_file(&marker).map_err(|e| CliError::io(&marker, e))?;
    }
    let mut run = Run { out, written: Vec::new() };
    match stages_in_order(config, seed, &mut run) {
        Ok(()) => Ok(run.written),
        Err(e) => {
            let (stage, cause) = match &e {
                CliError::Stage { stage, source } => (*stage, source.to_string()),
                other => ("setup", other.to_string()),
            };
            let mut text = format!("stage: {stage}\ncause: {cause}\npartial artifacts:\n");
            for p in &run.written {
                text.push_str(&format!("  {}\n", p.display()));
            }
            write_atomic(&marker, text.as_bytes())?;
            Err(e)
        }
    }
}

fn stages_in_order(config: &PipelineConfig, seed: u64, run: &mut Run) -> Result<()> {
    let labeling = LabelingConfig { b: config.labeling.b };
    let table = run.stage("extract", |r| {
        let table = stages::extract(&config.source)?;
        let p = r.path(METRICS_FILE);
        write_atomic(&p, &stages::render_table(&table)?)?;
        r.record(p);
        Ok(table)
    })?;

    let (records, labels) = run.stage("label", |r| {
        let records = load_coverage_report(&config.coverage)?;
        let labels = stages::label(&records, &labeling);
        let p = r.path(LABELS_FILE);
        write_atomic(&p, &stages::render_labels(&labels)?)?;
        r.record(p);
        Ok((records, labels))
    })?;

    let dataset = run.stage("dataset", |r| {
        let dataset = stages::build_dataset(&table, &records, &labeling, &config.dataset.settings(seed))?;
        let files = render_dataset(&dataset)?;
        for (name, bytes) in [TRAIN_FILE, TEST_FILE, PROVENANCE_FILE].into_iter().zip(files) {
            let p = r.path(DATASET_DIR).join(name);
            write_atomic(&p, &bytes)?;
            r.record(p);
        }
        Ok(dataset)
    })?;

    let models = run.stage("train", |r| {
        let spec = config.training.grid.resolve()?;
        let trained = stages::train(&dataset, &spec, &config.training.learners, seed)?;
        for (search, model) in &trained {
            let kind = model.kind;
            let p = r.path(MODELS_DIR).join(model_file(kind));
            write_atomic(&p, model.to_json()?.as_bytes())?;
            r.record(p);
            let p = r.path(MODELS_DIR).join(trace_file(kind));
            write_with(&p, |buf| Ok(write_trace(&search.trace, buf)?))?;
            r.record(p);
        }
        Ok(trained.into_iter().map(|(_, m)| m).collect::<Vec<_>>())
    })?;

    run.stage("evaluate", |r| {
        for model in &models {
            let report = stages::evaluate_model(model, &dataset)?;
            let p = r.path(EVALUATION_DIR).join(model_file(model.kind));
            write_json(&p, &report)?;
            r.record(p);
        }
        Ok(())
    })?;

    run.stage("inspect", |r| {
        let kind = config.inspected();
        let model = models
            .iter()
            .find(|m| m.kind == kind)
            .ok_or_else(|| CliError::Usage(format!("no {kind} model was trained to inspect")))?;
        let (importance, impact) = stages::inspect(model, &dataset, config.inspection.repeats, config.inspection.top, seed)?;
        let p = r.path(IMPORTANCE_FILE);
        write_with(&p, |buf| Ok(write_importance(&importance, buf)?))?;
        r.record(p);
        let p = r.path(IMPACT_FILE);
        write_with(&p, |buf| Ok(write_impact(&impact, buf)?))?;
        r.record(p);
        Ok(())
    })?;

    run.stage("report", |r| {
        let targets: Vec<_> = labels.iter().map(|(_, t)| *t).collect();
        let h = histogram(&targets, config.report.bins)?;
        let p = r.path(DISTRIBUTION_FILE);
        write_with(&p, |buf| Ok(h.write_csv(buf)?))?;
        r.record(p);
        if config.report.svg {
            let p = r.path(DISTRIBUTION_SVG);
            write_atomic(&p, h.to_svg().as_bytes())?;
            r.record(p);
        }
        Ok(())
    })
}
