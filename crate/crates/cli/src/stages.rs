//! The pipeline steps as plain functions over in-memory values. Commands
//! and the pipeline runner both call these, then write what they return.

use std::path::Path;

use coverageability_core::dataset::{self, Dataset, PipelineSettings};
use coverageability_core::inference::{predict_vector, OutcomeSource, PredictionOutcome};
use coverageability_core::inspection::{impact_table, permutation_importance, ImpactRecord, ImportanceReport};
use coverageability_core::labeling::{build_target_vector, CoverageRecord, LabelingConfig, TargetVector, REPORT_HEADER};
use coverageability_core::learners::{LearnerKind, TrainedModel};
use coverageability_core::selection::{evaluate, grid_search, train_all, EvaluationReport, GridSpec, Search};
use coverageability_core::CoreError;
use coverageability_metrics::catalog::SCHEMA_VERSION;
use coverageability_metrics::{extract_features, parse_project, MetricSchema, MetricsTable, ProjectModel};
use ndarray::{concatenate, Axis};

use crate::error::{CliError, Result};

pub const LABELS_HEADER: [&str; 5] = ["class", "statement_coverage", "branch_coverage", "mean_coverage", "coverageability"];
pub const PREDICTIONS_HEADER: [&str; 3] = ["class", "coverageability", "source"];

fn csv_writer(out: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

fn csv_fail(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::input(path, e)
}

pub fn load_project(source: &Path) -> Result<ProjectModel> {
    let project = parse_project(source)?;
    for s in project.skipped() {
        log::warn!("skipped {}: {}", s.path.display(), s.reason);
    }
    Ok(project)
}

pub fn extract(source: &Path) -> Result<MetricsTable> {
    let project = load_project(source)?;
    if project.classes().is_empty() {
        return Err(CliError::input(source, "no Java classes found"));
    }
    Ok(MetricsTable::from_vectors(extract_features(&project)))
}

pub fn render_table(table: &MetricsTable) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    table.write_to(&mut buf)?;
    Ok(buf)
}

/// Reads a metrics table and checks it was written with the current schema.
pub fn read_table(path: &Path) -> Result<MetricsTable> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let table = MetricsTable::read_from(file)?;
    if table.schema_version != SCHEMA_VERSION {
        return Err(CliError::input(
            path,
            format!("schema `{}`, expected `{SCHEMA_VERSION}`", table.schema_version),
        ));
    }
    if !table.names.iter().map(String::as_str).eq(MetricSchema::full().names()) {
        return Err(CliError::input(path, "columns do not match the metric schema"));
    }
    Ok(table)
}

pub fn label(records: &[CoverageRecord], config: &LabelingConfig) -> Vec<(String, TargetVector)> {
    records.iter().map(|r| (r.class.clone(), build_target_vector(r, config))).collect()
}

pub fn render_labels(labels: &[(String, TargetVector)]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut w = csv_writer(&mut buf);
    let fail = csv_fail(Path::new("labels"));
    w.write_record(LABELS_HEADER).map_err(&fail)?;
    for (class, t) in labels {
        let mut rec = vec![class.clone()];
        rec.extend(t.as_array().iter().map(f64::to_string));
        w.write_record(&rec).map_err(&fail)?;
    }
    w.flush().map_err(|e| CliError::io("labels", e))?;
    drop(w);
    Ok(buf)
}

pub fn read_labels(path: &Path) -> Result<Vec<(String, TargetVector)>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_fail(path))?;
    let header = r.headers().map_err(csv_fail(path))?.clone();
    if !header.iter().eq(LABELS_HEADER) {
        return Err(CliError::input(path, format!("expected header {}", LABELS_HEADER.join(","))));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_fail(path))?;
        let mut v = [0.0; 4];
        for (k, slot) in v.iter_mut().enumerate() {
            *slot = rec[k + 1]
                .parse()
                .map_err(|_| CliError::input(path, format!("line {}: `{}` is not a number", i + 2, &rec[k + 1])))?;
        }
        out.push((rec[0].to_string(), TargetVector::from_array(v)));
    }
    Ok(out)
}

pub fn render_coverage(records: &[CoverageRecord]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut w = csv_writer(&mut buf);
    let fail = csv_fail(Path::new("coverage"));
    w.write_record(REPORT_HEADER).map_err(&fail)?;
    for r in records {
        w.write_record([r.class.clone(), r.statement.to_string(), r.branch.to_string(), r.suite_size.to_string()])
            .map_err(&fail)?;
    }
    w.flush().map_err(|e| CliError::io("coverage", e))?;
    drop(w);
    Ok(buf)
}

pub fn build_dataset(
    table: &MetricsTable,
    records: &[CoverageRecord],
    labeling: &LabelingConfig,
    settings: &PipelineSettings,
) -> Result<Dataset> {
    let (rows, log) = dataset::join(&table.rows, records, labeling);
    if !log.unlabeled.is_empty() {
        log::warn!("{} classes have no coverage record", log.unlabeled.len());
    }
    if !log.unmatched_coverage.is_empty() {
        log::warn!("{} coverage records name unknown classes", log.unmatched_coverage.len());
    }
    Ok(dataset::prepare(rows, log, settings)?)
}

/// Tunes the requested learners. The voter needs all four base learners,
/// so asking for it trains every learner.
pub fn train(dataset: &Dataset, spec: &GridSpec, learners: &[LearnerKind], seed: u64) -> Result<Vec<(Search, TrainedModel)>> {
    if learners.is_empty() {
        return Err(CliError::Usage("no learners requested".into()));
    }
    if learners.contains(&LearnerKind::Vor) {
        return Ok(train_all(spec, dataset, seed)?);
    }
    let mut out = Vec::new();
    for kind in LearnerKind::BASE.into_iter().filter(|k| learners.contains(k)) {
        log::info!("grid search {kind}: {} configurations", spec.cardinality(kind));
        out.push(grid_search(&spec.configurations(kind)?, dataset, seed)?);
    }
    Ok(out)
}

fn check_columns(model: &TrainedModel, dataset: &Dataset) -> Result<()> {
    if model.features != dataset.names {
        return Err(CoreError::SchemaMismatch(format!(
            "model was trained on {} features, dataset has {} different ones",
            model.features.len(),
            dataset.names.len()
        ))
        .into());
    }
    Ok(())
}

/// Held-out scores on the dataset's test rows.
pub fn evaluate_model(model: &TrainedModel, dataset: &Dataset) -> Result<EvaluationReport> {
    check_columns(model, dataset)?;
    let pred = model.predict_raw(dataset.test.x.view())?;
    Ok(evaluate(&dataset.test.coverageability(), &pred)?)
}

/// Permutation importance on the test rows, then the impact of the `top`
/// most important metrics over every dataset row.
pub fn inspect(
    model: &TrainedModel,
    dataset: &Dataset,
    repeats: usize,
    top: usize,
    seed: u64,
) -> Result<(ImportanceReport, Vec<ImpactRecord>)> {
    check_columns(model, dataset)?;
    let importance = permutation_importance(model, dataset.test.x.view(), &dataset.test.coverageability(), repeats, seed)?;
    let all = concatenate(Axis(0), &[dataset.train.x.view(), dataset.test.x.view()]).expect("same width");
    let mut y = dataset.train.coverageability();
    y.extend(dataset.test.coverageability());
    let columns: Vec<usize> = importance
        .top(top)
        .iter()
        .map(|f| dataset.names.iter().position(|n| *n == f.feature).expect("checked columns"))
        .collect();
    let impact = impact_table(&dataset.names, all.view(), &y, &columns)?;
    Ok((importance, impact))
}

/// Predictions for the named classes, or every class when `classes` is empty.
pub fn predict(project: &ProjectModel, model: &TrainedModel, classes: &[String]) -> Result<Vec<PredictionOutcome>> {
    let vectors = extract_features(project);
    if classes.is_empty() {
        return vectors.iter().map(|fv| Ok(predict_vector(fv, model)?)).collect();
    }
    classes
        .iter()
        .map(|c| {
            let fv = vectors
                .iter()
                .find(|fv| fv.class == *c)
                .ok_or_else(|| CoreError::UnknownClass(c.clone()))?;
            Ok(predict_vector(fv, model)?)
        })
        .collect()
}

pub fn render_predictions(outcomes: &[PredictionOutcome]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let mut w = csv_writer(&mut buf);
    let fail = csv_fail(Path::new("predictions"));
    w.write_record(PREDICTIONS_HEADER).map_err(&fail)?;
    for o in outcomes {
        w.write_record([o.class.clone(), o.coverageability.to_string(), o.source.name().to_string()])
            .map_err(&fail)?;
    }
    w.flush().map_err(|e| CliError::io("predictions", e))?;
    drop(w);
    Ok(buf)
}

pub fn read_predictions(path: &Path) -> Result<Vec<PredictionOutcome>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_fail(path))?;
    let header = r.headers().map_err(csv_fail(path))?.clone();
    if !header.iter().eq(PREDICTIONS_HEADER) {
        return Err(CliError::input(path, format!("expected header {}", PREDICTIONS_HEADER.join(","))));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_fail(path))?;
        let line = i + 2;
        let coverageability: f64 = rec[1]
            .parse()
            .map_err(|_| CliError::input(path, format!("line {line}: `{}` is not a number", &rec[1])))?;
        let source = [OutcomeSource::RuleSimple, OutcomeSource::RuleData, OutcomeSource::Model]
            .into_iter()
            .find(|s| s.name() == &rec[2])
            .ok_or_else(|| CliError::input(path, format!("line {line}: unknown source `{}`", &rec[2])))?;
        out.push(PredictionOutcome {
            class: rec[0].to_string(),
            coverageability,
            source,
        });
    }
    Ok(out)
}
