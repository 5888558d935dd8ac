//! Single-class prediction with the trivial-class rules checked before the
//! model, and the CI gate over a set of outcomes.

use coverageability_metrics::catalog::assemble_feature_vector;
use coverageability_metrics::{FeatureVector, ProjectModel};
use serde::{Deserialize, Serialize};

use crate::dataset::{trivial_kind_of, TrivialKind};
use crate::error::{CoreError, Result};
use crate::learners::TrainedModel;

pub const DEFAULT_GATE_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutcomeSource {
    RuleSimple,
    RuleData,
    Model,
}

impl OutcomeSource {
    pub fn name(self) -> &'static str {
        match self {
            OutcomeSource::RuleSimple => "rule-simple",
            OutcomeSource::RuleData => "rule-data",
            OutcomeSource::Model => "model",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionOutcome {
    pub class: String,
    pub coverageability: f64,
    pub source: OutcomeSource,
}

/// Rule-simple, then rule-data, then the model; model output outside
/// [0, 1] is a prediction error.
pub fn predict_vector(fv: &FeatureVector, model: &TrainedModel) -> Result<PredictionOutcome> {
    let rule = |source| PredictionOutcome {
        class: fv.class.clone(),
        coverageability: 1.0,
        source,
    };
    match trivial_kind_of(&fv.values) {
        Some(TrivialKind::Simple) => return Ok(rule(OutcomeSource::RuleSimple)),
        Some(TrivialKind::Data) => return Ok(rule(OutcomeSource::RuleData)),
        None => {}
    }
    let value = model.predict_features(fv)?;
    if !(0.0..=1.0).contains(&value) {
        return Err(CoreError::Prediction {
            class: fv.class.clone(),
            value,
        });
    }
    Ok(PredictionOutcome {
        class: fv.class.clone(),
        coverageability: value,
        source: OutcomeSource::Model,
    })
}

pub fn predict_class_coverageability(project: &ProjectModel, class: &str, model: &TrainedModel) -> Result<PredictionOutcome> {
    let id = project.class_id(class).ok_or_else(|| CoreError::UnknownClass(class.to_string()))?;
    predict_vector(&assemble_feature_vector(project, id), model)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub threshold: f64,
    pub passed: bool,
    pub evaluated: usize,
    /// Classes below the threshold, in input order.
    pub failing: Vec<PredictionOutcome>,
    pub note: Option<String>,
}

/// Fails iff any outcome is below the threshold.
pub fn gate_check(outcomes: &[PredictionOutcome], threshold: f64) -> GateReport {
    let failing: Vec<PredictionOutcome> = outcomes.iter().filter(|o| o.coverageability < threshold).cloned().collect();
    let note = if outcomes.is_empty() {
        Some("no classes to check".to_string())
    } else if outcomes.iter().all(|o| o.source != OutcomeSource::Model) {
        Some("every class is trivial; no model predictions were needed".to_string())
    } else {
        None
    };
    GateReport {
        threshold,
        passed: failing.is_empty(),
        evaluated: outcomes.len(),
        failing,
        note,
    }
}

impl GateReport {
    pub fn render(&self) -> String {
        let mut s = format!(
            "gate {} ({} classes, threshold {})\n",
            if self.passed { "passed" } else { "FAILED" },
            self.evaluated,
            self.threshold
        );
        for f in &self.failing {
            s.push_str(&format!("  {} {} ({})\n", f.class, f.coverageability, f.source.name()));
        }
        if let Some(n) = &self.note {
            s.push_str(&format!("note: {n}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::RobustScalerStats;
    use crate::learners::{Hyperparameters, Learned, LinearModel, SgdrParams};
    use coverageability_metrics::MetricSchema;
    use ndarray::Array2;

    pub(crate) fn constant_model(value: f64) -> TrainedModel {
        let names = vec!["CSLOC".to_string(), "CSNOMNAMM".into()];
        let x = Array2::from_elem((2, 2), 1.0);
        TrainedModel::new(
            Hyperparameters::Sgdr(SgdrParams::default()),
            0,
            names,
            RobustScalerStats::identity(2),
            x.view(),
            Learned::Linear(LinearModel {
                weights: vec![0.0, 0.0],
                intercept: value,
            }),
        )
    }

    fn vector(csloc: f64, nomnamm: f64, noia: f64, nosa: f64) -> FeatureVector {
        let s = MetricSchema::full();
        let mut values = vec![0.0; s.len()];
        for (name, v) in [("CSLOC", csloc), ("CSNOMNAMM", nomnamm), ("CSNOIA", noia), ("CSNOSA", nosa)] {
            values[s.position(name).unwrap()] = v;
        }
        FeatureVector { class: "p.C".into(), values }
    }

    #[test]
    fn rules_precede_the_model() {
        let m = constant_model(1.2);
        assert_eq!(predict_vector(&vector(3.0, 0.0, 1.0, 1.0), &m).unwrap().source, OutcomeSource::RuleSimple);
        let data = predict_vector(&vector(40.0, 0.0, 1.0, 1.0), &m).unwrap();
        assert_eq!((data.coverageability, data.source), (1.0, OutcomeSource::RuleData));
        let err = predict_vector(&vector(40.0, 2.0, 1.0, 1.0), &m).unwrap_err();
        assert!(err.to_string().starts_with("Prediction Error") && err.to_string().contains("1.2"));
        let ok = predict_vector(&vector(40.0, 2.0, 0.0, 0.0), &constant_model(0.3)).unwrap();
        assert_eq!((ok.coverageability, ok.source), (0.3, OutcomeSource::Model));
    }

    #[test]
    fn unknown_class() {
        let p = ProjectModel::from_sources(&[("A.java", "class A {}")]);
        assert!(matches!(predict_class_coverageability(&p, "B", &constant_model(0.5)), Err(CoreError::UnknownClass(_))));
    }

    #[test]
    fn gate() {
        let o = |c: &str, v| PredictionOutcome {
            class: c.into(),
            coverageability: v,
            source: OutcomeSource::Model,
        };
        assert!(gate_check(&[o("a", 0.8), o("b", 0.6)], 0.5).passed);
        let r = gate_check(&[o("a", 0.8), o("b", 0.4)], 0.5);
        assert!(!r.passed && r.failing.len() == 1 && r.failing[0].class == "b");
        assert!(r.render().contains("b 0.4"));
        let empty = gate_check(&[], 0.5);
        assert!(empty.passed && empty.note.is_some());
    }
}
