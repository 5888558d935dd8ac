//! Pipeline configuration: a TOML file of top-level keys and a few
//! sections. Paths are relative to the file's directory.
//!
//! ```toml
//! source = "src"
//! coverage = "coverage.csv"
//! output = "out"
//! seed = 7
//!
//! [labeling]
//! b = 1
//!
//! [dataset]
//! variant = "DS3"
//!
//! [training]
//! learners = ["hgbr", "vor"]
//! grid = "reduced"
//!
//! [inspection]
//! repeats = 50
//! top = 15
//!
//! [report]
//! bins = 50
//! svg = true
//! ```

use std::path::{Path, PathBuf};

use coverageability_core::dataset::{PipelineSettings, Variant};
use coverageability_core::inspection::DEFAULT_REPEATS;
use coverageability_core::learners::LearnerKind;
use coverageability_core::report::DEFAULT_BINS;
use coverageability_core::selection::GridSpec;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const DEFAULT_TOP: usize = 15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub source: PathBuf,
    pub coverage: PathBuf,
    /// Defaults to the output directory given on the command line.
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub labeling: LabelingSection,
    #[serde(default)]
    pub dataset: DatasetSection,
    #[serde(default)]
    pub training: TrainingSection,
    #[serde(default)]
    pub inspection: InspectionSection,
    #[serde(default)]
    pub report: ReportSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LabelingSection {
    pub b: u64,
}

impl Default for LabelingSection {
    fn default() -> Self {
        LabelingSection { b: 1 }
    }
}

/// Overrides for the preprocessing defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetSection {
    pub variant: Variant,
    pub train_fraction: Option<f64>,
    pub lof_k: Option<usize>,
    pub lof_threshold: Option<f64>,
    pub select_k: Option<usize>,
}

impl Default for DatasetSection {
    fn default() -> Self {
        DatasetSection {
            variant: Variant::DS3,
            train_fraction: None,
            lof_k: None,
            lof_threshold: None,
            select_k: None,
        }
    }
}

impl DatasetSection {
    pub fn settings(&self, seed: u64) -> PipelineSettings {
        let mut s = PipelineSettings::new(self.variant, seed);
        if let Some(v) = self.train_fraction {
            s.train_fraction = v;
        }
        if let Some(v) = self.lof_k {
            s.lof_k = v;
        }
        if let Some(v) = self.lof_threshold {
            s.lof_threshold = v;
        }
        if let Some(v) = self.select_k {
            s.select_k = v;
        }
        s
    }
}

/// A named preset (`reduced` or `full`) or an explicit grid table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridChoice {
    Preset(String),
    Custom(GridSpec),
}

impl Default for GridChoice {
    fn default() -> Self {
        GridChoice::Preset("reduced".into())
    }
}

impl GridChoice {
    pub fn resolve(&self) -> Result<GridSpec> {
        match self {
            GridChoice::Preset(name) => preset(name),
            GridChoice::Custom(spec) => Ok(spec.clone()),
        }
    }
}

pub fn preset(name: &str) -> Result<GridSpec> {
    match name {
        "reduced" => Ok(GridSpec::reduced()),
        "full" => Ok(GridSpec::full()),
        other => Err(CliError::Usage(format!("unknown grid preset `{other}` (expected reduced or full)"))),
    }
}

/// Reads a grid from a preset name or a TOML file path.
pub fn load_grid(arg: &str) -> Result<GridSpec> {
    let path = Path::new(arg);
    if !path.exists() {
        return preset(arg);
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::input(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainingSection {
    pub learners: Vec<LearnerKind>,
    pub grid: GridChoice,
    /// Learner whose model is inspected; the last listed learner by default.
    pub inspect: Option<LearnerKind>,
}

impl Default for TrainingSection {
    fn default() -> Self {
        TrainingSection {
            learners: LearnerKind::ALL.to_vec(),
            grid: GridChoice::default(),
            inspect: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InspectionSection {
    pub repeats: usize,
    pub top: usize,
}

impl Default for InspectionSection {
    fn default() -> Self {
        InspectionSection {
            repeats: DEFAULT_REPEATS,
            top: DEFAULT_TOP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportSection {
    pub bins: usize,
    pub svg: bool,
}

impl Default for ReportSection {
    fn default() -> Self {
        ReportSection {
            bins: DEFAULT_BINS,
            svg: false,
        }
    }
}

impl PipelineConfig {
    /// Parses the file and makes its relative paths absolute against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut config: PipelineConfig = toml::from_str(&text).map_err(|e| CliError::input(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.source = base.join(&config.source);
        config.coverage = base.join(&config.coverage);
        config.output = config.output.map(|o| base.join(o));
        if config.labeling.b == 0 {
            return Err(CliError::input(path, "labeling.b must be at least 1"));
        }
        if config.training.learners.is_empty() {
            return Err(CliError::input(path, "training.learners is empty"));
        }
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// The learner whose model the inspection stage reads.
    pub fn inspected(&self) -> LearnerKind {
        self.training
            .inspect
            .or_else(|| self.training.learners.last().copied())
            .unwrap_or(LearnerKind::Vor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("p.toml");
        std::fs::write(&p, "source = \"src\"\ncoverage = \"c.csv\"\n").unwrap();
        let c = PipelineConfig::load(&p).unwrap();
        assert_eq!(c.source, dir.path().join("src"));
        assert_eq!(c.dataset.variant, Variant::DS3);
        assert_eq!(c.training.grid.resolve().unwrap(), GridSpec::reduced());
        assert_eq!(c.inspected(), LearnerKind::Vor);
        assert_eq!((c.report.bins, c.inspection.repeats, c.labeling.b), (50, 50, 1));
    }

    #[test]
    fn sections_and_custom_grid() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("p.toml");
        let text = r#"
source = "s"
coverage = "c.csv"
seed = 3
[dataset]
variant = "DS2"
lof_k = 5
[training]
learners = ["hgbr"]
[training.grid.hgbr]
loss = ["least_squares"]
max_depth = [3]
min_samples_leaf = [5]
max_iter = [20]
"#;
        std::fs::write(&p, text).unwrap();
        let c = PipelineConfig::load(&p).unwrap();
        assert_eq!(c.dataset.settings(3).lof_k, 5);
        assert_eq!(c.dataset.settings(3).variant, Variant::DS2);
        let grid = c.training.grid.resolve().unwrap();
        assert_eq!(grid.cardinality(LearnerKind::Hgbr), 1);
        assert_eq!(grid.sgdr, GridSpec::reduced().sgdr);
        let back: PipelineConfig = toml::from_str(&c.to_toml()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_unknown_keys_and_presets() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("p.toml");
        std::fs::write(&p, "source = \"s\"\ncoverage = \"c\"\nbogus = 1\n").unwrap();
        assert!(PipelineConfig::load(&p).is_err());
        assert!(preset("huge").is_err());
    }
}
