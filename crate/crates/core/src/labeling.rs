//! Coverage-report ingestion and the coverage targets of a class: mean
//! coverage E = (C_ST + C_BR)/2 and Coverageability C_μ = E·b/|τ|.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

pub const REPORT_HEADER: [&str; 4] = ["class", "statement_coverage", "branch_coverage", "test_suite_size"];
pub const MUTATION_COLUMN: &str = "mutation_score";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRecord {
    pub class: String,
    pub statement: f64,
    pub branch: f64,
    pub suite_size: u64,
    /// Number of generation runs averaged into this record.
    pub repetitions: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingConfig {
    /// Budgeted influential test cases.
    pub b: u64,
}

impl Default for LabelingConfig {
    fn default() -> Self {
        LabelingConfig { b: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetVector {
    pub statement: f64,
    pub branch: f64,
    pub mean: f64,
    pub coverageability: f64,
}

impl TargetVector {
    pub fn as_array(&self) -> [f64; 4] {
        [self.statement, self.branch, self.mean, self.coverageability]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        TargetVector {
            statement: a[0],
            branch: a[1],
            mean: a[2],
            coverageability: a[3],
        }
    }
}

pub fn load_coverage_report(path: &Path) -> Result<Vec<CoverageRecord>> {
    let file = std::fs::File::open(path).map_err(|e| CoreError::io(path, e))?;
    parse_coverage_report(file, &path.display().to_string())
}

/// Parses a report; repeated rows of a class are averaged per criterion,
/// suite sizes are averaged and rounded half-up. Records keep the order in
/// which classes first appear.
pub fn parse_coverage_report<R: Read>(input: R, source: &str) -> Result<Vec<CoverageRecord>> {
    let parse_err = |line: usize, message: String| CoreError::Parse {
        path: source.to_string(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(input);
    let header = reader.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    let names: Vec<&str> = header.iter().collect();
    let with_mutation = names.len() == 5 && names[4] == MUTATION_COLUMN;
    if names.len() < 4 || names[..4] != REPORT_HEADER || !(names.len() == 4 || with_mutation) {
        return Err(parse_err(1, format!("unexpected header `{}`", names.join(","))));
    }

    struct Acc {
        statement: f64,
        branch: f64,
        suite: u64,
        runs: u32,
    }
    let mut order: Vec<String> = Vec::new();
    let mut acc: HashMap<String, Acc> = HashMap::new();
    for (i, row) in reader.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| parse_err(line, e.to_string()))?;
        if row.len() != names.len() {
            return Err(parse_err(line, format!("expected {} fields, found {}", names.len(), row.len())));
        }
        let class = row[0].to_string();
        if class.is_empty() {
            return Err(parse_err(line, "empty class name".into()));
        }
        let coverage = |j: usize| -> Result<f64> {
            let v: f64 = row[j].parse().map_err(|_| parse_err(line, format!("`{}` is not a number", &row[j])))?;
            if !(0.0..=1.0).contains(&v) {
                return Err(CoreError::Validation {
                    path: source.to_string(),
                    line,
                    message: format!("{} {v} outside [0, 1]", names[j]),
                });
            }
            Ok(v)
        };
        let statement = coverage(1)?;
        let branch = coverage(2)?;
        let suite: u64 = row[3]
            .parse()
            .map_err(|_| parse_err(line, format!("`{}` is not a positive integer", &row[3])))?;
        if suite == 0 {
            return Err(CoreError::Validation {
                path: source.to_string(),
                line,
                message: "test suite size must be at least 1".into(),
            });
        }
        if with_mutation {
            // accepted for format compatibility; mean coverage ignores it
            coverage(4)?;
        }
        let entry = acc.entry(class.clone()).or_insert_with(|| {
            order.push(class);
            Acc {
                statement: 0.0,
                branch: 0.0,
                suite: 0,
                runs: 0,
            }
        });
        entry.statement += statement;
        entry.branch += branch;
        entry.suite += suite;
        entry.runs += 1;
    }
    Ok(order
        .into_iter()
        .map(|class| {
            let a = &acc[&class];
            let n = a.runs as u64;
            CoverageRecord {
                statement: a.statement / n as f64,
                branch: a.branch / n as f64,
                suite_size: (2 * a.suite + n) / (2 * n),
                repetitions: a.runs,
                class,
            }
        })
        .collect())
}

pub fn mean_coverage(statement: f64, branch: f64) -> f64 {
    (statement + branch) / 2.0
}

/// E·b/|τ|. A budget above the suite size is clamped to it.
pub fn coverageability(mean: f64, b: u64, suite_size: u64) -> f64 {
    assert!(b >= 1 && suite_size >= 1, "b and suite size must be positive");
    let b = if b > suite_size {
        log::warn!("budget b = {b} exceeds suite size {suite_size}; clamped");
        suite_size
    } else {
        b
    };
    // ratio first, so b = |suite| returns the mean unchanged
    mean * (b as f64 / suite_size as f64)
}

/// Arithmetic mean of class Coverageability values.
pub fn module_coverageability(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(CoreError::Empty("module without classes"));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

pub fn build_target_vector(record: &CoverageRecord, config: &LabelingConfig) -> TargetVector {
    let mean = mean_coverage(record.statement, record.branch);
    TargetVector {
        statement: record.statement,
        branch: record.branch,
        mean,
        coverageability: coverageability(mean, config.b, record.suite_size),
    }
}
