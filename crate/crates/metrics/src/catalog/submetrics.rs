//! Statistical operators that lift method-level values to a parent element.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Op {
    Sum,
    Avg,
    Min,
    Max,
    Log,
    Sd,
}

impl Op {
    pub fn suffix(self) -> &'static str {
        match self {
            Op::Sum => "SUM",
            Op::Avg => "AVG",
            Op::Min => "MIN",
            Op::Max => "MAX",
            Op::Log => "LOG",
            Op::Sd => "SD",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Filter {
    All,
    /// Drops accessor and mutator methods.
    Namm,
}

/// Summary statistics of a value list; every field is 0 for an empty list.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stats {
    pub count: usize,
    pub sum: f64,
    pub avg: f64,
    pub min: f64,
    pub max: f64,
    /// Population standard deviation.
    pub sd: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Stats {
        if values.is_empty() {
            return Stats::default();
        }
        let n = values.len() as f64;
        let sum: f64 = values.iter().sum();
        let avg = sum / n;
        let var = values.iter().map(|v| (v - avg) * (v - avg)).sum::<f64>() / n;
        Stats {
            count: values.len(),
            sum,
            avg,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            sd: var.sqrt(),
        }
    }

    pub fn get(&self, op: Op) -> f64 {
        match op {
            Op::Sum => self.sum,
            Op::Avg => self.avg,
            Op::Min => self.min,
            Op::Max => self.max,
            Op::Log => log_op(self.sum),
            Op::Sd => self.sd,
        }
    }
}

/// ln(1 + x).
pub fn log_op(x: f64) -> f64 {
    x.ln_1p()
}

/// Feature name for one cell of a web.
pub fn feature_name(stem: &str, op: Op, primary: Op, filter: Filter) -> String {
    let mut name = stem.to_string();
    if op != primary {
        name.push('_');
        name.push_str(op.suffix());
    }
    if filter == Filter::Namm {
        name.push_str("_NAMM");
    }
    name
}

/// Applies every operator of a web to the filtered method values.
///
/// `namm` flags, per value, whether the method passes the NAMM filter.
pub fn derive_submetrics(stem: &str, values: &[f64], namm: &[bool], ops: &[Op], primary: Op, filter: Filter) -> Vec<(String, f64)> {
    debug_assert_eq!(values.len(), namm.len());
    let kept: Vec<f64> = match filter {
        Filter::All => values.to_vec(),
        Filter::Namm => values
            .iter()
            .zip(namm)
            .filter(|(_, &keep)| keep)
            .map(|(v, _)| *v)
            .collect(),
    };
    let stats = Stats::of(&kept);
    ops.iter()
        .map(|&op| (feature_name(stem, op, primary, filter), stats.get(op)))
        .collect()
}
