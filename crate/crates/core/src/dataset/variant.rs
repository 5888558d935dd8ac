//! Dataset variants: column subsets of the full schema.

use std::fmt;
use std::str::FromStr;

use coverageability_metrics::catalog::Level;
use coverageability_metrics::MetricSchema;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;

/// Class metrics that describe a class's place in the project's dependency
/// and inheritance graph rather than the class itself; DS3 drops them
/// together with the package partition.
pub const SYSTEM_RELATION_METRICS: [&str; 6] = ["NOC", "FANIN", "DEPENDSBY", "DEPENDS", "NOP", "NOII"];

/// Width of the DS2 selection.
pub const DS2_WIDTH: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    DS1,
    DS2,
    DS3,
    DS4,
    DS5,
}

impl Variant {
    pub const ALL: [Variant; 5] = [Variant::DS1, Variant::DS2, Variant::DS3, Variant::DS4, Variant::DS5];

    /// Candidate schema columns, ascending. DS2 starts from all of DS1 and
    /// narrows by selection after scaling.
    pub fn columns(self) -> Vec<usize> {
        let schema = MetricSchema::full();
        let keep = |i: usize| {
            let f = &schema.features[i];
            match self {
                Variant::DS1 | Variant::DS2 => true,
                Variant::DS3 => f.level != Level::Package && !SYSTEM_RELATION_METRICS.contains(&f.name.as_str()),
                Variant::DS4 => {
                    f.level == Level::Class && !SYSTEM_RELATION_METRICS.contains(&f.name.as_str())
                }
                Variant::DS5 => f.is_base(),
            }
        };
        (0..schema.len()).filter(|&i| keep(i)).collect()
    }

    /// Final feature count.
    pub fn width(self) -> usize {
        match self {
            Variant::DS2 => DS2_WIDTH,
            v => v.columns().len(),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Variant {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variant::ALL
            .into_iter()
            .find(|v| v.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| CoreError::InvalidArgument(format!("unknown dataset variant `{s}`")))
    }
}
