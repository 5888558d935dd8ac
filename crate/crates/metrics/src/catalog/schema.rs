//! The fixed, versioned feature schema.
//!
//! Order: package slice, file (lexical) slice, class slice. A web's primary
//! operator cell carries the bare stem name; the other cells append the
//! operator and then `_NAMM` for the filtered variant.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::submetrics::{feature_name, Filter, Op};

pub const SCHEMA_VERSION: &str = "coverageability-schema/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    Package,
    File,
    Class,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feature {
    pub name: String,
    pub level: Level,
    /// Base metric, e.g. `CSCC` for `CSCCS_AVG_NAMM`.
    pub base: &'static str,
    /// Variant stem, e.g. `CSCCS`; equals `base` for the primary variant.
    pub stem: &'static str,
    /// `None` for the primary cell or a plain metric.
    pub op: Option<Op>,
    pub filter: Filter,
}

impl Feature {
    /// One of the base metrics: no operator suffix, no filter, no variant.
    pub fn is_base(&self) -> bool {
        self.op.is_none() && self.filter == Filter::All && self.stem == self.base
    }
}

/// A base metric expanded over variants, operators and filters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubMetricWeb {
    pub base: &'static str,
    pub level: Level,
    pub variants: &'static [&'static str],
    /// Operators in schema order; includes `primary`.
    pub ops: &'static [Op],
    /// Operator whose cell carries the bare name.
    pub primary: Op,
    pub filters: &'static [Filter],
}

impl SubMetricWeb {
    pub fn width(&self) -> usize {
        self.variants.len() * self.ops.len() * self.filters.len()
    }

    /// Cells in schema order: variant, then filter, then operator.
    pub fn cells(&self) -> Vec<(&'static str, Op, Filter, String)> {
        let mut out = Vec::with_capacity(self.width());
        for &v in self.variants {
            for &f in self.filters {
                for &op in self.ops {
                    out.push((v, op, f, feature_name(v, op, self.primary, f)));
                }
            }
        }
        out
    }
}

const SIX: &[Op] = &[Op::Sum, Op::Avg, Op::Min, Op::Max, Op::Log, Op::Sd];
const FIVE_NO_LOG: &[Op] = &[Op::Sum, Op::Avg, Op::Min, Op::Max, Op::Sd];
const FIVE_NO_MIN: &[Op] = &[Op::Sum, Op::Avg, Op::Max, Op::Log, Op::Sd];
const NESTING_OPS: &[Op] = &[Op::Max, Op::Avg];
const BOTH: &[Filter] = &[Filter::All, Filter::Namm];
const ALL_ONLY: &[Filter] = &[Filter::All];

pub const CC_VARIANTS: [&str; 4] = ["CSCC", "CSCCS", "CSCCM", "CSCCE"];
pub const PK_CC_VARIANTS: [&str; 4] = ["PKCC", "PKCCS", "PKCCM", "PKCCE"];

pub const CSLOC_WEB: SubMetricWeb = SubMetricWeb {
    base: "CSLOC",
    level: Level::Class,
    variants: &["CSLOC", "CSLOCC", "CSLOCT"],
    ops: SIX,
    primary: Op::Sum,
    filters: BOTH,
};
pub const CSNOST_WEB: SubMetricWeb = SubMetricWeb {
    base: "CSNOST",
    level: Level::Class,
    variants: &["CSNOST", "CSNOSTD", "CSNOSTE"],
    ops: SIX,
    primary: Op::Sum,
    filters: BOTH,
};
pub const CSNOP_WEB: SubMetricWeb = SubMetricWeb {
    base: "CSNOP",
    level: Level::Class,
    variants: &["CSNOP"],
    ops: FIVE_NO_LOG,
    primary: Op::Sum,
    filters: BOTH,
};
pub const CSCC_WEB: SubMetricWeb = SubMetricWeb {
    base: "CSCC",
    level: Level::Class,
    variants: &CC_VARIANTS,
    ops: SIX,
    primary: Op::Sum,
    filters: BOTH,
};
pub const CSNESTING_WEB: SubMetricWeb = SubMetricWeb {
    base: "CSNESTING",
    level: Level::Class,
    variants: &["CSNESTING"],
    ops: NESTING_OPS,
    primary: Op::Max,
    filters: BOTH,
};
pub const CSPATH_WEB: SubMetricWeb = SubMetricWeb {
    base: "CSPATH",
    level: Level::Class,
    variants: &["CSPATH"],
    ops: FIVE_NO_MIN,
    primary: Op::Sum,
    filters: BOTH,
};
pub const CSKNOTS_WEB: SubMetricWeb = SubMetricWeb {
    base: "CSKNOTS",
    level: Level::Class,
    variants: &["CSKNOTS"],
    ops: FIVE_NO_MIN,
    primary: Op::Sum,
    filters: BOTH,
};
pub const PKLOC_WEB: SubMetricWeb = SubMetricWeb {
    base: "PKLOC",
    level: Level::Package,
    variants: &["PKLOC", "PKLOCC", "PKLOCT"],
    ops: FIVE_NO_LOG,
    primary: Op::Sum,
    filters: ALL_ONLY,
};
pub const PKNOST_WEB: SubMetricWeb = SubMetricWeb {
    base: "PKNOST",
    level: Level::Package,
    variants: &["PKNOST", "PKNOSTD", "PKNOSTE"],
    ops: FIVE_NO_LOG,
    primary: Op::Sum,
    filters: ALL_ONLY,
};
pub const PKCC_WEB: SubMetricWeb = SubMetricWeb {
    base: "PKCC",
    level: Level::Package,
    variants: &PK_CC_VARIANTS,
    ops: SIX,
    primary: Op::Sum,
    filters: BOTH,
};
pub const PKNESTING_WEB: SubMetricWeb = SubMetricWeb {
    base: "PKNESTING",
    level: Level::Package,
    variants: &["PKNESTING"],
    ops: NESTING_OPS,
    primary: Op::Max,
    filters: BOTH,
};

enum Entry {
    Plain(&'static str),
    Web(SubMetricWeb),
}

const PACKAGE_ENTRIES: &[Entry] = &[
    Entry::Web(PKLOC_WEB),
    Entry::Web(PKNOST_WEB),
    Entry::Plain("PKNOSM"),
    Entry::Plain("PKNOSA"),
    Entry::Plain("PKNOIM"),
    Entry::Plain("PKNOIA"),
    Entry::Plain("PKNOMNAMM"),
    Entry::Plain("PKNOCS"),
    Entry::Plain("PKNOFL"),
    Entry::Web(PKCC_WEB),
    Entry::Web(PKNESTING_WEB),
    Entry::Plain("PKNODM"),
    Entry::Plain("PKNOPM"),
    Entry::Plain("PKNOPRM"),
    Entry::Plain("PKNOPLM"),
    Entry::Plain("PKNOAMM"),
    Entry::Plain("PKNOI"),
    Entry::Plain("PKNOAC"),
];

pub const LEXICAL_NAMES: [&str; 17] = [
    "NOTK", "NOTKU", "NOID", "NOIDU", "NOKW", "NOKWU", "NOASS", "NOOP", "NOOPU", "NOSC", "NODOT", "NOREPR", "NOCJST", "NOCUJST",
    "NOEXST", "NONEW", "NOSUPER",
];

const CLASS_ENTRIES: &[Entry] = &[
    Entry::Web(CSLOC_WEB),
    Entry::Web(CSNOST_WEB),
    Entry::Plain("CSNOSM"),
    Entry::Plain("CSNOSA"),
    Entry::Plain("CSNOIM"),
    Entry::Plain("CSNOIA"),
    Entry::Plain("CSNOM"),
    Entry::Plain("CSNOMNAMM"),
    Entry::Plain("CSNOCON"),
    Entry::Web(CSNOP_WEB),
    Entry::Web(CSCC_WEB),
    Entry::Web(CSNESTING_WEB),
    Entry::Web(CSPATH_WEB),
    Entry::Web(CSKNOTS_WEB),
    Entry::Plain("LOCM"),
    Entry::Plain("CBO"),
    Entry::Plain("RFC"),
    Entry::Plain("FANIN"),
    Entry::Plain("FANOUT"),
    Entry::Plain("DEPENDS"),
    Entry::Plain("DEPENDSBY"),
    Entry::Plain("ATFD"),
    Entry::Plain("CFNAMM"),
    Entry::Plain("DAC"),
    Entry::Plain("NOMCALL"),
    Entry::Plain("CSNODM"),
    Entry::Plain("CSNOPM"),
    Entry::Plain("CSNOPRM"),
    Entry::Plain("CSNOPLM"),
    Entry::Plain("CSNOAMM"),
    Entry::Plain("DIT"),
    Entry::Plain("NOC"),
    Entry::Plain("NOP"),
    Entry::Plain("NIM"),
    Entry::Plain("NMO"),
    Entry::Plain("NOII"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSchema {
    pub version: &'static str,
    pub features: Vec<Feature>,
    positions: HashMap<String, usize>,
}

impl MetricSchema {
    /// The full 296-feature schema.
    pub fn full() -> &'static MetricSchema {
        static SCHEMA: OnceLock<MetricSchema> = OnceLock::new();
        SCHEMA.get_or_init(build)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.features.iter().map(|f| f.name.as_str())
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.positions.get(name).copied()
    }

    pub fn feature(&self, name: &str) -> Option<&Feature> {
        self.position(name).map(|i| &self.features[i])
    }

    /// Index range of one partition.
    pub fn partition(&self, level: Level) -> Range<usize> {
        let start = self.features.iter().position(|f| f.level == level).unwrap_or(0);
        let len = self.features.iter().filter(|f| f.level == level).count();
        start..start + len
    }

    /// Number of features a web or plain metric expands to.
    pub fn base_width(&self, base: &str) -> usize {
        self.features.iter().filter(|f| f.base == base).count()
    }
}

fn push_entries(entries: &[Entry], level: Level, out: &mut Vec<Feature>) {
    for e in entries {
        match e {
            Entry::Plain(name) => out.push(Feature {
                name: (*name).to_string(),
                level,
                base: name,
                stem: name,
                op: None,
                filter: Filter::All,
            }),
            Entry::Web(web) => {
                for (stem, op, filter, name) in web.cells() {
                    out.push(Feature {
                        name,
                        level,
                        base: web.base,
                        stem,
                        op: (op != web.primary).then_some(op),
                        filter,
                    });
                }
            }
        }
    }
}

fn build() -> MetricSchema {
    let mut features = Vec::new();
    push_entries(PACKAGE_ENTRIES, Level::Package, &mut features);
    for name in LEXICAL_NAMES {
        features.push(Feature {
            name: name.to_string(),
            level: Level::File,
            base: name,
            stem: name,
            op: None,
            filter: Filter::All,
        });
    }
    push_entries(CLASS_ENTRIES, Level::Class, &mut features);
    let positions = features.iter().enumerate().map(|(i, f)| (f.name.clone(), i)).collect();
    MetricSchema {
        version: SCHEMA_VERSION,
        features,
        positions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals() {
        let s = MetricSchema::full();
        assert_eq!(s.len(), 296);
        assert_eq!(s.partition(Level::Package).len(), 96);
        assert_eq!(s.partition(Level::File).len(), 17);
        assert_eq!(s.partition(Level::Class).len(), 183);
        assert_eq!(s.partition(Level::Package), 0..96);
        assert_eq!(s.partition(Level::File), 96..113);
        assert_eq!(s.partition(Level::Class), 113..296);
    }

    #[test]
    fn web_widths_match_documented_counts() {
        let s = MetricSchema::full();
        for (base, width) in [
            ("CSCC", 48),
            ("CSLOC", 36),
            ("CSNOST", 36),
            ("CSNOP", 10),
            ("CSNESTING", 4),
            ("CSPATH", 10),
            ("CSKNOTS", 10),
            ("PKLOC", 15),
            ("PKNOST", 15),
            ("PKCC", 48),
            ("PKNESTING", 4),
        ] {
            assert_eq!(s.base_width(base), width, "{base}");
        }
    }

    #[test]
    fn names_unique_and_base_count() {
        let s = MetricSchema::full();
        let mut names: Vec<&str> = s.names().collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), 296);
        assert_eq!(s.features.iter().filter(|f| f.is_base()).count(), 71);
    }

    #[test]
    fn names_seen_in_importance_tables_exist() {
        let s = MetricSchema::full();
        for n in [
            "CSCCS", "NOCJST", "CSCCS_LOG", "CSNOMNAMM", "NIM", "CSNOSTD_LOG", "CSNOPM", "CSNOSM", "CSNOCON", "CSLOC_MIN", "CSCC",
            "NOREPR", "DIT", "NOID", "CSNOPLM",
        ] {
            assert!(s.position(n).is_some(), "{n}");
        }
    }
}
