//! Package-level slice, shared by every class of a package.
//!
//! LOC and NOST aggregate the class-level values of member classes; CC and
//! NESTING aggregate over every method of the package.

use std::collections::HashMap;

use crate::model::ProjectModel;

use super::class::{arrange, is_abstract_class, web_values, ClassMetrics};
use super::schema::{Level, SubMetricWeb, PKCC_WEB, PKLOC_WEB, PKNESTING_WEB, PKNOST_WEB};
use super::submetrics::Stats;

/// Plain package counts and the class metric each one sums.
const SUMMED: [(&str, &str); 10] = [
    ("PKNOSM", "CSNOSM"),
    ("PKNOSA", "CSNOSA"),
    ("PKNOIM", "CSNOIM"),
    ("PKNOIA", "CSNOIA"),
    ("PKNOMNAMM", "CSNOMNAMM"),
    ("PKNODM", "CSNODM"),
    ("PKNOPM", "CSNOPM"),
    ("PKNOPRM", "CSNOPRM"),
    ("PKNOPLM", "CSNOPLM"),
    ("PKNOAMM", "CSNOAMM"),
];

/// Aggregates class-level values: the package web's variant `PKx` reads
/// the class metric `CSx`.
fn class_web(web: &SubMetricWeb, members: &[&ClassMetrics]) -> Vec<(String, f64)> {
    web.cells()
        .into_iter()
        .map(|(stem, op, _, name)| {
            let class_name = stem.replacen("PK", "CS", 1);
            let values: Vec<f64> = members.iter().map(|c| c.get(&class_name).unwrap_or(0.0)).collect();
            (name, Stats::of(&values).get(op))
        })
        .collect()
}

/// Computes the package slice. `members` are the metrics of the
/// package's classes, nested classes included.
pub fn compute_package_metrics(model: &ProjectModel, package: usize, members: &[&ClassMetrics]) -> Vec<f64> {
    let pkg = &model.packages()[package];
    let methods: Vec<_> = members.iter().flat_map(|c| c.methods.iter().cloned()).collect();

    let mut named = Vec::new();
    named.extend(class_web(&PKLOC_WEB, members));
    named.extend(class_web(&PKNOST_WEB, members));
    named.extend(web_values(&PKCC_WEB, &methods, |_| None));
    named.extend(web_values(&PKNESTING_WEB, &methods, |_| None));

    let sums: HashMap<&str, f64> = SUMMED
        .iter()
        .map(|&(pk, cs)| (pk, members.iter().map(|c| c.get(cs).unwrap_or(0.0)).sum()))
        .collect();
    for (pk, _) in SUMMED {
        named.push((pk.to_string(), sums[pk]));
    }
    let classes = || pkg.classes.iter().map(|&id| model.class(id));
    named.push(("PKNOCS".to_string(), pkg.classes.len() as f64));
    named.push(("PKNOFL".to_string(), pkg.files.len() as f64));
    named.push(("PKNOI".to_string(), classes().filter(|c| c.is_interface()).count() as f64));
    named.push(("PKNOAC".to_string(), classes().filter(|c| is_abstract_class(c)).count() as f64));
    arrange(Level::Package, named)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::class::compute_class_metrics;
    use crate::catalog::schema::MetricSchema;

    fn package_value(m: &ProjectModel, name: &str) -> f64 {
        let metrics: Vec<ClassMetrics> = (0..m.classes().len()).map(|i| compute_class_metrics(m, i)).collect();
        let refs: Vec<&ClassMetrics> = metrics.iter().collect();
        let slice = compute_package_metrics(m, 0, &refs);
        slice[MetricSchema::full().position(name).unwrap()]
    }

    #[test]
    fn two_class_line_aggregates() {
        // 10 and 30 code lines respectively
        let a = format!("class A {{\n{}}}\n", "int a;\n".repeat(8));
        let b = format!("class B {{\n{}}}\n", "int b;\n".repeat(28));
        let m = ProjectModel::from_sources(&[("A.java", a.as_str()), ("B.java", b.as_str())]);
        assert_eq!(package_value(&m, "PKLOC"), 40.0);
        assert_eq!(package_value(&m, "PKLOC_AVG"), 20.0);
        assert_eq!(package_value(&m, "PKLOC_SD"), 10.0);
        assert_eq!(package_value(&m, "PKNOCS"), 2.0);
        assert_eq!(package_value(&m, "PKNOFL"), 2.0);
    }

    #[test]
    fn singleton_package_matches_class() {
        let m = ProjectModel::from_sources(&[(
            "A.java",
            "abstract class A { static int s; int f(int x) { if (x > 0) return 1; return x > 2 ? 3 : 4; } abstract void g(); }",
        )]);
        let c = compute_class_metrics(&m, 0);
        for (pk, cs) in [("PKCC", "CSCC"), ("PKCCS", "CSCCS"), ("PKLOC", "CSLOC"), ("PKNOST", "CSNOST"), ("PKNOSA", "CSNOSA")] {
            assert_eq!(package_value(&m, pk), c.get(cs).unwrap(), "{pk}");
        }
        assert_eq!(package_value(&m, "PKNOAC"), 1.0);
        assert_eq!(package_value(&m, "PKNOI"), 0.0);
    }
}
