//! Class-level slice: plain class metrics and the method-level webs lifted
//! to the class.
//!
//! For the LOC and NOST webs the bare (SUM, ALL) cell and its LOG hold the
//! class-level measurement, which also covers field declarations,
//! initializer blocks and lines outside method bodies. The remaining
//! operators aggregate over methods with bodies.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::model::ast::{TypeKind, Visibility};
use crate::model::symbols::SymbolIndex;
use crate::model::{ClassDecl, LineProfile, ProjectModel};

use super::method::{method_metrics, statement_counts, MethodMetrics};
use super::schema::{
    Level, MetricSchema, SubMetricWeb, CSCC_WEB, CSKNOTS_WEB, CSLOC_WEB, CSNESTING_WEB, CSNOP_WEB, CSNOST_WEB, CSPATH_WEB,
};
use super::submetrics::{log_op, Filter, Op, Stats};

/// Everything computed for one class: its method metrics and its slice of
/// the feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMetrics {
    pub class: usize,
    pub methods: Vec<MethodMetrics>,
    /// Class partition of the schema, in schema order.
    pub values: Vec<f64>,
}

impl ClassMetrics {
    pub fn get(&self, name: &str) -> Option<f64> {
        let schema = MetricSchema::full();
        let start = schema.partition(Level::Class).start;
        let pos = schema.position(name)?;
        pos.checked_sub(start).and_then(|i| self.values.get(i).copied())
    }
}

/// Method-level value of one web variant.
pub fn variant_value(stem: &str, m: &MethodMetrics) -> f64 {
    match stem {
        "CSLOC" | "PKLOC" => m.loc,
        "CSLOCC" | "PKLOCC" => m.locc,
        "CSLOCT" | "PKLOCT" => m.loct,
        "CSNOST" | "PKNOST" => m.nost,
        "CSNOSTD" | "PKNOSTD" => m.nostd,
        "CSNOSTE" | "PKNOSTE" => m.noste,
        "CSNOP" => m.params,
        "CSCC" | "PKCC" => m.cc[0],
        "CSCCS" | "PKCCS" => m.cc[1],
        "CSCCM" | "PKCCM" => m.cc[2],
        "CSCCE" | "PKCCE" => m.cc[3],
        "CSNESTING" | "PKNESTING" => m.nesting,
        "CSPATH" => m.npath,
        "CSKNOTS" => m.knots,
        other => unreachable!("no method-level value for {other}"),
    }
}

/// Expands a web over method values. `whole` supplies the class-level
/// measurement used for the bare ALL cell and its LOG, where one exists.
pub fn web_values(web: &SubMetricWeb, methods: &[MethodMetrics], whole: impl Fn(&str) -> Option<f64>) -> Vec<(String, f64)> {
    let mut out = Vec::with_capacity(web.width());
    for (stem, op, filter, name) in web.cells() {
        let values: Vec<f64> = methods
            .iter()
            .filter(|m| filter == Filter::All || m.namm)
            .map(|m| variant_value(stem, m))
            .collect();
        let stats = Stats::of(&values);
        let v = match (filter, op, whole(stem)) {
            (Filter::All, Op::Sum, Some(w)) => w,
            (Filter::All, Op::Log, Some(w)) => log_op(w),
            _ => stats.get(op),
        };
        out.push((name, v));
    }
    out
}

fn class_lines(lines: &LineProfile, c: &ClassDecl) -> [f64; 3] {
    [
        f64::from(lines.code_lines(c.start_line, c.end_line)),
        f64::from(lines.comment_lines(c.start_line, c.end_line)),
        f64::from(c.end_line - c.start_line + 1),
    ]
}

/// (all, declarative, executable) statements of the class.
fn class_statements(c: &ClassDecl, methods: &[MethodMetrics]) -> [f64; 3] {
    let mut decl: f64 = methods.iter().map(|m| m.nostd).sum();
    let mut exec: f64 = methods.iter().map(|m| m.noste).sum();
    decl += c.fields.len() as f64;
    for init in &c.initializers {
        let (d, e) = statement_counts(&init.body);
        decl += f64::from(d);
        exec += f64::from(e);
    }
    [decl + exec, decl, exec]
}

fn closure(start: usize, next: impl Fn(usize) -> Vec<usize>) -> usize {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from(next(start));
    while let Some(c) = queue.pop_front() {
        if c != start && seen.insert(c) {
            queue.extend(next(c));
        }
    }
    seen.len()
}

/// Depth of inheritance; a class without a local parent has depth 1.
pub fn dit(index: &SymbolIndex, classes: &[ClassDecl], id: usize) -> usize {
    let parents: Vec<usize> = if classes[id].is_interface() {
        index.local_parents(id)
    } else {
        index.local_superclass(id).into_iter().collect()
    };
    1 + parents.into_iter().map(|p| dit(index, classes, p)).max().unwrap_or(0)
}

/// Pairs of methods sharing no field minus pairs sharing one, floored at 0.
pub fn lack_of_cohesion(usage: &[&BTreeSet<String>]) -> f64 {
    let (mut p, mut q) = (0i64, 0i64);
    for i in 0..usage.len() {
        for j in i + 1..usage.len() {
            if usage[i].is_disjoint(usage[j]) {
                p += 1;
            } else {
                q += 1;
            }
        }
    }
    (p - q).max(0) as f64
}

fn inheritable_signatures(model: &ProjectModel, id: usize) -> HashSet<(String, usize)> {
    let index = model.index();
    index
        .ancestry(id)
        .into_iter()
        .skip(1)
        .flat_map(|a| model.class(a).plain_methods())
        .filter(|m| m.modifiers.visibility != Visibility::Private)
        .map(|m| (m.name.clone(), m.param_count()))
        .collect()
}

fn plain(model: &ProjectModel, id: usize) -> Vec<(&'static str, f64)> {
    let c = model.class(id);
    let index = model.index();
    let links = index.links(id);
    let plain: Vec<_> = c.plain_methods().collect();
    let count = |f: &dyn Fn(&&crate::model::ast::MethodDecl) -> bool| plain.iter().filter(|m| f(m)).count() as f64;
    let static_fields: usize = c.fields.iter().filter(|f| f.modifiers.is_static).map(|f| f.declarators.len()).sum();
    let all_fields: usize = c.fields.iter().map(|f| f.declarators.len()).sum();

    let usage: Vec<&BTreeSet<String>> = c
        .methods
        .iter()
        .zip(&links.field_usage)
        .filter(|(m, _)| !m.is_constructor)
        .map(|(_, u)| u)
        .collect();
    let foreign_targets: BTreeSet<(usize, usize)> = links.calls.iter().filter_map(|s| s.target).filter(|(t, _)| *t != id).collect();
    let cfnamm = links
        .calls
        .iter()
        .filter(|s| s.is_foreign(id) && c.methods[s.method].is_namm())
        .count();

    let inherited = inheritable_signatures(model, id);
    let own: HashSet<(String, usize)> = plain.iter().map(|m| (m.name.clone(), m.param_count())).collect();
    let nmo = plain
        .iter()
        .filter(|m| m.modifiers.visibility != Visibility::Private && !m.modifiers.is_static)
        .filter(|m| inherited.contains(&(m.name.clone(), m.param_count())))
        .count();

    vec![
        ("CSNOSM", count(&|m| m.modifiers.is_static)),
        ("CSNOSA", static_fields as f64),
        ("CSNOIM", count(&|m| !m.modifiers.is_static)),
        ("CSNOIA", (all_fields - static_fields) as f64),
        ("CSNOM", plain.len() as f64),
        ("CSNOMNAMM", count(&|m| !m.is_accessor && !m.is_mutator)),
        ("CSNOCON", c.constructors().count() as f64),
        ("LOCM", lack_of_cohesion(&usage)),
        ("CBO", links.coupled.iter().filter(|&&x| x != id).count() as f64),
        ("RFC", (c.methods.len() + foreign_targets.len()) as f64),
        ("FANIN", links.depended_by.len() as f64),
        ("FANOUT", links.depends_on.len() as f64),
        ("DEPENDS", closure(id, |x| index.links(x).depends_on.iter().copied().collect()) as f64),
        ("DEPENDSBY", closure(id, |x| index.links(x).depended_by.iter().copied().collect()) as f64),
        ("ATFD", links.foreign_fields.len() as f64),
        ("CFNAMM", cfnamm as f64),
        ("DAC", links.local_typed_fields as f64),
        ("NOMCALL", links.calls.len() as f64),
        ("CSNODM", count(&|m| m.modifiers.visibility == Visibility::Default)),
        ("CSNOPM", count(&|m| m.modifiers.visibility == Visibility::Public)),
        ("CSNOPRM", count(&|m| m.modifiers.visibility == Visibility::Protected)),
        ("CSNOPLM", count(&|m| m.modifiers.visibility == Visibility::Private)),
        ("CSNOAMM", count(&|m| m.is_accessor || m.is_mutator)),
        ("DIT", dit(index, model.classes(), id) as f64),
        ("NOC", links.children.len() as f64),
        ("NOP", index.local_parents(id).len() as f64),
        ("NIM", inherited.difference(&own).count() as f64),
        ("NMO", nmo as f64),
        ("NOII", c.interfaces.len() as f64),
    ]
}

/// Computes the class slice for one class.
pub fn compute_class_metrics(model: &ProjectModel, id: usize) -> ClassMetrics {
    let c = model.class(id);
    let lines = &model.file_of(id).lines;
    let methods: Vec<MethodMetrics> = c.methods.iter().filter_map(|m| method_metrics(m, lines)).collect();
    let loc = class_lines(lines, c);
    let nost = class_statements(c, &methods);

    let mut named: Vec<(String, f64)> = Vec::new();
    named.extend(web_values(&CSLOC_WEB, &methods, |stem| match stem {
        "CSLOC" => Some(loc[0]),
        "CSLOCC" => Some(loc[1]),
        _ => Some(loc[2]),
    }));
    named.extend(web_values(&CSNOST_WEB, &methods, |stem| match stem {
        "CSNOST" => Some(nost[0]),
        "CSNOSTD" => Some(nost[1]),
        _ => Some(nost[2]),
    }));
    for web in [&CSNOP_WEB, &CSCC_WEB, &CSNESTING_WEB, &CSPATH_WEB, &CSKNOTS_WEB] {
        named.extend(web_values(web, &methods, |_| None));
    }
    named.extend(plain(model, id).into_iter().map(|(n, v)| (n.to_string(), v)));

    ClassMetrics {
        class: id,
        methods,
        values: arrange(Level::Class, named),
    }
}

/// Orders named values by a schema partition.
pub(crate) fn arrange(level: Level, named: Vec<(String, f64)>) -> Vec<f64> {
    let schema = MetricSchema::full();
    let range = schema.partition(level);
    let mut out = vec![f64::NAN; range.len()];
    for (name, v) in named {
        let pos = schema
            .position(&name)
            .unwrap_or_else(|| panic!("{name} is not in the schema"));
        out[pos - range.start] = v;
    }
    debug_assert!(out.iter().all(|v| !v.is_nan()), "partition {level:?} not fully populated");
    out
}

pub(crate) fn is_abstract_class(c: &ClassDecl) -> bool {
    matches!(c.kind, TypeKind::Class) && c.modifiers.is_abstract
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(sources: &[(&str, &str)]) -> ProjectModel {
        ProjectModel::from_sources(sources)
    }

    fn metric(m: &ProjectModel, class: &str, name: &str) -> f64 {
        let id = m.class_id(class).unwrap();
        compute_class_metrics(m, id).get(name).unwrap()
    }

    #[test]
    fn accessors_and_mutators() {
        let m = model(&[(
            "p/A.java",
            "package p; class A { private int x; private int y;
               int getX() { return x; }
               void setY(int v) { this.y = v; }
               int sum() { return x + y; } }",
        )]);
        assert_eq!(metric(&m, "p.A", "CSNOM"), 3.0);
        assert_eq!(metric(&m, "p.A", "CSNOAMM"), 2.0);
        assert_eq!(metric(&m, "p.A", "CSNOMNAMM"), 1.0);
        assert_eq!(metric(&m, "p.A", "CSNOIA"), 2.0);
        assert_eq!(metric(&m, "p.A", "CSNOPLM"), 0.0);
        assert_eq!(metric(&m, "p.A", "CSNODM"), 3.0);
    }

    #[test]
    fn inheritance_depth_with_external_root() {
        let m = model(&[
            ("p/A.java", "package p; class A extends java.util.ArrayList<String> { public void f() {} void g() {} }"),
            ("p/B.java", "package p; class B extends A { public void f() {} }"),
        ]);
        assert_eq!(metric(&m, "p.A", "DIT"), 1.0);
        assert_eq!(metric(&m, "p.B", "DIT"), 2.0);
        assert_eq!(metric(&m, "p.A", "NOC"), 1.0);
        assert_eq!(metric(&m, "p.B", "NOP"), 1.0);
        assert_eq!(metric(&m, "p.B", "NMO"), 1.0);
        assert_eq!(metric(&m, "p.B", "NIM"), 1.0);
    }

    #[test]
    fn isolated_class_has_no_coupling() {
        let m = model(&[("A.java", "class A { int f(int a) { return a * 2; } }")]);
        for n in ["CBO", "FANOUT", "FANIN", "DEPENDS", "DEPENDSBY", "ATFD", "DAC", "RFC"] {
            let expected = if n == "RFC" { 1.0 } else { 0.0 };
            assert_eq!(metric(&m, "A", n), expected, "{n}");
        }
    }

    #[test]
    fn transitive_dependencies() {
        let m = model(&[
            ("A.java", "class A { B b; void f() { b.g(); } }"),
            ("B.java", "class B { C c; void g() { } }"),
            ("C.java", "class C { }"),
        ]);
        assert_eq!(metric(&m, "A", "FANOUT"), 1.0);
        assert_eq!(metric(&m, "A", "DEPENDS"), 2.0);
        assert_eq!(metric(&m, "C", "DEPENDSBY"), 2.0);
        assert_eq!(metric(&m, "A", "DAC"), 1.0);
        assert_eq!(metric(&m, "A", "RFC"), 2.0);
        assert_eq!(metric(&m, "A", "CFNAMM"), 1.0);
    }

    #[test]
    fn cohesion() {
        let a: BTreeSet<String> = ["x".to_string()].into();
        let b: BTreeSet<String> = ["y".to_string()].into();
        let e = BTreeSet::new();
        assert_eq!(lack_of_cohesion(&[&a, &b, &e]), 3.0);
        assert_eq!(lack_of_cohesion(&[&a, &a]), 0.0);
    }

    #[test]
    fn lifted_web_uses_class_level_total() {
        let m = model(&[("A.java", "class A {\n  int x;\n  void f() {\n    x++;\n  }\n}\n")]);
        assert_eq!(metric(&m, "A", "CSLOC"), 6.0);
        assert_eq!(metric(&m, "A", "CSLOC_AVG"), 3.0);
        assert_eq!(metric(&m, "A", "CSNOST"), 2.0);
        assert_eq!(metric(&m, "A", "CSNOSTD"), 1.0);
        assert!((metric(&m, "A", "CSNOST_LOG") - 3f64.ln()).abs() < 1e-12);
    }
}
