//! The four cyclomatic complexity variants.

use crate::model::cfg::ControlFlowGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CcVariant {
    Standard,
    /// Adds short-circuit operators in conditions.
    Strict,
    /// Each switch with case labels counts once.
    Modified,
    /// Cyclomatic number of the structurally reduced graph.
    Essential,
}

impl CcVariant {
    pub const ALL: [CcVariant; 4] = [CcVariant::Standard, CcVariant::Strict, CcVariant::Modified, CcVariant::Essential];
}

pub fn compute_cc(cfg: &ControlFlowGraph, variant: CcVariant) -> u32 {
    let d = &cfg.decisions;
    let shared = d.ifs + d.loops + d.catches + d.ternaries;
    match variant {
        CcVariant::Standard => 1 + shared + d.case_labels,
        CcVariant::Strict => 1 + shared + d.case_labels + d.and_ops + d.or_ops,
        CcVariant::Modified => 1 + shared + d.switches,
        CcVariant::Essential => cfg.essential_complexity().max(1) as u32,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ast::Member;
    use crate::model::cfg::build_cfg;
    use crate::model::lexer::tokenize;
    use crate::model::parser::parse_compilation_unit;

    fn all(body: &str) -> [u32; 4] {
        let src = format!("class T {{ void m(int k, boolean x, boolean y, boolean z) {{ {body} }} }}");
        let unit = parse_compilation_unit(&tokenize(&src).unwrap()).unwrap();
        let Member::Method(m) = &unit.types[0].members[0] else { panic!() };
        let g = build_cfg(m).unwrap();
        CcVariant::ALL.map(|v| compute_cc(&g, v))
    }

    #[test]
    fn short_circuit_condition() {
        assert_eq!(all("if (x && y || z) s();"), [2, 4, 2, 1]);
    }

    #[test]
    fn empty_body() {
        assert_eq!(all(""), [1, 1, 1, 1]);
    }

    #[test]
    fn switch_with_three_labels() {
        let cc = all("switch (k) { case 1: a(); break; case 2: b(); break; case 3: c(); }");
        assert_eq!(cc[0], 4);
        assert_eq!(cc[2], 2);
    }

    #[test]
    fn ternary_and_catch_count() {
        let cc = all("try { int a = x ? 1 : 2; } catch (RuntimeException e) { } catch (Error e) { }");
        assert_eq!(cc[0], 4);
        assert_eq!(cc[1], 4);
    }
}
