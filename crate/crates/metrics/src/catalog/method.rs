//! Method-level base metrics feeding the class and package webs.

use crate::model::ast::*;
use crate::model::cfg::{build_block_cfg, ControlFlowGraph, JumpSpan};
use crate::model::visit::{walk_block, Visitor};
use crate::model::LineProfile;

use super::cc::{compute_cc, CcVariant};

/// Saturation bound for path counts.
pub const NPATH_CAP: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct MethodMetrics {
    pub name: String,
    /// CC, strict, modified, essential.
    pub cc: [f64; 4],
    pub loc: f64,
    pub locc: f64,
    pub loct: f64,
    pub nost: f64,
    pub nostd: f64,
    pub noste: f64,
    pub params: f64,
    pub nesting: f64,
    pub npath: f64,
    pub knots: f64,
    pub namm: bool,
}

/// Metrics of a method with a body; `None` for bodiless declarations.
pub fn method_metrics(m: &MethodDecl, lines: &LineProfile) -> Option<MethodMetrics> {
    let body = m.body.as_ref()?;
    let cfg = build_block_cfg(body, m.start_line, m.end_line);
    let (nostd, noste) = statement_counts(body);
    Some(MethodMetrics {
        name: m.name.clone(),
        cc: CcVariant::ALL.map(|v| f64::from(compute_cc(&cfg, v))),
        loc: f64::from(lines.code_lines(m.start_line, m.end_line)),
        locc: f64::from(lines.comment_lines(m.start_line, m.end_line)),
        loct: f64::from(m.end_line - m.start_line + 1),
        nost: f64::from(nostd + noste),
        nostd: f64::from(nostd),
        noste: f64::from(noste),
        params: m.param_count() as f64,
        nesting: f64::from(block_nesting(body, 0)),
        npath: npath_block(body) as f64,
        knots: f64::from(knots(&cfg)),
        namm: m.is_namm(),
    })
}

/// (declarative, executable) statement counts; blocks, empty statements
/// and labels are not statements. Nested bodies are included.
pub fn statement_counts(block: &Block) -> (u32, u32) {
    struct Count(u32, u32);
    impl Visitor for Count {
        fn stmt(&mut self, s: &Stmt) {
            match s.kind {
                StmtKind::LocalVar { .. } | StmtKind::LocalClass(_) => self.0 += 1,
                StmtKind::Block(_) | StmtKind::Empty | StmtKind::Labeled { .. } => {}
                _ => self.1 += 1,
            }
        }
    }
    let mut c = Count(0, 0);
    walk_block(&mut c, block);
    (c.0, c.1)
}

fn block_nesting(b: &Block, depth: u32) -> u32 {
    b.stmts.iter().map(|s| stmt_nesting(s, depth)).max().unwrap_or(depth)
}

/// Deepest control-statement nesting at or below `s`.
fn stmt_nesting(s: &Stmt, depth: u32) -> u32 {
    let inner = depth + 1;
    match &s.kind {
        StmtKind::If { then, otherwise, .. } => {
            let mut m = stmt_nesting(then, inner).max(inner);
            if let Some(o) = otherwise {
                // `else if` stays at the level of its leading `if`.
                let o_depth = if matches!(o.kind, StmtKind::If { .. }) { depth } else { inner };
                m = m.max(stmt_nesting(o, o_depth));
            }
            m
        }
        StmtKind::While { body, .. } | StmtKind::DoWhile { body, .. } | StmtKind::ForEach { body, .. } | StmtKind::For { body, .. } => {
            stmt_nesting(body, inner).max(inner)
        }
        StmtKind::Switch { cases, .. } => cases
            .iter()
            .flat_map(|c| c.body.iter())
            .map(|s| stmt_nesting(s, inner))
            .max()
            .unwrap_or(inner)
            .max(inner),
        StmtKind::Try { body, catches, finally, .. } => {
            let mut m = block_nesting(body, inner).max(inner);
            for c in catches {
                m = m.max(block_nesting(&c.body, inner));
            }
            if let Some(f) = finally {
                m = m.max(block_nesting(f, inner));
            }
            m
        }
        StmtKind::Block(b) => block_nesting(b, depth),
        StmtKind::Synchronized { body, .. } => block_nesting(body, depth),
        StmtKind::Labeled { body, .. } => stmt_nesting(body, depth),
        _ => depth,
    }
}

fn cap(x: u64) -> u64 {
    x.min(NPATH_CAP)
}

fn bool_ops(e: &Expr) -> u64 {
    let mut n = 0;
    crate::model::visit::walk_expr(
        &mut {
            struct B<'a>(&'a mut u64);
            impl Visitor for B<'_> {
                fn expr(&mut self, e: &Expr) {
                    if let ExprKind::Binary { op, .. } = &e.kind {
                        if op == "&&" || op == "||" {
                            *self.0 += 1;
                        }
                    }
                }
                fn enter_nested(&self) -> bool {
                    false
                }
            }
            B(&mut n)
        },
        e,
    );
    n
}

fn ternaries(s: &Stmt) -> u64 {
    let d = crate::model::cfg::stmt_decisions_shallow(s);
    u64::from(d.ternaries)
}

/// Acyclic execution path count, saturating at [`NPATH_CAP`].
pub fn npath_block(b: &Block) -> u64 {
    npath_seq(&b.stmts)
}

fn npath_seq(stmts: &[Stmt]) -> u64 {
    stmts.iter().fold(1u64, |acc, s| cap(acc.saturating_mul(npath_stmt(s))))
}

fn npath_stmt(s: &Stmt) -> u64 {
    let n = match &s.kind {
        StmtKind::If { cond, then, otherwise } => {
            let e = otherwise.as_ref().map_or(1, |o| npath_stmt(o));
            npath_stmt(then).saturating_add(e).saturating_add(bool_ops(cond))
        }
        StmtKind::While { cond, body } | StmtKind::DoWhile { body, cond } => {
            npath_stmt(body).saturating_add(bool_ops(cond)).saturating_add(1)
        }
        StmtKind::For { cond, body, .. } => npath_stmt(body)
            .saturating_add(cond.as_ref().map_or(0, bool_ops))
            .saturating_add(1),
        StmtKind::ForEach { body, .. } => npath_stmt(body).saturating_add(1),
        StmtKind::Switch { selector, cases } => {
            let mut total = bool_ops(selector);
            for c in cases {
                total = total.saturating_add(npath_seq(&c.body));
            }
            if !cases.iter().any(SwitchCase::has_default) {
                total = total.saturating_add(1);
            }
            total.max(1)
        }
        StmtKind::Try { body, catches, finally, .. } => {
            let mut t = npath_block(body);
            for c in catches {
                t = t.saturating_add(npath_block(&c.body));
            }
            let f = finally.as_ref().map_or(1, npath_block);
            t.saturating_mul(f)
        }
        StmtKind::Block(b) => npath_block(b),
        StmtKind::Labeled { body, .. } => npath_stmt(body),
        StmtKind::Synchronized { body, .. } => npath_block(body),
        _ => 1 + ternaries(s),
    };
    cap(n)
}

/// Pairs of jump spans whose line intervals strictly interleave.
pub fn count_knots(jumps: &[JumpSpan]) -> u32 {
    let spans: Vec<(u32, u32)> = jumps.iter().map(JumpSpan::interval).collect();
    let mut n = 0;
    for i in 0..spans.len() {
        for j in i + 1..spans.len() {
            let (a, b) = spans[i];
            let (c, d) = spans[j];
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                n += 1;
            }
        }
    }
    n
}

fn knots(cfg: &ControlFlowGraph) -> u32 {
    count_knots(&cfg.jumps)
}
