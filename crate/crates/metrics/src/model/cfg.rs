//! Statement-level control-flow graphs with decision annotations.
//!
//! Lambdas, anonymous classes and local classes add to the decision counts
//! of the node that contains them but contribute no graph structure.

use std::collections::VecDeque;
use std::ops::{Add, AddAssign};

use super::ast::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Decisions {
    pub ifs: u32,
    pub loops: u32,
    pub case_labels: u32,
    pub catches: u32,
    pub ternaries: u32,
    /// `&&` inside if/loop/ternary conditions.
    pub and_ops: u32,
    /// `||` inside if/loop/ternary conditions.
    pub or_ops: u32,
    /// Switch statements and expressions with at least one `case` label.
    pub switches: u32,
}

impl Add for Decisions {
    type Output = Decisions;
    fn add(self, o: Decisions) -> Decisions {
        Decisions {
            ifs: self.ifs + o.ifs,
            loops: self.loops + o.loops,
            case_labels: self.case_labels + o.case_labels,
            catches: self.catches + o.catches,
            ternaries: self.ternaries + o.ternaries,
            and_ops: self.and_ops + o.and_ops,
            or_ops: self.or_ops + o.or_ops,
            switches: self.switches + o.switches,
        }
    }
}

impl AddAssign for Decisions {
    fn add_assign(&mut self, o: Decisions) {
        *self = *self + o;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Entry,
    Exit,
    Statement,
    Branch,
    LoopHeader,
    Switch,
    Try,
    /// Join point heading a do-while body.
    Join,
    Jump,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub kind: NodeKind,
    pub line: u32,
    pub decisions: Decisions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeLabel {
    Flow,
    True,
    False,
    Case,
    Default,
    Catch,
    Back,
    Break,
    Continue,
    /// `early` is false for returns in tail position.
    Return { early: bool },
    Throw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub label: EdgeLabel,
}

/// A jump laid out on source lines, used for knot counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JumpSpan {
    pub from_line: u32,
    pub to_line: u32,
}

impl JumpSpan {
    pub fn interval(&self) -> (u32, u32) {
        (self.from_line.min(self.to_line), self.from_line.max(self.to_line))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlFlowGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub entry: usize,
    pub exit: usize,
    /// Decision totals over the whole body, nested bodies included.
    pub decisions: Decisions,
    pub jumps: Vec<JumpSpan>,
}

impl ControlFlowGraph {
    /// E − N + 2.
    pub fn cyclomatic_number(&self) -> i64 {
        self.edges.len() as i64 - self.nodes.len() as i64 + 2
    }

    /// break, continue and early-return edges.
    pub fn unstructured_exits(&self) -> usize {
        self.edges
            .iter()
            .filter(|e| {
                matches!(
                    e.label,
                    EdgeLabel::Break | EdgeLabel::Continue | EdgeLabel::Return { early: true }
                )
            })
            .count()
    }

    pub fn successors(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.from == n).map(|e| e.to)
    }

    pub fn all_reachable(&self) -> bool {
        reachable(self.nodes.len(), &self.edges, self.entry).iter().all(|&r| r)
    }

    /// Cyclomatic number after repeatedly removing series nodes, contracting
    /// single-exit/single-entry edge pairs, and dropping parallel edges and
    /// self-loops; 1 for fully structured bodies.
    pub fn essential_complexity(&self) -> i64 {
        let n = self.nodes.len();
        let mut alive = vec![true; n];
        let mut edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e.from, e.to)).collect();
        loop {
            let mut changed = false;
            let before = edges.len();
            edges.retain(|(a, b)| a != b);
            edges.sort_unstable();
            edges.dedup();
            changed |= edges.len() != before;
            let mut indeg = vec![0usize; n];
            let mut outdeg = vec![0usize; n];
            for &(a, b) in &edges {
                outdeg[a] += 1;
                indeg[b] += 1;
            }
            if let Some(v) = (0..n).find(|&v| {
                alive[v] && v != self.entry && v != self.exit && indeg[v] == 1 && outdeg[v] == 1
            }) {
                let pred = edges.iter().find(|e| e.1 == v).map(|e| e.0).expect("in-edge");
                let succ = edges.iter().find(|e| e.0 == v).map(|e| e.1).expect("out-edge");
                edges.retain(|&(a, b)| a != v && b != v);
                edges.push((pred, succ));
                alive[v] = false;
                changed = true;
            } else if let Some(&(v, w)) = edges.iter().find(|&&(v, w)| {
                v != w && outdeg[v] == 1 && indeg[w] == 1 && w != self.entry && w != self.exit
            }) {
                // Contract v→w: w's out-edges move to v.
                edges.retain(|&(a, b)| !(a == v && b == w));
                for e in edges.iter_mut() {
                    if e.0 == w {
                        e.0 = v;
                    }
                }
                alive[w] = false;
                changed = true;
            }
            if !changed {
                break;
            }
        }
        let nodes = alive.iter().filter(|&&a| a).count() as i64;
        edges.len() as i64 - nodes + 2
    }
}

fn reachable(n: usize, edges: &[Edge], entry: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([entry]);
    seen[entry] = true;
    while let Some(v) = queue.pop_front() {
        for e in edges.iter().filter(|e| e.from == v) {
            if !seen[e.to] {
                seen[e.to] = true;
                queue.push_back(e.to);
            }
        }
    }
    seen
}

// ---- decision counting over syntax ----

/// Decisions in an expression; `in_cond` marks a branch condition context.
pub fn expr_decisions(e: &Expr, in_cond: bool) -> Decisions {
    let mut d = Decisions::default();
    count_expr(e, in_cond, &mut d);
    d
}

fn count_expr(e: &Expr, in_cond: bool, d: &mut Decisions) {
    match &e.kind {
        ExprKind::Binary { op, lhs, rhs } => {
            if in_cond && op == "&&" {
                d.and_ops += 1;
            }
            if in_cond && op == "||" {
                d.or_ops += 1;
            }
            count_expr(lhs, in_cond, d);
            count_expr(rhs, in_cond, d);
        }
        ExprKind::Conditional { cond, then, otherwise } => {
            d.ternaries += 1;
            count_expr(cond, true, d);
            count_expr(then, in_cond, d);
            count_expr(otherwise, in_cond, d);
        }
        ExprKind::Unary { operand, .. } => count_expr(operand, in_cond, d),
        ExprKind::Lambda { body, .. } => match body {
            LambdaBody::Expr(x) => count_expr(x, false, d),
            LambdaBody::Block(b) => *d += block_decisions(b),
        },
        ExprKind::New { args, body, .. } => {
            for a in args {
                count_expr(a, false, d);
            }
            if let Some(members) = body {
                *d += members_decisions(members);
            }
        }
        ExprKind::Switch { selector, cases } => {
            count_expr(selector, false, d);
            *d += switch_decisions(cases);
            for c in cases {
                for s in &c.body {
                    *d += stmt_decisions_deep(s);
                }
            }
        }
        _ => {
            // Remaining forms carry no decisions of their own; visit children
            // outside any condition context.
            for child in children(e) {
                count_expr(child, false, d);
            }
        }
    }
}

fn children(e: &Expr) -> Vec<&Expr> {
    match &e.kind {
        ExprKind::FieldAccess { target, .. } | ExprKind::MethodRef { target, .. } => vec![target],
        ExprKind::Call { target, args, .. } => target.iter().map(|b| &**b).chain(args.iter()).collect(),
        ExprKind::NewArray { dims, init, .. } => dims.iter().chain(init.iter().flatten()).collect(),
        ExprKind::ArrayInit(items) => items.iter().collect(),
        ExprKind::Index { target, index } => vec![target, index],
        ExprKind::InstanceOf { expr, .. } | ExprKind::Cast { expr, .. } => vec![expr],
        ExprKind::Assign { target, value, .. } => vec![target, value],
        _ => Vec::new(),
    }
}

fn switch_decisions(cases: &[SwitchCase]) -> Decisions {
    let labels: u32 = cases.iter().map(|c| c.case_label_count() as u32).sum();
    let mut d = Decisions {
        case_labels: labels,
        switches: u32::from(labels > 0),
        ..Decisions::default()
    };
    for c in cases {
        for l in &c.labels {
            if let CaseLabel::Expr(e) = l {
                count_expr(e, false, &mut d);
            }
        }
    }
    d
}

pub fn members_decisions(members: &[Member]) -> Decisions {
    let mut d = Decisions::default();
    for m in members {
        match m {
            Member::Method(m) => {
                if let Some(b) = &m.body {
                    d += block_decisions(b);
                }
            }
            Member::Initializer { body, .. } => d += block_decisions(body),
            Member::Field(f) => {
                for v in &f.declarators {
                    if let Some(e) = &v.init {
                        count_expr(e, false, &mut d);
                    }
                }
            }
            Member::Type(t) => d += members_decisions(&t.members),
        }
    }
    d
}

pub fn block_decisions(b: &Block) -> Decisions {
    b.stmts.iter().map(stmt_decisions_deep).fold(Decisions::default(), Add::add)
}

/// Decisions of one statement, excluding those of nested child statements.
pub fn stmt_decisions_shallow(s: &Stmt) -> Decisions {
    let mut d = Decisions::default();
    match &s.kind {
        StmtKind::LocalVar { declarators, .. } => {
            for v in declarators {
                if let Some(e) = &v.init {
                    count_expr(e, false, &mut d);
                }
            }
        }
        StmtKind::LocalClass(t) => d += members_decisions(&t.members),
        StmtKind::Expr(e) | StmtKind::Throw(e) | StmtKind::Yield(e) => count_expr(e, false, &mut d),
        StmtKind::Return(e) => {
            if let Some(e) = e {
                count_expr(e, false, &mut d);
            }
        }
        StmtKind::If { cond, .. } => {
            d.ifs += 1;
            count_expr(cond, true, &mut d);
        }
        StmtKind::While { cond, .. } | StmtKind::DoWhile { cond, .. } => {
            d.loops += 1;
            count_expr(cond, true, &mut d);
        }
        StmtKind::For { cond, update, .. } => {
            d.loops += 1;
            if let Some(c) = cond {
                count_expr(c, true, &mut d);
            }
            for u in update {
                count_expr(u, false, &mut d);
            }
        }
        StmtKind::ForEach { iterable, .. } => {
            d.loops += 1;
            count_expr(iterable, false, &mut d);
        }
        StmtKind::Switch { selector, cases } => {
            count_expr(selector, false, &mut d);
            d += switch_decisions(cases);
        }
        StmtKind::Try { catches, .. } => d.catches += catches.len() as u32,
        StmtKind::Synchronized { lock, .. } => count_expr(lock, false, &mut d),
        StmtKind::Assert { cond, message } => {
            count_expr(cond, false, &mut d);
            if let Some(m) = message {
                count_expr(m, false, &mut d);
            }
        }
        StmtKind::Block(_) | StmtKind::Break(_) | StmtKind::Continue(_) | StmtKind::Labeled { .. } | StmtKind::Empty => {}
    }
    d
}

/// Child statements in source order (for-init and try resources included).
pub fn child_stmts(s: &Stmt) -> Vec<&Stmt> {
    match &s.kind {
        StmtKind::Block(b) => b.stmts.iter().collect(),
        StmtKind::If { then, otherwise, .. } => std::iter::once(&**then).chain(otherwise.as_deref()).collect(),
        StmtKind::While { body, .. } | StmtKind::DoWhile { body, .. } | StmtKind::ForEach { body, .. } => vec![body],
        StmtKind::For { init, body, .. } => init.iter().chain(std::iter::once(&**body)).collect(),
        StmtKind::Switch { cases, .. } => cases.iter().flat_map(|c| c.body.iter()).collect(),
        StmtKind::Try {
            resources,
            body,
            catches,
            finally,
        } => resources
            .iter()
            .chain(body.stmts.iter())
            .chain(catches.iter().flat_map(|c| c.body.stmts.iter()))
            .chain(finally.iter().flat_map(|f| f.stmts.iter()))
            .collect(),
        StmtKind::Labeled { body, .. } => vec![body],
        StmtKind::Synchronized { body, .. } => body.stmts.iter().collect(),
        _ => Vec::new(),
    }
}

pub fn stmt_decisions_deep(s: &Stmt) -> Decisions {
    child_stmts(s)
        .into_iter()
        .map(stmt_decisions_deep)
        .fold(stmt_decisions_shallow(s), Add::add)
}

// ---- graph construction ----

type Dangling = Vec<(usize, EdgeLabel)>;

struct Context {
    label: Option<String>,
    is_loop: bool,
    /// Accepts unlabeled `break`.
    breakable: bool,
    breaks: Dangling,
    continues: Vec<usize>,
    end_line: u32,
    continue_line: u32,
}

struct Builder {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    exit: usize,
    method_end: u32,
    contexts: Vec<Context>,
    pending_label: Option<String>,
    jumps: Vec<JumpSpan>,
}

impl Builder {
    fn node(&mut self, kind: NodeKind, line: u32, decisions: Decisions) -> usize {
        self.nodes.push(Node { kind, line, decisions });
        self.nodes.len() - 1
    }

    fn connect(&mut self, preds: &Dangling, to: usize) {
        for &(from, label) in preds {
            self.edges.push(Edge { from, to, label });
        }
    }

    fn simple(&mut self, s: &Stmt, preds: Dangling, kind: NodeKind) -> (usize, Dangling) {
        let n = self.node(kind, s.line, stmt_decisions_shallow(s));
        self.connect(&preds, n);
        (n, vec![(n, EdgeLabel::Flow)])
    }

    fn seq(&mut self, stmts: &[Stmt], mut preds: Dangling, tail: bool) -> Dangling {
        let count = stmts.len();
        for (i, s) in stmts.iter().enumerate() {
            preds = self.stmt(s, preds, tail && i + 1 == count);
        }
        preds
    }

    fn take_label(&mut self) -> Option<String> {
        self.pending_label.take()
    }

    fn push_loop(&mut self, label: Option<String>, end_line: u32, continue_line: u32) {
        self.contexts.push(Context {
            label,
            is_loop: true,
            breakable: true,
            breaks: Vec::new(),
            continues: Vec::new(),
            end_line,
            continue_line,
        });
    }

    fn stmt(&mut self, s: &Stmt, preds: Dangling, tail: bool) -> Dangling {
        match &s.kind {
            StmtKind::Block(b) => {
                let label = self.take_label();
                if label.is_some() {
                    self.contexts.push(Context {
                        label,
                        is_loop: false,
                        breakable: false,
                        breaks: Vec::new(),
                        continues: Vec::new(),
                        end_line: s.end_line,
                        continue_line: s.line,
                    });
                    let mut out = self.seq(&b.stmts, preds, tail);
                    let ctx = self.contexts.pop().expect("context");
                    out.extend(ctx.breaks);
                    out
                } else {
                    self.seq(&b.stmts, preds, tail)
                }
            }
            StmtKind::If { then, otherwise, .. } => {
                self.pending_label = None;
                let n = self.node(NodeKind::Branch, s.line, stmt_decisions_shallow(s));
                self.connect(&preds, n);
                let mut out = self.stmt(then, vec![(n, EdgeLabel::True)], tail);
                match otherwise {
                    Some(o) => out.extend(self.stmt(o, vec![(n, EdgeLabel::False)], tail)),
                    None => out.push((n, EdgeLabel::False)),
                }
                out
            }
            StmtKind::While { body, .. } | StmtKind::ForEach { body, .. } => {
                let label = self.take_label();
                let h = self.node(NodeKind::LoopHeader, s.line, stmt_decisions_shallow(s));
                self.connect(&preds, h);
                self.loop_body(h, body, label, s)
            }
            StmtKind::For { init, body, .. } => {
                let label = self.take_label();
                let mut preds = preds;
                for i in init {
                    preds = self.simple(i, preds, NodeKind::Statement).1;
                }
                let h = self.node(NodeKind::LoopHeader, s.line, stmt_decisions_shallow(s));
                self.connect(&preds, h);
                self.loop_body(h, body, label, s)
            }
            StmtKind::DoWhile { body, .. } => {
                let label = self.take_label();
                let j = self.node(NodeKind::Join, s.line, Decisions::default());
                self.connect(&preds, j);
                let cond_line = s.end_line;
                self.push_loop(label, s.end_line, cond_line);
                let body_out = self.stmt(body, vec![(j, EdgeLabel::Flow)], false);
                let ctx = self.contexts.pop().expect("loop context");
                let c = self.node(NodeKind::LoopHeader, cond_line, stmt_decisions_shallow(s));
                self.connect(&body_out, c);
                for from in ctx.continues {
                    self.edges.push(Edge {
                        from,
                        to: c,
                        label: EdgeLabel::Continue,
                    });
                }
                self.edges.push(Edge {
                    from: c,
                    to: j,
                    label: EdgeLabel::Back,
                });
                self.jumps.push(JumpSpan {
                    from_line: cond_line,
                    to_line: s.line,
                });
                let mut out = vec![(c, EdgeLabel::False)];
                out.extend(ctx.breaks);
                out
            }
            StmtKind::Switch { cases, .. } => {
                let label = self.take_label();
                let sw = self.node(NodeKind::Switch, s.line, stmt_decisions_shallow(s));
                self.connect(&preds, sw);
                self.contexts.push(Context {
                    label,
                    is_loop: false,
                    breakable: true,
                    breaks: Vec::new(),
                    continues: Vec::new(),
                    end_line: s.end_line,
                    continue_line: s.line,
                });
                let mut out = Vec::new();
                let mut fall: Dangling = Vec::new();
                let mut has_default = false;
                for c in cases {
                    let mut entry: Dangling = std::mem::take(&mut fall);
                    for l in &c.labels {
                        match l {
                            CaseLabel::Expr(_) => entry.push((sw, EdgeLabel::Case)),
                            CaseLabel::Default => {
                                has_default = true;
                                entry.push((sw, EdgeLabel::Default));
                            }
                        }
                    }
                    let body_out = self.seq(&c.body, entry, false);
                    if c.arrow {
                        out.extend(body_out);
                    } else {
                        fall = body_out;
                    }
                }
                out.extend(fall);
                if !has_default {
                    out.push((sw, EdgeLabel::Default));
                }
                let ctx = self.contexts.pop().expect("switch context");
                out.extend(ctx.breaks);
                out
            }
            StmtKind::Try {
                resources,
                body,
                catches,
                finally,
            } => {
                self.pending_label = None;
                let mut preds = preds;
                for r in resources {
                    preds = self.simple(r, preds, NodeKind::Statement).1;
                }
                let t = self.node(NodeKind::Try, s.line, stmt_decisions_shallow(s));
                self.connect(&preds, t);
                let inner_tail = tail && finally.is_none();
                let mut out = self.seq(&body.stmts, vec![(t, EdgeLabel::Flow)], inner_tail);
                for c in catches {
                    out.extend(self.seq(&c.body.stmts, vec![(t, EdgeLabel::Catch)], inner_tail));
                }
                match finally {
                    Some(f) => self.seq(&f.stmts, out, tail),
                    None => out,
                }
            }
            StmtKind::Labeled { label, body } => {
                self.pending_label = Some(label.clone());
                let out = self.stmt(body, preds, tail);
                self.pending_label = None;
                out
            }
            StmtKind::Synchronized { body, .. } => {
                self.pending_label = None;
                let (_, out) = self.simple(s, preds, NodeKind::Statement);
                self.seq(&body.stmts, out, tail)
            }
            StmtKind::Return(_) => {
                self.pending_label = None;
                let n = self.node(NodeKind::Jump, s.line, stmt_decisions_shallow(s));
                self.connect(&preds, n);
                let exit = self.exit;
                self.edges.push(Edge {
                    from: n,
                    to: exit,
                    label: EdgeLabel::Return { early: !tail },
                });
                if !tail {
                    self.jumps.push(JumpSpan {
                        from_line: s.line,
                        to_line: self.method_end,
                    });
                }
                Vec::new()
            }
            StmtKind::Throw(_) => {
                self.pending_label = None;
                let n = self.node(NodeKind::Jump, s.line, stmt_decisions_shallow(s));
                self.connect(&preds, n);
                let exit = self.exit;
                self.edges.push(Edge {
                    from: n,
                    to: exit,
                    label: EdgeLabel::Throw,
                });
                Vec::new()
            }
            StmtKind::Break(label) => {
                self.pending_label = None;
                let n = self.node(NodeKind::Jump, s.line, Decisions::default());
                self.connect(&preds, n);
                let target = self.contexts.iter().rposition(|c| match label {
                    Some(l) => c.label.as_deref() == Some(l.as_str()),
                    None => c.breakable,
                });
                match target {
                    Some(i) => {
                        self.contexts[i].breaks.push((n, EdgeLabel::Break));
                        let to_line = self.contexts[i].end_line;
                        self.jumps.push(JumpSpan {
                            from_line: s.line,
                            to_line,
                        });
                        Vec::new()
                    }
                    // Stray break: treat as fall-through.
                    None => vec![(n, EdgeLabel::Flow)],
                }
            }
            StmtKind::Continue(label) => {
                self.pending_label = None;
                let n = self.node(NodeKind::Jump, s.line, Decisions::default());
                self.connect(&preds, n);
                let target = self.contexts.iter().rposition(|c| {
                    c.is_loop
                        && match label {
                            Some(l) => c.label.as_deref() == Some(l.as_str()),
                            None => true,
                        }
                });
                match target {
                    Some(i) => {
                        self.contexts[i].continues.push(n);
                        let to_line = self.contexts[i].continue_line;
                        self.jumps.push(JumpSpan {
                            from_line: s.line,
                            to_line,
                        });
                        Vec::new()
                    }
                    None => vec![(n, EdgeLabel::Flow)],
                }
            }
            _ => {
                self.pending_label = None;
                self.simple(s, preds, NodeKind::Statement).1
            }
        }
    }

    fn loop_body(&mut self, h: usize, body: &Stmt, label: Option<String>, s: &Stmt) -> Dangling {
        self.push_loop(label, s.end_line, s.line);
        let body_out = self.stmt(body, vec![(h, EdgeLabel::True)], false);
        let ctx = self.contexts.pop().expect("loop context");
        for (from, _) in body_out {
            self.edges.push(Edge {
                from,
                to: h,
                label: EdgeLabel::Back,
            });
        }
        for from in ctx.continues {
            self.edges.push(Edge {
                from,
                to: h,
                label: EdgeLabel::Continue,
            });
        }
        self.jumps.push(JumpSpan {
            from_line: s.end_line,
            to_line: s.line,
        });
        let mut out = vec![(h, EdgeLabel::False)];
        out.extend(ctx.breaks);
        out
    }
}

/// Builds the graph of a method body; `None` for bodiless methods.
pub fn build_cfg(method: &MethodDecl) -> Option<ControlFlowGraph> {
    method
        .body
        .as_ref()
        .map(|b| build_block_cfg(b, method.start_line, method.end_line))
}

pub fn build_block_cfg(body: &Block, start_line: u32, end_line: u32) -> ControlFlowGraph {
    let mut b = Builder {
        nodes: Vec::new(),
        edges: Vec::new(),
        exit: 0,
        method_end: end_line,
        contexts: Vec::new(),
        pending_label: None,
        jumps: Vec::new(),
    };
    let entry = b.node(NodeKind::Entry, start_line, Decisions::default());
    b.exit = b.node(NodeKind::Exit, end_line, Decisions::default());
    let out = b.seq(&body.stmts, vec![(entry, EdgeLabel::Flow)], true);
    let exit = b.exit;
    b.connect(&out, exit);

    // Drop nodes unreachable from entry and renumber.
    let alive = reachable(b.nodes.len(), &b.edges, entry);
    let mut remap = vec![usize::MAX; b.nodes.len()];
    let mut nodes = Vec::new();
    for (i, n) in b.nodes.into_iter().enumerate() {
        if alive[i] || i == exit {
            remap[i] = nodes.len();
            nodes.push(n);
        }
    }
    let edges = b
        .edges
        .into_iter()
        .filter(|e| remap[e.from] != usize::MAX && remap[e.to] != usize::MAX)
        .map(|e| Edge {
            from: remap[e.from],
            to: remap[e.to],
            label: e.label,
        })
        .collect();
    ControlFlowGraph {
        nodes,
        edges,
        entry: remap[entry],
        exit: remap[exit],
        decisions: block_decisions(body),
        jumps: b.jumps,
    }
}
