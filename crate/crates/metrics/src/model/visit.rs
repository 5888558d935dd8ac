//! Pre-order traversal of statement and expression trees.

use super::ast::*;

pub trait Visitor {
    fn stmt(&mut self, _stmt: &Stmt) {}
    fn expr(&mut self, _expr: &Expr) {}
    /// Whether lambda bodies, anonymous class bodies and local class bodies
    /// are entered.
    fn enter_nested(&self) -> bool {
        true
    }
}

pub fn walk_block<V: Visitor + ?Sized>(v: &mut V, block: &Block) {
    for s in &block.stmts {
        walk_stmt(v, s);
    }
}

pub fn walk_stmt<V: Visitor + ?Sized>(v: &mut V, stmt: &Stmt) {
    v.stmt(stmt);
    match &stmt.kind {
        StmtKind::Block(b) => walk_block(v, b),
        StmtKind::LocalVar { declarators, .. } => {
            for d in declarators {
                if let Some(e) = &d.init {
                    walk_expr(v, e);
                }
            }
        }
        StmtKind::LocalClass(t) => {
            if v.enter_nested() {
                walk_members(v, &t.members);
            }
        }
        StmtKind::Expr(e) | StmtKind::Throw(e) | StmtKind::Yield(e) => walk_expr(v, e),
        StmtKind::If { cond, then, otherwise } => {
            walk_expr(v, cond);
            walk_stmt(v, then);
            if let Some(o) = otherwise {
                walk_stmt(v, o);
            }
        }
        StmtKind::While { cond, body } => {
            walk_expr(v, cond);
            walk_stmt(v, body);
        }
        StmtKind::DoWhile { body, cond } => {
            walk_stmt(v, body);
            walk_expr(v, cond);
        }
        StmtKind::For { init, cond, update, body } => {
            for s in init {
                walk_stmt(v, s);
            }
            if let Some(c) = cond {
                walk_expr(v, c);
            }
            for u in update {
                walk_expr(v, u);
            }
            walk_stmt(v, body);
        }
        StmtKind::ForEach { iterable, body, .. } => {
            walk_expr(v, iterable);
            walk_stmt(v, body);
        }
        StmtKind::Switch { selector, cases } => {
            walk_expr(v, selector);
            walk_cases(v, cases);
        }
        StmtKind::Try { resources, body, catches, finally } => {
            for r in resources {
                walk_stmt(v, r);
            }
            walk_block(v, body);
            for c in catches {
                walk_block(v, &c.body);
            }
            if let Some(f) = finally {
                walk_block(v, f);
            }
        }
        StmtKind::Return(e) => {
            if let Some(e) = e {
                walk_expr(v, e);
            }
        }
        StmtKind::Labeled { body, .. } => walk_stmt(v, body),
        StmtKind::Synchronized { lock, body } => {
            walk_expr(v, lock);
            walk_block(v, body);
        }
        StmtKind::Assert { cond, message } => {
            walk_expr(v, cond);
            if let Some(m) = message {
                walk_expr(v, m);
            }
        }
        StmtKind::Break(_) | StmtKind::Continue(_) | StmtKind::Empty => {}
    }
}

fn walk_cases<V: Visitor + ?Sized>(v: &mut V, cases: &[SwitchCase]) {
    for c in cases {
        for l in &c.labels {
            if let CaseLabel::Expr(e) = l {
                walk_expr(v, e);
            }
        }
        for s in &c.body {
            walk_stmt(v, s);
        }
    }
}

pub fn walk_members<V: Visitor + ?Sized>(v: &mut V, members: &[Member]) {
    for m in members {
        match m {
            Member::Field(f) => {
                for d in &f.declarators {
                    if let Some(e) = &d.init {
                        walk_expr(v, e);
                    }
                }
            }
            Member::Method(m) => {
                if let Some(b) = &m.body {
                    walk_block(v, b);
                }
            }
            Member::Initializer { body, .. } => walk_block(v, body),
            Member::Type(t) => walk_members(v, &t.members),
        }
    }
}

pub fn walk_expr<V: Visitor + ?Sized>(v: &mut V, expr: &Expr) {
    v.expr(expr);
    match &expr.kind {
        ExprKind::Literal(_) | ExprKind::Name(_) | ExprKind::This | ExprKind::Super | ExprKind::ClassLiteral(_) => {}
        ExprKind::FieldAccess { target, .. } => walk_expr(v, target),
        ExprKind::Call { target, args, .. } => {
            if let Some(t) = target {
                walk_expr(v, t);
            }
            for a in args {
                walk_expr(v, a);
            }
        }
        ExprKind::New { args, body, .. } => {
            for a in args {
                walk_expr(v, a);
            }
            if let Some(members) = body {
                if v.enter_nested() {
                    walk_members(v, members);
                }
            }
        }
        ExprKind::NewArray { dims, init, .. } => {
            for d in dims {
                walk_expr(v, d);
            }
            if let Some(items) = init {
                for i in items {
                    walk_expr(v, i);
                }
            }
        }
        ExprKind::ArrayInit(items) => {
            for i in items {
                walk_expr(v, i);
            }
        }
        ExprKind::Index { target, index } => {
            walk_expr(v, target);
            walk_expr(v, index);
        }
        ExprKind::Unary { operand, .. } => walk_expr(v, operand),
        ExprKind::Binary { lhs, rhs, .. } => {
            walk_expr(v, lhs);
            walk_expr(v, rhs);
        }
        ExprKind::InstanceOf { expr, .. } => walk_expr(v, expr),
        ExprKind::Conditional { cond, then, otherwise } => {
            walk_expr(v, cond);
            walk_expr(v, then);
            walk_expr(v, otherwise);
        }
        ExprKind::Assign { target, value, .. } => {
            walk_expr(v, target);
            walk_expr(v, value);
        }
        ExprKind::Cast { expr, .. } => walk_expr(v, expr),
        ExprKind::Lambda { body, .. } => {
            if v.enter_nested() {
                match body {
                    LambdaBody::Expr(e) => walk_expr(v, e),
                    LambdaBody::Block(b) => walk_block(v, b),
                }
            }
        }
        ExprKind::MethodRef { target, .. } => walk_expr(v, target),
        ExprKind::Switch { selector, cases } => {
            walk_expr(v, selector);
            walk_cases(v, cases);
        }
    }
}

/// Collects every expression reachable from a block, nested bodies included.
pub fn for_each_expr(block: &Block, mut f: impl FnMut(&Expr)) {
    struct F<'a>(&'a mut dyn FnMut(&Expr));
    impl Visitor for F<'_> {
        fn expr(&mut self, e: &Expr) {
            (self.0)(e)
        }
    }
    walk_block(&mut F(&mut f), block);
}

/// Collects every statement reachable from a block, nested bodies included.
pub fn for_each_stmt(block: &Block, mut f: impl FnMut(&Stmt)) {
    struct F<'a>(&'a mut dyn FnMut(&Stmt));
    impl Visitor for F<'_> {
        fn stmt(&mut self, s: &Stmt) {
            (self.0)(s)
        }
    }
    walk_block(&mut F(&mut f), block);
}
