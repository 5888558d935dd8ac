//! Project-local name resolution: inheritance links, call targets and type
//! references. Anything outside the analyzed tree stays an opaque name.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::ast::*;
use super::visit::{walk_block, Visitor};
use super::{ClassDecl, FileUnit, PackageDecl};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum TypeLink {
    Local(usize),
    External(String),
}

impl TypeLink {
    pub fn local(&self) -> Option<usize> {
        match self {
            TypeLink::Local(id) => Some(*id),
            TypeLink::External(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Receiver {
    /// No explicit receiver.
    Implicit,
    This,
    Super,
    Typed(TypeLink),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallSite {
    /// Index into the calling class's `methods`.
    pub method: usize,
    pub name: String,
    pub arity: usize,
    pub receiver: Receiver,
    /// Resolved project-local target as (class, method index).
    pub target: Option<(usize, usize)>,
    pub line: u32,
}

impl CallSite {
    /// A call through an explicit receiver that is not the calling class.
    pub fn is_foreign(&self, caller: usize) -> bool {
        match &self.receiver {
            Receiver::Implicit | Receiver::This | Receiver::Super => false,
            Receiver::Typed(TypeLink::Local(c)) => *c != caller,
            Receiver::Typed(TypeLink::External(_)) | Receiver::Unknown => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassLinks {
    pub superclass: Option<TypeLink>,
    pub interfaces: Vec<TypeLink>,
    /// Local types naming this one as superclass or super-interface.
    pub children: Vec<usize>,
    pub calls: Vec<CallSite>,
    /// Local classes referenced through field types, parameter types,
    /// instantiations and call receivers.
    pub coupled: BTreeSet<usize>,
    /// Every local class this class depends on.
    pub depends_on: BTreeSet<usize>,
    /// Local classes depending on this class.
    pub depended_by: BTreeSet<usize>,
    /// Distinct fields of other local classes accessed, as (class, field).
    pub foreign_fields: BTreeSet<(usize, String)>,
    /// Per method, the own fields it reads or writes.
    pub field_usage: Vec<BTreeSet<String>>,
    pub external_refs: BTreeSet<String>,
    /// Field declarators whose type mentions another local class.
    pub local_typed_fields: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymbolIndex {
    by_name: BTreeMap<String, usize>,
    links: Vec<ClassLinks>,
}

impl SymbolIndex {
    pub fn lookup(&self, qualified_name: &str) -> Option<usize> {
        self.by_name.get(qualified_name).copied()
    }

    pub fn links(&self, class: usize) -> &ClassLinks {
        &self.links[class]
    }

    pub fn superclass(&self, class: usize) -> Option<&TypeLink> {
        self.links[class].superclass.as_ref()
    }

    pub fn local_superclass(&self, class: usize) -> Option<usize> {
        self.superclass(class).and_then(TypeLink::local)
    }

    /// Local direct parents: superclass then interfaces.
    pub fn local_parents(&self, class: usize) -> Vec<usize> {
        let l = &self.links[class];
        l.superclass
            .iter()
            .chain(l.interfaces.iter())
            .filter_map(TypeLink::local)
            .collect()
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn build(classes: &[ClassDecl], files: &[FileUnit], packages: &[PackageDecl]) -> Self {
        let by_name: BTreeMap<String, usize> = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.qualified_name.clone(), i))
            .collect();
        let resolver = Resolver {
            classes,
            files,
            packages,
            by_name: &by_name,
        };
        let by_name_owned = by_name.clone();
        let mut links: Vec<ClassLinks> = (0..classes.len()).map(|_| ClassLinks::default()).collect();
        for (id, c) in classes.iter().enumerate() {
            links[id].superclass = c.superclass.as_ref().and_then(|t| resolver.resolve(id, &t.name));
            links[id].interfaces = c.interfaces.iter().filter_map(|t| resolver.resolve(id, &t.name)).collect();
        }
        break_inheritance_cycles(classes, &mut links);
        for id in 0..classes.len() {
            for p in parents_of(&links[id]) {
                links[p].children.push(id);
            }
        }
        for l in &mut links {
            l.children.sort_unstable();
            l.children.dedup();
        }
        let mut index = SymbolIndex {
            by_name: by_name_owned,
            links,
        };
        for id in 0..classes.len() {
            let body = BodyAnalysis::run(&resolver, &index, id);
            let l = &mut index.links[id];
            l.calls = body.calls;
            l.coupled = body.coupled;
            l.depends_on = body.depends_on;
            l.foreign_fields = body.foreign_fields;
            l.field_usage = body.field_usage;
            l.external_refs = body.external_refs;
            l.local_typed_fields = classes[id]
                .fields
                .iter()
                .filter(|f| {
                    f.ty.all_names()
                        .into_iter()
                        .any(|n| matches!(resolver.resolve(id, n), Some(TypeLink::Local(t)) if t != id))
                })
                .map(|f| f.declarators.len())
                .sum();
        }
        for id in 0..classes.len() {
            let deps: Vec<usize> = index.links[id].depends_on.iter().copied().collect();
            for d in deps {
                index.links[d].depended_by.insert(id);
            }
        }
        index
    }

    /// Finds a method by name, preferring a matching arity, searching the
    /// class and then its local ancestors breadth-first.
    pub fn find_method(&self, classes: &[ClassDecl], class: usize, name: &str, arity: usize) -> Option<(usize, usize)> {
        let order = self.ancestry(class);
        for exact in [true, false] {
            for &c in &order {
                if let Some(i) = classes[c]
                    .methods
                    .iter()
                    .position(|m| !m.is_constructor && m.name == name && (!exact || m.param_count() == arity))
                {
                    return Some((c, i));
                }
            }
        }
        None
    }

    /// The class followed by its local ancestors, breadth-first, without repeats.
    pub fn ancestry(&self, class: usize) -> Vec<usize> {
        let mut order = vec![class];
        let mut i = 0;
        while i < order.len() {
            for p in self.local_parents(order[i]) {
                if !order.contains(&p) {
                    order.push(p);
                }
            }
            i += 1;
        }
        order
    }

    /// Local superclass chain starting at the parent.
    pub fn superclass_chain(&self, class: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.local_superclass(class);
        while let Some(c) = cur {
            if out.contains(&c) {
                break;
            }
            out.push(c);
            cur = self.local_superclass(c);
        }
        out
    }

    /// Checks the inheritance graph has no cycle (Kahn's algorithm).
    pub fn inheritance_is_acyclic(&self) -> bool {
        let n = self.links.len();
        let mut indeg = vec![0usize; n];
        for id in 0..n {
            indeg[id] = self.local_parents(id).len();
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(p) = queue.pop() {
            seen += 1;
            for &c in &self.links[p].children {
                let edges = self.local_parents(c).iter().filter(|&&x| x == p).count();
                indeg[c] -= edges;
                if indeg[c] == 0 {
                    queue.push(c);
                }
            }
        }
        seen == n
    }
}

fn parents_of(l: &ClassLinks) -> Vec<usize> {
    l.superclass
        .iter()
        .chain(l.interfaces.iter())
        .filter_map(TypeLink::local)
        .collect()
}

/// Inheritance cycles only arise from invalid sources; the closing link is
/// demoted to an external name.
fn break_inheritance_cycles(classes: &[ClassDecl], links: &mut [ClassLinks]) {
    fn reaches(links: &[ClassLinks], from: usize, target: usize, seen: &mut Vec<bool>) -> bool {
        if from == target {
            return true;
        }
        if seen[from] {
            return false;
        }
        seen[from] = true;
        parents_of(&links[from]).into_iter().any(|p| reaches(links, p, target, seen))
    }
    for id in 0..links.len() {
        if let Some(TypeLink::Local(p)) = links[id].superclass.clone() {
            if reaches(links, p, id, &mut vec![false; classes.len()]) {
                log::warn!("inheritance cycle at {}", classes[id].qualified_name);
                links[id].superclass = Some(TypeLink::External(classes[p].qualified_name.clone()));
            }
        }
        for k in 0..links[id].interfaces.len() {
            if let TypeLink::Local(p) = links[id].interfaces[k].clone() {
                if reaches(links, p, id, &mut vec![false; classes.len()]) {
                    log::warn!("inheritance cycle at {}", classes[id].qualified_name);
                    links[id].interfaces[k] = TypeLink::External(classes[p].qualified_name.clone());
                }
            }
        }
    }
}

struct Resolver<'a> {
    classes: &'a [ClassDecl],
    files: &'a [FileUnit],
    packages: &'a [PackageDecl],
    by_name: &'a BTreeMap<String, usize>,
}

const PRIMITIVES: &[&str] = &["int", "long", "short", "byte", "char", "boolean", "float", "double", "void", "var"];

impl Resolver<'_> {
    /// Resolves a type name as written inside `class`; `None` for primitives.
    fn resolve(&self, class: usize, name: &str) -> Option<TypeLink> {
        if PRIMITIVES.contains(&name) || name.is_empty() {
            return None;
        }
        if let Some((head, rest)) = name.split_once('.') {
            if let Some(&id) = self.by_name.get(name) {
                return Some(TypeLink::Local(id));
            }
            if let Some(TypeLink::Local(h)) = self.resolve_simple(class, head) {
                let candidate = format!("{}.{rest}", self.classes[h].qualified_name);
                if let Some(&id) = self.by_name.get(&candidate) {
                    return Some(TypeLink::Local(id));
                }
            }
            return Some(TypeLink::External(name.to_string()));
        }
        Some(self.resolve_simple(class, name).unwrap_or_else(|| TypeLink::External(name.to_string())))
    }

    fn resolve_simple(&self, class: usize, name: &str) -> Option<TypeLink> {
        // the class itself, its member types, then enclosing scopes
        let mut scope = Some(class);
        while let Some(s) = scope {
            let c = &self.classes[s];
            if c.name == name {
                return Some(TypeLink::Local(s));
            }
            if let Some(&id) = self.by_name.get(&format!("{}.{name}", c.qualified_name)) {
                return Some(TypeLink::Local(id));
            }
            scope = c.enclosing;
        }
        let c = &self.classes[class];
        let file = &self.files[c.file];
        for imp in file.imports.iter().filter(|i| !i.wildcard && !i.is_static) {
            if imp.path.rsplit('.').next() == Some(name) {
                return Some(match self.by_name.get(&imp.path) {
                    Some(&id) => TypeLink::Local(id),
                    None => TypeLink::External(imp.path.clone()),
                });
            }
        }
        let pkg = &self.packages[c.package].name;
        let same_package = if pkg.is_empty() { name.to_string() } else { format!("{pkg}.{name}") };
        if let Some(&id) = self.by_name.get(&same_package) {
            return Some(TypeLink::Local(id));
        }
        for imp in file.imports.iter().filter(|i| i.wildcard && !i.is_static) {
            if let Some(&id) = self.by_name.get(&format!("{}.{name}", imp.path)) {
                return Some(TypeLink::Local(id));
            }
        }
        None
    }
}

/// Walks every member body of one class to collect calls and references.
struct BodyAnalysis {
    calls: Vec<CallSite>,
    coupled: BTreeSet<usize>,
    depends_on: BTreeSet<usize>,
    foreign_fields: BTreeSet<(usize, String)>,
    field_usage: Vec<BTreeSet<String>>,
    external_refs: BTreeSet<String>,
}

struct Scan<'a, 'b> {
    r: &'a Resolver<'b>,
    index: &'a SymbolIndex,
    class: usize,
    method: usize,
    locals: HashMap<String, Option<TypeRef>>,
    out: &'a mut BodyAnalysis,
}

impl BodyAnalysis {
    fn run(r: &Resolver<'_>, index: &SymbolIndex, class: usize) -> Self {
        let c = &r.classes[class];
        let mut out = BodyAnalysis {
            calls: Vec::new(),
            coupled: BTreeSet::new(),
            depends_on: BTreeSet::new(),
            foreign_fields: BTreeSet::new(),
            field_usage: vec![BTreeSet::new(); c.methods.len()],
            external_refs: BTreeSet::new(),
        };
        let mut declared: Vec<(&TypeRef, bool)> = Vec::new();
        if let Some(s) = &c.superclass {
            declared.push((s, false));
        }
        for i in &c.interfaces {
            declared.push((i, false));
        }
        for f in &c.fields {
            declared.push((&f.ty, true));
        }
        for m in &c.methods {
            if let Some(rt) = &m.return_type {
                declared.push((rt, false));
            }
            for p in &m.params {
                declared.push((&p.ty, true));
            }
            for t in &m.throws {
                declared.push((t, false));
            }
        }
        {
            let mut scan = Scan {
                r,
                index,
                class,
                method: usize::MAX,
                locals: HashMap::new(),
                out: &mut out,
            };
            for (t, coupling) in declared {
                scan.reference(t, coupling);
            }
            for (mi, m) in c.methods.iter().enumerate() {
                scan.method = mi;
                scan.locals.clear();
                for p in &m.params {
                    scan.locals.insert(p.name.clone(), Some(p.ty.clone()));
                }
                if let Some(b) = &m.body {
                    collect_locals(b, &mut scan.locals);
                    walk_block(&mut scan, b);
                }
            }
            scan.method = usize::MAX;
            for init in &c.initializers {
                scan.locals.clear();
                collect_locals(&init.body, &mut scan.locals);
                walk_block(&mut scan, &init.body);
            }
            scan.locals.clear();
            for f in &c.fields {
                for d in &f.declarators {
                    if let Some(e) = &d.init {
                        super::visit::walk_expr(&mut scan, e);
                    }
                }
            }
        }
        out.coupled.remove(&class);
        out.depends_on.remove(&class);
        out
    }
}

fn collect_locals(block: &Block, locals: &mut HashMap<String, Option<TypeRef>>) {
    super::visit::for_each_stmt(block, |s| match &s.kind {
        StmtKind::LocalVar { ty, declarators } => {
            for d in declarators {
                locals.insert(d.name.clone(), Some(ty.clone()));
            }
        }
        StmtKind::ForEach { ty, name, .. } => {
            locals.insert(name.clone(), Some(ty.clone()));
        }
        StmtKind::Try { catches, .. } => {
            for c in catches {
                locals.insert(c.name.clone(), c.types.first().cloned());
            }
        }
        _ => {}
    });
    super::visit::for_each_expr(block, |e| {
        if let ExprKind::Lambda { params, .. } = &e.kind {
            for p in params {
                locals.entry(p.clone()).or_insert(None);
            }
        }
    });
}

impl Scan<'_, '_> {
    fn classes(&self) -> &[ClassDecl] {
        self.r.classes
    }

    /// Records a declared type reference and every type argument.
    fn reference(&mut self, t: &TypeRef, coupling: bool) {
        for name in t.all_names() {
            match self.r.resolve(self.class, name) {
                Some(TypeLink::Local(id)) => {
                    self.out.depends_on.insert(id);
                    if coupling {
                        self.out.coupled.insert(id);
                    }
                }
                Some(TypeLink::External(n)) => {
                    self.out.external_refs.insert(n);
                }
                None => {}
            }
        }
    }

    fn depend(&mut self, link: &TypeLink, coupling: bool) {
        match link {
            TypeLink::Local(id) => {
                self.out.depends_on.insert(*id);
                if coupling {
                    self.out.coupled.insert(*id);
                }
            }
            TypeLink::External(n) => {
                self.out.external_refs.insert(n.clone());
            }
        }
    }

    /// Field declared by `class` or one of its local ancestors.
    fn field_owner(&self, class: usize, name: &str) -> Option<(usize, TypeRef)> {
        self.index
            .ancestry(class)
            .into_iter()
            .find_map(|c| self.classes()[c].field_type(name).map(|t| (c, t.clone())))
    }

    fn is_local_name(&self, name: &str) -> bool {
        self.locals.contains_key(name)
    }

    fn resolve_in(&self, class: usize, t: &TypeRef) -> Option<TypeLink> {
        self.r.resolve(class, &t.name)
    }

    /// Static type of an expression when it can be determined syntactically.
    fn type_of(&self, e: &Expr) -> Option<TypeLink> {
        match &e.kind {
            ExprKind::Name(n) => {
                if let Some(t) = self.locals.get(n) {
                    return t.as_ref().and_then(|t| self.r.resolve(self.class, &t.name));
                }
                if let Some((owner, t)) = self.field_owner(self.class, n) {
                    return self.resolve_in(owner, &t);
                }
                self.type_name(e)
            }
            ExprKind::This => Some(TypeLink::Local(self.class)),
            ExprKind::Super => self.index.superclass(self.class).cloned(),
            ExprKind::FieldAccess { target, name } => {
                if let Some(t) = self.type_name(e) {
                    return Some(t);
                }
                match self.type_of(target)? {
                    TypeLink::Local(c) => {
                        let (owner, t) = self.field_owner(c, name)?;
                        self.resolve_in(owner, &t)
                    }
                    TypeLink::External(_) => None,
                }
            }
            ExprKind::Call { .. } => {
                let (c, m) = self.call_target(e)?;
                let rt = self.classes()[c].methods[m].return_type.as_ref()?;
                self.resolve_in(c, rt)
            }
            ExprKind::New { ty, .. } | ExprKind::Cast { ty, .. } => self.r.resolve(self.class, &ty.name),
            ExprKind::Index { target, .. } => self.type_of(target),
            ExprKind::Literal(l) if l.starts_with('"') => Some(TypeLink::External("String".into())),
            _ => None,
        }
    }

    /// A name or dotted name that denotes a type rather than a value.
    fn type_name(&self, e: &Expr) -> Option<TypeLink> {
        let dotted = dotted(e)?;
        let head = dotted.split('.').next()?;
        if self.is_local_name(head) || self.field_owner(self.class, head).is_some() {
            return None;
        }
        match self.r.resolve(self.class, &dotted)? {
            TypeLink::Local(id) => Some(TypeLink::Local(id)),
            // Unresolved dotted names are only types by convention.
            TypeLink::External(n) => n
                .rsplit('.')
                .next()
                .filter(|s| s.starts_with(|ch: char| ch.is_ascii_uppercase()))
                .map(|_| TypeLink::External(n.clone())),
        }
    }

    fn receiver(&self, target: Option<&Expr>) -> Receiver {
        match target {
            None => Receiver::Implicit,
            Some(Expr {
                kind: ExprKind::This, ..
            }) => Receiver::This,
            Some(Expr {
                kind: ExprKind::Super, ..
            }) => Receiver::Super,
            Some(t) => match self.type_of(t) {
                Some(TypeLink::Local(c)) if c == self.class => Receiver::This,
                Some(l) => Receiver::Typed(l),
                None => Receiver::Unknown,
            },
        }
    }

    fn call_target(&self, e: &Expr) -> Option<(usize, usize)> {
        let ExprKind::Call { target, name, args } = &e.kind else {
            return None;
        };
        if name == "this" || name == "super" {
            return None;
        }
        let owner = match self.receiver(target.as_deref()) {
            Receiver::Implicit => {
                // Unqualified calls search the class, then enclosing classes.
                let mut scope = Some(self.class);
                while let Some(s) = scope {
                    if let Some(t) = self.index.find_method(self.classes(), s, name, args.len()) {
                        return Some(t);
                    }
                    scope = self.classes()[s].enclosing;
                }
                return None;
            }
            Receiver::This => self.class,
            Receiver::Super => self.index.local_superclass(self.class)?,
            Receiver::Typed(TypeLink::Local(c)) => c,
            _ => return None,
        };
        self.index.find_method(self.classes(), owner, name, args.len())
    }
}

fn dotted(e: &Expr) -> Option<String> {
    match &e.kind {
        ExprKind::Name(n) => Some(n.clone()),
        ExprKind::FieldAccess { target, name } => Some(format!("{}.{name}", dotted(target)?)),
        _ => None,
    }
}

impl Visitor for Scan<'_, '_> {
    fn stmt(&mut self, s: &Stmt) {
        match &s.kind {
            StmtKind::LocalVar { ty, .. } | StmtKind::ForEach { ty, .. } => self.reference(ty, false),
            StmtKind::Try { catches, .. } => {
                for c in catches {
                    for t in &c.types {
                        self.reference(t, false);
                    }
                }
            }
            _ => {}
        }
    }

    fn expr(&mut self, e: &Expr) {
        match &e.kind {
            ExprKind::Call { target, name, args } => {
                if name == "this" || name == "super" {
                    return;
                }
                let receiver = self.receiver(target.as_deref());
                if let Receiver::Typed(l) = &receiver {
                    self.depend(&l.clone(), true);
                }
                let resolved = self.call_target(e);
                if let Some((c, _)) = resolved {
                    self.out.depends_on.insert(c);
                }
                if self.method != usize::MAX {
                    self.out.calls.push(CallSite {
                        method: self.method,
                        name: name.clone(),
                        arity: args.len(),
                        receiver,
                        target: resolved,
                        line: e.line,
                    });
                }
            }
            ExprKind::New { ty, .. } => self.reference(ty, true),
            ExprKind::NewArray { ty, .. } | ExprKind::Cast { ty, .. } | ExprKind::InstanceOf { ty, .. } | ExprKind::ClassLiteral(ty) => {
                self.reference(ty, false)
            }
            ExprKind::Name(n) => {
                if self.is_local_name(n) {
                    return;
                }
                // Inherited fields reached by simple name are neither own nor foreign.
                if self.classes()[self.class].has_field(n) && self.method != usize::MAX {
                    self.out.field_usage[self.method].insert(n.clone());
                }
            }
            ExprKind::FieldAccess { target, name } => {
                if matches!(target.kind, ExprKind::This) {
                    if self.classes()[self.class].has_field(name) && self.method != usize::MAX {
                        self.out.field_usage[self.method].insert(name.clone());
                    }
                    return;
                }
                if self.type_name(e).is_some() {
                    return;
                }
                if let Some(TypeLink::Local(c)) = self.type_of(target) {
                    self.out.depends_on.insert(c);
                    if let Some((owner, _)) = self.field_owner(c, name) {
                        if owner != self.class {
                            self.out.foreign_fields.insert((owner, name.clone()));
                        }
                    }
                } else if let Some(TypeLink::External(n)) = self.type_name(target) {
                    self.out.external_refs.insert(n);
                }
            }
            ExprKind::MethodRef { target, .. } => {
                if let Some(l) = self.type_name(target) {
                    self.depend(&l, false);
                }
            }
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::model::ProjectModel;

    use super::*;

    #[test]
    fn superclass_links_and_external_names() {
        let m = ProjectModel::from_sources(&[
            ("p/A.java", "package p; public class A extends javax.External {}"),
            ("p/B.java", "package p; class B extends A implements Runnable { public void run() {} }"),
        ]);
        let a = m.class_id("p.A").unwrap();
        let b = m.class_id("p.B").unwrap();
        let idx = m.index();
        assert_eq!(idx.superclass(a), Some(&TypeLink::External("javax.External".into())));
        assert_eq!(idx.superclass(b), Some(&TypeLink::Local(a)));
        assert_eq!(idx.links(a).children, vec![b]);
        assert_eq!(idx.superclass_chain(b), vec![a]);
        assert!(idx.inheritance_is_acyclic());
    }

    #[test]
    fn imports_and_packages_resolve() {
        let m = ProjectModel::from_sources(&[
            ("a/X.java", "package a; public class X { public int f; public int g() { return f; } }"),
            ("b/Y.java", "package b; import a.X; class Y { X x; int h(X p) { return p.g() + x.f; } }"),
            ("c/Z.java", "package c; import a.*; class Z { void k() { X v = new X(); v.g(); } }"),
        ]);
        let x = m.class_id("a.X").unwrap();
        let y = m.class_id("b.Y").unwrap();
        let z = m.class_id("c.Z").unwrap();
        let ly = m.index().links(y);
        assert!(ly.coupled.contains(&x));
        assert_eq!(ly.calls.len(), 1);
        assert_eq!(ly.calls[0].target, Some((x, 0)));
        assert!(ly.foreign_fields.contains(&(x, "f".to_string())));
        let lz = m.index().links(z);
        assert_eq!(lz.calls[0].target, Some((x, 0)));
        assert!(m.index().links(x).depended_by.contains(&y));
        assert!(m.index().links(x).depended_by.contains(&z));
    }

    #[test]
    fn implicit_calls_resolve_through_ancestors() {
        let m = ProjectModel::from_sources(&[(
            "A.java",
            "class A { void base() {} } class B extends A { void f() { base(); this.f(); helper(1); } }",
        )]);
        let a = m.class_id("A").unwrap();
        let b = m.class_id("B").unwrap();
        let calls = &m.index().links(b).calls;
        assert_eq!(calls[0].target, Some((a, 0)));
        assert_eq!(calls[1].target, Some((b, 0)));
        assert_eq!(calls[2].target, None);
    }

    #[test]
    fn cyclic_inheritance_is_broken() {
        let m = ProjectModel::from_sources(&[("A.java", "class A extends B {} class B extends A {}")]);
        assert!(m.index().inheritance_is_acyclic());
    }

    #[test]
    fn field_usage_respects_shadowing() {
        let m = ProjectModel::from_sources(&[(
            "A.java",
            "class A { int a; int b; void f() { a++; } void g(int a) { a = 1; this.b = 2; } }",
        )]);
        let u = &m.index().links(0).field_usage;
        assert_eq!(u[0].iter().collect::<Vec<_>>(), ["a"]);
        assert_eq!(u[1].iter().collect::<Vec<_>>(), ["b"]);
    }
}
