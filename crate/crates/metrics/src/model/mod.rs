//! Immutable model of a parsed Java source tree.
//!
//! Named classes (top-level and member types) become [`ClassDecl`] entries
//! with dotted qualified names. Local and anonymous classes, lambdas and
//! enum-constant bodies stay inside the member that declares them.

pub mod ast;
pub mod cfg;
pub mod lexer;
pub mod parser;
pub mod symbols;
pub mod visit;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::ModelError;
use ast::*;
use lexer::{TokenKind, TokenStream};
pub use symbols::{SymbolIndex, TypeLink};

#[derive(Debug, Clone, PartialEq)]
pub struct Initializer {
    pub is_static: bool,
    pub body: Block,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassDecl {
    pub qualified_name: String,
    pub name: String,
    pub kind: TypeKind,
    pub modifiers: Modifiers,
    pub superclass: Option<TypeRef>,
    pub interfaces: Vec<TypeRef>,
    pub fields: Vec<FieldDecl>,
    /// Methods and constructors in declaration order.
    pub methods: Vec<MethodDecl>,
    pub initializers: Vec<Initializer>,
    pub enum_constants: Vec<EnumConstant>,
    pub file: usize,
    pub package: usize,
    pub enclosing: Option<usize>,
    pub start_line: u32,
    pub end_line: u32,
}

impl ClassDecl {
    pub fn constructors(&self) -> impl Iterator<Item = &MethodDecl> {
        self.methods.iter().filter(|m| m.is_constructor)
    }

    /// Methods excluding constructors.
    pub fn plain_methods(&self) -> impl Iterator<Item = &MethodDecl> {
        self.methods.iter().filter(|m| !m.is_constructor)
    }

    pub fn field_names(&self) -> impl Iterator<Item = &str> {
        self.fields.iter().flat_map(|f| f.declarators.iter().map(|d| d.name.as_str()))
    }

    pub fn field_type(&self, name: &str) -> Option<&TypeRef> {
        self.fields
            .iter()
            .find(|f| f.declarators.iter().any(|d| d.name == name))
            .map(|f| &f.ty)
    }

    pub fn has_field(&self, name: &str) -> bool {
        self.field_names().any(|n| n == name)
    }

    pub fn is_interface(&self) -> bool {
        matches!(self.kind, TypeKind::Interface | TypeKind::Annotation)
    }
}

/// Per-line code/comment flags for one file, indexed by 1-based line.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LineProfile {
    code: Vec<bool>,
    comment: Vec<bool>,
}

impl LineProfile {
    pub fn from_tokens(tokens: &TokenStream) -> Self {
        let last = tokens
            .tokens
            .last()
            .map_or(0, |t| t.line as usize + t.lexeme.matches('\n').count());
        let mut p = LineProfile {
            code: vec![false; last + 2],
            comment: vec![false; last + 2],
        };
        for t in &tokens.tokens {
            let target = match t.kind {
                TokenKind::Whitespace => continue,
                TokenKind::Comment => &mut p.comment,
                _ => &mut p.code,
            };
            let mut line = t.line as usize;
            for (i, segment) in t.lexeme.split('\n').enumerate() {
                // A comment's trailing newline does not make the next line a comment line.
                if i == 0 || !segment.trim().is_empty() {
                    target[line] = true;
                }
                line += 1;
            }
        }
        p
    }

    fn count(flags: &[bool], from: u32, to: u32) -> u32 {
        (from..=to)
            .filter(|&l| flags.get(l as usize).copied().unwrap_or(false))
            .count() as u32
    }

    /// Lines in `from..=to` holding at least one code token.
    pub fn code_lines(&self, from: u32, to: u32) -> u32 {
        Self::count(&self.code, from, to)
    }

    /// Lines in `from..=to` holding comment text.
    pub fn comment_lines(&self, from: u32, to: u32) -> u32 {
        Self::count(&self.comment, from, to)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FileUnit {
    /// Path relative to the source root.
    pub path: PathBuf,
    pub package: usize,
    pub imports: Vec<Import>,
    pub tokens: TokenStream,
    pub lines: LineProfile,
    pub classes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackageDecl {
    /// Empty for the default package.
    pub name: String,
    pub files: Vec<usize>,
    pub classes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedFile {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectModel {
    packages: Vec<PackageDecl>,
    files: Vec<FileUnit>,
    classes: Vec<ClassDecl>,
    skipped: Vec<SkippedFile>,
    index: SymbolIndex,
}

struct ParsedFile {
    path: PathBuf,
    tokens: TokenStream,
    unit: CompilationUnit,
}

impl ProjectModel {
    pub fn packages(&self) -> &[PackageDecl] {
        &self.packages
    }

    pub fn files(&self) -> &[FileUnit] {
        &self.files
    }

    /// Classes sorted by qualified name.
    pub fn classes(&self) -> &[ClassDecl] {
        &self.classes
    }

    pub fn skipped(&self) -> &[SkippedFile] {
        &self.skipped
    }

    pub fn index(&self) -> &SymbolIndex {
        &self.index
    }

    pub fn class(&self, id: usize) -> &ClassDecl {
        &self.classes[id]
    }

    pub fn class_id(&self, qualified_name: &str) -> Option<usize> {
        self.index.lookup(qualified_name)
    }

    pub fn file_of(&self, class: usize) -> &FileUnit {
        &self.files[self.classes[class].file]
    }

    pub fn package_of(&self, class: usize) -> &PackageDecl {
        &self.packages[self.classes[class].package]
    }

    /// Builds a model from in-memory sources given as (relative path, text).
    pub fn from_sources<P: AsRef<Path>, S: AsRef<str>>(sources: &[(P, S)]) -> Self {
        let inputs: Vec<(PathBuf, Result<String, String>)> = sources
            .iter()
            .map(|(p, s)| (p.as_ref().to_path_buf(), Ok(s.as_ref().to_string())))
            .collect();
        Self::build(inputs)
    }

    fn build(mut inputs: Vec<(PathBuf, Result<String, String>)>) -> Self {
        inputs.sort_by(|a, b| a.0.cmp(&b.0));
        let parsed: Vec<Result<ParsedFile, SkippedFile>> = inputs
            .into_par_iter()
            .map(|(path, text)| {
                let text = text.map_err(|reason| SkippedFile {
                    path: path.clone(),
                    reason,
                })?;
                let tokens = lexer::tokenize(&text).map_err(|e| SkippedFile {
                    path: path.clone(),
                    reason: format!("lexing failed: {e}"),
                })?;
                let unit = parser::parse_compilation_unit(&tokens).map_err(|e| SkippedFile {
                    path: path.clone(),
                    reason: format!("parsing failed: {e}"),
                })?;
                Ok(ParsedFile { path, tokens, unit })
            })
            .collect();
        assemble(parsed)
    }

    /// Debug dump: one record per class.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (id, c) in self.classes.iter().enumerate() {
            let file = &self.files[c.file];
            let _ = writeln!(out, "class {}", c.qualified_name);
            let _ = writeln!(out, "  kind: {:?}", c.kind);
            let _ = writeln!(out, "  file: {}", file.path.display());
            let _ = writeln!(out, "  lines: {}-{}", c.start_line, c.end_line);
            let sup = match self.index.superclass(id) {
                Some(TypeLink::Local(p)) => self.classes[*p].qualified_name.clone(),
                Some(TypeLink::External(n)) => format!("{n} (external)"),
                None => "-".into(),
            };
            let _ = writeln!(out, "  superclass: {sup}");
            let _ = writeln!(out, "  fields: {}", c.field_names().collect::<Vec<_>>().join(", "));
            for m in &c.methods {
                let mut flags = Vec::new();
                if m.is_constructor {
                    flags.push("constructor");
                }
                if m.is_accessor {
                    flags.push("accessor");
                }
                if m.is_mutator {
                    flags.push("mutator");
                }
                if m.body.is_none() {
                    flags.push("bodiless");
                }
                let _ = writeln!(out, "  method {}/{} [{}]", m.name, m.param_count(), flags.join(","));
            }
        }
        for s in &self.skipped {
            let _ = writeln!(out, "skipped {}: {}", s.path.display(), s.reason);
        }
        out
    }
}

/// Parses every `.java` file under `root`.
pub fn parse_project(root: &Path) -> Result<ProjectModel, ModelError> {
    let meta = std::fs::metadata(root).map_err(|source| ModelError::Io {
        path: root.to_path_buf(),
        source,
    })?;
    if !meta.is_dir() {
        return Err(ModelError::NotADirectory(root.to_path_buf()));
    }
    let mut inputs = Vec::new();
    for entry in walkdir::WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| ModelError::Io {
            path: e.path().map_or_else(|| root.to_path_buf(), Path::to_path_buf),
            source: e.into_io_error().unwrap_or_else(|| std::io::Error::other("directory loop")),
        })?;
        if !entry.file_type().is_file() || entry.path().extension().is_none_or(|e| e != "java") {
            continue;
        }
        let rel = entry.path().strip_prefix(root).unwrap_or(entry.path()).to_path_buf();
        let text = match std::fs::read(entry.path()) {
            Ok(bytes) => String::from_utf8(bytes).map_err(|_| "not valid UTF-8".to_string()),
            Err(e) => Err(format!("unreadable: {e}")),
        };
        inputs.push((rel, text));
    }
    let model = ProjectModel::build(inputs);
    if model.classes.is_empty() {
        log::warn!("no parseable classes under {}", root.display());
    }
    for s in &model.skipped {
        log::warn!("skipped {}: {}", s.path.display(), s.reason);
    }
    Ok(model)
}

struct PendingClass {
    decl: ClassDecl,
    enclosing_name: Option<String>,
}

fn assemble(parsed: Vec<Result<ParsedFile, SkippedFile>>) -> ProjectModel {
    let mut skipped = Vec::new();
    let mut files: Vec<FileUnit> = Vec::new();
    let mut file_packages: Vec<String> = Vec::new();
    let mut pending: Vec<PendingClass> = Vec::new();
    let mut seen: BTreeMap<String, ()> = BTreeMap::new();

    for item in parsed {
        let pf = match item {
            Ok(pf) => pf,
            Err(s) => {
                skipped.push(s);
                continue;
            }
        };
        let package = pf.unit.package.clone().unwrap_or_default();
        let mut classes = Vec::new();
        for t in &pf.unit.types {
            flatten_type(t, &package, None, &mut classes);
        }
        if let Some(dup) = classes.iter().find(|c| seen.contains_key(&c.decl.qualified_name)) {
            skipped.push(SkippedFile {
                path: pf.path,
                reason: format!("duplicate class {}", dup.decl.qualified_name),
            });
            continue;
        }
        let file_id = files.len();
        for mut c in classes {
            seen.insert(c.decl.qualified_name.clone(), ());
            c.decl.file = file_id;
            pending.push(c);
        }
        let lines = LineProfile::from_tokens(&pf.tokens);
        files.push(FileUnit {
            path: pf.path,
            package: 0,
            imports: pf.unit.imports,
            tokens: pf.tokens,
            lines,
            classes: Vec::new(),
        });
        file_packages.push(package);
    }

    pending.sort_by(|a, b| a.decl.qualified_name.cmp(&b.decl.qualified_name));
    let ids: BTreeMap<String, usize> = pending
        .iter()
        .enumerate()
        .map(|(i, c)| (c.decl.qualified_name.clone(), i))
        .collect();

    let mut package_names: Vec<String> = file_packages.clone();
    package_names.sort();
    package_names.dedup();
    let mut packages: Vec<PackageDecl> = package_names
        .iter()
        .map(|n| PackageDecl {
            name: n.clone(),
            files: Vec::new(),
            classes: Vec::new(),
        })
        .collect();
    for (fid, pname) in file_packages.iter().enumerate() {
        let pid = package_names.binary_search(pname).expect("package registered");
        files[fid].package = pid;
        packages[pid].files.push(fid);
    }

    let classes: Vec<ClassDecl> = pending
        .into_iter()
        .enumerate()
        .map(|(id, p)| {
            let mut d = p.decl;
            d.enclosing = p.enclosing_name.and_then(|n| ids.get(&n).copied());
            d.package = files[d.file].package;
            files[d.file].classes.push(id);
            packages[d.package].classes.push(id);
            d
        })
        .collect();

    let index = SymbolIndex::build(&classes, &files, &packages);
    ProjectModel {
        packages,
        files,
        classes,
        skipped,
        index,
    }
}

fn flatten_type(t: &TypeNode, package: &str, outer: Option<&str>, out: &mut Vec<PendingClass>) {
    let qualified_name = match outer {
        Some(o) => format!("{o}.{}", t.name),
        None if package.is_empty() => t.name.clone(),
        None => format!("{package}.{}", t.name),
    };
    let interface_like = matches!(t.kind, TypeKind::Interface | TypeKind::Annotation);
    let mut decl = ClassDecl {
        qualified_name: qualified_name.clone(),
        name: t.name.clone(),
        kind: t.kind,
        modifiers: t.modifiers,
        superclass: t.superclass.clone(),
        interfaces: t.interfaces.clone(),
        fields: Vec::new(),
        methods: Vec::new(),
        initializers: Vec::new(),
        enum_constants: t.enum_constants.clone(),
        file: 0,
        package: 0,
        enclosing: None,
        start_line: t.start_line,
        end_line: t.end_line,
    };
    for rc in &t.record_components {
        decl.fields.push(FieldDecl {
            modifiers: Modifiers {
                visibility: Visibility::Private,
                is_final: true,
                ..Modifiers::default()
            },
            ty: rc.ty.clone(),
            declarators: vec![VarDeclarator {
                name: rc.name.clone(),
                init: None,
            }],
            line: t.start_line,
        });
    }
    let mut nested = Vec::new();
    for m in &t.members {
        match m {
            Member::Field(f) => {
                let mut f = f.clone();
                if interface_like {
                    f.modifiers.is_static = true;
                    f.modifiers.is_final = true;
                    if f.modifiers.visibility == Visibility::Default {
                        f.modifiers.visibility = Visibility::Public;
                    }
                }
                decl.fields.push(f);
            }
            Member::Method(m) => {
                let mut m = m.clone();
                if interface_like {
                    if m.modifiers.visibility == Visibility::Default {
                        m.modifiers.visibility = Visibility::Public;
                    }
                    if m.body.is_none() {
                        m.modifiers.is_abstract = true;
                    }
                }
                decl.methods.push(m);
            }
            Member::Initializer { is_static, body } => decl.initializers.push(Initializer {
                is_static: *is_static,
                body: body.clone(),
            }),
            Member::Type(inner) => nested.push(inner),
        }
    }
    classify_accessors(&mut decl);
    out.push(PendingClass {
        decl,
        enclosing_name: outer.map(str::to_string),
    });
    for inner in nested {
        flatten_type(inner, package, Some(&qualified_name), out);
    }
}

fn classify_accessors(class: &mut ClassDecl) {
    let fields: Vec<String> = class.field_names().map(str::to_string).collect();
    for m in &mut class.methods {
        if m.is_constructor {
            continue;
        }
        m.is_accessor = is_accessor(m, &fields);
        m.is_mutator = !m.is_accessor && is_mutator(m, &fields);
    }
}

/// The field named by `f` or `this.f`, unless a parameter shadows the bare form.
fn field_target<'a>(e: &'a Expr, method: &MethodDecl, fields: &[String]) -> Option<&'a str> {
    let name = match &e.kind {
        ExprKind::Name(n) if !method.params.iter().any(|p| &p.name == n) => n.as_str(),
        ExprKind::FieldAccess { target, name } if matches!(target.kind, ExprKind::This) => name.as_str(),
        _ => return None,
    };
    fields.iter().any(|f| f == name).then_some(name)
}

fn is_accessor(m: &MethodDecl, fields: &[String]) -> bool {
    let Some(body) = &m.body else { return false };
    match body.stmts.as_slice() {
        [Stmt {
            kind: StmtKind::Return(Some(e)),
            ..
        }] => field_target(e, m, fields).is_some(),
        _ => false,
    }
}

fn is_mutator(m: &MethodDecl, fields: &[String]) -> bool {
    let Some(body) = &m.body else { return false };
    let assign = match body.stmts.as_slice() {
        [a] => a,
        [
            a,
            Stmt {
                kind: StmtKind::Return(None),
                ..
            },
        ] => a,
        _ => return false,
    };
    let StmtKind::Expr(Expr {
        kind: ExprKind::Assign { op, target, value },
        ..
    }) = &assign.kind
    else {
        return false;
    };
    if op != "=" || field_target(target, m, fields).is_none() {
        return false;
    }
    matches!(&value.kind, ExprKind::Name(p) if m.params.iter().any(|q| &q.name == p))
}
