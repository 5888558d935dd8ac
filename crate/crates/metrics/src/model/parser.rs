//! Recursive-descent parser over the code tokens of one file.
//!
//! The grammar is permissive: constructs the metrics do not need (annotation
//! arguments, type parameter bounds, generic method type arguments) are
//! skipped as balanced token groups.

use super::ast::*;
use super::lexer::{TokenKind, TokenStream};
use crate::error::ParseError;

#[derive(Debug, Clone, Copy)]
struct PTok<'a> {
    kind: TokenKind,
    text: &'a str,
    line: u32,
    /// Set on the first half of a split `>>`/`>>>` so shift operators can be
    /// reassembled in expression context.
    glued: bool,
}

type PResult<T> = Result<T, ParseError>;

pub fn parse_compilation_unit(tokens: &TokenStream) -> PResult<CompilationUnit> {
    let mut toks = Vec::new();
    for t in tokens.code_tokens() {
        if t.kind == TokenKind::Operator && (t.lexeme == ">>" || t.lexeme == ">>>") {
            let n = t.lexeme.len();
            for i in 0..n {
                toks.push(PTok {
                    kind: TokenKind::Operator,
                    text: ">",
                    line: t.line,
                    glued: i + 1 < n,
                });
            }
        } else {
            toks.push(PTok {
                kind: t.kind,
                text: t.lexeme.as_str(),
                line: t.line,
                glued: false,
            });
        }
    }
    let last_line = tokens.tokens.last().map_or(1, |t| t.line);
    Parser {
        toks,
        pos: 0,
        last_line,
    }
    .compilation_unit()
}

struct Parser<'a> {
    toks: Vec<PTok<'a>>,
    pos: usize,
    last_line: u32,
}

const BINARY_PRECEDENCE: &[(&str, u8)] = &[
    ("||", 1),
    ("&&", 2),
    ("|", 3),
    ("^", 4),
    ("&", 5),
    ("==", 6),
    ("!=", 6),
    ("<", 7),
    (">", 7),
    ("<=", 7),
    (">=", 7),
    ("<<", 8),
    (">>", 8),
    (">>>", 8),
    ("+", 9),
    ("-", 9),
    ("*", 10),
    ("/", 10),
    ("%", 10),
];
const INSTANCEOF_PRECEDENCE: u8 = 7;

const MODIFIER_KEYWORDS: &[&str] = &[
    "public",
    "protected",
    "private",
    "static",
    "abstract",
    "final",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
];

impl<'a> Parser<'a> {
    // ---- cursor helpers ----

    fn peek(&self) -> Option<&PTok<'a>> {
        self.toks.get(self.pos)
    }

    fn peek_text(&self) -> &'a str {
        self.toks.get(self.pos).map_or("", |t| t.text)
    }

    fn peek_text_at(&self, n: usize) -> &'a str {
        self.toks.get(self.pos + n).map_or("", |t| t.text)
    }

    fn peek_kind_at(&self, n: usize) -> Option<TokenKind> {
        self.toks.get(self.pos + n).map(|t| t.kind)
    }

    fn at(&self, text: &str) -> bool {
        self.peek_text() == text
    }

    fn at_eof(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn line(&self) -> u32 {
        self.peek()
            .map(|t| t.line)
            .or_else(|| self.toks.last().map(|t| t.line))
            .unwrap_or(self.last_line)
    }

    fn prev_line(&self) -> u32 {
        if self.pos == 0 {
            1
        } else {
            self.toks[self.pos - 1].line
        }
    }

    fn bump(&mut self) -> PResult<PTok<'a>> {
        let tok = self.peek().copied().ok_or_else(|| self.error("unexpected end of file"))?;
        self.pos += 1;
        Ok(tok)
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, text: &str) -> PResult<()> {
        if self.eat(text) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{text}`, found `{}`", self.peek_text())))
        }
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError {
            line: self.line(),
            message: message.to_string(),
        }
    }

    fn is_ident(&self) -> bool {
        self.peek_kind_at(0) == Some(TokenKind::Identifier)
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                let s = t.text.to_string();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(&format!("expected identifier, found `{}`", self.peek_text()))),
        }
    }

    fn qualified_name(&mut self) -> PResult<String> {
        let mut name = self.ident()?;
        while self.at(".") && self.peek_kind_at(1) == Some(TokenKind::Identifier) {
            self.pos += 1;
            name.push('.');
            name.push_str(&self.ident()?);
        }
        Ok(name)
    }

    /// Skips a balanced group starting at the current opening token.
    fn skip_balanced(&mut self, open: &str, close: &str) -> PResult<()> {
        self.expect(open)?;
        let mut depth = 1usize;
        while depth > 0 {
            let t = self.bump()?;
            if t.text == open {
                depth += 1;
            } else if t.text == close {
                depth -= 1;
            }
        }
        Ok(())
    }

    /// Index of the token that closes the group opened at `start`, if any.
    fn matching_close(&self, start: usize, open: &str, close: &str) -> Option<usize> {
        let mut depth = 0usize;
        for (i, t) in self.toks.iter().enumerate().skip(start) {
            if t.text == open {
                depth += 1;
            } else if t.text == close {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
        }
        None
    }

    fn skip_annotation(&mut self) -> PResult<()> {
        self.expect("@")?;
        self.qualified_name()?;
        if self.at("(") {
            self.skip_balanced("(", ")")?;
        }
        Ok(())
    }

    fn skip_annotations(&mut self) -> PResult<()> {
        while self.at("@") && self.peek_text_at(1) != "interface" {
            self.skip_annotation()?;
        }
        Ok(())
    }

    // ---- declarations ----

    fn compilation_unit(&mut self) -> PResult<CompilationUnit> {
        let mut unit = CompilationUnit {
            package: None,
            imports: Vec::new(),
            types: Vec::new(),
        };
        self.skip_annotations()?;
        if self.eat("package") {
            unit.package = Some(self.qualified_name()?);
            self.expect(";")?;
        }
        loop {
            if self.eat(";") {
                continue;
            }
            if self.eat("import") {
                let is_static = self.eat("static");
                let path = self.qualified_name()?;
                let wildcard = if self.at(".") && self.peek_text_at(1) == "*" {
                    self.pos += 2;
                    true
                } else {
                    false
                };
                self.expect(";")?;
                unit.imports.push(Import {
                    path,
                    is_static,
                    wildcard,
                });
                continue;
            }
            break;
        }
        // module-info.java declares no types.
        if matches!(self.peek_text(), "module" | "open") && self.peek_kind_at(0) == Some(TokenKind::Identifier) {
            return Ok(unit);
        }
        while !self.at_eof() {
            if self.eat(";") {
                continue;
            }
            let start_line = self.line();
            let modifiers = self.modifiers()?;
            match self.type_declaration(modifiers, start_line)? {
                Some(t) => unit.types.push(t),
                None => return Err(self.error(&format!("expected type declaration, found `{}`", self.peek_text()))),
            }
        }
        Ok(unit)
    }

    fn modifiers(&mut self) -> PResult<Modifiers> {
        let mut m = Modifiers::default();
        loop {
            if self.at("@") && self.peek_text_at(1) != "interface" {
                self.skip_annotation()?;
                continue;
            }
            let text = self.peek_text();
            if self.peek_kind_at(0) == Some(TokenKind::Keyword) && MODIFIER_KEYWORDS.contains(&text) {
                match text {
                    "public" => m.visibility = Visibility::Public,
                    "protected" => m.visibility = Visibility::Protected,
                    "private" => m.visibility = Visibility::Private,
                    "static" => m.is_static = true,
                    "abstract" => m.is_abstract = true,
                    "final" => m.is_final = true,
                    _ => {}
                }
                self.pos += 1;
                continue;
            }
            // `default` as an interface method modifier (not `default:` labels).
            if text == "default" && !matches!(self.peek_text_at(1), ":" | "->") {
                m.is_default = true;
                self.pos += 1;
                continue;
            }
            if self.is_ident() && text == "sealed" && self.peek_kind_at(1).is_some_and(|k| k == TokenKind::Keyword || k == TokenKind::Identifier) {
                self.pos += 1;
                continue;
            }
            if self.is_ident() && text == "non" && self.peek_text_at(1) == "-" && self.peek_text_at(2) == "sealed" {
                self.pos += 3;
                continue;
            }
            break;
        }
        Ok(m)
    }

    fn is_record_start(&self) -> bool {
        self.peek_text() == "record"
            && self.is_ident()
            && self.peek_kind_at(1) == Some(TokenKind::Identifier)
            && matches!(self.peek_text_at(2), "(" | "<")
    }

    fn at_type_declaration(&self) -> bool {
        matches!(self.peek_text(), "class" | "interface" | "enum")
            || (self.at("@") && self.peek_text_at(1) == "interface")
            || self.is_record_start()
    }

    fn type_declaration(&mut self, modifiers: Modifiers, start_line: u32) -> PResult<Option<TypeNode>> {
        let kind = if self.eat("class") {
            TypeKind::Class
        } else if self.eat("interface") {
            TypeKind::Interface
        } else if self.eat("enum") {
            TypeKind::Enum
        } else if self.at("@") && self.peek_text_at(1) == "interface" {
            self.pos += 2;
            TypeKind::Annotation
        } else if self.is_record_start() {
            self.pos += 1;
            TypeKind::Record
        } else {
            return Ok(None);
        };
        let name = self.ident()?;
        if self.at("<") {
            self.skip_balanced("<", ">")?;
        }
        let mut node = TypeNode {
            name: name.clone(),
            kind,
            modifiers,
            superclass: None,
            interfaces: Vec::new(),
            enum_constants: Vec::new(),
            record_components: Vec::new(),
            members: Vec::new(),
            start_line,
            end_line: start_line,
        };
        if kind == TypeKind::Record {
            node.record_components = self.parameters()?;
        }
        loop {
            if self.eat("extends") {
                let types = self.type_list()?;
                if kind == TypeKind::Interface {
                    node.interfaces.extend(types);
                } else {
                    node.superclass = types.into_iter().next();
                }
            } else if self.eat("implements") {
                node.interfaces.extend(self.type_list()?);
            } else if self.at("permits") && self.is_ident() {
                self.pos += 1;
                self.type_list()?;
            } else {
                break;
            }
        }
        self.expect("{")?;
        if kind == TypeKind::Enum {
            node.enum_constants = self.enum_constants(&name)?;
        }
        node.members = self.class_body_members(&name)?;
        node.end_line = self.prev_line();
        Ok(Some(node))
    }

    fn type_list(&mut self) -> PResult<Vec<TypeRef>> {
        let mut out = vec![self.type_ref()?];
        while self.eat(",") {
            out.push(self.type_ref()?);
        }
        Ok(out)
    }

    fn enum_constants(&mut self, enum_name: &str) -> PResult<Vec<EnumConstant>> {
        let mut out = Vec::new();
        loop {
            self.skip_annotations()?;
            if self.at(";") || self.at("}") {
                break;
            }
            let line = self.line();
            let name = self.ident()?;
            let args = if self.at("(") { self.arguments()? } else { Vec::new() };
            let body = if self.eat("{") {
                Some(self.class_body_members(enum_name)?)
            } else {
                None
            };
            out.push(EnumConstant { name, args, body, line });
            if !self.eat(",") {
                break;
            }
        }
        self.eat(";");
        Ok(out)
    }

    /// Parses members up to and including the closing `}`.
    fn class_body_members(&mut self, class_name: &str) -> PResult<Vec<Member>> {
        let mut members = Vec::new();
        loop {
            if self.eat("}") {
                return Ok(members);
            }
            if self.at_eof() {
                return Err(self.error("unterminated class body"));
            }
            if self.eat(";") {
                continue;
            }
            if self.at("{") {
                members.push(Member::Initializer {
                    is_static: false,
                    body: self.block()?,
                });
                continue;
            }
            if self.at("static") && self.peek_text_at(1) == "{" {
                self.pos += 1;
                members.push(Member::Initializer {
                    is_static: true,
                    body: self.block()?,
                });
                continue;
            }
            let start_line = self.line();
            let modifiers = self.modifiers()?;
            if let Some(t) = self.type_declaration(modifiers, start_line)? {
                members.push(Member::Type(t));
                continue;
            }
            if self.at("<") {
                self.skip_balanced("<", ">")?;
            }
            // Constructor, including the compact form used by records.
            if self.peek_text() == class_name && self.is_ident() && matches!(self.peek_text_at(1), "(" | "{") {
                self.pos += 1;
                let params = if self.at("(") { self.parameters()? } else { Vec::new() };
                let throws = self.throws_clause()?;
                let body = Some(self.block()?);
                members.push(Member::Method(MethodDecl {
                    name: class_name.to_string(),
                    modifiers,
                    return_type: None,
                    params,
                    throws,
                    body,
                    is_constructor: true,
                    is_accessor: false,
                    is_mutator: false,
                    start_line,
                    end_line: self.prev_line(),
                }));
                continue;
            }
            let ty = self.type_ref()?;
            let name = self.ident()?;
            if self.at("(") {
                let params = self.parameters()?;
                let mut return_type = ty;
                while self.at("[") && self.peek_text_at(1) == "]" {
                    self.pos += 2;
                    return_type.dims += 1;
                }
                let throws = self.throws_clause()?;
                let body = if self.at("{") {
                    Some(self.block()?)
                } else {
                    if self.eat("default") {
                        self.skip_to_semicolon()?;
                    }
                    self.expect(";")?;
                    None
                };
                members.push(Member::Method(MethodDecl {
                    name,
                    modifiers,
                    return_type: Some(return_type),
                    params,
                    throws,
                    body,
                    is_constructor: false,
                    is_accessor: false,
                    is_mutator: false,
                    start_line,
                    end_line: self.prev_line(),
                }));
            } else {
                let declarators = self.declarators_after_name(name)?;
                self.expect(";")?;
                members.push(Member::Field(FieldDecl {
                    modifiers,
                    ty,
                    declarators,
                    line: start_line,
                }));
            }
        }
    }

    fn skip_to_semicolon(&mut self) -> PResult<()> {
        let mut depth = 0i32;
        while !self.at_eof() {
            match self.peek_text() {
                "(" | "{" | "[" => depth += 1,
                ")" | "}" | "]" => depth -= 1,
                ";" if depth <= 0 => return Ok(()),
                _ => {}
            }
            self.pos += 1;
        }
        Err(self.error("expected `;`"))
    }

    fn throws_clause(&mut self) -> PResult<Vec<TypeRef>> {
        if self.eat("throws") {
            self.type_list()
        } else {
            Ok(Vec::new())
        }
    }

    fn parameters(&mut self) -> PResult<Vec<Param>> {
        self.expect("(")?;
        let mut params = Vec::new();
        if self.eat(")") {
            return Ok(params);
        }
        loop {
            self.modifiers()?;
            let mut ty = self.type_ref()?;
            self.skip_annotations()?;
            if self.eat("...") {
                ty.dims += 1;
            }
            // Receiver parameter `Foo this`.
            let name = if self.eat("this") {
                "this".to_string()
            } else {
                self.ident()?
            };
            while self.at("[") && self.peek_text_at(1) == "]" {
                self.pos += 2;
                ty.dims += 1;
            }
            if name != "this" {
                params.push(Param { name, ty });
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(params)
    }

    fn declarators_after_name(&mut self, first: String) -> PResult<Vec<VarDeclarator>> {
        let mut out = Vec::new();
        let mut name = first;
        loop {
            while self.at("[") && self.peek_text_at(1) == "]" {
                self.pos += 2;
            }
            let init = if self.eat("=") {
                Some(self.variable_initializer()?)
            } else {
                None
            };
            out.push(VarDeclarator { name, init });
            if !self.eat(",") {
                break;
            }
            name = self.ident()?;
        }
        Ok(out)
    }

    fn variable_initializer(&mut self) -> PResult<Expr> {
        if self.at("{") {
            self.array_initializer()
        } else {
            self.expression()
        }
    }

    fn array_initializer(&mut self) -> PResult<Expr> {
        let line = self.line();
        self.expect("{")?;
        let mut items = Vec::new();
        while !self.at("}") {
            items.push(self.variable_initializer()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect("}")?;
        Ok(Expr {
            kind: ExprKind::ArrayInit(items),
            line,
        })
    }

    // ---- types ----

    fn type_ref(&mut self) -> PResult<TypeRef> {
        self.skip_annotations()?;
        let tok = self.peek().copied().ok_or_else(|| self.error("expected type"))?;
        let mut name = match tok.kind {
            TokenKind::Keyword if is_primitive_keyword(tok.text) => {
                self.pos += 1;
                tok.text.to_string()
            }
            TokenKind::Identifier => {
                self.pos += 1;
                tok.text.to_string()
            }
            _ => return Err(self.error(&format!("expected type, found `{}`", tok.text))),
        };
        let mut args = Vec::new();
        loop {
            if self.at("<") {
                args = self.type_arguments()?;
            }
            if self.at(".") && self.peek_kind_at(1) == Some(TokenKind::Identifier) {
                self.pos += 1;
                self.skip_annotations()?;
                name.push('.');
                name.push_str(&self.ident()?);
                continue;
            }
            break;
        }
        let mut dims = 0;
        loop {
            self.skip_annotations()?;
            if self.at("[") && self.peek_text_at(1) == "]" {
                self.pos += 2;
                dims += 1;
            } else {
                break;
            }
        }
        Ok(TypeRef { name, args, dims })
    }

    fn type_arguments(&mut self) -> PResult<Vec<TypeRef>> {
        self.expect("<")?;
        let mut args = Vec::new();
        if self.eat(">") {
            return Ok(args); // diamond
        }
        loop {
            self.skip_annotations()?;
            if self.eat("?") {
                if self.eat("extends") || self.eat("super") {
                    args.push(self.type_ref()?);
                }
            } else {
                let t = self.type_ref()?;
                // intersection bounds inside casts `(A & B)` are not type args;
                // here `&` only appears in type parameter bounds, which we skip.
                args.push(t);
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(">")?;
        Ok(args)
    }

    /// Speculatively parses a type; restores the cursor on failure.
    fn try_type(&mut self) -> Option<TypeRef> {
        let save = self.pos;
        match self.type_ref() {
            Ok(t) => Some(t),
            Err(_) => {
                self.pos = save;
                None
            }
        }
    }

    // ---- statements ----

    fn block(&mut self) -> PResult<Block> {
        let start_line = self.line();
        self.expect("{")?;
        let mut stmts = Vec::new();
        while !self.at("}") {
            if self.at_eof() {
                return Err(self.error("unterminated block"));
            }
            stmts.push(self.statement()?);
        }
        let end_line = self.line();
        self.expect("}")?;
        Ok(Block {
            stmts,
            start_line,
            end_line,
        })
    }

    fn finish(&self, kind: StmtKind, line: u32) -> Stmt {
        Stmt {
            kind,
            line,
            end_line: self.prev_line().max(line),
        }
    }

    /// Tries `[final|@Ann]* Type name` followed by one of `follow`; on
    /// success the cursor sits after the name.
    fn try_local_var_head(&mut self, follow: &[&str]) -> Option<(TypeRef, String)> {
        let save = self.pos;
        let ok = (|| {
            self.modifiers().ok()?;
            let ty = self.try_type()?;
            if !self.is_ident() {
                return None;
            }
            let name = self.ident().ok()?;
            if follow.contains(&self.peek_text()) {
                Some((ty, name))
            } else {
                None
            }
        })();
        if ok.is_none() {
            self.pos = save;
        }
        ok
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let line = self.line();
        let text = self.peek_text();
        let kind = self.peek_kind_at(0);
        if kind == Some(TokenKind::Keyword) || text == ";" || text == "{" {
            match text {
                "{" => {
                    let b = self.block()?;
                    return Ok(self.finish(StmtKind::Block(b), line));
                }
                ";" => {
                    self.pos += 1;
                    return Ok(self.finish(StmtKind::Empty, line));
                }
                "if" => {
                    self.pos += 1;
                    let cond = self.paren_expression()?;
                    let then = Box::new(self.statement()?);
                    let otherwise = if self.eat("else") {
                        Some(Box::new(self.statement()?))
                    } else {
                        None
                    };
                    return Ok(self.finish(StmtKind::If { cond, then, otherwise }, line));
                }
                "while" => {
                    self.pos += 1;
                    let cond = self.paren_expression()?;
                    let body = Box::new(self.statement()?);
                    return Ok(self.finish(StmtKind::While { cond, body }, line));
                }
                "do" => {
                    self.pos += 1;
                    let body = Box::new(self.statement()?);
                    self.expect("while")?;
                    let cond = self.paren_expression()?;
                    self.expect(";")?;
                    return Ok(self.finish(StmtKind::DoWhile { body, cond }, line));
                }
                "for" => return self.for_statement(line),
                "switch" => {
                    self.pos += 1;
                    let selector = self.paren_expression()?;
                    let cases = self.switch_body()?;
                    return Ok(self.finish(StmtKind::Switch { selector, cases }, line));
                }
                "try" => return self.try_statement(line),
                "return" => {
                    self.pos += 1;
                    let value = if self.at(";") { None } else { Some(self.expression()?) };
                    self.expect(";")?;
                    return Ok(self.finish(StmtKind::Return(value), line));
                }
                "throw" => {
                    self.pos += 1;
                    let e = self.expression()?;
                    self.expect(";")?;
                    return Ok(self.finish(StmtKind::Throw(e), line));
                }
                "break" | "continue" => {
                    self.pos += 1;
                    let label = if self.is_ident() { Some(self.ident()?) } else { None };
                    self.expect(";")?;
                    let k = if text == "break" {
                        StmtKind::Break(label)
                    } else {
                        StmtKind::Continue(label)
                    };
                    return Ok(self.finish(k, line));
                }
                "synchronized" if self.peek_text_at(1) == "(" => {
                    self.pos += 1;
                    let lock = self.paren_expression()?;
                    let body = self.block()?;
                    return Ok(self.finish(StmtKind::Synchronized { lock, body }, line));
                }
                "assert" => {
                    self.pos += 1;
                    let cond = self.expression()?;
                    let message = if self.eat(":") { Some(self.expression()?) } else { None };
                    self.expect(";")?;
                    return Ok(self.finish(StmtKind::Assert { cond, message }, line));
                }
                "class" | "interface" | "enum" | "abstract" | "static" | "strictfp" => {
                    let save = self.pos;
                    let modifiers = self.modifiers()?;
                    if let Some(t) = self.type_declaration(modifiers, line)? {
                        return Ok(self.finish(StmtKind::LocalClass(Box::new(t)), line));
                    }
                    self.pos = save;
                }
                "final" => {
                    let save = self.pos;
                    let modifiers = self.modifiers()?;
                    if self.at_type_declaration() {
                        if let Some(t) = self.type_declaration(modifiers, line)? {
                            return Ok(self.finish(StmtKind::LocalClass(Box::new(t)), line));
                        }
                    }
                    self.pos = save;
                }
                _ => {}
            }
        }
        if self.is_record_start() {
            let modifiers = Modifiers::default();
            if let Some(t) = self.type_declaration(modifiers, line)? {
                return Ok(self.finish(StmtKind::LocalClass(Box::new(t)), line));
            }
        }
        if self.is_ident() {
            // labeled statement
            if self.peek_text_at(1) == ":" {
                let label = self.ident()?;
                self.pos += 1;
                let body = Box::new(self.statement()?);
                return Ok(self.finish(StmtKind::Labeled { label, body }, line));
            }
            if text == "yield" && !matches!(self.peek_text_at(1), "=" | "." | "(" | "[" | ";" | "++" | "--" | "+=" | "-=") {
                self.pos += 1;
                let e = self.expression()?;
                self.expect(";")?;
                return Ok(self.finish(StmtKind::Yield(e), line));
            }
        }
        if let Some((ty, name)) = self.try_local_var_head(&["=", ";", ",", "["]) {
            let declarators = self.declarators_after_name(name)?;
            self.expect(";")?;
            return Ok(self.finish(StmtKind::LocalVar { ty, declarators }, line));
        }
        let e = self.expression()?;
        self.expect(";")?;
        Ok(self.finish(StmtKind::Expr(e), line))
    }

    fn paren_expression(&mut self) -> PResult<Expr> {
        self.expect("(")?;
        let e = self.expression()?;
        self.expect(")")?;
        Ok(e)
    }

    fn for_statement(&mut self, line: u32) -> PResult<Stmt> {
        self.expect("for")?;
        self.expect("(")?;
        if let Some((ty, name)) = self.try_local_var_head(&[":"]) {
            self.expect(":")?;
            let iterable = self.expression()?;
            self.expect(")")?;
            let body = Box::new(self.statement()?);
            return Ok(self.finish(
                StmtKind::ForEach {
                    ty,
                    name,
                    iterable,
                    body,
                },
                line,
            ));
        }
        let mut init = Vec::new();
        if !self.at(";") {
            let init_line = self.line();
            if let Some((ty, name)) = self.try_local_var_head(&["=", ";", ",", "["]) {
                let declarators = self.declarators_after_name(name)?;
                init.push(self.finish(StmtKind::LocalVar { ty, declarators }, init_line));
            } else {
                loop {
                    let l = self.line();
                    let e = self.expression()?;
                    init.push(self.finish(StmtKind::Expr(e), l));
                    if !self.eat(",") {
                        break;
                    }
                }
            }
        }
        self.expect(";")?;
        let cond = if self.at(";") { None } else { Some(self.expression()?) };
        self.expect(";")?;
        let mut update = Vec::new();
        if !self.at(")") {
            loop {
                update.push(self.expression()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        let body = Box::new(self.statement()?);
        Ok(self.finish(
            StmtKind::For {
                init,
                cond,
                update,
                body,
            },
            line,
        ))
    }

    fn try_statement(&mut self, line: u32) -> PResult<Stmt> {
        self.expect("try")?;
        let mut resources = Vec::new();
        if self.eat("(") {
            while !self.at(")") {
                let l = self.line();
                if let Some((ty, name)) = self.try_local_var_head(&["="]) {
                    self.expect("=")?;
                    let init = self.expression()?;
                    resources.push(self.finish(
                        StmtKind::LocalVar {
                            ty,
                            declarators: vec![VarDeclarator { name, init: Some(init) }],
                        },
                        l,
                    ));
                } else {
                    let e = self.expression()?;
                    resources.push(self.finish(StmtKind::Expr(e), l));
                }
                if !self.eat(";") {
                    break;
                }
            }
            self.expect(")")?;
        }
        let body = self.block()?;
        let mut catches = Vec::new();
        while self.at("catch") {
            let cline = self.line();
            self.pos += 1;
            self.expect("(")?;
            self.modifiers()?;
            let mut types = vec![self.type_ref()?];
            while self.eat("|") {
                types.push(self.type_ref()?);
            }
            let name = self.ident()?;
            self.expect(")")?;
            let body = self.block()?;
            catches.push(CatchClause {
                types,
                name,
                body,
                line: cline,
            });
        }
        let finally = if self.eat("finally") { Some(self.block()?) } else { None };
        if catches.is_empty() && finally.is_none() && resources.is_empty() {
            return Err(self.error("`try` without `catch` or `finally`"));
        }
        Ok(self.finish(
            StmtKind::Try {
                resources,
                body,
                catches,
                finally,
            },
            line,
        ))
    }

    fn switch_body(&mut self) -> PResult<Vec<SwitchCase>> {
        self.expect("{")?;
        let mut cases: Vec<SwitchCase> = Vec::new();
        while !self.eat("}") {
            if self.at_eof() {
                return Err(self.error("unterminated switch"));
            }
            if !(self.at("case") || self.at("default")) {
                return Err(self.error(&format!("expected `case` or `default`, found `{}`", self.peek_text())));
            }
            let line = self.line();
            let mut labels = Vec::new();
            // Consecutive `case a: case b:` labels share one group.
            let arrow = loop {
                if self.eat("default") {
                    labels.push(CaseLabel::Default);
                } else {
                    self.expect("case")?;
                    loop {
                        if self.eat("default") {
                            labels.push(CaseLabel::Default);
                        } else {
                            let e = self.ternary()?;
                            // type pattern binding `case Foo f ->`
                            if self.is_ident() && self.peek_text() != "when" {
                                self.pos += 1;
                            }
                            if self.at("when") && self.is_ident() {
                                self.pos += 1;
                                self.ternary()?;
                            }
                            labels.push(CaseLabel::Expr(e));
                        }
                        if !self.eat(",") {
                            break;
                        }
                    }
                }
                if self.eat("->") {
                    break true;
                }
                self.expect(":")?;
                if !(self.at("case") || self.at("default")) || self.peek_text_at(1) == "->" && false {
                    break false;
                }
            };
            let mut body = Vec::new();
            if arrow {
                let sline = self.line();
                if self.at("{") {
                    let b = self.block()?;
                    body.push(self.finish(StmtKind::Block(b), sline));
                } else if self.at("throw") {
                    body.push(self.statement()?);
                } else {
                    let e = self.expression()?;
                    self.expect(";")?;
                    body.push(self.finish(StmtKind::Expr(e), sline));
                }
            } else {
                while !(self.at("case") || self.at("default") && matches!(self.peek_text_at(1), ":" | "->") || self.at("}")) {
                    if self.at_eof() {
                        return Err(self.error("unterminated switch"));
                    }
                    body.push(self.statement()?);
                }
            }
            cases.push(SwitchCase {
                labels,
                body,
                arrow,
                line,
            });
        }
        Ok(cases)
    }

    // ---- expressions ----

    fn expression(&mut self) -> PResult<Expr> {
        self.assignment()
    }

    fn lambda_params_end(&self) -> Option<usize> {
        if self.is_ident() && self.peek_text_at(1) == "->" {
            return Some(self.pos + 1);
        }
        if self.at("(") {
            let close = self.matching_close(self.pos, "(", ")")?;
            if self.toks.get(close + 1).is_some_and(|t| t.text == "->") {
                return Some(close + 1);
            }
        }
        None
    }

    fn assignment(&mut self) -> PResult<Expr> {
        if let Some(arrow) = self.lambda_params_end() {
            return self.lambda(arrow);
        }
        let lhs = self.ternary()?;
        if self.peek_kind_at(0) == Some(TokenKind::AssignmentOperator) {
            let op = self.bump()?.text.to_string();
            let value = self.assignment()?;
            let line = lhs.line;
            return Ok(Expr {
                kind: ExprKind::Assign {
                    op,
                    target: Box::new(lhs),
                    value: Box::new(value),
                },
                line,
            });
        }
        Ok(lhs)
    }

    fn lambda(&mut self, arrow: usize) -> PResult<Expr> {
        let line = self.line();
        let mut params = Vec::new();
        for i in self.pos..arrow {
            let t = &self.toks[i];
            if t.kind == TokenKind::Identifier && matches!(self.toks.get(i + 1).map(|n| n.text), Some(",") | Some(")") | Some("->")) {
                params.push(t.text.to_string());
            }
        }
        self.pos = arrow + 1;
        let body = if self.at("{") {
            LambdaBody::Block(self.block()?)
        } else {
            LambdaBody::Expr(Box::new(self.expression()?))
        };
        Ok(Expr {
            kind: ExprKind::Lambda { params, body },
            line,
        })
    }

    fn ternary(&mut self) -> PResult<Expr> {
        let cond = self.binary(1)?;
        if self.at("?") {
            self.pos += 1;
            let then = if self.lambda_params_end().is_some() {
                self.assignment()?
            } else {
                self.ternary()?
            };
            self.expect(":")?;
            let otherwise = if self.lambda_params_end().is_some() {
                self.assignment()?
            } else {
                self.ternary()?
            };
            let line = cond.line;
            return Ok(Expr {
                kind: ExprKind::Conditional {
                    cond: Box::new(cond),
                    then: Box::new(then),
                    otherwise: Box::new(otherwise),
                },
                line,
            });
        }
        Ok(cond)
    }

    /// Reads a binary operator at the cursor without consuming it, joining
    /// split `>` tokens back into shifts.
    fn peek_binary_op(&self) -> Option<(&'static str, usize)> {
        let t = self.peek()?;
        if t.kind != TokenKind::Operator {
            return None;
        }
        if t.text == ">" && t.glued {
            let second = self.toks.get(self.pos + 1)?;
            if second.glued {
                return Some((">>>", 3));
            }
            return Some((">>", 2));
        }
        BINARY_PRECEDENCE
            .iter()
            .find(|(op, _)| *op == t.text)
            .map(|(op, _)| (*op, 1))
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.at("instanceof") {
                if INSTANCEOF_PRECEDENCE < min_prec {
                    break;
                }
                self.pos += 1;
                self.eat("final");
                let ty = self.type_ref()?;
                if self.is_ident() {
                    self.pos += 1; // pattern binding
                }
                let line = lhs.line;
                lhs = Expr {
                    kind: ExprKind::InstanceOf {
                        expr: Box::new(lhs),
                        ty,
                    },
                    line,
                };
                continue;
            }
            let Some((op, width)) = self.peek_binary_op() else { break };
            let prec = BINARY_PRECEDENCE.iter().find(|(o, _)| *o == op).map(|(_, p)| *p).unwrap_or(0);
            if prec < min_prec {
                break;
            }
            self.pos += width;
            let rhs = self.binary(prec + 1)?;
            let line = lhs.line;
            lhs = Expr {
                kind: ExprKind::Binary {
                    op: op.to_string(),
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                line,
            };
        }
        Ok(lhs)
    }

    fn looks_like_cast(&self) -> bool {
        // cursor at `(`
        let Some(close) = self.matching_close(self.pos, "(", ")") else {
            return false;
        };
        if close == self.pos + 1 {
            return false;
        }
        let first = &self.toks[self.pos + 1];
        let primitive = first.kind == TokenKind::Keyword && is_primitive_keyword(first.text);
        if !(primitive || first.kind == TokenKind::Identifier || first.text == "@") {
            return false;
        }
        // Everything inside must look like a type: identifiers, dots,
        // generics, array brackets, annotations and intersection `&`.
        let type_like = self.toks[self.pos + 1..close].iter().all(|t| {
            matches!(t.kind, TokenKind::Identifier | TokenKind::Dot)
                || (t.kind == TokenKind::Keyword && (is_primitive_keyword(t.text) || t.text == "extends" || t.text == "super"))
                || matches!(t.text, "<" | ">" | "," | "?" | "[" | "]" | "&" | "@")
        });
        if !type_like {
            return false;
        }
        if primitive {
            return true;
        }
        let Some(next) = self.toks.get(close + 1) else {
            return false;
        };
        match next.kind {
            TokenKind::Identifier | TokenKind::Literal => true,
            TokenKind::Keyword => matches!(next.text, "this" | "super" | "new" | "switch") || is_primitive_keyword(next.text),
            _ => matches!(next.text, "(" | "!" | "~"),
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        let line = self.line();
        match self.peek_text() {
            "+" | "-" | "!" | "~" | "++" | "--" if self.peek_kind_at(0) == Some(TokenKind::Operator) => {
                let op = self.bump()?.text.to_string();
                let operand = self.unary()?;
                Ok(Expr {
                    kind: ExprKind::Unary {
                        op,
                        operand: Box::new(operand),
                    },
                    line,
                })
            }
            "(" if self.looks_like_cast() => {
                self.pos += 1;
                let ty = self.type_ref()?;
                while self.eat("&") {
                    self.type_ref()?;
                }
                self.expect(")")?;
                let expr = if self.lambda_params_end().is_some() {
                    self.assignment()?
                } else {
                    self.unary()?
                };
                Ok(Expr {
                    kind: ExprKind::Cast {
                        ty,
                        expr: Box::new(expr),
                    },
                    line,
                })
            }
            _ => {
                let primary = self.primary()?;
                self.postfix(primary)
            }
        }
    }

    fn arguments(&mut self) -> PResult<Vec<Expr>> {
        self.expect("(")?;
        let mut args = Vec::new();
        if self.eat(")") {
            return Ok(args);
        }
        loop {
            args.push(self.expression()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(args)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let line = self.line();
        let tok = self.peek().copied().ok_or_else(|| self.error("expected expression"))?;
        let kind = match tok.kind {
            TokenKind::Literal => {
                self.pos += 1;
                ExprKind::Literal(tok.text.to_string())
            }
            TokenKind::Identifier => {
                self.pos += 1;
                if self.at("(") {
                    let args = self.arguments()?;
                    ExprKind::Call {
                        target: None,
                        name: tok.text.to_string(),
                        args,
                    }
                } else {
                    ExprKind::Name(tok.text.to_string())
                }
            }
            TokenKind::Keyword => match tok.text {
                "this" => {
                    self.pos += 1;
                    if self.at("(") {
                        let args = self.arguments()?;
                        ExprKind::Call {
                            target: None,
                            name: "this".into(),
                            args,
                        }
                    } else {
                        ExprKind::This
                    }
                }
                "super" => {
                    self.pos += 1;
                    if self.at("(") {
                        let args = self.arguments()?;
                        ExprKind::Call {
                            target: None,
                            name: "super".into(),
                            args,
                        }
                    } else {
                        ExprKind::Super
                    }
                }
                "new" => return self.creator(),
                "switch" => {
                    self.pos += 1;
                    let selector = self.paren_expression()?;
                    let cases = self.switch_body()?;
                    ExprKind::Switch {
                        selector: Box::new(selector),
                        cases,
                    }
                }
                t if is_primitive_keyword(t) => {
                    let ty = self.type_ref()?;
                    if self.at("::") {
                        ExprKind::Name(ty.name)
                    } else {
                        self.expect(".")?;
                        self.expect("class")?;
                        ExprKind::ClassLiteral(ty)
                    }
                }
                _ => return Err(self.error(&format!("unexpected keyword `{}` in expression", tok.text))),
            },
            _ => match tok.text {
                "(" => {
                    self.pos += 1;
                    let inner = self.expression()?;
                    self.expect(")")?;
                    return Ok(inner);
                }
                "{" => return self.array_initializer(),
                "<" => {
                    // explicit generic invocation `<T>foo()`
                    self.skip_balanced("<", ">")?;
                    return self.primary();
                }
                _ => return Err(self.error(&format!("unexpected `{}` in expression", tok.text))),
            },
        };
        Ok(Expr { kind, line })
    }

    fn creator(&mut self) -> PResult<Expr> {
        let line = self.line();
        self.expect("new")?;
        if self.at("<") {
            self.skip_balanced("<", ">")?;
        }
        self.skip_annotations()?;
        // Parse the element type without consuming `[` dims.
        let tok = self.bump()?;
        let mut ty = TypeRef::simple(tok.text);
        if !(tok.kind == TokenKind::Identifier || (tok.kind == TokenKind::Keyword && is_primitive_keyword(tok.text))) {
            return Err(self.error(&format!("expected type after `new`, found `{}`", tok.text)));
        }
        loop {
            if self.at("<") {
                ty.args = self.type_arguments()?;
            }
            if self.at(".") && self.peek_kind_at(1) == Some(TokenKind::Identifier) {
                self.pos += 1;
                self.skip_annotations()?;
                ty.name.push('.');
                ty.name.push_str(&self.ident()?);
                continue;
            }
            break;
        }
        if self.at("[") {
            let mut dims = Vec::new();
            while self.at("[") {
                self.pos += 1;
                if self.eat("]") {
                    ty.dims += 1;
                } else {
                    dims.push(self.expression()?);
                    self.expect("]")?;
                    ty.dims += 1;
                }
            }
            let init = if self.at("{") {
                match self.array_initializer()?.kind {
                    ExprKind::ArrayInit(items) => Some(items),
                    _ => None,
                }
            } else {
                None
            };
            return Ok(Expr {
                kind: ExprKind::NewArray { ty, dims, init },
                line,
            });
        }
        let args = self.arguments()?;
        let body = if self.eat("{") {
            let simple = ty.name.rsplit('.').next().unwrap_or("").to_string();
            Some(self.class_body_members(&simple)?)
        } else {
            None
        };
        Ok(Expr {
            kind: ExprKind::New { ty, args, body },
            line,
        })
    }

    fn postfix(&mut self, mut expr: Expr) -> PResult<Expr> {
        loop {
            let line = expr.line;
            match self.peek_text() {
                "." => {
                    self.pos += 1;
                    if self.at("<") {
                        self.skip_balanced("<", ">")?;
                    }
                    let tok = self.bump()?;
                    expr = match (tok.kind, tok.text) {
                        (TokenKind::Identifier, name) => {
                            if self.at("(") {
                                let args = self.arguments()?;
                                Expr {
                                    kind: ExprKind::Call {
                                        target: Some(Box::new(expr)),
                                        name: name.to_string(),
                                        args,
                                    },
                                    line,
                                }
                            } else {
                                Expr {
                                    kind: ExprKind::FieldAccess {
                                        target: Box::new(expr),
                                        name: name.to_string(),
                                    },
                                    line,
                                }
                            }
                        }
                        (_, "this") => Expr {
                            kind: ExprKind::This,
                            line,
                        },
                        (_, "class") => Expr {
                            kind: ExprKind::ClassLiteral(TypeRef::simple(expr_dotted_name(&expr).unwrap_or_default())),
                            line,
                        },
                        (_, "super") => {
                            if self.at("(") {
                                let args = self.arguments()?;
                                Expr {
                                    kind: ExprKind::Call {
                                        target: None,
                                        name: "super".into(),
                                        args,
                                    },
                                    line,
                                }
                            } else {
                                Expr {
                                    kind: ExprKind::Super,
                                    line,
                                }
                            }
                        }
                        (_, "new") => {
                            self.pos -= 1;
                            self.creator()?
                        }
                        (_, other) => return Err(self.error(&format!("unexpected `{other}` after `.`"))),
                    };
                }
                "[" => {
                    if self.peek_text_at(1) == "]" {
                        // array type in `Foo[].class` or `int[]::new`
                        while self.at("[") && self.peek_text_at(1) == "]" {
                            self.pos += 2;
                        }
                        continue;
                    }
                    self.pos += 1;
                    let index = self.expression()?;
                    self.expect("]")?;
                    expr = Expr {
                        kind: ExprKind::Index {
                            target: Box::new(expr),
                            index: Box::new(index),
                        },
                        line,
                    };
                }
                "++" | "--" => {
                    let op = self.bump()?.text.to_string();
                    expr = Expr {
                        kind: ExprKind::Unary {
                            op: format!("post{op}"),
                            operand: Box::new(expr),
                        },
                        line,
                    };
                }
                "::" => {
                    self.pos += 1;
                    if self.at("<") {
                        self.skip_balanced("<", ">")?;
                    }
                    let tok = self.bump()?;
                    expr = Expr {
                        kind: ExprKind::MethodRef {
                            target: Box::new(expr),
                            name: tok.text.to_string(),
                        },
                        line,
                    };
                }
                "<" if self.generic_type_before_method_ref() => {
                    self.skip_balanced("<", ">")?;
                }
                _ => return Ok(expr),
            }
        }
    }

    /// `List<String>::new` style method references.
    fn generic_type_before_method_ref(&self) -> bool {
        self.matching_close(self.pos, "<", ">")
            .and_then(|close| self.toks.get(close + 1))
            .is_some_and(|t| t.text == "::")
    }
}

fn expr_dotted_name(e: &Expr) -> Option<String> {
    match &e.kind {
        ExprKind::Name(n) => Some(n.clone()),
        ExprKind::FieldAccess { target, name } => Some(format!("{}.{}", expr_dotted_name(target)?, name)),
        _ => None,
    }
}

fn is_primitive_keyword(s: &str) -> bool {
    matches!(s, "int" | "long" | "short" | "byte" | "char" | "boolean" | "float" | "double" | "void")
}
