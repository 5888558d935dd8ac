//! Lossless Java tokenizer.
//!
//! Every byte of the input ends up in exactly one token, so joining the
//! lexemes reproduces the source. Comments and whitespace are kept as
//! tokens and flagged as non-code.

use serde::{Deserialize, Serialize};

use crate::error::LexError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TokenKind {
    Identifier,
    Keyword,
    Operator,
    AssignmentOperator,
    Semicolon,
    Dot,
    Literal,
    Punctuation,
    Comment,
    Whitespace,
}

impl TokenKind {
    pub fn is_code(self) -> bool {
        !matches!(self, TokenKind::Comment | TokenKind::Whitespace)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// 1-based line of the first character.
    pub line: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    pub tokens: Vec<Token>,
}

impl TokenStream {
    pub fn code_tokens(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(|t| t.kind.is_code())
    }

    /// Joins all lexemes back into the original text.
    pub fn reconstruct(&self) -> String {
        self.tokens.iter().map(|t| t.lexeme.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Reserved words of the Java SE language. Contextual keywords (`var`,
/// `record`, `yield`, `sealed`, ...) lex as identifiers, and `true`,
/// `false`, `null` lex as literals.
pub const JAVA_KEYWORDS: &[&str] = &[
    "abstract",
    "assert",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extends",
    "final",
    "finally",
    "float",
    "for",
    "goto",
    "if",
    "implements",
    "import",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "strictfp",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "try",
    "void",
    "volatile",
    "while",
];

pub fn is_keyword(word: &str) -> bool {
    JAVA_KEYWORDS.binary_search(&word).is_ok()
}

const ASSIGNMENT_OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "=",
];

// Longest first so maximal munch works with a linear scan.
const OPERATORS: &[&str] = &[
    ">>>", "<<", ">>", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=", "+", "-", "*",
    "/", "%", "!", "~", "&", "|", "^", "<", ">", "?", ":",
];

const PUNCTUATION: &[&str] = &["...", "(", ")", "{", "}", "[", "]", ",", "@"];

pub fn tokenize(source: &str) -> Result<TokenStream, LexError> {
    Lexer::new(source).run()
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    tokens: Vec<Token>,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            pos: 0,
            line: 1,
            tokens: Vec::new(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn push(&mut self, kind: TokenKind, len: usize) {
        let lexeme = &self.src[self.pos..self.pos + len];
        let line = self.line;
        self.line += lexeme.bytes().filter(|&b| b == b'\n').count() as u32;
        self.tokens.push(Token {
            kind,
            lexeme: lexeme.to_string(),
            line,
        });
        self.pos += len;
    }

    fn run(mut self) -> Result<TokenStream, LexError> {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                let len = self
                    .rest()
                    .char_indices()
                    .find(|(_, ch)| !ch.is_whitespace())
                    .map_or(self.rest().len(), |(i, _)| i);
                self.push(TokenKind::Whitespace, len);
            } else if self.rest().starts_with("//") {
                let len = self.rest().find('\n').unwrap_or(self.rest().len());
                self.push(TokenKind::Comment, len);
            } else if self.rest().starts_with("/*") {
                match self.rest()[2..].find("*/") {
                    Some(i) => self.push(TokenKind::Comment, i + 4),
                    None => {
                        return Err(LexError::UnterminatedComment { line: self.line });
                    }
                }
            } else if self.rest().starts_with("\"\"\"") {
                let len = self.text_block_len()?;
                self.push(TokenKind::Literal, len);
            } else if c == '"' || c == '\'' {
                let len = self.quoted_len(c)?;
                self.push(TokenKind::Literal, len);
            } else if c.is_ascii_digit() || (c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit())) {
                let len = self.number_len();
                self.push(TokenKind::Literal, len);
            } else if is_ident_start(c) {
                let len = self
                    .rest()
                    .char_indices()
                    .find(|(_, ch)| !is_ident_part(*ch))
                    .map_or(self.rest().len(), |(i, _)| i);
                let word = &self.rest()[..len];
                let kind = if is_keyword(word) {
                    TokenKind::Keyword
                } else if matches!(word, "true" | "false" | "null") {
                    TokenKind::Literal
                } else {
                    TokenKind::Identifier
                };
                self.push(kind, len);
            } else if c == ';' {
                self.push(TokenKind::Semicolon, 1);
            } else if self.rest().starts_with("...") {
                self.push(TokenKind::Punctuation, 3);
            } else if c == '.' {
                self.push(TokenKind::Dot, 1);
            } else if let Some(op) = ASSIGNMENT_OPERATORS.iter().find(|op| self.rest().starts_with(**op)) {
                // `==` must not be read as `=` followed by `=`.
                if *op == "=" && self.rest().starts_with("==") {
                    self.push(TokenKind::Operator, 2);
                } else {
                    self.push(TokenKind::AssignmentOperator, op.len());
                }
            } else if let Some(op) = OPERATORS.iter().find(|op| self.rest().starts_with(**op)) {
                self.push(TokenKind::Operator, op.len());
            } else if let Some(p) = PUNCTUATION.iter().find(|p| self.rest().starts_with(**p)) {
                self.push(TokenKind::Punctuation, p.len());
            } else {
                // Anything else (stray unicode, backslash) is kept verbatim.
                self.push(TokenKind::Punctuation, c.len_utf8());
            }
        }
        Ok(TokenStream {
            tokens: self.tokens,
        })
    }

    fn quoted_len(&self, quote: char) -> Result<usize, LexError> {
        let mut chars = self.rest().char_indices().skip(1);
        while let Some((i, ch)) = chars.next() {
            match ch {
                '\\' => {
                    chars.next();
                }
                '\n' => break,
                c if c == quote => return Ok(i + 1),
                _ => {}
            }
        }
        Err(if quote == '"' {
            LexError::UnterminatedString { line: self.line }
        } else {
            LexError::UnterminatedChar { line: self.line }
        })
    }

    fn text_block_len(&self) -> Result<usize, LexError> {
        let body = &self.rest()[3..];
        let mut escaped = false;
        for (i, ch) in body.char_indices() {
            if escaped {
                escaped = false;
                continue;
            }
            if ch == '\\' {
                escaped = true;
            } else if body[i..].starts_with("\"\"\"") {
                return Ok(3 + i + 3);
            }
        }
        Err(LexError::UnterminatedString { line: self.line })
    }

    fn number_len(&self) -> usize {
        let bytes = self.rest().as_bytes();
        let mut i = 0;
        let hex = bytes.len() > 1 && bytes[0] == b'0' && matches!(bytes[1], b'x' | b'X');
        let bin = bytes.len() > 1 && bytes[0] == b'0' && matches!(bytes[1], b'b' | b'B');
        if hex || bin {
            i = 2;
            while i < bytes.len() && (bytes[i].is_ascii_hexdigit() || bytes[i] == b'_' || bytes[i] == b'.') {
                i += 1;
            }
            // hex float exponent
            if hex && i < bytes.len() && matches!(bytes[i], b'p' | b'P') {
                i += 1;
                if i < bytes.len() && matches!(bytes[i], b'+' | b'-') {
                    i += 1;
                }
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
        } else {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' && fraction_follows(&bytes[i + 1..]) {
                i += 1;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
                    i += 1;
                }
            }
            if i < bytes.len() && matches!(bytes[i], b'e' | b'E') {
                let mut j = i + 1;
                if j < bytes.len() && matches!(bytes[j], b'+' | b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
        }
        if i < bytes.len() && matches!(bytes[i], b'l' | b'L' | b'f' | b'F' | b'd' | b'D') {
            i += 1;
        }
        i.max(1)
    }
}

/// Decides whether a `.` after integer digits belongs to the literal
/// (`2.`, `2.5`, `2.e3`, `2.f`) rather than starting a member access
/// (`a[0].field`) or a varargs ellipsis.
fn fraction_follows(after_dot: &[u8]) -> bool {
    match after_dot {
        [] => true,
        [b'.', ..] => false,
        [d, ..] if d.is_ascii_digit() => true,
        [b'e' | b'E', b'+' | b'-', d, ..] | [b'e' | b'E', d, ..] => d.is_ascii_digit(),
        [b'f' | b'F' | b'd' | b'D'] => true,
        [b'f' | b'F' | b'd' | b'D', next, ..] => !(next.is_ascii_alphanumeric() || *next == b'_' || *next == b'$'),
        [c, ..] => !(c.is_ascii_alphabetic() || *c == b'_' || *c == b'$' || *c >= 0x80),
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_' || c == '$'
}

fn is_ident_part(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$'
}
