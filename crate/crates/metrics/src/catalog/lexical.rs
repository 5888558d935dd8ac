//! File-level token counts.

use std::collections::HashSet;

use crate::model::lexer::{TokenKind, TokenStream};

const PRINT_CALLS: [&str; 3] = ["print", "println", "printf"];

/// The 17 lexical values in schema order.
pub fn compute_lexical_metrics(tokens: &TokenStream) -> [f64; 17] {
    let mut notk = 0u32;
    let mut distinct = HashSet::new();
    let mut noid = 0u32;
    let mut ids = HashSet::new();
    let mut nokw = 0u32;
    let mut kws = HashSet::new();
    let (mut noass, mut noop, mut nosc, mut nodot) = (0u32, 0u32, 0u32, 0u32);
    let mut ops = HashSet::new();
    let (mut norepr, mut nocjst, mut nocujst, mut noexst, mut nonew, mut nosuper) = (0u32, 0u32, 0u32, 0u32, 0u32, 0u32);

    for t in tokens.code_tokens() {
        let lex = t.lexeme.as_str();
        notk += 1;
        distinct.insert(lex);
        match t.kind {
            TokenKind::Identifier => {
                noid += 1;
                ids.insert(lex);
                if PRINT_CALLS.contains(&lex) {
                    norepr += 1;
                }
            }
            TokenKind::Keyword => {
                nokw += 1;
                kws.insert(lex);
                match lex {
                    "return" => norepr += 1,
                    "if" | "switch" | "case" => nocjst += 1,
                    "break" | "continue" | "goto" => nocujst += 1,
                    "try" | "catch" | "finally" | "throw" | "throws" => noexst += 1,
                    "new" => nonew += 1,
                    "super" => nosuper += 1,
                    _ => {}
                }
            }
            TokenKind::AssignmentOperator => noass += 1,
            TokenKind::Operator => {
                noop += 1;
                ops.insert(lex);
            }
            TokenKind::Semicolon => nosc += 1,
            TokenKind::Dot => nodot += 1,
            _ => {}
        }
    }
    [
        notk,
        distinct.len() as u32,
        noid,
        ids.len() as u32,
        nokw,
        kws.len() as u32,
        noass,
        noop,
        ops.len() as u32,
        nosc,
        nodot,
        norepr,
        nocjst,
        nocujst,
        noexst,
        nonew,
        nosuper,
    ]
    .map(f64::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::lexer::tokenize;

    fn lex(src: &str) -> [f64; 17] {
        compute_lexical_metrics(&tokenize(src).unwrap())
    }

    #[test]
    fn single_declaration() {
        let v = lex("int x = 1;");
        assert_eq!(v[0], 5.0);
        assert_eq!(v[2], 1.0);
        assert_eq!(v[4], 1.0);
        assert_eq!(v[6], 1.0);
        assert_eq!(v[9], 1.0);
        assert_eq!(v[10], 0.0);
    }

    #[test]
    fn empty_file_is_all_zero() {
        assert_eq!(lex(""), [0.0; 17]);
        assert_eq!(lex("  // only a comment\n"), [0.0; 17]);
    }

    #[test]
    fn jumps_and_prints() {
        let v = lex("if (a) { System.out.println(x); return; } else { break; }");
        assert_eq!(v[11], 2.0);
        assert_eq!(v[12], 1.0);
        assert_eq!(v[13], 1.0);
        assert_eq!(v[10], 2.0);
    }
}
