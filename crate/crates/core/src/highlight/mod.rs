//! Context-aware scoping of PDDL source.
//!
//! Every byte of a file is covered by exactly one [`Token`]. A token gets a
//! real scope only when the construct it belongs to is legal where it
//! appears: `:parameters` is a keyword inside an action and nowhere else, a
//! name after `-` in a typed list is a type, a `?var` is a variable only
//! inside the action or quantifier that declares it. Whatever matches no
//! rule in its context is [`Scope::Unscoped`], which is how errors become
//! visible without any explicit error marking.

mod grammar;
mod render;

use serde::Serialize;

use crate::diagnostic::Span;
use crate::sexpr::{parse_sexpr, NodeKind, SExprNode};

pub use render::{emit_tokens_json, render_html};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Scope {
    Keyword,
    Variable,
    Name,
    TypeName,
    Number,
    Comment,
    Requirement,
    Punctuation,
    Unscoped,
}

impl Scope {
    pub const ALL: [Scope; 9] = [
        Scope::Keyword,
        Scope::Variable,
        Scope::Name,
        Scope::TypeName,
        Scope::Number,
        Scope::Comment,
        Scope::Requirement,
        Scope::Punctuation,
        Scope::Unscoped,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Keyword => "Keyword",
            Scope::Variable => "Variable",
            Scope::Name => "Name",
            Scope::TypeName => "TypeName",
            Scope::Number => "Number",
            Scope::Comment => "Comment",
            Scope::Requirement => "Requirement",
            Scope::Punctuation => "Punctuation",
            Scope::Unscoped => "Unscoped",
        }
    }
}

/// Lexical shape of a token, independent of its scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Open,
    Close,
    Atom,
    Comment,
    Whitespace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Token {
    pub span: Span,
    pub scope: Scope,
    pub kind: TokenKind,
}

/// Scopes every byte of `text`.
pub fn tokenize(text: &str) -> Vec<Token> {
    let (forest, _) = parse_sexpr(text);
    tokenize_forest(&forest)
}

/// Scopes an already parsed forest.
pub fn tokenize_forest(forest: &[SExprNode]) -> Vec<Token> {
    let scopes = grammar::assign_scopes(forest);
    let mut tokens = Vec::new();
    for node in forest {
        emit(node, &scopes, &mut tokens);
    }
    tokens
}

fn emit(node: &SExprNode, scopes: &grammar::ScopeMap, out: &mut Vec<Token>) {
    let leaf = |scope, kind| Token {
        span: node.span,
        scope,
        kind,
    };
    match node.kind {
        NodeKind::Whitespace => out.push(leaf(Scope::Punctuation, TokenKind::Whitespace)),
        NodeKind::Comment => out.push(leaf(Scope::Comment, TokenKind::Comment)),
        NodeKind::Atom => out.push(leaf(scopes.atom(node), TokenKind::Atom)),
        NodeKind::List => {
            let paren = if node.closed && scopes.is_recognized(node) {
                Scope::Punctuation
            } else {
                Scope::Unscoped
            };
            let start = node.span.start;
            out.push(Token {
                span: Span::new(start, start + 1),
                scope: paren,
                kind: TokenKind::Open,
            });
            for child in &node.children {
                emit(child, scopes, out);
            }
            if let Some(close) = node.close_offset() {
                out.push(Token {
                    span: Span::new(close, close + 1),
                    scope: paren,
                    kind: TokenKind::Close,
                });
            }
        }
    }
}

/// Maximal runs of unscoped tokens. Runs separated only by whitespace are
/// merged into one region.
pub fn invalid_regions(tokens: &[Token]) -> Vec<Span> {
    let mut regions: Vec<Span> = Vec::new();
    let mut current: Option<Span> = None;
    let mut gap_is_whitespace = true;
    for token in tokens {
        if token.scope == Scope::Unscoped {
            current = Some(match current {
                Some(span) if gap_is_whitespace => span.cover(token.span),
                Some(span) => {
                    regions.push(span);
                    token.span
                }
                None => token.span,
            });
            gap_is_whitespace = true;
        } else if token.kind != TokenKind::Whitespace {
            gap_is_whitespace = false;
        }
    }
    regions.extend(current);
    regions
}
