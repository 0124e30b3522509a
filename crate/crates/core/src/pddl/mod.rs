//! Typed PDDL 3.1 view over the lossless tree.
//!
//! The parsers here are best-effort: anything they do not understand is
//! skipped with a diagnostic so that broken files can still be inspected.

mod domain;
pub mod lexical;
mod problem;
mod typed_list;

pub use domain::{
    parse_domain, ActionDecl, DerivedDecl, DurativeActionDecl, FunctionDecl, PddlDomain,
    PredicateDecl,
};
pub use problem::{parse_problem, PddlProblem};
pub use typed_list::{parse_typed_list, TypeRef, TypedEntry, TypedList};

use crate::diagnostic::ParseDiagnostic;
use crate::sexpr::SExprNode;

/// What a PDDL file declares itself to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Domain,
    Problem,
    Unknown,
}

/// The first top-level `(define ...)` list.
pub fn find_define(forest: &[SExprNode]) -> Option<&SExprNode> {
    forest.iter().find(|n| n.has_head("define"))
}

/// Looks at the `(define (domain|problem ...))` header.
pub fn detect_kind(forest: &[SExprNode]) -> FileKind {
    let Some(define) = find_define(forest) else {
        return FileKind::Unknown;
    };
    match define.items().nth(1) {
        Some(h) if h.has_head("problem") => FileKind::Problem,
        Some(h) if h.has_head("domain") => FileKind::Domain,
        _ => FileKind::Unknown,
    }
}

/// Name atom of a `(domain NAME)` / `(problem NAME)` header.
pub(crate) fn header_name(define: &SExprNode, keyword: &str) -> Option<String> {
    let header = define.items().nth(1).filter(|h| h.has_head(keyword))?;
    header.items().nth(1)?.atom().map(str::to_owned)
}

/// Splits `:key value :key value` runs, as used in action bodies.
pub(crate) fn keyword_pairs<'a>(
    items: impl IntoIterator<Item = &'a SExprNode>,
    diagnostics: &mut Vec<ParseDiagnostic>,
) -> Vec<(&'a SExprNode, Option<&'a SExprNode>)> {
    let mut out = Vec::new();
    let mut items = items.into_iter().peekable();
    while let Some(key) = items.next() {
        if key.atom().is_some_and(|k| k.starts_with(':')) {
            let value = items.next_if(|v| !v.atom().is_some_and(|a| a.starts_with(':')));
            if value.is_none() {
                diagnostics.push(ParseDiagnostic::error(
                    "missing-value",
                    key.span,
                    format!("'{}' has no value", key.text),
                ));
            }
            out.push((key, value));
        } else {
            diagnostics.push(ParseDiagnostic::warning(
                "unexpected-item",
                key.span,
                "expected a ':keyword'",
            ));
        }
    }
    out
}
