//! Whole-file checking: parse diagnostics plus every invalid highlighting
//! region, reported as one sorted list.

use crate::diagnostic::{ParseDiagnostic, Severity, Span};
use crate::highlight::{invalid_regions, tokenize_forest};
use crate::pddl::{detect_kind, parse_domain, parse_problem, FileKind};
use crate::sexpr::parse_sexpr;
use crate::typegraph::build_type_graph;

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub kind: FileKind,
    /// Sorted by span start; region errors carry the code `unscoped`.
    pub diagnostics: Vec<ParseDiagnostic>,
    pub invalid_regions: Vec<Span>,
}

impl CheckReport {
    pub fn errors(&self) -> usize {
        self.count(Severity::Error)
    }

    pub fn warnings(&self) -> usize {
        self.count(Severity::Warning)
    }

    fn count(&self, severity: Severity) -> usize {
        self.diagnostics
            .iter()
            .filter(|d| d.severity == severity)
            .count()
    }
}

fn excerpt(text: &str) -> String {
    let first = text.lines().next().unwrap_or("");
    let short: String = first.chars().take(40).collect();
    if short.len() < text.len() {
        format!("{short}...")
    } else {
        short
    }
}

pub fn check_text(text: &str) -> CheckReport {
    let (forest, _) = parse_sexpr(text);
    let kind = detect_kind(&forest);
    let mut diagnostics = match kind {
        FileKind::Problem => parse_problem(text).1,
        FileKind::Domain | FileKind::Unknown => {
            let (domain, mut diags) = parse_domain(text);
            if kind == FileKind::Domain {
                diags.extend(build_type_graph(&domain).1);
            }
            diags
        }
    };
    let regions = invalid_regions(&tokenize_forest(&forest));
    for region in &regions {
        diagnostics.push(ParseDiagnostic::error(
            "unscoped",
            *region,
            format!("not valid here: `{}`", excerpt(region.slice(text))),
        ));
    }
    diagnostics.sort_by_key(|d| (d.span.start, d.span.end, d.severity != Severity::Error, d.code));
    diagnostics.dedup_by(|a, b| a.span == b.span && a.code == b.code && a.message == b.message);
    CheckReport {
        kind,
        diagnostics,
        invalid_regions: regions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_domain() {
        let report = check_text("(define (domain d) (:predicates (p)))");
        assert_eq!(report.kind, FileKind::Domain);
        assert_eq!(report.errors(), 0);
    }

    #[test]
    fn regions_are_errors() {
        let report = check_text("(define (domain d) (:typing x))");
        assert_eq!(report.invalid_regions.len(), 1);
        assert!(report.diagnostics.iter().any(|d| d.code == "unscoped"));
        assert!(report.errors() >= 1);
    }

    #[test]
    fn sorted_by_start() {
        let report = check_text("(define (domain d) (:typing x) (:predicates (p ??x)) (");
        let starts: Vec<_> = report.diagnostics.iter().map(|d| d.span.start).collect();
        let mut sorted = starts.clone();
        sorted.sort();
        assert_eq!(starts, sorted);
    }

    #[test]
    fn problems() {
        let report = check_text("(define (problem p) (:domain d) (:init) (:goal (and)))");
        assert_eq!(report.kind, FileKind::Problem);
        assert_eq!(report.errors(), 0);
    }

    #[test]
    fn long_regions_are_shortened() {
        assert_eq!(excerpt("(a\n b)"), "(a...");
        assert_eq!(excerpt("abc"), "abc");
    }
}
