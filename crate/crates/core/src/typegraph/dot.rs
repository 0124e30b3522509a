use std::fmt::Write;

use super::TypeGraph;

fn escape_record(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if matches!(c, '{' | '}' | '|' | '<' | '>' | '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn quote_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT text for the hierarchy. Each type is a two-compartment record (name
/// over predicate signatures); arrows run from subtype to supertype with an
/// open head. Output depends only on the graph, never on insertion order.
pub fn emit_dot(graph: &TypeGraph) -> String {
    let mut out = String::new();
    out.push_str("digraph types {\n");
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [shape=record, fontname=\"monospace\"];\n");
    out.push_str("  edge [arrowhead=empty];\n");
    for node in &graph.nodes {
        let mut body = String::new();
        for sig in graph.predicates_of(node) {
            body.push_str(&escape_record(sig));
            body.push_str("\\l");
        }
        let _ = writeln!(
            out,
            "  {} [label=\"{{{}|{}}}\"];",
            quote_id(node),
            escape_record(node),
            body
        );
    }
    for (child, parent) in &graph.edges {
        let style = if graph.back_edges.contains(&(child.clone(), parent.clone())) {
            " [style=dashed, color=red]"
        } else {
            ""
        };
        let _ = writeln!(out, "  {} -> {}{};", quote_id(child), quote_id(parent), style);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::parse_domain;
    use crate::typegraph::build_type_graph;

    fn dot(text: &str) -> String {
        emit_dot(&build_type_graph(&parse_domain(text).0).0)
    }

    #[test]
    fn hacker_person() {
        let out = dot("(define (domain d) (:types hacker - person))");
        assert_eq!(out.matches("[label=").count(), 3);
        assert_eq!(out.matches(" -> ").count(), 2);
        assert!(out.contains("\"hacker\" -> \"person\";"));
        assert!(out.contains("\"person\" -> \"object\";"));
    }

    #[test]
    fn object_only() {
        let out = dot("(define (domain d))");
        assert_eq!(out.matches("[label=").count(), 1);
        assert_eq!(out.matches(" -> ").count(), 0);
    }

    #[test]
    fn signatures_in_body() {
        let out = dot("(define (domain d) (:types a) (:predicates (p ?x - a)))");
        assert!(out.contains("\"a\" [label=\"{a|(p ?x - a)\\l}\"];"));
    }

    #[test]
    fn record_characters_escaped() {
        assert_eq!(escape_record("(< ?a |b|)"), "(\\< ?a \\|b\\|)");
    }

    #[test]
    fn order_independent() {
        let a = dot("(define (domain d) (:types b - x a - x))");
        let b = dot("(define (domain d) (:types a - x b - x))");
        assert_eq!(a, b);
    }
}
