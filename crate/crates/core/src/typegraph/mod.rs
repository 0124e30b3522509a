//! Type hierarchy of a domain, with each type annotated by the predicates
//! that mention it.

mod dot;
mod render;

use std::collections::{BTreeMap, BTreeSet};

use crate::diagnostic::{ParseDiagnostic, Span};
use crate::pddl::{PddlDomain, TypeRef};

pub use dot::emit_dot;
pub use render::{next_revision, render_diagram, DiagramArtifacts, DiagramError};

pub const ROOT: &str = "object";

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TypeGraph {
    /// Every type, `object` included.
    pub nodes: BTreeSet<String>,
    /// `(child, parent)` pairs.
    pub edges: BTreeSet<(String, String)>,
    /// Edges that close a cycle.
    pub back_edges: BTreeSet<(String, String)>,
    /// Types whose ancestry never reaches `object`.
    pub orphans: BTreeSet<String>,
    /// Predicate signatures, as written, per parameter type.
    pub predicates_by_type: BTreeMap<String, Vec<String>>,
}

impl TypeGraph {
    pub fn parents<'a>(&'a self, child: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.edges
            .iter()
            .filter(move |(c, _)| c == child)
            .map(|(_, p)| p.as_str())
    }

    pub fn children<'a>(&'a self, parent: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.edges
            .iter()
            .filter(move |(_, p)| p == parent)
            .map(|(c, _)| c.as_str())
    }

    /// Number of types other than `object`.
    pub fn type_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.as_str() != ROOT).count()
    }

    /// Longest downward chain from `object`, counted in types below it.
    /// Back edges are ignored.
    pub fn depth(&self) -> usize {
        fn longest(graph: &TypeGraph, node: &str, seen: &mut Vec<String>) -> usize {
            if seen.iter().any(|s| s == node) {
                return 0;
            }
            seen.push(node.to_owned());
            let best = graph
                .edges
                .iter()
                .filter(|e| e.1 == node && !graph.back_edges.contains(*e))
                .map(|(c, _)| 1 + longest(graph, c, seen))
                .max()
                .unwrap_or(0);
            seen.pop();
            best
        }
        longest(self, ROOT, &mut Vec::new())
    }

    /// Predicates shown in the box of `ty`.
    pub fn predicates_of(&self, ty: &str) -> &[String] {
        self.predicates_by_type
            .get(ty)
            .map(Vec::as_slice)
            .unwrap_or_default()
    }
}

/// Builds the hierarchy from the `:types` declarations and attaches each
/// predicate to every type among its parameters.
pub fn build_type_graph(domain: &PddlDomain) -> (TypeGraph, Vec<ParseDiagnostic>) {
    let mut graph = TypeGraph::default();
    let mut diagnostics = Vec::new();
    graph.nodes.insert(ROOT.to_owned());

    let mut declared: BTreeSet<String> = BTreeSet::new();
    let mut first_span: BTreeMap<String, Span> = BTreeMap::new();
    for entry in &domain.types.entries {
        let parent = match &entry.declared_type {
            TypeRef::Named(p) => p.clone(),
            TypeRef::Either(_) => {
                diagnostics.push(ParseDiagnostic::warning(
                    "either-supertype",
                    entry.span,
                    format!("'{}' has an either supertype; left out of the diagram", entry.name),
                ));
                continue;
            }
        };
        if entry.name == ROOT {
            diagnostics.push(ParseDiagnostic::warning(
                "object-redeclared",
                entry.span,
                "'object' is the root type and cannot have a supertype",
            ));
            continue;
        }
        declared.insert(entry.name.clone());
        graph.nodes.insert(entry.name.clone());
        graph.nodes.insert(parent.clone());
        let previous: Vec<String> = graph.parents(&entry.name).map(str::to_owned).collect();
        if !previous.is_empty() && !previous.contains(&parent) {
            diagnostics.push(ParseDiagnostic::warning(
                "multiple-supertypes",
                entry.span,
                format!(
                    "'{}' declared under '{}' and '{}'; both kept",
                    entry.name,
                    previous.join("', '"),
                    parent
                ),
            ));
        }
        first_span.entry(entry.name.clone()).or_insert(entry.span);
        graph.edges.insert((entry.name.clone(), parent));
    }

    // Types that only ever appear as supertypes hang off `object`.
    let implicit: Vec<String> = graph
        .nodes
        .iter()
        .filter(|n| n.as_str() != ROOT && !declared.contains(*n))
        .cloned()
        .collect();
    for ty in implicit {
        graph.edges.insert((ty, ROOT.to_owned()));
    }

    mark_cycles(&mut graph, &first_span, &mut diagnostics);

    for predicate in &domain.predicates {
        let mut types: Vec<String> = Vec::new();
        for param in &predicate.parameters.entries {
            if let TypeRef::Named(t) = &param.declared_type {
                if !types.contains(t) {
                    types.push(t.clone());
                }
            }
        }
        for ty in types {
            if graph.nodes.contains(&ty) {
                graph
                    .predicates_by_type
                    .entry(ty)
                    .or_default()
                    .push(predicate.signature_text.clone());
            } else {
                diagnostics.push(ParseDiagnostic::warning(
                    "unknown-type",
                    predicate.span,
                    format!("predicate '{}' uses undeclared type '{ty}'", predicate.name),
                ));
            }
        }
    }
    (graph, diagnostics)
}

fn mark_cycles(
    graph: &mut TypeGraph,
    spans: &BTreeMap<String, Span>,
    diagnostics: &mut Vec<ParseDiagnostic>,
) {
    #[derive(Clone, Copy, PartialEq)]
    enum State {
        Visiting,
        Done,
    }
    fn visit(
        node: &str,
        graph: &TypeGraph,
        state: &mut BTreeMap<String, State>,
        back: &mut BTreeSet<(String, String)>,
    ) {
        state.insert(node.to_owned(), State::Visiting);
        let parents: Vec<String> = graph.parents(node).map(str::to_owned).collect();
        for parent in parents {
            match state.get(&parent) {
                Some(State::Visiting) => {
                    back.insert((node.to_owned(), parent));
                }
                Some(State::Done) => {}
                None => visit(&parent, graph, state, back),
            }
        }
        state.insert(node.to_owned(), State::Done);
    }

    let mut state = BTreeMap::new();
    let mut back = BTreeSet::new();
    let nodes: Vec<String> = graph.nodes.iter().cloned().collect();
    for node in &nodes {
        if !state.contains_key(node) {
            visit(node, graph, &mut state, &mut back);
        }
    }
    for (child, parent) in &back {
        diagnostics.push(ParseDiagnostic::error(
            "type-cycle",
            spans.get(child).copied().unwrap_or_default(),
            format!("'{child}' - '{parent}' closes a cycle in the type hierarchy"),
        ));
    }
    graph.back_edges = back;

    // Anything that cannot reach `object` without a back edge is an orphan.
    for node in &nodes {
        if node != ROOT && !reaches_root(graph, node) {
            diagnostics.push(ParseDiagnostic::warning(
                "orphan-type",
                spans.get(node).copied().unwrap_or_default(),
                format!("'{node}' does not descend from object"),
            ));
            graph.orphans.insert(node.clone());
        }
    }
}

fn reaches_root(graph: &TypeGraph, start: &str) -> bool {
    let mut stack = vec![start.to_owned()];
    let mut seen = BTreeSet::new();
    while let Some(node) = stack.pop() {
        if node == ROOT {
            return true;
        }
        if !seen.insert(node.clone()) {
            continue;
        }
        for edge in graph.edges.iter().filter(|e| e.0 == node) {
            if !graph.back_edges.contains(edge) {
                stack.push(edge.1.clone());
            }
        }
    }
    false
}
