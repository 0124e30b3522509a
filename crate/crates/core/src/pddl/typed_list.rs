use std::fmt;

use crate::diagnostic::{ParseDiagnostic, Span};
use crate::sexpr::SExprNode;

/// The type attached to a typed-list entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeRef {
    Named(String),
    /// `(either a b ...)`.
    Either(Vec<String>),
}

impl TypeRef {
    pub fn object() -> Self {
        TypeRef::Named("object".to_owned())
    }

    /// The single type name, or `None` for `either`.
    pub fn as_name(&self) -> Option<&str> {
        match self {
            TypeRef::Named(n) => Some(n),
            TypeRef::Either(_) => None,
        }
    }

    /// All type names mentioned.
    pub fn names(&self) -> Vec<&str> {
        match self {
            TypeRef::Named(n) => vec![n.as_str()],
            TypeRef::Either(ns) => ns.iter().map(String::as_str).collect(),
        }
    }
}

impl fmt::Display for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeRef::Named(n) => f.write_str(n),
            TypeRef::Either(ns) => write!(f, "(either {})", ns.join(" ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedEntry {
    pub name: String,
    pub declared_type: TypeRef,
    /// Span of the name atom.
    pub span: Span,
}

/// `a b - t c - u d`: names grouped by the type that follows them. Names
/// with no trailing `- type` are typed `object`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TypedList {
    pub entries: Vec<TypedEntry>,
}

impl TypedList {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    /// `(name, type)` pairs with `either` rendered as text.
    pub fn pairs(&self) -> Vec<(String, String)> {
        self.entries
            .iter()
            .map(|e| (e.name.clone(), e.declared_type.to_string()))
            .collect()
    }

    pub(crate) fn extend(&mut self, other: TypedList) {
        self.entries.extend(other.entries);
    }
}

impl fmt::Display for TypedList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.entries.len() {
            let ty = &self.entries[i].declared_type;
            let mut j = i;
            while j < self.entries.len() && &self.entries[j].declared_type == ty {
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                f.write_str(&self.entries[j].name)?;
                j += 1;
            }
            write!(f, " - {ty}")?;
            i = j;
        }
        Ok(())
    }
}

/// Parses the items of a typed-list region. Trivia in `nodes` is skipped.
pub fn parse_typed_list<'a>(
    nodes: impl IntoIterator<Item = &'a SExprNode>,
) -> (TypedList, Vec<ParseDiagnostic>) {
    let mut list = TypedList::default();
    let mut diagnostics = Vec::new();
    let mut pending: Vec<(String, Span)> = Vec::new();

    let mut items = nodes.into_iter().filter(|n| !n.is_trivia()).peekable();
    while let Some(node) = items.next() {
        match node.atom() {
            Some("-") => {
                let Some(ty_node) = items.next() else {
                    diagnostics.push(ParseDiagnostic::error(
                        "dangling-dash",
                        node.span,
                        "'-' is not followed by a type",
                    ));
                    break;
                };
                let declared_type = match parse_type(ty_node, &mut diagnostics) {
                    Some(t) => t,
                    None => continue,
                };
                if pending.is_empty() {
                    diagnostics.push(ParseDiagnostic::warning(
                        "empty-type-group",
                        node.span,
                        "type given for an empty group of names",
                    ));
                }
                for (name, span) in pending.drain(..) {
                    list.entries.push(TypedEntry {
                        name,
                        declared_type: declared_type.clone(),
                        span,
                    });
                }
            }
            Some(name) => pending.push((name.to_owned(), node.span)),
            None => diagnostics.push(ParseDiagnostic::error(
                "unexpected-list",
                node.span,
                "expected a name, found a list",
            )),
        }
    }
    for (name, span) in pending {
        list.entries.push(TypedEntry {
            name,
            declared_type: TypeRef::object(),
            span,
        });
    }
    (list, diagnostics)
}

fn parse_type(node: &SExprNode, diagnostics: &mut Vec<ParseDiagnostic>) -> Option<TypeRef> {
    if let Some(name) = node.atom() {
        return Some(TypeRef::Named(name.to_owned()));
    }
    if node.has_head("either") {
        let members: Vec<String> = node
            .items()
            .skip(1)
            .filter_map(|n| n.atom().map(str::to_owned))
            .collect();
        diagnostics.push(ParseDiagnostic::warning(
            "either-type",
            node.span,
            "'either' types are kept but left out of the type hierarchy",
        ));
        return Some(TypeRef::Either(members));
    }
    diagnostics.push(ParseDiagnostic::error(
        "bad-type",
        node.span,
        "expected a type name or (either ...)",
    ));
    None
}
