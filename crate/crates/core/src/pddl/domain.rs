use crate::diagnostic::{ParseDiagnostic, Span};
use crate::sexpr::{parse_sexpr, SExprNode};

use super::typed_list::{parse_typed_list, TypeRef, TypedList};
use super::{find_define, header_name, keyword_pairs};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateDecl {
    pub name: String,
    pub parameters: TypedList,
    /// The declaration exactly as written, parentheses included.
    pub signature_text: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDecl {
    pub name: String,
    pub parameters: TypedList,
    /// `None` when no `- type` follows, which means `number`.
    pub result_type: Option<TypeRef>,
    pub signature_text: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionDecl {
    pub name: String,
    pub parameters: TypedList,
    pub precondition: Option<SExprNode>,
    pub effect: Option<SExprNode>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DurativeActionDecl {
    pub name: String,
    pub parameters: TypedList,
    pub duration: Option<SExprNode>,
    pub condition: Option<SExprNode>,
    pub effect: Option<SExprNode>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedDecl {
    pub predicate: PredicateDecl,
    pub condition: Option<SExprNode>,
    pub span: Span,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PddlDomain {
    pub name: String,
    pub requirements: Vec<String>,
    pub types: TypedList,
    pub constants: TypedList,
    pub predicates: Vec<PredicateDecl>,
    pub functions: Vec<FunctionDecl>,
    pub constraints: Option<SExprNode>,
    pub actions: Vec<ActionDecl>,
    pub durative_actions: Vec<DurativeActionDecl>,
    pub derived: Vec<DerivedDecl>,
}

/// Parses domain text. Problems never abort the parse; they come back as
/// diagnostics alongside whatever could be recovered.
pub fn parse_domain(text: &str) -> (PddlDomain, Vec<ParseDiagnostic>) {
    let (forest, mut diagnostics) = parse_sexpr(text);
    let mut domain = PddlDomain::default();

    let Some(define) = find_define(&forest) else {
        diagnostics.push(ParseDiagnostic::error(
            "missing-define",
            Span::new(0, 0),
            "no (define (domain ...)) found",
        ));
        return (domain, diagnostics);
    };
    let mut items = define.items().skip(1).peekable();
    match header_name(define, "domain") {
        Some(name) => {
            domain.name = name;
            items.next();
        }
        None => {
            let span = items.peek().map_or(define.span, |n| n.span);
            diagnostics.push(ParseDiagnostic::error(
                "missing-header",
                span,
                "expected (domain NAME) after define",
            ));
            // A bare atom where the header belongs is consumed as the header.
            if items.peek().is_some_and(|n| n.is_atom()) {
                items.next();
            }
        }
    }

    let mut seen: Vec<String> = Vec::new();
    for block in items {
        let Some(head) = block.head().filter(|_| block.is_list()) else {
            diagnostics.push(ParseDiagnostic::warning(
                "unexpected-item",
                block.span,
                "expected a domain block",
            ));
            continue;
        };
        let head = head.to_ascii_lowercase();
        let repeatable = matches!(head.as_str(), ":action" | ":durative-action" | ":derived");
        if !repeatable && seen.contains(&head) {
            diagnostics.push(ParseDiagnostic::warning(
                "duplicate-block",
                block.span,
                format!("second {head} block; both are kept"),
            ));
        }
        seen.push(head.clone());
        let body = || block.items().skip(1);
        match head.as_str() {
            ":requirements" => domain
                .requirements
                .extend(body().filter_map(|n| n.atom().map(str::to_owned))),
            ":types" => {
                let (list, d) = parse_typed_list(body());
                domain.types.extend(list);
                diagnostics.extend(d);
            }
            ":constants" => {
                let (list, d) = parse_typed_list(body());
                domain.constants.extend(list);
                diagnostics.extend(d);
            }
            ":predicates" => {
                for node in body() {
                    match parse_signature(node, text, &mut diagnostics) {
                        Some(p) => domain.predicates.push(p),
                        None => diagnostics.push(ParseDiagnostic::warning(
                            "unexpected-item",
                            node.span,
                            "expected a predicate declaration",
                        )),
                    }
                }
            }
            ":functions" => parse_functions(body(), text, &mut domain.functions, &mut diagnostics),
            ":constraints" => domain.constraints = body().next().cloned(),
            ":action" => {
                if let Some(a) = parse_action(block, &mut diagnostics) {
                    domain.actions.push(a);
                }
            }
            ":durative-action" => {
                if let Some(a) = parse_durative(block, &mut diagnostics) {
                    domain.durative_actions.push(a);
                }
            }
            ":derived" => {
                let mut parts = body();
                match parts.next().and_then(|p| parse_signature(p, text, &mut diagnostics)) {
                    Some(predicate) => domain.derived.push(DerivedDecl {
                        predicate,
                        condition: parts.next().cloned(),
                        span: block.span,
                    }),
                    None => diagnostics.push(ParseDiagnostic::error(
                        "bad-derived",
                        block.span,
                        "expected (:derived (name ?params) condition)",
                    )),
                }
            }
            _ => diagnostics.push(ParseDiagnostic::warning(
                "unknown-block",
                block.span,
                format!("unknown domain block '{head}'"),
            )),
        }
    }
    (domain, diagnostics)
}

/// `(name ?a - t ...)` as used by predicates, functions and derived heads.
fn parse_signature(
    node: &SExprNode,
    text: &str,
    diagnostics: &mut Vec<ParseDiagnostic>,
) -> Option<PredicateDecl> {
    let name = node.is_list().then(|| node.head()).flatten()?;
    let (parameters, d) = parse_typed_list(node.items().skip(1));
    diagnostics.extend(d);
    Some(PredicateDecl {
        name: name.to_owned(),
        parameters,
        signature_text: node.span.slice(text).to_owned(),
        span: node.span,
    })
}

fn parse_functions<'a>(
    items: impl Iterator<Item = &'a SExprNode>,
    text: &str,
    out: &mut Vec<FunctionDecl>,
    diagnostics: &mut Vec<ParseDiagnostic>,
) {
    let mut group_start = out.len();
    let mut items = items.peekable();
    while let Some(node) = items.next() {
        if node.atom() == Some("-") {
            let Some(ty) = items.next() else {
                diagnostics.push(ParseDiagnostic::error(
                    "dangling-dash",
                    node.span,
                    "'-' is not followed by a type",
                ));
                break;
            };
            let result = match ty.atom() {
                Some(t) => TypeRef::Named(t.to_owned()),
                None => {
                    let (list, d) = parse_typed_list([node, ty]);
                    diagnostics.extend(d);
                    match list.entries.into_iter().next() {
                        Some(e) => e.declared_type,
                        None => continue,
                    }
                }
            };
            for f in &mut out[group_start..] {
                f.result_type = Some(result.clone());
            }
            group_start = out.len();
            continue;
        }
        match parse_signature(node, text, diagnostics) {
            Some(sig) => out.push(FunctionDecl {
                name: sig.name,
                parameters: sig.parameters,
                result_type: None,
                signature_text: sig.signature_text,
                span: sig.span,
            }),
            None => diagnostics.push(ParseDiagnostic::warning(
                "unexpected-item",
                node.span,
                "expected a function declaration",
            )),
        }
    }
}

fn action_name(block: &SExprNode, diagnostics: &mut Vec<ParseDiagnostic>) -> Option<String> {
    match block.items().nth(1).and_then(SExprNode::atom) {
        Some(name) => Some(name.to_owned()),
        None => {
            diagnostics.push(ParseDiagnostic::error(
                "missing-name",
                block.span,
                "action has no name",
            ));
            None
        }
    }
}

fn parse_parameters(value: Option<&SExprNode>, diagnostics: &mut Vec<ParseDiagnostic>) -> TypedList {
    match value {
        Some(list) if list.is_list() => {
            let (params, d) = parse_typed_list(list.items());
            diagnostics.extend(d);
            params
        }
        Some(other) => {
            diagnostics.push(ParseDiagnostic::error(
                "bad-parameters",
                other.span,
                "parameters must be a list",
            ));
            TypedList::default()
        }
        None => TypedList::default(),
    }
}

fn parse_action(block: &SExprNode, diagnostics: &mut Vec<ParseDiagnostic>) -> Option<ActionDecl> {
    let name = action_name(block, diagnostics)?;
    let mut action = ActionDecl {
        name,
        parameters: TypedList::default(),
        precondition: None,
        effect: None,
        span: block.span,
    };
    for (key, value) in keyword_pairs(block.items().skip(2), diagnostics) {
        match key.text.to_ascii_lowercase().as_str() {
            ":parameters" => action.parameters = parse_parameters(value, diagnostics),
            ":precondition" => action.precondition = value.cloned(),
            ":effect" => action.effect = value.cloned(),
            other => diagnostics.push(ParseDiagnostic::warning(
                "unknown-key",
                key.span,
                format!("unknown action key '{other}'"),
            )),
        }
    }
    Some(action)
}

fn parse_durative(
    block: &SExprNode,
    diagnostics: &mut Vec<ParseDiagnostic>,
) -> Option<DurativeActionDecl> {
    let name = action_name(block, diagnostics)?;
    let mut action = DurativeActionDecl {
        name,
        parameters: TypedList::default(),
        duration: None,
        condition: None,
        effect: None,
        span: block.span,
    };
    for (key, value) in keyword_pairs(block.items().skip(2), diagnostics) {
        match key.text.to_ascii_lowercase().as_str() {
            ":parameters" => action.parameters = parse_parameters(value, diagnostics),
            ":duration" => action.duration = value.cloned(),
            ":condition" => action.condition = value.cloned(),
            ":effect" => action.effect = value.cloned(),
            other => diagnostics.push(ParseDiagnostic::warning(
                "unknown-key",
                key.span,
                format!("unknown durative-action key '{other}'"),
            )),
        }
    }
    Some(action)
}
