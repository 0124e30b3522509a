use crate::diagnostic::{ParseDiagnostic, Span};
use crate::sexpr::{parse_sexpr, SExprNode};

use super::typed_list::{parse_typed_list, TypedList};
use super::{find_define, header_name};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PddlProblem {
    pub name: String,
    pub domain_ref: String,
    pub requirements: Vec<String>,
    pub objects: TypedList,
    /// Facts of the first `(:init ...)` block, in order.
    pub init: Vec<SExprNode>,
    pub goal: Option<SExprNode>,
    pub constraints: Option<SExprNode>,
    pub metric: Option<SExprNode>,
}

pub fn parse_problem(text: &str) -> (PddlProblem, Vec<ParseDiagnostic>) {
    let (forest, mut diagnostics) = parse_sexpr(text);
    let mut problem = PddlProblem::default();

    let Some(define) = find_define(&forest) else {
        diagnostics.push(ParseDiagnostic::error(
            "missing-define",
            Span::new(0, 0),
            "no (define (problem ...)) found",
        ));
        return (problem, diagnostics);
    };
    let mut items = define.items().skip(1).peekable();
    match header_name(define, "problem") {
        Some(name) => {
            problem.name = name;
            items.next();
        }
        None => {
            let span = items.peek().map_or(define.span, |n| n.span);
            diagnostics.push(ParseDiagnostic::error(
                "missing-header",
                span,
                "expected (problem NAME) after define",
            ));
            if items.peek().is_some_and(|n| n.is_atom()) {
                items.next();
            }
        }
    }

    let mut seen_init = false;
    let mut seen_domain = false;
    for block in items {
        let Some(head) = block.head().filter(|_| block.is_list()) else {
            diagnostics.push(ParseDiagnostic::warning(
                "unexpected-item",
                block.span,
                "expected a problem block",
            ));
            continue;
        };
        let body = || block.items().skip(1);
        match head.to_ascii_lowercase().as_str() {
            ":domain" => {
                seen_domain = true;
                match body().next().and_then(SExprNode::atom) {
                    Some(d) => problem.domain_ref = d.to_owned(),
                    None => diagnostics.push(ParseDiagnostic::error(
                        "missing-name",
                        block.span,
                        "(:domain) needs a name",
                    )),
                }
            }
            ":requirements" => problem
                .requirements
                .extend(body().filter_map(|n| n.atom().map(str::to_owned))),
            ":objects" => {
                let (list, d) = parse_typed_list(body());
                problem.objects.extend(list);
                diagnostics.extend(d);
            }
            ":init" if seen_init => diagnostics.push(ParseDiagnostic::warning(
                "duplicate-block",
                block.span,
                "second :init block is ignored",
            )),
            ":init" => {
                seen_init = true;
                for fact in body() {
                    if fact.is_list() {
                        problem.init.push(fact.clone());
                    } else {
                        diagnostics.push(ParseDiagnostic::warning(
                            "unexpected-item",
                            fact.span,
                            "init entries must be lists",
                        ));
                    }
                }
            }
            ":goal" => {
                if problem.goal.is_some() {
                    diagnostics.push(ParseDiagnostic::warning(
                        "duplicate-block",
                        block.span,
                        "second :goal block replaces the first",
                    ));
                }
                problem.goal = body().next().cloned();
            }
            ":constraints" => problem.constraints = body().next().cloned(),
            ":metric" => problem.metric = Some(block.clone()),
            other => diagnostics.push(ParseDiagnostic::warning(
                "unknown-block",
                block.span,
                format!("unknown problem block '{other}'"),
            )),
        }
    }
    if !seen_domain {
        diagnostics.push(ParseDiagnostic::warning(
            "missing-domain",
            define.span,
            "problem does not name its domain",
        ));
    }
    if problem.goal.is_none() {
        diagnostics.push(ParseDiagnostic::warning(
            "missing-goal",
            define.span,
            "problem has no goal",
        ));
    }
    (problem, diagnostics)
}
