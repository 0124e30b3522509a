//! The PDDL 3.1 grammar as a set of context functions over the lossless
//! tree. Each function marks the atoms and lists it accepts; anything it
//! does not mark stays unscoped.

use std::collections::HashMap;

use super::Scope;
use crate::pddl::lexical::{eq_ci, is_identifier, is_name, is_number, is_requirement, is_variable};
use crate::sexpr::SExprNode;

/// Scopes keyed by the start offset of an atom or of a list's `(`.
#[derive(Debug, Default)]
pub(super) struct ScopeMap {
    scopes: HashMap<usize, Scope>,
}

impl ScopeMap {
    pub(super) fn atom(&self, node: &SExprNode) -> Scope {
        self.scopes
            .get(&node.span.start)
            .copied()
            .unwrap_or(Scope::Unscoped)
    }

    pub(super) fn is_recognized(&self, list: &SExprNode) -> bool {
        self.scopes.contains_key(&list.span.start)
    }
}

pub(super) fn assign_scopes(forest: &[SExprNode]) -> ScopeMap {
    let mut scoper = Scoper::default();
    for node in forest {
        if node.has_head("define") {
            scoper.define(node);
        }
    }
    ScopeMap {
        scopes: scoper.scopes,
    }
}

/// Variables visible at a point, lowercased.
type Bindings = Vec<String>;

fn bound(bindings: &[String], var: &str) -> bool {
    bindings.iter().any(|b| eq_ci(b, var))
}

fn items(list: &SExprNode) -> Vec<&SExprNode> {
    list.items().collect()
}

fn atom_is(node: &SExprNode, word: &str) -> bool {
    node.atom().is_some_and(|a| eq_ci(a, word))
}

fn is_key(node: &SExprNode) -> bool {
    node.atom().is_some_and(|a| a.starts_with(':'))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Element {
    Name,
    TypeName,
    Variable,
}

#[derive(Default)]
struct Scoper {
    scopes: HashMap<usize, Scope>,
    object_fluents: bool,
}

impl Scoper {
    fn mark(&mut self, node: &SExprNode, scope: Scope) {
        self.scopes.insert(node.span.start, scope);
    }

    fn open(&mut self, list: &SExprNode) {
        self.mark(list, Scope::Punctuation);
    }

    /// Opens `list` and marks its head atom as a keyword.
    fn keyword_list<'n>(&mut self, list: &'n SExprNode) -> Vec<&'n SExprNode> {
        self.open(list);
        let parts: Vec<&'n SExprNode> = list.items().collect();
        if let Some(head) = parts.first() {
            self.mark(head, Scope::Keyword);
        }
        parts
    }

    fn define(&mut self, define: &SExprNode) {
        self.object_fluents = define.items().any(|b| {
            b.has_head(":requirements")
                && b.items()
                    .any(|r| atom_is(r, ":object-fluents") || atom_is(r, ":fluents"))
        });
        self.open(define);
        let parts = items(define);
        self.mark(parts[0], Scope::Keyword);

        let mut rest = &parts[1..];
        let mut is_problem = false;
        if let Some(header) = rest.first() {
            let header_word = if header.has_head("domain") {
                Some("domain")
            } else if header.has_head("problem") {
                Some("problem")
            } else {
                None
            };
            if let Some(word) = header_word {
                is_problem = word == "problem";
                self.header(header);
                rest = &rest[1..];
            } else if !header.head().is_some_and(|h| h.starts_with(':')) {
                // Not a header and not a block: leave it unscoped.
                rest = &rest[1..];
            }
        }
        for block in rest {
            if is_problem {
                self.problem_block(block);
            } else {
                self.domain_block(block);
            }
        }
    }

    fn header(&mut self, header: &SExprNode) {
        let parts = items(header);
        self.open(header);
        self.mark(parts[0], Scope::Keyword);
        if let [_, name] = parts[..] {
            if name.atom().is_some_and(is_name) {
                self.mark(name, Scope::Name);
            }
        }
    }

    fn requirements(&mut self, block: &SExprNode) {
        let parts = self.keyword_list(block);
        for req in &parts[1..] {
            if req.atom().is_some_and(is_requirement) {
                self.mark(req, Scope::Requirement);
            }
        }
    }

    fn domain_block(&mut self, block: &SExprNode) {
        if !block.is_list() {
            return;
        }
        let Some(head) = block.head().map(str::to_ascii_lowercase) else {
            return;
        };
        match head.as_str() {
            ":requirements" => self.requirements(block),
            ":types" => {
                let parts = self.keyword_list(block);
                self.typed_list(&parts[1..], Element::TypeName);
            }
            ":constants" => {
                let parts = self.keyword_list(block);
                self.typed_list(&parts[1..], Element::Name);
            }
            ":predicates" => {
                let parts = self.keyword_list(block);
                for decl in &parts[1..] {
                    self.skeleton(decl);
                }
            }
            ":functions" => {
                let parts = self.keyword_list(block);
                self.function_list(&parts[1..]);
            }
            ":constraints" => {
                let parts = self.keyword_list(block);
                if let [_, body] = parts[..] {
                    self.constraint_gd(body, &Vec::new());
                }
            }
            ":action" => self.action(block, false),
            ":durative-action" => self.action(block, true),
            ":derived" => {
                let parts = self.keyword_list(block);
                if let [_, head, body] = parts[..] {
                    let bindings = self.skeleton(head);
                    self.gd(body, &bindings);
                }
            }
            _ => {}
        }
    }

    fn problem_block(&mut self, block: &SExprNode) {
        if !block.is_list() {
            return;
        }
        let Some(head) = block.head().map(str::to_ascii_lowercase) else {
            return;
        };
        let empty = Vec::new();
        match head.as_str() {
            ":domain" => {
                let parts = self.keyword_list(block);
                if let [_, name] = parts[..] {
                    if name.atom().is_some_and(is_name) {
                        self.mark(name, Scope::Name);
                    }
                }
            }
            ":requirements" => self.requirements(block),
            ":objects" => {
                let parts = self.keyword_list(block);
                self.typed_list(&parts[1..], Element::Name);
            }
            ":init" => {
                let parts = self.keyword_list(block);
                for fact in &parts[1..] {
                    self.init_element(fact);
                }
            }
            ":goal" => {
                let parts = self.keyword_list(block);
                if let [_, body] = parts[..] {
                    self.gd(body, &empty);
                }
            }
            ":constraints" => {
                let parts = self.keyword_list(block);
                if let [_, body] = parts[..] {
                    self.constraint_gd(body, &empty);
                }
            }
            ":metric" => {
                let parts = self.keyword_list(block);
                if let [_, direction, expr] = parts[..] {
                    if atom_is(direction, "minimize") || atom_is(direction, "maximize") {
                        self.mark(direction, Scope::Keyword);
                        self.metric_exp(expr);
                    }
                }
            }
            _ => {}
        }
    }

    /// `a b - t ?x - (either u v)`. Returns the variables declared.
    fn typed_list(&mut self, parts: &[&SExprNode], element: Element) -> Bindings {
        let mut declared = Vec::new();
        let mut i = 0;
        while i < parts.len() {
            let node = parts[i];
            i += 1;
            if atom_is(node, "-") {
                if let Some(ty) = parts.get(i) {
                    i += 1;
                    if self.type_ref(ty) {
                        self.mark(node, Scope::Punctuation);
                    }
                }
                continue;
            }
            let Some(text) = node.atom() else { continue };
            match element {
                Element::Variable if is_variable(text) => {
                    self.mark(node, Scope::Variable);
                    declared.push(text.to_ascii_lowercase());
                }
                Element::Name if is_identifier(text) => self.mark(node, Scope::Name),
                Element::TypeName if is_name(text) => self.mark(node, Scope::TypeName),
                _ => {}
            }
        }
        declared
    }

    /// A type after `-`: a name or `(either ...)`.
    fn type_ref(&mut self, ty: &SExprNode) -> bool {
        if let Some(name) = ty.atom() {
            if is_name(name) {
                self.mark(ty, Scope::TypeName);
                return true;
            }
            return false;
        }
        if ty.has_head("either") {
            let parts = items(ty);
            if parts[1..].iter().all(|m| m.atom().is_some_and(is_name)) && parts.len() > 1 {
                self.open(ty);
                self.mark(parts[0], Scope::Keyword);
                for member in &parts[1..] {
                    self.mark(member, Scope::TypeName);
                }
                return true;
            }
        }
        false
    }

    /// `(name ?a ?b - t)` in `:predicates`, `:functions` and `:derived`.
    fn skeleton(&mut self, decl: &SExprNode) -> Bindings {
        if !decl.is_list() {
            return Vec::new();
        }
        let parts = items(decl);
        if !parts.first().is_some_and(|n| n.atom().is_some_and(is_identifier)) {
            return Vec::new();
        }
        self.open(decl);
        self.mark(parts[0], Scope::Name);
        self.typed_list(&parts[1..], Element::Variable)
    }

    /// Function skeletons, each group optionally followed by `- type`.
    fn function_list(&mut self, parts: &[&SExprNode]) {
        let mut i = 0;
        while i < parts.len() {
            let node = parts[i];
            i += 1;
            if atom_is(node, "-") {
                if let Some(ty) = parts.get(i) {
                    i += 1;
                    if self.type_ref(ty) {
                        self.mark(node, Scope::Punctuation);
                    }
                }
            } else {
                self.skeleton(node);
            }
        }
    }

    fn action(&mut self, block: &SExprNode, durative: bool) {
        let parts = self.keyword_list(block);
        let mut rest = &parts[1..];
        if let Some(name) = rest.first().filter(|n| !is_key(n)) {
            if name.atom().is_some_and(is_identifier) {
                self.mark(name, Scope::Name);
            }
            rest = &rest[1..];
        }

        // Pair up `:key value`. Anything off-rhythm is left alone.
        let mut pairs: Vec<(&SExprNode, Option<&SExprNode>)> = Vec::new();
        let mut i = 0;
        while i < rest.len() {
            let key = rest[i];
            i += 1;
            // A misspelled key still swallows the value after it.
            let value = rest.get(i).copied().filter(|v| !is_key(v));
            if value.is_some() {
                i += 1;
            }
            pairs.push((key, value));
        }

        let known = |k: &str| {
            let k = k.to_ascii_lowercase();
            if durative {
                matches!(k.as_str(), ":parameters" | ":duration" | ":condition" | ":effect")
            } else {
                matches!(k.as_str(), ":parameters" | ":precondition" | ":effect")
            }
        };

        let mut bindings: Bindings = Vec::new();
        for (key, value) in &pairs {
            if atom_is(key, ":parameters") {
                if let Some(list) = value.filter(|v| v.is_list()) {
                    self.mark(key, Scope::Keyword);
                    self.open(list);
                    let params = items(list);
                    bindings.extend(self.typed_list(&params, Element::Variable));
                }
            }
        }
        if durative {
            bindings.push("?duration".to_owned());
        }
        for (key, value) in pairs {
            let (Some(k), Some(value)) = (key.atom(), value) else {
                continue;
            };
            if !known(k) || eq_ci(k, ":parameters") {
                continue;
            }
            self.mark(key, Scope::Keyword);
            match k.to_ascii_lowercase().as_str() {
                ":precondition" => self.gd(value, &bindings),
                ":effect" if durative => self.timed_effect(value, &bindings),
                ":effect" => self.effect(value, &bindings),
                ":duration" => self.duration_constraint(value, &bindings),
                ":condition" => self.timed_gd(value, &bindings),
                _ => {}
            }
        }
    }

    /// Goal descriptions.
    fn gd(&mut self, node: &SExprNode, bindings: &Bindings) {
        if !node.is_list() {
            return;
        }
        let parts = items(node);
        if parts.is_empty() {
            self.open(node);
            return;
        }
        let Some(head) = parts[0].atom().map(str::to_ascii_lowercase) else {
            return;
        };
        match head.as_str() {
            "and" | "or" => {
                self.keyword_list(node);
                for sub in &parts[1..] {
                    self.gd(sub, bindings);
                }
            }
            "not" if parts.len() == 2 => {
                self.keyword_list(node);
                self.gd(parts[1], bindings);
            }
            "imply" if parts.len() == 3 => {
                self.keyword_list(node);
                self.gd(parts[1], bindings);
                self.gd(parts[2], bindings);
            }
            "exists" | "forall" if parts.len() == 3 => {
                if let Some(inner) = self.quantifier(node, &parts, bindings) {
                    self.gd(parts[2], &inner);
                }
            }
            "preference" => self.preference(node, &parts, bindings, Self::gd),
            "<" | ">" | "<=" | ">=" | "=" if parts.len() == 3 => {
                self.keyword_list(node);
                self.f_exp(parts[1], bindings);
                self.f_exp(parts[2], bindings);
            }
            "at" if parts.len() == 3 && atom_is(parts[1], "end") && parts[2].is_list() => {
                self.keyword_list(node);
                self.mark(parts[1], Scope::Keyword);
                self.gd(parts[2], bindings);
            }
            _ => self.atomic(node, bindings),
        }
    }

    /// `(preference [name] body)`.
    fn preference(
        &mut self,
        node: &SExprNode,
        parts: &[&SExprNode],
        bindings: &Bindings,
        body: fn(&mut Self, &SExprNode, &Bindings),
    ) {
        let (name, inner) = match parts {
            [_, inner] => (None, *inner),
            [_, name, inner] => (Some(*name), *inner),
            _ => return,
        };
        if name.is_some_and(|n| !n.atom().is_some_and(is_identifier)) {
            return;
        }
        self.keyword_list(node);
        if let Some(name) = name {
            self.mark(name, Scope::Name);
        }
        body(self, inner, bindings);
    }

    /// Opens `(forall|exists (vars) ...)` and returns the widened bindings.
    fn quantifier(
        &mut self,
        node: &SExprNode,
        parts: &[&SExprNode],
        bindings: &Bindings,
    ) -> Option<Bindings> {
        let vars = parts[1];
        if !vars.is_list() {
            return None;
        }
        self.keyword_list(node);
        self.open(vars);
        let declared = self.typed_list(&items(vars), Element::Variable);
        let mut inner = bindings.clone();
        inner.extend(declared);
        Some(inner)
    }

    /// PDDL3 constraint formulas, falling back to plain goals.
    fn constraint_gd(&mut self, node: &SExprNode, bindings: &Bindings) {
        if !node.is_list() {
            return;
        }
        let parts = items(node);
        let head = parts
            .first()
            .and_then(|h| h.atom())
            .map(str::to_ascii_lowercase)
            .unwrap_or_default();
        let numbers_then_gds = |n: usize, g: usize| {
            parts.len() == 1 + n + g
                && parts[1..=n].iter().all(|p| p.atom().is_some_and(is_number))
        };
        match head.as_str() {
            "and" => {
                self.keyword_list(node);
                for sub in &parts[1..] {
                    self.constraint_gd(sub, bindings);
                }
            }
            "forall" if parts.len() == 3 => {
                if let Some(inner) = self.quantifier(node, &parts, bindings) {
                    self.constraint_gd(parts[2], &inner);
                }
            }
            "preference" => self.preference(node, &parts, bindings, Self::constraint_gd),
            "always" | "sometime" | "at-most-once" if parts.len() == 2 => {
                self.keyword_list(node);
                self.gd(parts[1], bindings);
            }
            "sometime-after" | "sometime-before" if parts.len() == 3 => {
                self.keyword_list(node);
                self.gd(parts[1], bindings);
                self.gd(parts[2], bindings);
            }
            "within" | "hold-after" if numbers_then_gds(1, 1) => {
                self.keyword_list(node);
                self.mark(parts[1], Scope::Number);
                self.gd(parts[2], bindings);
            }
            "always-within" if numbers_then_gds(1, 2) => {
                self.keyword_list(node);
                self.mark(parts[1], Scope::Number);
                self.gd(parts[2], bindings);
                self.gd(parts[3], bindings);
            }
            "hold-during" if numbers_then_gds(2, 1) => {
                self.keyword_list(node);
                self.mark(parts[1], Scope::Number);
                self.mark(parts[2], Scope::Number);
                self.gd(parts[3], bindings);
            }
            _ => self.gd(node, bindings),
        }
    }

    /// `(pred term*)`. A malformed head, or a formula nested where a term
    /// belongs, leaves the whole list unscoped.
    fn atomic(&mut self, node: &SExprNode, bindings: &Bindings) {
        let parts = items(node);
        if !parts
            .first()
            .is_some_and(|h| h.atom().is_some_and(is_identifier))
        {
            return;
        }
        if !self.object_fluents && parts[1..].iter().any(|p| p.is_list()) {
            return;
        }
        self.open(node);
        self.mark(parts[0], Scope::Name);
        for arg in &parts[1..] {
            self.term(arg, bindings);
        }
    }

    fn term(&mut self, node: &SExprNode, bindings: &Bindings) {
        match node.atom() {
            Some(t) if is_variable(t) => {
                if bound(bindings, t) {
                    self.mark(node, Scope::Variable);
                }
            }
            Some(t) if is_identifier(t) => self.mark(node, Scope::Name),
            Some(t) if is_number(t) => self.mark(node, Scope::Number),
            Some(_) => {}
            None => self.function_term(node, bindings),
        }
    }

    /// `(f term*)`, the object-fluent / numeric-fluent head.
    fn function_term(&mut self, node: &SExprNode, bindings: &Bindings) {
        let parts = items(node);
        if !parts
            .first()
            .is_some_and(|h| h.atom().is_some_and(is_identifier))
        {
            return;
        }
        self.open(node);
        self.mark(parts[0], Scope::Name);
        for arg in &parts[1..] {
            self.term(arg, bindings);
        }
    }

    /// Numeric expressions.
    fn f_exp(&mut self, node: &SExprNode, bindings: &Bindings) {
        if let Some(t) = node.atom() {
            if t == "#t" {
                self.mark(node, Scope::Keyword);
            } else {
                self.term(node, bindings);
            }
            return;
        }
        let parts = items(node);
        let Some(head) = parts.first().and_then(|h| h.atom()) else {
            return;
        };
        match head {
            "+" | "*" if parts.len() >= 3 => {
                self.keyword_list(node);
                for arg in &parts[1..] {
                    self.f_exp(arg, bindings);
                }
            }
            "-" if parts.len() == 2 || parts.len() == 3 => {
                self.keyword_list(node);
                for arg in &parts[1..] {
                    self.f_exp(arg, bindings);
                }
            }
            "/" if parts.len() == 3 => {
                self.keyword_list(node);
                self.f_exp(parts[1], bindings);
                self.f_exp(parts[2], bindings);
            }
            _ => self.function_term(node, bindings),
        }
    }

    fn effect(&mut self, node: &SExprNode, bindings: &Bindings) {
        if !node.is_list() {
            return;
        }
        let parts = items(node);
        if parts.is_empty() {
            self.open(node);
            return;
        }
        let Some(head) = parts[0].atom().map(str::to_ascii_lowercase) else {
            return;
        };
        match head.as_str() {
            "and" => {
                self.keyword_list(node);
                for sub in &parts[1..] {
                    self.effect(sub, bindings);
                }
            }
            "not" if parts.len() == 2 => {
                self.keyword_list(node);
                self.atomic(parts[1], bindings);
            }
            "forall" if parts.len() == 3 => {
                if let Some(inner) = self.quantifier(node, &parts, bindings) {
                    self.effect(parts[2], &inner);
                }
            }
            "when" if parts.len() == 3 => {
                self.keyword_list(node);
                self.gd(parts[1], bindings);
                self.effect(parts[2], bindings);
            }
            "increase" | "decrease" | "assign" | "scale-up" | "scale-down" if parts.len() == 3 => {
                self.keyword_list(node);
                self.f_head(parts[1], bindings);
                if atom_is(parts[2], "undefined") {
                    self.mark(parts[2], Scope::Keyword);
                } else {
                    self.f_exp(parts[2], bindings);
                }
            }
            _ => self.atomic(node, bindings),
        }
    }

    fn f_head(&mut self, node: &SExprNode, bindings: &Bindings) {
        match node.atom() {
            Some(t) if is_identifier(t) => self.mark(node, Scope::Name),
            Some(_) => {}
            None => self.function_term(node, bindings),
        }
    }

    /// `(at start ...)`, `(at end ...)` or `(over all ...)` around `inner`.
    fn time_specifier(&mut self, node: &SExprNode, parts: &[&SExprNode]) -> bool {
        if parts.len() != 3 {
            return false;
        }
        let ok = (atom_is(parts[0], "at")
            && (atom_is(parts[1], "start") || atom_is(parts[1], "end")))
            || (atom_is(parts[0], "over") && atom_is(parts[1], "all"));
        if ok {
            self.keyword_list(node);
            self.mark(parts[1], Scope::Keyword);
        }
        ok
    }

    fn timed_gd(&mut self, node: &SExprNode, bindings: &Bindings) {
        if !node.is_list() {
            return;
        }
        let parts = items(node);
        if parts.is_empty() {
            self.open(node);
            return;
        }
        if self.time_specifier(node, &parts) {
            self.gd(parts[2], bindings);
            return;
        }
        let head = parts[0].atom().map(str::to_ascii_lowercase).unwrap_or_default();
        match head.as_str() {
            "and" => {
                self.keyword_list(node);
                for sub in &parts[1..] {
                    self.timed_gd(sub, bindings);
                }
            }
            "forall" if parts.len() == 3 => {
                if let Some(inner) = self.quantifier(node, &parts, bindings) {
                    self.timed_gd(parts[2], &inner);
                }
            }
            "preference" => self.preference(node, &parts, bindings, Self::timed_gd),
            _ => {}
        }
    }

    fn timed_effect(&mut self, node: &SExprNode, bindings: &Bindings) {
        if !node.is_list() {
            return;
        }
        let parts = items(node);
        if parts.is_empty() {
            self.open(node);
            return;
        }
        if self.time_specifier(node, &parts) {
            self.effect(parts[2], bindings);
            return;
        }
        let head = parts[0].atom().map(str::to_ascii_lowercase).unwrap_or_default();
        match head.as_str() {
            "and" => {
                self.keyword_list(node);
                for sub in &parts[1..] {
                    self.timed_effect(sub, bindings);
                }
            }
            "forall" if parts.len() == 3 => {
                if let Some(inner) = self.quantifier(node, &parts, bindings) {
                    self.timed_effect(parts[2], &inner);
                }
            }
            "when" if parts.len() == 3 => {
                self.keyword_list(node);
                self.timed_gd(parts[1], bindings);
                self.timed_effect(parts[2], bindings);
            }
            // continuous effects: (increase (f) (* #t 2))
            "increase" | "decrease" | "assign" | "scale-up" | "scale-down" => {
                self.effect(node, bindings)
            }
            _ => {}
        }
    }

    fn duration_constraint(&mut self, node: &SExprNode, bindings: &Bindings) {
        if !node.is_list() {
            return;
        }
        let parts = items(node);
        if parts.is_empty() {
            self.open(node);
            return;
        }
        if parts.len() == 3
            && atom_is(parts[0], "at")
            && (atom_is(parts[1], "start") || atom_is(parts[1], "end"))
        {
            self.keyword_list(node);
            self.mark(parts[1], Scope::Keyword);
            self.duration_constraint(parts[2], bindings);
            return;
        }
        let head = parts[0].atom().unwrap_or_default().to_ascii_lowercase();
        match head.as_str() {
            "and" => {
                self.keyword_list(node);
                for sub in &parts[1..] {
                    self.duration_constraint(sub, bindings);
                }
            }
            "=" | "<=" | ">=" if parts.len() == 3 && atom_is(parts[1], "?duration") => {
                self.keyword_list(node);
                self.mark(parts[1], Scope::Variable);
                self.f_exp(parts[2], bindings);
            }
            _ => {}
        }
    }

    /// Ground facts, negated facts, fluent assignments and timed literals.
    fn init_element(&mut self, node: &SExprNode) {
        if !node.is_list() {
            return;
        }
        let parts = items(node);
        let empty = Vec::new();
        let head = parts
            .first()
            .and_then(|h| h.atom())
            .map(str::to_ascii_lowercase)
            .unwrap_or_default();
        match head.as_str() {
            "not" if parts.len() == 2 => {
                self.keyword_list(node);
                self.atomic(parts[1], &empty);
            }
            "=" if parts.len() == 3 => {
                self.keyword_list(node);
                self.f_head(parts[1], &empty);
                self.term(parts[2], &empty);
            }
            "at" if parts.len() == 3
                && parts[1].atom().is_some_and(is_number)
                && parts[2].is_list() =>
            {
                self.keyword_list(node);
                self.mark(parts[1], Scope::Number);
                self.init_element(parts[2]);
            }
            _ => self.atomic(node, &empty),
        }
    }

    fn metric_exp(&mut self, node: &SExprNode) {
        let empty = Vec::new();
        if atom_is(node, "total-time") {
            self.mark(node, Scope::Keyword);
            return;
        }
        if node.has_head("is-violated") {
            let parts = items(node);
            if let [_, name] = parts[..] {
                if name.atom().is_some_and(is_identifier) {
                    self.keyword_list(node);
                    self.mark(name, Scope::Name);
                }
            }
            return;
        }
        if node.is_list() {
            let parts = items(node);
            if let Some(op) = parts.first().and_then(|h| h.atom()) {
                if matches!(op, "+" | "-" | "*" | "/") && parts.len() >= 2 {
                    self.keyword_list(node);
                    for arg in &parts[1..] {
                        self.metric_exp(arg);
                    }
                    return;
                }
            }
        }
        self.f_exp(node, &empty);
    }
}
