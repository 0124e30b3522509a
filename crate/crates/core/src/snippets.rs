//! Trigger-keyed code templates.
//!
//! Bodies use editor tab stops, `${1:default}`. [`fill_defaults`] turns an
//! expansion into plain PDDL. The type, predicate and function templates are
//! parametric: `p2` is a binary predicate, `t3` three type declarations.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub const MAX_ARITY: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnippetDef {
    pub trigger: String,
    pub description: String,
    /// Template text. Empty for parametric built-ins, whose body depends on
    /// the arity.
    pub body: String,
    pub parametric: bool,
    pub user_defined: bool,
}

#[derive(Debug, Error)]
pub enum SnippetError {
    #[error("unknown snippet '{trigger}'{}", suggest(.suggestions))]
    Unknown {
        trigger: String,
        suggestions: Vec<String>,
    },
    #[error("snippet '{0}' needs an arity, e.g. '{0}2'")]
    MissingArity(String),
    #[error("arity {arity} of '{trigger}' is out of range 1..={MAX_ARITY}")]
    ArityOutOfRange { trigger: String, arity: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

fn suggest(names: &[String]) -> String {
    if names.is_empty() {
        String::new()
    } else {
        format!("; did you mean {}?", names.join(", "))
    }
}

const DOMAIN: &str = "\
(define (domain ${1:domain-name})
  (:requirements ${2::strips :typing})
  (:types ${3:type-name - object})
  (:predicates ${4:(pred-name ?x - type-name)})
  (:action ${5:action-name}
    :parameters (${6:?x - type-name})
    :precondition (and ${7:(pred-name ?x)})
    :effect (and ${8:(not (pred-name ?x))})))
";

const PROBLEM: &str = "\
(define (problem ${1:problem-name})
  (:domain ${2:domain-name})
  (:objects ${3:obj - object})
  (:init ${4:(pred-name obj)})
  (:goal (and ${5:(not (pred-name obj))})))
";

const ACTION: &str = "\
(:action ${1:action-name}
  :parameters (${2:?x - object})
  :precondition (and ${3:(pred-name ?x)})
  :effect (and ${4:(not (pred-name ?x))}))
";

const DURATIVE_ACTION: &str = "\
(:durative-action ${1:action-name}
  :parameters (${2:?x - object})
  :duration (= ?duration ${3:1})
  :condition (and (at start ${4:(pred-name ?x)}))
  :effect (and (at end ${5:(not (pred-name ?x))})))
";

fn builtin(trigger: &str, description: &str, body: &str, parametric: bool) -> SnippetDef {
    SnippetDef {
        trigger: trigger.to_owned(),
        description: description.to_owned(),
        body: body.to_owned(),
        parametric,
        user_defined: false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnippetSet {
    defs: Vec<SnippetDef>,
}

impl Default for SnippetSet {
    fn default() -> Self {
        Self::builtin()
    }
}

impl SnippetSet {
    pub fn builtin() -> Self {
        SnippetSet {
            defs: vec![
                builtin("domain", "domain skeleton", DOMAIN, false),
                builtin("problem", "problem skeleton", PROBLEM, false),
                builtin("t", "type declaration", "", true),
                builtin("p", "typed predicate declaration", "", true),
                builtin("f", "typed function declaration", "", true),
                builtin("action", "action skeleton", ACTION, false),
                builtin("durative-action", "durative action skeleton", DURATIVE_ACTION, false),
            ],
        }
    }

    pub fn defs(&self) -> &[SnippetDef] {
        &self.defs
    }

    pub fn get(&self, trigger: &str) -> Option<&SnippetDef> {
        self.defs.iter().find(|d| d.trigger == trigger)
    }

    /// Adds or replaces a snippet. Returns a warning when a built-in is
    /// shadowed.
    pub fn insert(&mut self, def: SnippetDef) -> Option<String> {
        match self.defs.iter_mut().find(|d| d.trigger == def.trigger) {
            Some(existing) => {
                let warning = (!existing.user_defined)
                    .then(|| format!("user snippet '{}' overrides the built-in", def.trigger));
                *existing = def;
                warning
            }
            None => {
                self.defs.push(def);
                None
            }
        }
    }

    /// Loads one snippet per file from `dir`; the file stem is the trigger.
    /// A first line `;; description: ...` supplies the description and is
    /// not part of the body.
    pub fn load_dir(&mut self, dir: &Path) -> Result<Vec<String>, SnippetError> {
        let io_err = |path: &Path| {
            let path = path.to_path_buf();
            move |source| SnippetError::Io { path, source }
        };
        let mut files: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(io_err(dir))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .filter(|p| {
                p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| !n.starts_with('.'))
            })
            .collect();
        files.sort();
        let mut warnings = Vec::new();
        for path in files {
            let Some(trigger) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            let text = fs::read_to_string(&path).map_err(io_err(&path))?;
            let (description, body) = match text.split_once('\n') {
                Some((first, rest)) if first.trim_start().starts_with(";; description:") => (
                    first.trim_start()[";; description:".len()..].trim().to_owned(),
                    rest.to_owned(),
                ),
                _ => ("user snippet".to_owned(), text),
            };
            warnings.extend(self.insert(SnippetDef {
                trigger: trigger.to_owned(),
                description,
                body,
                parametric: false,
                user_defined: true,
            }));
        }
        Ok(warnings)
    }

    /// Expansion with tab stops intact.
    pub fn expand(&self, trigger_text: &str) -> Result<String, SnippetError> {
        if let Some(def) = self.get(trigger_text) {
            return if def.parametric {
                Err(SnippetError::MissingArity(def.trigger.clone()))
            } else {
                Ok(def.body.clone())
            };
        }
        let split = trigger_text
            .find(|c: char| c.is_ascii_digit())
            .filter(|&i| i > 0 && trigger_text[i..].bytes().all(|b| b.is_ascii_digit()));
        if let Some(i) = split {
            let (base, digits) = trigger_text.split_at(i);
            if let Some(def) = self.get(base).filter(|d| d.parametric) {
                let arity = digits.parse::<usize>().unwrap_or(usize::MAX);
                if arity == 0 || arity > MAX_ARITY {
                    return Err(SnippetError::ArityOutOfRange {
                        trigger: trigger_text.to_owned(),
                        arity,
                    });
                }
                return Ok(parametric_body(&def.trigger, arity));
            }
        }
        Err(SnippetError::Unknown {
            trigger: trigger_text.to_owned(),
            suggestions: self.near_matches(trigger_text),
        })
    }

    /// Expansion with every tab stop replaced by its default.
    pub fn expand_plain(&self, trigger_text: &str) -> Result<String, SnippetError> {
        self.expand(trigger_text).map(|body| fill_defaults(&body))
    }

    fn near_matches(&self, trigger: &str) -> Vec<String> {
        let base = trigger.trim_end_matches(|c: char| c.is_ascii_digit());
        let mut scored: Vec<(usize, String)> = self
            .defs
            .iter()
            .map(|d| {
                let shown = if d.parametric {
                    format!("{}1", d.trigger)
                } else {
                    d.trigger.clone()
                };
                (strsim::levenshtein(base, &d.trigger), shown)
            })
            .filter(|(dist, _)| *dist <= 2.max(base.len() / 3))
            .collect();
        scored.sort();
        scored.into_iter().map(|(_, s)| s).take(3).collect()
    }
}

/// `(trigger, description)` rows; parametric triggers are shown as `pN`.
pub fn list_snippets(set: &SnippetSet) -> Vec<(String, String)> {
    set.defs
        .iter()
        .map(|d| {
            let trigger = if d.parametric {
                format!("{}N", d.trigger)
            } else {
                d.trigger.clone()
            };
            (trigger, d.description.clone())
        })
        .collect()
}

/// Parameter variable names: ?x, ?y, ?z, then ?x1, ?x2, ...
pub fn variable_name(index: usize) -> String {
    match index {
        0 => "?x".to_owned(),
        1 => "?y".to_owned(),
        2 => "?z".to_owned(),
        n => format!("?x{}", n - 2),
    }
}

fn typed_slots(arity: usize, stop: &mut usize) -> String {
    let mut out = String::new();
    for i in 0..arity {
        out.push_str(&format!(
            " ${{{}:{}}} - ${{{}:object}}",
            *stop,
            variable_name(i),
            *stop + 1
        ));
        *stop += 2;
    }
    out
}

fn parametric_body(base: &str, arity: usize) -> String {
    match base {
        "p" => {
            let mut stop = 2;
            format!("(${{1:pred-name}}{})", typed_slots(arity, &mut stop))
        }
        "f" => {
            let mut stop = 2;
            let slots = typed_slots(arity, &mut stop);
            format!("(${{1:function-name}}{slots}) - ${{{stop}:number}}")
        }
        "t" if arity == 1 => "${1:type-name} - ${2:object}".to_owned(),
        "t" => (0..arity)
            .map(|i| format!("${{{}:type-name{}}} - ${{{}:object}}", 2 * i + 1, i + 1, 2 * i + 2))
            .collect::<Vec<_>>()
            .join("\n"),
        other => unreachable!("no parametric body for '{other}'"),
    }
}

/// Replaces `${n:default}` with `default` and bare `${n}` / `$n` with
/// nothing. Nested stops are filled recursively.
pub fn fill_defaults(body: &str) -> String {
    let mut out = String::with_capacity(body.len());
    let mut rest = body;
    while let Some(pos) = rest.find('$') {
        out.push_str(&rest[..pos]);
        let after = &rest[pos + 1..];
        let digits = after.bytes().take_while(u8::is_ascii_digit).count();
        if digits > 0 {
            rest = &after[digits..];
            continue;
        }
        if let Some(inner) = after.strip_prefix('{') {
            let digits = inner.bytes().take_while(u8::is_ascii_digit).count();
            if digits > 0 {
                if let Some(close) = matching_brace(inner) {
                    let content = &inner[digits..close];
                    out.push_str(&fill_defaults(content.strip_prefix(':').unwrap_or("")));
                    rest = &inner[close + 1..];
                    continue;
                }
            }
        }
        out.push('$');
        rest = after;
    }
    out.push_str(rest);
    out
}

fn matching_brace(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '{' => depth += 1,
            '}' if depth == 0 => return Some(i),
            '}' => depth -= 1,
            _ => {}
        }
    }
    None
}
