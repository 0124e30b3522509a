//! New project trees.
//!
//! ```text
//! <name>/
//!   domains/
//!   problems/p01.pddl
//!   solutions/
//!   domain.pddl
//!   README.md
//!   plan
//! ```
//!
//! File contents come from templates in which `{{name}}` stands for the
//! project name. A template directory can add files or replace defaults.

use std::fs;
use std::io;
use std::path::{Component, Path, PathBuf};

use thiserror::Error;

use crate::planner::DEFAULT_COMMAND;

pub const NAME_PLACEHOLDER: &str = "{{name}}";
pub const PROJECT_DIRS: [&str; 3] = ["domains", "problems", "solutions"];

#[derive(Debug, Error)]
pub enum ScaffoldError {
    #[error("project name is empty")]
    EmptyName,
    #[error("invalid character {ch:?} in project name '{name}'")]
    InvalidName { name: String, ch: char },
    #[error("{0} already exists")]
    AlreadyExists(PathBuf),
    #[error("template path '{0}' must be relative and stay inside the project")]
    UnsafePath(PathBuf),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> ScaffoldError + '_ {
    move |source| ScaffoldError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectTemplate {
    pub relative_path: PathBuf,
    pub content: String,
    pub executable: bool,
}

impl ProjectTemplate {
    pub fn new(relative_path: impl Into<PathBuf>, content: impl Into<String>) -> Self {
        ProjectTemplate {
            relative_path: relative_path.into(),
            content: content.into(),
            executable: false,
        }
    }
}

const DOMAIN: &str = "\
; Domain of the {{name}} project.
(define (domain {{name}})
  (:requirements :strips :typing)
  (:types thing - object)
  (:predicates (available ?t - thing)
               (ready ?t - thing))
  (:action prepare
    :parameters (?t - thing)
    :precondition (available ?t)
    :effect (ready ?t)))
";

const PROBLEM: &str = "\
(define (problem {{name}}-p01)
  (:domain {{name}})
  (:objects item - thing)
  (:init (available item))
  (:goal (ready item)))
";

const README: &str = "\
# {{name}}

## Authors

## Contact

## Domain

Informal description of the domain: what the objects are, which actions
exist and what they change.

## Problems

What each file in `problems/` asks for.

## License
";

fn plan_script() -> String {
    format!(
        "#!/bin/sh
# Runs the planner on domain.pddl and problems/p01.pddl; plans go to
# solutions/. Edit PLANNER to use a different planner: {{domain}},
# {{problem}} and {{solution_dir}} are replaced with the file paths.
PLANNER='{DEFAULT_COMMAND}'

cd \"$(dirname \"$0\")\" || exit 1
exec mypddl plan --command \"$PLANNER\" \"$@\"
"
    )
}

pub fn default_templates() -> Vec<ProjectTemplate> {
    vec![
        ProjectTemplate::new("domain.pddl", DOMAIN),
        ProjectTemplate::new("problems/p01.pddl", PROBLEM),
        ProjectTemplate::new("README.md", README),
        ProjectTemplate {
            executable: true,
            ..ProjectTemplate::new("plan", plan_script())
        },
    ]
}

/// Reads every file under `dir` as a template, keyed by its path relative to
/// `dir`. Executable bits are preserved.
pub fn load_template_dir(dir: &Path) -> Result<Vec<ProjectTemplate>, ScaffoldError> {
    let mut templates = Vec::new();
    for entry in walkdir::WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(dir).to_path_buf();
            ScaffoldError::Io {
                path,
                source: e.into(),
            }
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let relative = entry
            .path()
            .strip_prefix(dir)
            .expect("walkdir yields paths under its root")
            .to_path_buf();
        let content = fs::read_to_string(entry.path()).map_err(io_err(entry.path()))?;
        templates.push(ProjectTemplate {
            executable: is_executable(entry.path()),
            ..ProjectTemplate::new(relative, content)
        });
    }
    Ok(templates)
}

#[cfg(unix)]
fn is_executable(path: &Path) -> bool {
    use std::os::unix::fs::PermissionsExt;
    fs::metadata(path).is_ok_and(|m| m.permissions().mode() & 0o111 != 0)
}

#[cfg(not(unix))]
fn is_executable(_: &Path) -> bool {
    false
}

/// Defaults with `custom` layered on top; a custom template replaces the
/// default at the same path.
pub fn merge_templates(
    defaults: Vec<ProjectTemplate>,
    custom: Vec<ProjectTemplate>,
) -> Vec<ProjectTemplate> {
    let mut merged: Vec<ProjectTemplate> = defaults
        .into_iter()
        .filter(|d| !custom.iter().any(|c| c.relative_path == d.relative_path))
        .collect();
    merged.extend(custom);
    merged
}

/// A project name has to work as a PDDL domain name.
pub fn validate_name(name: &str) -> Result<(), ScaffoldError> {
    let mut chars = name.chars();
    let first = chars.next().ok_or(ScaffoldError::EmptyName)?;
    let bad = |ch| ScaffoldError::InvalidName {
        name: name.to_owned(),
        ch,
    };
    if !first.is_ascii_alphabetic() {
        return Err(bad(first));
    }
    match chars.find(|c| !(c.is_ascii_alphanumeric() || *c == '-' || *c == '_')) {
        Some(ch) => Err(bad(ch)),
        None => Ok(()),
    }
}

fn check_relative(path: &Path) -> Result<(), ScaffoldError> {
    let safe = path.components().next().is_some()
        && path
            .components()
            .all(|c| matches!(c, Component::Normal(_) | Component::CurDir));
    if safe {
        Ok(())
    } else {
        Err(ScaffoldError::UnsafePath(path.to_path_buf()))
    }
}

/// Creates `parent_dir/name` from `templates`. Returns every directory and
/// file created, in creation order. Never touches an existing directory.
pub fn create_project(
    name: &str,
    parent_dir: &Path,
    templates: &[ProjectTemplate],
) -> Result<Vec<PathBuf>, ScaffoldError> {
    validate_name(name)?;
    for template in templates {
        check_relative(&template.relative_path)?;
    }
    let root = parent_dir.join(name);
    if root.exists() {
        return Err(ScaffoldError::AlreadyExists(root));
    }
    fs::create_dir_all(parent_dir).map_err(io_err(parent_dir))?;
    fs::create_dir(&root).map_err(|e| match e.kind() {
        io::ErrorKind::AlreadyExists => ScaffoldError::AlreadyExists(root.clone()),
        _ => ScaffoldError::Io {
            path: root.clone(),
            source: e,
        },
    })?;

    let mut created = vec![root.clone()];
    for dir in PROJECT_DIRS {
        let path = root.join(dir);
        fs::create_dir(&path).map_err(io_err(&path))?;
        created.push(path);
    }
    for template in templates {
        let path = root.join(&template.relative_path);
        if let Some(parent) = path.parent() {
            if !parent.exists() {
                fs::create_dir_all(parent).map_err(io_err(parent))?;
                created.push(parent.to_path_buf());
            }
        }
        fs::write(&path, template.content.replace(NAME_PLACEHOLDER, name))
            .map_err(io_err(&path))?;
        if template.executable {
            make_executable(&path)?;
        }
        created.push(path);
    }
    Ok(created)
}

#[cfg(unix)]
fn make_executable(path: &Path) -> Result<(), ScaffoldError> {
    use std::os::unix::fs::PermissionsExt;
    let mut perms = fs::metadata(path).map_err(io_err(path))?.permissions();
    perms.set_mode(perms.mode() | 0o755);
    fs::set_permissions(path, perms).map_err(io_err(path))
}

#[cfg(not(unix))]
fn make_executable(_: &Path) -> Result<(), ScaffoldError> {
    Ok(())
}
