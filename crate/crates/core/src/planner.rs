//! Running an external planner on a domain/problem pair.
//!
//! The planner is described by a command template such as
//! `ff -o {domain} -f {problem}`. The template is split into words first and
//! placeholders are substituted per word afterwards, so paths containing
//! spaces reach the planner as single arguments without any quoting.

use std::collections::HashMap;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant, SystemTime};

use thiserror::Error;
use wait_timeout::ChildExt;

pub const DEFAULT_COMMAND: &str = "ff -o {domain} -f {problem}";

#[derive(Debug, Error)]
pub enum PlannerError {
    #[error("planner command must contain {0}")]
    MissingPlaceholder(&'static str),
    #[error("cannot split planner command: {0:?}")]
    BadTemplate(String),
    #[error("input file not found: {0}")]
    MissingInput(PathBuf),
    #[error("failed to start planner '{program}': {source}")]
    Spawn {
        program: String,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlannerConfig {
    pub command_template: String,
    pub timeout_seconds: Option<u64>,
    /// Where the planner is expected to leave its plan. Defaults to
    /// `solutions/` next to the domain file.
    pub solution_dir: Option<PathBuf>,
}

impl PlannerConfig {
    pub fn new(command_template: impl Into<String>) -> Result<Self, PlannerError> {
        let config = PlannerConfig {
            command_template: command_template.into(),
            timeout_seconds: None,
            solution_dir: None,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_timeout(mut self, seconds: Option<u64>) -> Self {
        self.timeout_seconds = seconds;
        self
    }

    pub fn with_solution_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.solution_dir = Some(dir.into());
        self
    }

    pub fn validate(&self) -> Result<(), PlannerError> {
        for placeholder in ["{domain}", "{problem}"] {
            if !self.command_template.contains(placeholder) {
                return Err(PlannerError::MissingPlaceholder(placeholder));
            }
        }
        match shlex::split(&self.command_template) {
            Some(words) if !words.is_empty() => Ok(()),
            _ => Err(PlannerError::BadTemplate(self.command_template.clone())),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    /// `None` when the planner was killed (timeout or signal).
    pub exit_code: Option<i32>,
    pub stdout: String,
    pub stderr: String,
    pub elapsed: Duration,
    pub timed_out: bool,
    /// Most recently written file in the solution directory during the run.
    pub solution_path: Option<PathBuf>,
}

/// Splits the template into argv and fills in the placeholders.
pub fn substitute(
    template: &str,
    domain: &Path,
    problem: &Path,
    solution_dir: &Path,
) -> Result<Vec<String>, PlannerError> {
    let words = shlex::split(template)
        .filter(|w| !w.is_empty())
        .ok_or_else(|| PlannerError::BadTemplate(template.to_owned()))?;
    Ok(words
        .into_iter()
        .map(|w| {
            w.replace("{domain}", &domain.to_string_lossy())
                .replace("{problem}", &problem.to_string_lossy())
                .replace("{solution_dir}", &solution_dir.to_string_lossy())
        })
        .collect())
}

fn snapshot(dir: &Path) -> HashMap<PathBuf, SystemTime> {
    walkdir::WalkDir::new(dir)
        .into_iter()
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file())
        .filter_map(|e| {
            let modified = e.metadata().ok()?.modified().ok()?;
            Some((e.into_path(), modified))
        })
        .collect()
}

fn drain<R: Read + Send + 'static>(source: Option<R>) -> mpsc::Receiver<String> {
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(mut r) = source {
            let _ = r.read_to_end(&mut buf);
        }
        let _ = tx.send(String::from_utf8_lossy(&buf).into_owned());
    });
    rx
}

/// Runs the planner and waits for it, killing it once the timeout elapses.
pub fn run_planner(
    config: &PlannerConfig,
    domain: &Path,
    problem: &Path,
) -> Result<PlanResult, PlannerError> {
    config.validate()?;
    for input in [domain, problem] {
        if !input.is_file() {
            return Err(PlannerError::MissingInput(input.to_path_buf()));
        }
    }
    let solution_dir = config.solution_dir.clone().unwrap_or_else(|| {
        domain
            .parent()
            .unwrap_or(Path::new(""))
            .join("solutions")
    });
    fs::create_dir_all(&solution_dir).map_err(|source| PlannerError::Io {
        path: solution_dir.clone(),
        source,
    })?;
    let argv = substitute(&config.command_template, domain, problem, &solution_dir)?;
    let before = snapshot(&solution_dir);

    let started = Instant::now();
    let mut child = Command::new(&argv[0])
        .args(&argv[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|source| PlannerError::Spawn {
            program: argv[0].clone(),
            source,
        })?;
    let out = drain(child.stdout.take());
    let err = drain(child.stderr.take());

    let wait_err = |source| PlannerError::Io {
        path: PathBuf::from(&argv[0]),
        source,
    };
    let (status, timed_out) = match config.timeout_seconds {
        Some(secs) => match child.wait_timeout(Duration::from_secs(secs)).map_err(wait_err)? {
            Some(status) => (Some(status), false),
            None => {
                let _ = child.kill();
                child.wait().map_err(wait_err)?;
                (None, true)
            }
        },
        None => (Some(child.wait().map_err(wait_err)?), false),
    };
    let elapsed = started.elapsed();
    // After a kill, a surviving grandchild may keep the pipes open; do not
    // wait for it indefinitely.
    let collect = |rx: mpsc::Receiver<String>| {
        if timed_out {
            rx.recv_timeout(Duration::from_millis(500)).unwrap_or_default()
        } else {
            rx.recv().unwrap_or_default()
        }
    };
    let stdout = collect(out);
    let stderr = collect(err);

    let solution_path = snapshot(&solution_dir)
        .into_iter()
        .filter(|(path, modified)| before.get(path).is_none_or(|old| modified > old))
        .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)))
        .map(|(path, _)| path);

    Ok(PlanResult {
        exit_code: status.and_then(|s| s.code()),
        stdout,
        stderr,
        elapsed,
        timed_out,
        solution_path,
    })
}

#[cfg(all(test, unix))]
mod tests {
    use super::*;

    fn project() -> (tempfile::TempDir, PathBuf, PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let domain = dir.path().join("domain.pddl");
        let problems = dir.path().join("my problems");
        fs::create_dir(&problems).unwrap();
        let problem = problems.join("p01.pddl");
        fs::write(&domain, "(define (domain d))").unwrap();
        fs::write(&problem, "(define (problem p) (:domain d))").unwrap();
        (dir, domain, problem)
    }

    #[test]
    fn placeholders_required() {
        assert!(matches!(
            PlannerConfig::new("ff -o {domain}"),
            Err(PlannerError::MissingPlaceholder("{problem}"))
        ));
        assert!(matches!(
            PlannerConfig::new("'unterminated {domain} {problem}"),
            Err(PlannerError::BadTemplate(_))
        ));
    }

    #[test]
    fn substitution_keeps_spaces_in_one_argument() {
        let argv = substitute(
            "plan -d {domain} --problem={problem} {solution_dir}",
            Path::new("/a b/d.pddl"),
            Path::new("p.pddl"),
            Path::new("out"),
        )
        .unwrap();
        assert_eq!(argv, ["plan", "-d", "/a b/d.pddl", "--problem=p.pddl", "out"]);
    }

    #[test]
    fn echo_planner() {
        let (_dir, domain, problem) = project();
        let config = PlannerConfig::new("echo {domain} {problem}").unwrap();
        let result = run_planner(&config, &domain, &problem).unwrap();
        assert_eq!(result.exit_code, Some(0));
        assert!(result.stdout.contains(&*domain.to_string_lossy()));
        assert!(result.stdout.contains(&*problem.to_string_lossy()));
        assert!(result.solution_path.is_none());
        assert!(!result.timed_out);
    }

    #[test]
    fn solution_detected() {
        let (dir, domain, problem) = project();
        let config =
            PlannerConfig::new("sh -c 'echo \"(move a b)\" > \"$3/plan.txt\"' sh {domain} {problem} {solution_dir}")
                .unwrap();
        let result = run_planner(&config, &domain, &problem).unwrap();
        assert_eq!(result.solution_path, Some(dir.path().join("solutions/plan.txt")));
    }

    #[test]
    fn stale_files_are_not_solutions() {
        let (dir, domain, problem) = project();
        fs::create_dir(dir.path().join("solutions")).unwrap();
        fs::write(dir.path().join("solutions/old.txt"), "x").unwrap();
        let config = PlannerConfig::new("true {domain} {problem}").unwrap();
        assert!(run_planner(&config, &domain, &problem).unwrap().solution_path.is_none());
    }

    #[test]
    fn timeout_kills() {
        let (_dir, domain, problem) = project();
        let config = PlannerConfig::new("sh -c 'exec sleep 5' sh {domain} {problem}")
            .unwrap()
            .with_timeout(Some(0));
        let result = run_planner(&config, &domain, &problem).unwrap();
        assert!(result.timed_out);
        assert_eq!(result.exit_code, None);
    }

    #[test]
    fn errors() {
        let (_dir, domain, problem) = project();
        let config = PlannerConfig::new("no-such-planner-binary {domain} {problem}").unwrap();
        assert!(matches!(
            run_planner(&config, &domain, &problem),
            Err(PlannerError::Spawn { ref program, .. }) if program == "no-such-planner-binary"
        ));
        let config = PlannerConfig::new("echo {domain} {problem}").unwrap();
        assert!(matches!(
            run_planner(&config, Path::new("/nonexistent.pddl"), &problem),
            Err(PlannerError::MissingInput(_))
        ));
    }
}
