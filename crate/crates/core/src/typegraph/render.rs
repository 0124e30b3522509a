use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::Command;

use thiserror::Error;

use super::{build_type_graph, emit_dot};
use crate::diagnostic::ParseDiagnostic;
use crate::fsutil::write_atomic;
use crate::pddl::parse_domain;

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("renderer command is empty or malformed: {0:?}")]
    BadRenderer(String),
    #[error("renderer '{command}' failed ({status}): {stderr}")]
    RendererFailed {
        command: String,
        status: String,
        stderr: String,
    },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> DiagramError + '_ {
    move |source| DiagramError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone)]
pub struct DiagramArtifacts {
    pub revision: u32,
    pub copied_domain_path: PathBuf,
    pub dot_path: PathBuf,
    /// Absent when no renderer ran.
    pub image_path: Option<PathBuf>,
    /// Parse and hierarchy diagnostics of the domain.
    pub diagnostics: Vec<ParseDiagnostic>,
    /// Degraded-mode notes, e.g. a renderer that could not be found.
    pub warnings: Vec<String>,
}

const SUBDIRS: [&str; 3] = ["domains", "dot", "diagrams"];

fn revision_of(file_name: &str, base: &str) -> Option<u32> {
    let rest = file_name.strip_prefix(base)?.strip_prefix('_')?;
    let digits = rest.split_once('.').map_or(rest, |(d, _)| d);
    digits.parse().ok().filter(|n| *n > 0)
}

/// One more than the highest revision of `base` found in any output folder.
pub fn next_revision(output_root: &Path, base: &str) -> io::Result<u32> {
    let mut highest = 0;
    for sub in SUBDIRS {
        let dir = output_root.join(sub);
        let entries = match fs::read_dir(&dir) {
            Ok(entries) => entries,
            Err(e) if e.kind() == io::ErrorKind::NotFound => continue,
            Err(e) => return Err(e),
        };
        for entry in entries {
            let name = entry?.file_name();
            if let Some(rev) = name.to_str().and_then(|n| revision_of(n, base)) {
                highest = highest.max(rev);
            }
        }
    }
    Ok(highest + 1)
}

/// Copies the domain, writes its DOT description and, if a renderer command
/// is given, asks it for a PNG. All three share one revision number.
///
/// The renderer is invoked as `<renderer> -Tpng <dot> -o <png>`. A renderer
/// that cannot be found degrades to DOT-only output with a warning; one that
/// runs and fails is an error.
pub fn render_diagram(
    domain_file: &Path,
    output_root: &Path,
    renderer: Option<&str>,
) -> Result<DiagramArtifacts, DiagramError> {
    let text = fs::read_to_string(domain_file).map_err(io_err(domain_file))?;
    let (domain, mut diagnostics) = parse_domain(&text);
    let (graph, graph_diags) = build_type_graph(&domain);
    diagnostics.extend(graph_diags);
    let dot = emit_dot(&graph);

    for sub in SUBDIRS {
        let dir = output_root.join(sub);
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    }
    let base = domain_file
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("domain")
        .to_owned();
    let revision = next_revision(output_root, &base).map_err(io_err(output_root))?;
    let stem = format!("{base}_{revision}");
    let copied_domain_path = output_root.join("domains").join(format!("{stem}.pddl"));
    let dot_path = output_root.join("dot").join(format!("{stem}.dot"));
    let png_path = output_root.join("diagrams").join(format!("{stem}.png"));

    write_atomic(&copied_domain_path, text.as_bytes()).map_err(io_err(&copied_domain_path))?;
    write_atomic(&dot_path, dot.as_bytes()).map_err(io_err(&dot_path))?;

    let mut warnings = Vec::new();
    let mut image_path = None;
    match renderer {
        None => warnings.push("no renderer configured; image not generated".to_owned()),
        Some(command) => {
            let argv = shlex::split(command)
                .filter(|a| !a.is_empty())
                .ok_or_else(|| DiagramError::BadRenderer(command.to_owned()))?;
            let output = Command::new(&argv[0])
                .args(&argv[1..])
                .arg("-Tpng")
                .arg(&dot_path)
                .arg("-o")
                .arg(&png_path)
                .output();
            match output {
                Err(e) if e.kind() == io::ErrorKind::NotFound => warnings.push(format!(
                    "renderer '{}' not found; image not generated",
                    argv[0]
                )),
                Err(e) => return Err(io_err(Path::new(&argv[0]))(e)),
                Ok(out) if !out.status.success() => {
                    return Err(DiagramError::RendererFailed {
                        command: command.to_owned(),
                        status: out.status.to_string(),
                        stderr: String::from_utf8_lossy(&out.stderr).trim().to_owned(),
                    })
                }
                Ok(_) => image_path = Some(png_path),
            }
        }
    }

    Ok(DiagramArtifacts {
        revision,
        copied_domain_path,
        dot_path,
        image_path,
        diagnostics,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn domain(dir: &Path) -> PathBuf {
        let path = dir.join("hack.pddl");
        fs::write(&path, "(define (domain hack) (:types hacker - person))").unwrap();
        path
    }

    #[test]
    fn revision_parsing() {
        assert_eq!(revision_of("splisus_12.dot", "splisus"), Some(12));
        assert_eq!(revision_of("splisus_x.dot", "splisus"), None);
        assert_eq!(revision_of("splisus-b_1.dot", "splisus"), None);
        assert_eq!(revision_of("splisus_0.dot", "splisus"), None);
    }

    #[test]
    fn revisions_ascend_without_renderer() {
        let tmp = tempfile::tempdir().unwrap();
        let file = domain(tmp.path());
        let out = tmp.path().join("out");
        let first = render_diagram(&file, &out, None).unwrap();
        assert_eq!(first.revision, 1);
        assert!(first.image_path.is_none());
        assert_eq!(first.warnings.len(), 1);
        assert!(out.join("domains/hack_1.pddl").is_file());
        assert!(out.join("dot/hack_1.dot").is_file());
        let second = render_diagram(&file, &out, None).unwrap();
        assert_eq!(second.revision, 2);
        assert_eq!(
            fs::read(&first.dot_path).unwrap(),
            fs::read(&second.dot_path).unwrap()
        );
    }

    #[test]
    fn missing_renderer_degrades() {
        let tmp = tempfile::tempdir().unwrap();
        let file = domain(tmp.path());
        let art = render_diagram(&file, tmp.path(), Some("no-such-renderer-xyz")).unwrap();
        assert!(art.image_path.is_none());
        assert!(art.warnings[0].contains("not found"));
    }

    #[cfg(unix)]
    #[test]
    fn failing_renderer_reports_stderr() {
        let tmp = tempfile::tempdir().unwrap();
        let file = domain(tmp.path());
        let err = render_diagram(&file, tmp.path(), Some("sh -c 'echo broken >&2; exit 3' sh"))
            .unwrap_err();
        assert!(matches!(err, DiagramError::RendererFailed { ref stderr, .. } if stderr == "broken"));
    }

    #[cfg(unix)]
    #[test]
    fn renderer_receives_paths() {
        let tmp = tempfile::tempdir().unwrap();
        let file = domain(tmp.path());
        // Stand-in renderer: copies the DOT file to the requested output.
        let art = render_diagram(&file, tmp.path(), Some("sh -c 'cp \"$2\" \"$4\"' sh")).unwrap();
        let png = art.image_path.unwrap();
        assert!(png.ends_with("diagrams/hack_1.png"));
        assert_eq!(fs::read(png).unwrap(), fs::read(art.dot_path).unwrap());
    }
}
