//! Project settings, read from `mypddl.toml` at the project root.
//!
//! ```toml
//! command = "ff -o {domain} -f {problem}"
//! timeout_seconds = 60
//! template_dir = "templates"
//! snippets_dir = "snippets"
//! renderer = "dot"
//! ```
//!
//! Every key is optional. Relative directories are resolved against the
//! directory holding the file.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

pub const CONFIG_FILE: &str = "mypddl.toml";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// Planner command template.
    pub command: Option<String>,
    pub timeout_seconds: Option<u64>,
    pub template_dir: Option<PathBuf>,
    pub snippets_dir: Option<PathBuf>,
    /// Diagram renderer command.
    pub renderer: Option<String>,
}

impl Settings {
    pub fn parse(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let mut settings: Settings = toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        for dir in [&mut settings.template_dir, &mut settings.snippets_dir]
            .into_iter()
            .flatten()
        {
            if dir.is_relative() {
                *dir = base.join(&*dir);
            }
        }
        Ok(settings)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    /// Settings from `dir/mypddl.toml`, or defaults when there is none.
    pub fn discover(dir: &Path) -> Result<Self, ConfigError> {
        let path = dir.join(CONFIG_FILE);
        if path.is_file() {
            Self::load(&path)
        } else {
            Ok(Self::default())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_resolves() {
        let s = Settings::parse(
            "command = \"plan {domain} {problem}\"\ntimeout_seconds = 5\nsnippets_dir = \"snips\"\n",
            Path::new("/proj/mypddl.toml"),
        )
        .unwrap();
        assert_eq!(s.command.as_deref(), Some("plan {domain} {problem}"));
        assert_eq!(s.timeout_seconds, Some(5));
        assert_eq!(s.snippets_dir, Some(PathBuf::from("/proj/snips")));
        assert_eq!(s.template_dir, None);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(Settings::parse("comand = \"x\"", Path::new("mypddl.toml")).is_err());
    }

    #[test]
    fn missing_file_means_defaults() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(Settings::discover(dir.path()).unwrap(), Settings::default());
    }
}
