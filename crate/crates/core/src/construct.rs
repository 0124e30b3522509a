//! Reading blocks out of PDDL files and appending constructs to them.
//!
//! Edits are minimal: only bytes inside the target block change, and the
//! rest of the file, comments and layout included, is left alone.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::diagnostic::has_errors;
use crate::fsutil::write_atomic;
use crate::sexpr::{find_blocks, parse_sexpr, SExprNode};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("no block headed by '{0}'")]
    NoBlock(String),
    #[error("input contains no expressions")]
    EmptyForest,
    #[error("block '{0}' is not closed")]
    Unclosed(String),
    #[error("invalid construct: {0}")]
    BadConstruct(String),
}

fn read(path: &Path) -> Result<String, ConstructError> {
    fs::read_to_string(path).map_err(|source| ConstructError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// All blocks headed by `keyword` (case-insensitive), nested ones included,
/// in document order.
pub fn read_construct(keyword: &str, path: &Path) -> Result<Vec<SExprNode>, ConstructError> {
    let text = read(path)?;
    let (forest, _) = parse_sexpr(&text);
    Ok(find_blocks(&forest, keyword).into_iter().cloned().collect())
}

/// Parses construct text such as `"(hungry gisela) (at a b)"` into nodes,
/// rejecting anything that does not read cleanly.
pub fn parse_constructs(text: &str) -> Result<Vec<SExprNode>, ConstructError> {
    let (forest, diagnostics) = parse_sexpr(text);
    if let Some(d) = diagnostics.iter().find(|d| d.is_error()) {
        return Err(ConstructError::BadConstruct(d.message.clone()));
    }
    debug_assert!(!has_errors(&diagnostics));
    Ok(forest.into_iter().filter(|n| !n.is_trivia()).collect())
}

/// Appends `constructs` to the first block headed by `keyword`, each on its
/// own line, indented like the block's last existing element.
pub fn insert_constructs(
    text: &str,
    keyword: &str,
    constructs: &[SExprNode],
) -> Result<String, ConstructError> {
    let (forest, _) = parse_sexpr(text);
    if forest.iter().all(SExprNode::is_trivia) {
        return Err(ConstructError::EmptyForest);
    }
    let block = *find_blocks(&forest, keyword)
        .first()
        .ok_or_else(|| ConstructError::NoBlock(keyword.to_owned()))?;
    if !block.closed {
        return Err(ConstructError::Unclosed(keyword.to_owned()));
    }
    if constructs.is_empty() {
        return Ok(text.to_owned());
    }

    let last_item = block.items().last().expect("a block has a head");
    let indent = if block.items().count() == 1 {
        format!("{}  ", indentation_before(text, block.span.start))
    } else {
        indentation_before(text, last_item.span.start)
    };
    let anchor = block
        .children
        .iter()
        .rev()
        .find(|c| c.kind != crate::sexpr::NodeKind::Whitespace)
        .expect("a block has a head")
        .span
        .end;

    let mut inserted = String::new();
    for construct in constructs {
        inserted.push('\n');
        inserted.push_str(&indent);
        inserted.push_str(&construct.to_source());
    }
    let mut out = String::with_capacity(text.len() + inserted.len());
    out.push_str(&text[..anchor]);
    out.push_str(&inserted);
    out.push_str(&text[anchor..]);
    Ok(out)
}

/// Whitespace that lines a new line up with byte `offset`: tabs are kept,
/// everything else on the line before `offset` becomes a space.
fn indentation_before(text: &str, offset: usize) -> String {
    let line_start = text[..offset].rfind('\n').map_or(0, |i| i + 1);
    text[line_start..offset]
        .chars()
        .map(|c| if c == '\t' { '\t' } else { ' ' })
        .collect()
}

/// [`insert_constructs`] on a file, rewritten atomically. Returns the new
/// text. With no constructs the file is not touched.
pub fn add_construct(
    path: &Path,
    keyword: &str,
    constructs: &[SExprNode],
) -> Result<String, ConstructError> {
    let text = read(path)?;
    let updated = insert_constructs(&text, keyword, constructs)?;
    if updated != text {
        write_atomic(path, updated.as_bytes()).map_err(|source| ConstructError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    Ok(updated)
}
