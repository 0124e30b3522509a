#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use mypddl_core::{invalid_regions, tokenize, LineIndex, Span};

pub fn fixture_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
}

pub fn fixture(rel: &str) -> String {
    fs::read_to_string(fixture_path(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub const DOMAINS: [&str; 4] = [
    "logistics-erroneous.pddl",
    "coffee-erroneous.pddl",
    "splisus.pddl",
    "store.pddl",
];

pub fn corpus(name: &str) -> String {
    fixture(&format!("corpus/{name}"))
}

#[derive(Debug, Clone)]
pub struct Annotation {
    pub line: usize,
    pub column: usize,
    pub text: String,
    pub kind: String,
    pub offset: usize,
}

/// Seeded error positions of `<stem>.annotations.tsv`, resolved against the
/// matching domain. Panics if a row does not point at its text.
pub fn annotations(stem: &str, domain: &str) -> Vec<Annotation> {
    let index = LineIndex::new(domain);
    corpus(&format!("{stem}.annotations.tsv"))
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let cols: Vec<&str> = l.split('\t').collect();
            let line = cols[0].parse().unwrap();
            let column = cols[1].parse().unwrap();
            let offset = index.offset(line, column).unwrap();
            let text = cols[2].to_owned();
            assert_eq!(
                &domain[offset..offset + text.len()],
                text,
                "{stem} annotation {line}:{column}"
            );
            Annotation {
                line,
                column,
                text,
                kind: cols[3].to_owned(),
                offset,
            }
        })
        .collect()
}

pub struct Coverage {
    pub regions: Vec<Span>,
    pub found: Vec<Annotation>,
    pub missed: Vec<Annotation>,
}

impl Coverage {
    pub fn ratio(&self) -> f64 {
        self.found.len() as f64 / (self.found.len() + self.missed.len()) as f64
    }
}

/// Which annotated positions fall inside an invalid region.
pub fn coverage(stem: &str, file: &str) -> Coverage {
    let text = corpus(file);
    let regions = invalid_regions(&tokenize(&text));
    let (found, missed) = annotations(stem, &text)
        .into_iter()
        .partition(|a| regions.iter().any(|r| r.start <= a.offset && a.offset < r.end));
    Coverage {
        regions,
        found,
        missed,
    }
}
