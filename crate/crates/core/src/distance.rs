//! Euclidean distance preprocessing.
//!
//! PDDL has no square root, so distances between located objects are
//! computed up front and written into the problem as
//! `(distance A B V)` facts, one for every ordered pair including `(A, A)`.

use thiserror::Error;

use crate::construct::{insert_constructs, parse_constructs, ConstructError};
use crate::diagnostic::{ParseDiagnostic, Span};
use crate::pddl::lexical::is_number;
use crate::sexpr::{find_blocks, parse_sexpr};

pub const DEFAULT_LOCATION_PREDICATE: &str = "location";
pub const DISTANCE_PREDICATE: &str = "distance";

#[derive(Debug, Clone, PartialEq)]
pub struct LocationFact {
    pub object: String,
    pub coords: Vec<f64>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceFact {
    pub from: String,
    pub to: String,
    pub value: f64,
}

impl DistanceFact {
    pub fn to_pddl(&self) -> String {
        format!(
            "({DISTANCE_PREDICATE} {} {} {})",
            self.from,
            self.to,
            format_distance(self.value)
        )
    }
}

#[derive(Debug, Error)]
pub enum DistanceError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("{} invalid location fact(s)", .0.len())]
    InvalidLocations(Vec<ParseDiagnostic>),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// Location facts from the first `:init` block. The first argument names the
/// object, the rest are its coordinates; every fact must have the same
/// number of coordinates.
pub fn extract_locations(
    problem_text: &str,
    predicate: &str,
) -> (Vec<LocationFact>, Vec<ParseDiagnostic>) {
    let (forest, _) = parse_sexpr(problem_text);
    let mut facts: Vec<LocationFact> = Vec::new();
    let mut diagnostics = Vec::new();
    let Some(init) = find_blocks(&forest, ":init").into_iter().next() else {
        return (facts, diagnostics);
    };

    for fact in init.items().skip(1).filter(|n| n.has_head(predicate)) {
        let args: Vec<_> = fact.items().skip(1).collect();
        let source = fact.to_source();
        let Some(object) = args.first().and_then(|a| a.atom()) else {
            diagnostics.push(ParseDiagnostic::error(
                "bad-location",
                fact.span,
                format!("{source}: first argument must name an object"),
            ));
            continue;
        };
        if args.len() < 2 {
            diagnostics.push(ParseDiagnostic::error(
                "bad-location",
                fact.span,
                format!("{source}: no coordinates"),
            ));
            continue;
        }
        let mut coords = Vec::with_capacity(args.len() - 1);
        for arg in &args[1..] {
            match arg.atom().filter(|a| is_number(a)).map(str::parse::<f64>) {
                Some(Ok(v)) if v.is_finite() => coords.push(v),
                _ => diagnostics.push(ParseDiagnostic::error(
                    "non-numeric-coordinate",
                    arg.span,
                    format!("'{}' is not a number", arg.to_source()),
                )),
            }
        }
        if coords.len() != args.len() - 1 {
            continue;
        }
        if let Some(first) = facts.first() {
            if first.coords.len() != coords.len() {
                diagnostics.push(ParseDiagnostic::error(
                    "mixed-dimensions",
                    fact.span,
                    format!(
                        "{source} has {} coordinates but {} has {}",
                        coords.len(),
                        first.span.slice(problem_text),
                        first.coords.len()
                    ),
                ));
                continue;
            }
        }
        if let Some(prev) = facts.iter().find(|f| f.object == object) {
            diagnostics.push(ParseDiagnostic::error(
                "duplicate-location",
                fact.span,
                format!(
                    "'{object}' already located by {}",
                    prev.span.slice(problem_text)
                ),
            ));
            continue;
        }
        facts.push(LocationFact {
            object: object.to_owned(),
            coords,
            span: fact.span,
        });
    }
    (facts, diagnostics)
}

pub fn euclidean(a: &[f64], b: &[f64]) -> Result<f64, DistanceError> {
    if a.len() != b.len() {
        return Err(DistanceError::DimensionMismatch(a.len(), b.len()));
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// Every ordered pair, self-pairs included, in extraction order.
pub fn pairwise_distances(locations: &[LocationFact]) -> Result<Vec<DistanceFact>, DistanceError> {
    let mut out = Vec::with_capacity(locations.len() * locations.len());
    for a in locations {
        for b in locations {
            out.push(DistanceFact {
                from: a.object.clone(),
                to: b.object.clone(),
                value: euclidean(&a.coords, &b.coords)?,
            });
        }
    }
    Ok(out)
}

/// Four decimal places rounded half-up, trailing zeros dropped, at least one
/// fractional digit: `0.0`, `2.5`, `2.2361`.
///
/// Rounding works on the shortest decimal representation of `value`, so a
/// literal like `0.00005` rounds up as written.
pub fn format_distance(value: f64) -> String {
    let repr = format!("{}", value.abs());
    let (int_part, frac_part) = repr.split_once('.').unwrap_or((&repr, ""));
    let mut digits: Vec<u8> = int_part.bytes().map(|b| b - b'0').collect();
    let mut frac: Vec<u8> = frac_part.bytes().map(|b| b - b'0').collect();
    frac.resize(frac.len().max(5), 0);
    let round_up = frac[4] >= 5;
    digits.extend_from_slice(&frac[..4]);
    if round_up {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, 1);
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    let split = digits.len() - 4;
    let to_str = |ds: &[u8]| ds.iter().map(|d| char::from(b'0' + d)).collect::<String>();
    let int_str = to_str(&digits[..split]);
    let frac_str = to_str(&digits[split..]);
    let frac_str = frac_str.trim_end_matches('0');
    let frac_str = if frac_str.is_empty() { "0" } else { frac_str };
    let negative = value < 0.0 && digits.iter().any(|d| *d != 0);
    format!("{}{int_str}.{frac_str}", if negative { "-" } else { "" })
}

#[derive(Debug, Clone)]
pub struct Augmented {
    pub text: String,
    pub locations: Vec<LocationFact>,
    pub facts: Vec<DistanceFact>,
    /// Warnings only; errors abort instead.
    pub diagnostics: Vec<ParseDiagnostic>,
}

/// Appends the n² distance facts to the first `:init` block. With no
/// location facts the text is returned unchanged and a warning is attached.
pub fn augment_with_distances(
    problem_text: &str,
    predicate: &str,
) -> Result<Augmented, DistanceError> {
    let (locations, diagnostics) = extract_locations(problem_text, predicate);
    if !diagnostics.is_empty() {
        return Err(DistanceError::InvalidLocations(diagnostics));
    }
    if locations.is_empty() {
        return Ok(Augmented {
            text: problem_text.to_owned(),
            locations,
            facts: Vec::new(),
            diagnostics: vec![ParseDiagnostic::warning(
                "no-locations",
                Span::default(),
                format!("no '{predicate}' facts in :init; nothing to add"),
            )],
        });
    }
    let facts = pairwise_distances(&locations)?;
    let rendered: String = facts
        .iter()
        .map(DistanceFact::to_pddl)
        .collect::<Vec<_>>()
        .join(" ");
    let nodes = parse_constructs(&rendered)?;
    let text = insert_constructs(problem_text, ":init", &nodes)?;
    Ok(Augmented {
        text,
        locations,
        facts,
        diagnostics: Vec::new(),
    })
}
