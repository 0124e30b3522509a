//! Knowledge-engineering toolkit for PDDL.
//!
//! The pieces, roughly bottom-up:
//!
//! * [`sexpr`]: lossless S-expression reading and writing;
//! * [`pddl`]: typed domain/problem views over that tree;
//! * [`highlight`]: context-aware scoping, where text that fits no grammar
//!   rule is left unscoped;
//! * [`typegraph`]: type hierarchy extraction and DOT output;
//! * [`construct`]: read and append blocks in place;
//! * [`distance`]: Euclidean distance preprocessing of problem files;
//! * [`scaffold`], [`snippets`], [`planner`]: project tooling.

pub mod check;
pub mod config;
pub mod construct;
pub mod diagnostic;
pub mod distance;
pub mod fsutil;
pub mod highlight;
pub mod pddl;
pub mod planner;
pub mod scaffold;
pub mod sexpr;
pub mod snippets;
pub mod typegraph;

pub use diagnostic::{LineIndex, ParseDiagnostic, Severity, Span};
pub use highlight::{invalid_regions, tokenize, Scope, Token};
pub use pddl::{parse_domain, parse_problem, PddlDomain, PddlProblem, TypedList};
pub use sexpr::{find_blocks, parse_sexpr, serialize, NodeKind, SExprNode};
pub use typegraph::TypeGraph;
