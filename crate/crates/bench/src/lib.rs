//! Synthetic inputs for the benchmarks.

use std::fmt::Write;

/// A well-formed domain with `types` types in a binary hierarchy,
/// `predicates` binary predicates and `actions` actions.
pub fn synthetic_domain(types: usize, predicates: usize, actions: usize) -> String {
    let mut out = String::from("(define (domain synthetic)\n  (:requirements :strips :typing)\n  (:types");
    for i in 0..types {
        let parent = if i == 0 { "object".to_owned() } else { format!("t{}", (i - 1) / 2) };
        let _ = write!(out, "\n    t{i} - {parent}");
    }
    out.push_str(")\n  (:predicates");
    for i in 0..predicates {
        let a = i % types.max(1);
        let b = (i * 7 + 3) % types.max(1);
        let _ = write!(out, "\n    (p{i} ?a - t{a} ?b - t{b})");
    }
    out.push(')');
    for i in 0..actions {
        let p = i % predicates.max(1);
        let q = (i + 1) % predicates.max(1);
        let _ = write!(
            out,
            "\n  (:action act{i}\n    :parameters (?x ?y)\n    :precondition (and (p{p} ?x ?y) (not (p{q} ?y ?x)))\n    :effect (and (p{q} ?y ?x) (not (p{p} ?x ?y))))"
        );
    }
    out.push_str(")\n");
    out
}

/// A problem with `locations` location facts in `dims` dimensions; the
/// coordinates follow a fixed pseudo-random sequence.
pub fn synthetic_problem(locations: usize, dims: usize) -> String {
    let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut out = String::from("(define (problem synthetic)\n  (:domain synthetic)\n  (:init");
    for i in 0..locations {
        let _ = write!(out, "\n    (location o{i}");
        for _ in 0..dims {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            let _ = write!(out, " {}", seed % 1000);
        }
        out.push(')');
    }
    out.push_str(")\n  (:goal (and)))\n");
    out
}
