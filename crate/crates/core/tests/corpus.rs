mod common;

use common::{corpus, coverage, DOMAINS};
use mypddl_core::typegraph::{build_type_graph, emit_dot};
use mypddl_core::{invalid_regions, parse_domain, parse_sexpr, serialize, tokenize};
use proptest::prelude::*;

#[test]
fn serialize_parse_is_identity() {
    for name in DOMAINS {
        let text = corpus(name);
        let (forest, _) = parse_sexpr(&text);
        assert_eq!(serialize(&forest), text, "{name}");
    }
}

#[test]
fn erroneous_domains_have_54_lines() {
    for name in &DOMAINS[..2] {
        assert_eq!(corpus(name).lines().count(), 54, "{name}");
    }
}

#[test]
fn correct_domains_are_fully_scoped() {
    for name in ["splisus.pddl", "store.pddl"] {
        let text = corpus(name);
        assert_eq!(invalid_regions(&tokenize(&text)), [], "{name}");
        let (_, diags) = parse_domain(&text);
        assert!(diags.iter().all(|d| !d.is_error()), "{name}: {diags:?}");
    }
}

#[test]
fn seeded_errors_are_found() {
    for (stem, file) in [
        ("logistics", "logistics-erroneous.pddl"),
        ("coffee", "coffee-erroneous.pddl"),
    ] {
        let c = coverage(stem, file);
        assert!(c.regions.len() >= 12, "{stem}: {} regions", c.regions.len());
        assert!(c.ratio() >= 0.7, "{stem}: coverage {:.2}", c.ratio());
        // Everything a grammar can see is seen; only semantic slips remain.
        for missed in &c.missed {
            assert_eq!(missed.kind, "semantic", "{stem}: missed {missed:?}");
        }
    }
}

#[test]
fn type_hierarchies_match_hand_count() {
    let cases = [("splisus.pddl", 20, 5), ("store.pddl", 21, 6)];
    for (name, types, depth) in cases {
        let (graph, diags) = build_type_graph(&parse_domain(&corpus(name)).0);
        assert_eq!(graph.type_count(), types, "{name}");
        assert_eq!(graph.depth(), depth, "{name}");
        assert_eq!(graph.nodes.len(), types + 1, "{name}");
        assert!(diags.is_empty(), "{name}: {diags:?}");
    }
}

#[test]
fn store_predicates_sit_in_their_boxes() {
    let (graph, _) = build_type_graph(&parse_domain(&corpus("store.pddl")).0);
    let lila = graph.predicates_of("lila");
    assert!(lila.contains(&"(product-at ?l1 - lola ?l2 - lila)".to_owned()), "{lila:?}");
    assert!(graph.predicates_of("lola").contains(&"(product-at ?l1 - lola ?l2 - lila)".to_owned()));
    let dot = emit_dot(&graph);
    assert!(dot.contains("(product-at ?l1 - lola ?l2 - lila)\\l"));
}

#[test]
fn attachment_is_complete() {
    for name in ["splisus.pddl", "store.pddl"] {
        let (domain, _) = parse_domain(&corpus(name));
        let (graph, _) = build_type_graph(&domain);
        for node in &graph.nodes {
            for pred in &domain.predicates {
                let uses = pred
                    .parameters
                    .entries
                    .iter()
                    .any(|e| e.declared_type.as_name() == Some(node.as_str()));
                let shown = graph.predicates_of(node).iter().filter(|s| **s == pred.signature_text).count();
                assert_eq!(shown, usize::from(uses), "{name}: {} in {node}", pred.name);
            }
        }
    }
}

#[test]
fn dot_is_deterministic() {
    for name in DOMAINS {
        let text = corpus(name);
        let a = emit_dot(&build_type_graph(&parse_domain(&text).0).0);
        let b = emit_dot(&build_type_graph(&parse_domain(&text).0).0);
        assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Removing any closing parenthesis from a correct domain must surface
    // as an invalid region, and the damaged text must still round-trip.
    #[test]
    fn dropping_a_paren_is_noticed(pick in 0usize..10_000, store in any::<bool>()) {
        let text = corpus(if store { "store.pddl" } else { "splisus.pddl" });
        let closes: Vec<usize> = text.match_indices(')').map(|(i, _)| i).collect();
        let at = closes[pick % closes.len()];
        let damaged = format!("{}{}", &text[..at], &text[at + 1..]);
        prop_assert!(!invalid_regions(&tokenize(&damaged)).is_empty());
        prop_assert_eq!(serialize(&parse_sexpr(&damaged).0), damaged);
    }
}
