use std::hint::black_box;
use std::path::Path;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use mypddl_bench::{synthetic_domain, synthetic_problem};
use mypddl_core::distance::{augment_with_distances, DEFAULT_LOCATION_PREDICATE};
use mypddl_core::typegraph::{build_type_graph, emit_dot};
use mypddl_core::{parse_domain, parse_sexpr, tokenize};

fn corpus(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures/corpus")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

fn parsing(c: &mut Criterion) {
    let mut group = c.benchmark_group("parse");
    let inputs = [
        ("splisus", corpus("splisus.pddl")),
        ("coffee-erroneous", corpus("coffee-erroneous.pddl")),
        ("synthetic-200", synthetic_domain(200, 200, 200)),
    ];
    for (name, text) in &inputs {
        group.throughput(Throughput::Bytes(text.len() as u64));
        group.bench_with_input(BenchmarkId::new("sexpr", name), text, |b, t| {
            b.iter(|| parse_sexpr(black_box(t)))
        });
        group.bench_with_input(BenchmarkId::new("tokenize", name), text, |b, t| {
            b.iter(|| tokenize(black_box(t)))
        });
    }
    group.finish();
}

fn type_graph(c: &mut Criterion) {
    let mut group = c.benchmark_group("typegraph");
    for (name, text) in [
        ("store".to_owned(), corpus("store.pddl")),
        ("synthetic-500".to_owned(), synthetic_domain(500, 500, 0)),
    ] {
        let domain = parse_domain(&text).0;
        group.bench_function(BenchmarkId::new("build+dot", name), |b| {
            b.iter(|| emit_dot(&build_type_graph(black_box(&domain)).0))
        });
    }
    group.finish();
}

fn distances(c: &mut Criterion) {
    let mut group = c.benchmark_group("distance");
    for n in [10, 50, 100] {
        let text = synthetic_problem(n, 3);
        group.throughput(Throughput::Elements((n * n) as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &text, |b, t| {
            b.iter(|| augment_with_distances(black_box(t), DEFAULT_LOCATION_PREDICATE).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, parsing, type_graph, distances);
criterion_main!(benches);
