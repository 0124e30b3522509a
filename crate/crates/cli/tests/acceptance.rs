//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p mypddl-cli --test acceptance`.

use std::fs;
use std::panic;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use mypddl_core::construct::{add_construct, parse_constructs, read_construct};
use mypddl_core::distance::{augment_with_distances, extract_locations, format_distance, pairwise_distances};
use mypddl_core::planner::{run_planner, PlannerConfig, PlannerError};
use mypddl_core::snippets::SnippetSet;
use mypddl_core::typegraph::build_type_graph;
use mypddl_core::{
    find_blocks, invalid_regions, parse_domain, parse_problem, parse_sexpr, serialize, tokenize,
    LineIndex, ParseDiagnostic,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn fixture(rel: &str) -> String {
    fs::read_to_string(fixtures().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

fn mypddl(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mypddl"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("run mypddl")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn no_errors(what: &str, diags: &[ParseDiagnostic]) -> Result<(), String> {
    match diags.iter().find(|d| d.is_error()) {
        Some(d) => Err(format!("{what}: {} [{}]", d.message, d.code)),
        None => Ok(()),
    }
}

fn distance_reproduction() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    fs::write(dir.path().join("pizza.pddl"), fixture("problems/pizza.pddl")).unwrap();
    let start = Instant::now();
    let out = mypddl(dir.path(), &["distance", "pizza.pddl"]);
    let elapsed = start.elapsed();
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let text = fs::read_to_string(dir.path().join("pizza_dist.pddl")).map_err(|e| e.to_string())?;
    let (forest, _) = parse_sexpr(&text);
    let init = find_blocks(&forest, ":init")[0];
    let facts: Vec<String> = init
        .items()
        .filter(|n| n.has_head("distance"))
        .map(|n| n.to_source())
        .collect();
    let expected = [
        "(distance gary gary 0.0)",
        "(distance gary pizza 2.2361)",
        "(distance pizza gary 2.2361)",
        "(distance pizza pizza 0.0)",
    ];
    ensure(facts == expected, || format!("got {facts:?}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("4 facts, exact match, {} ms", elapsed.as_millis()))
}

fn n_squared_law() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let start = Instant::now();
    let mut cases = 0;
    for n in [1usize, 2, 5, 20] {
        for d in [1usize, 2, 3, 5] {
            for _ in 0..13 {
                cases += 1;
                let facts: Vec<String> = (0..n)
                    .map(|i| {
                        let coords: Vec<String> = (0..d)
                            .map(|_| format!("{:.2}", rng.gen_range(-100.0..100.0)))
                            .collect();
                        format!("(location loc{i} {})", coords.join(" "))
                    })
                    .collect();
                let text = format!(
                    "(define (problem r) (:domain d)\n  (:init (ready)\n         {})\n  (:goal (done)))",
                    facts.join("\n         ")
                );
                let out = augment_with_distances(&text, "location").map_err(|e| e.to_string())?;
                let (forest, _) = parse_sexpr(&out.text);
                let emitted: Vec<Vec<String>> = find_blocks(&forest, ":init")[0]
                    .items()
                    .filter(|f| f.has_head("distance"))
                    .map(|f| f.items().map(|a| a.to_source()).collect())
                    .collect();
                ensure(emitted.len() == n * n, || format!("n={n} d={d}: {} facts", emitted.len()))?;
                for i in 0..n {
                    ensure(emitted[i * n + i][3] == "0.0", || format!("diagonal {:?}", emitted[i * n + i]))?;
                    for j in 0..n {
                        ensure(emitted[i * n + j][3] == emitted[j * n + i][3], || {
                            format!("asymmetric {:?} {:?}", emitted[i * n + j], emitted[j * n + i])
                        })?;
                    }
                }
                let (locations, _) = extract_locations(&text, "location");
                let raw = pairwise_distances(&locations).map_err(|e| e.to_string())?;
                for i in 0..n {
                    for j in 0..n {
                        ensure(format_distance(raw[i * n + j].value) == emitted[i * n + j][3], || {
                            "emitted value differs from computed".to_owned()
                        })?;
                        for k in 0..n {
                            let (ik, ij, jk) = (raw[i * n + k].value, raw[i * n + j].value, raw[j * n + k].value);
                            ensure(ik <= ij + jk + 1e-9, || format!("triangle {i} {j} {k}"))?;
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("{cases} random cases, {} ms", elapsed.as_millis()))
}

fn construct_round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("garys-huge-problem.pddl");
    let before = fixture("problems/garys-huge-problem.pddl");
    fs::write(&path, &before).unwrap();
    let goal: Vec<String> = read_construct(":goal", &path)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|n| n.to_source())
        .collect();
    ensure(goal == ["(:goal (exploited magicfailureapp))"], || format!("goal {goal:?}"))?;

    let fact = parse_constructs("(hungry gisela)").map_err(|e| e.to_string())?;
    let after = add_construct(&path, ":init", &fact).map_err(|e| e.to_string())?;
    let init = read_construct(":init", &path).map_err(|e| e.to_string())?;
    let last = init[0].items().last().map(|n| n.to_source());
    ensure(last.as_deref() == Some("(hungry gisela)"), || format!("last init item {last:?}"))?;
    let had_gary = init[0].items().any(|n| n.to_source() == "(hungry gary)");
    ensure(had_gary, || "(hungry gary) lost".to_owned())?;

    let (forest, _) = parse_sexpr(&before);
    let span = find_blocks(&forest, ":init")[0].span;
    let grown = after.len() - before.len();
    ensure(
        after[..span.start] == before[..span.start] && after[span.end + grown..] == before[span.end..],
        || "bytes outside :init changed".to_owned(),
    )?;
    Ok("goal extracted; (hungry gisela) appended last; rest of file unchanged".to_owned())
}

const DOMAINS: [&str; 4] = [
    "logistics-erroneous.pddl",
    "coffee-erroneous.pddl",
    "splisus.pddl",
    "store.pddl",
];

fn lossless_parsing() -> Outcome {
    let mut bytes = 0;
    for name in DOMAINS {
        let text = fixture(&format!("corpus/{name}"));
        let (forest, _) = parse_sexpr(&text);
        ensure(serialize(&forest) == text, || format!("{name} does not round-trip"))?;
        bytes += text.len();
    }
    Ok(format!("4 domains, {bytes} bytes, byte-identical"))
}

fn corpus_type_graphs() -> Outcome {
    let mut seen = Vec::new();
    for name in ["splisus.pddl", "store.pddl"] {
        let (domain, _) = parse_domain(&fixture(&format!("corpus/{name}")));
        let (graph, _) = build_type_graph(&domain);
        seen.push((name, graph.type_count(), graph.depth()));
    }
    let expected = [("splisus.pddl", 20, 5), ("store.pddl", 21, 6)];
    ensure(seen == expected, || format!("got {seen:?}"))?;
    Ok("splisus 20 types / 5 layers, store 21 types / 6 layers (object excluded)".to_owned())
}

fn annotated_offsets(stem: &str, text: &str) -> Vec<(usize, String)> {
    let index = LineIndex::new(text);
    fixture(&format!("corpus/{stem}.annotations.tsv"))
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let cols: Vec<&str> = l.split('\t').collect();
            let offset = index
                .offset(cols[0].parse().unwrap(), cols[1].parse().unwrap())
                .unwrap();
            (offset, cols[3].to_owned())
        })
        .collect()
}

fn highlighting() -> Outcome {
    let mut report = Vec::new();
    for name in ["splisus.pddl", "store.pddl"] {
        let text = fixture(&format!("corpus/{name}"));
        let start = Instant::now();
        let regions = invalid_regions(&tokenize(&text));
        let elapsed = start.elapsed();
        ensure(regions.is_empty(), || format!("{name}: {} invalid regions", regions.len()))?;
        ensure(elapsed < Duration::from_secs(1), || format!("{name} took {elapsed:?}"))?;
    }
    for (stem, name) in [
        ("logistics", "logistics-erroneous.pddl"),
        ("coffee", "coffee-erroneous.pddl"),
    ] {
        let text = fixture(&format!("corpus/{name}"));
        let start = Instant::now();
        let regions = invalid_regions(&tokenize(&text));
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(1), || format!("{name} took {elapsed:?}"))?;
        ensure(regions.len() >= 12, || format!("{name}: only {} regions", regions.len()))?;
        let annotated = annotated_offsets(stem, &text);
        let found = annotated
            .iter()
            .filter(|(off, _)| regions.iter().any(|r| r.start <= *off && *off < r.end))
            .count();
        let ratio = found as f64 / annotated.len() as f64;
        ensure(ratio >= 0.7, || format!("{name}: coverage {found}/{}", annotated.len()))?;
        report.push(format!(
            "{stem} {} regions, {found}/{} annotated",
            regions.len(),
            annotated.len()
        ));
    }
    Ok(format!("valid domains clean; {}", report.join("; ")))
}

fn dot_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    fs::write(dir.path().join("splisus.pddl"), fixture("corpus/splisus.pddl")).unwrap();
    let mut dots = Vec::new();
    for rev in 1..=3 {
        let out = mypddl(
            dir.path(),
            &["--json", "diagram", "splisus.pddl", "--no-render", "--out", "out"],
        );
        ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
        let dot = dir.path().join(format!("out/dot/splisus_{rev}.dot"));
        let copy = dir.path().join(format!("out/domains/splisus_{rev}.pddl"));
        ensure(dot.is_file() && copy.is_file(), || format!("revision {rev} files missing"))?;
        dots.push(fs::read(dot).unwrap());
    }
    ensure(dots[0] == dots[1] && dots[1] == dots[2], || "DOT output differs between runs".to_owned())?;
    Ok(format!("revisions 1, 2, 3; {} DOT bytes identical", dots[0].len()))
}

fn snippet_contract() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = mypddl(dir.path(), &["snippet", "p2"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure(
        out.status.success() && stdout == "(pred-name ?x - object ?y - object)\n",
        || format!("snippet p2 printed {stdout:?}"),
    )?;

    let set = SnippetSet::builtin();
    let plain = |t: &str| set.expand_plain(t).map_err(|e| e.to_string());
    no_errors("domain", &parse_domain(&plain("domain")?).1)?;
    no_errors("problem", &parse_problem(&plain("problem")?).1)?;
    let wrap = |body: String| format!("(define (domain d)\n  (:requirements :typing :durative-actions :numeric-fluents)\n{body})");
    let mut checked = 2;
    for trigger in ["action", "durative-action"] {
        no_errors(trigger, &parse_domain(&wrap(plain(trigger)?)).1)?;
        checked += 1;
    }
    for arity in 1..=5 {
        let t = plain(&format!("t{arity}"))?;
        let p = plain(&format!("p{arity}"))?;
        let f = plain(&format!("f{arity}"))?;
        let text = wrap(format!("(:types {t})\n(:predicates {p})\n(:functions {f})"));
        no_errors(&format!("t/p/f{arity}"), &parse_domain(&text).1)?;
        ensure(invalid_regions(&tokenize(&text)).is_empty(), || format!("t/p/f{arity} not fully scoped"))?;
        checked += 3;
    }
    Ok(format!("p2 exact; {checked} expansions parse without errors"))
}

fn scaffold_validity() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = mypddl(dir.path(), &["--quiet", "new", "rover"]);
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let root = dir.path().join("rover");
    let mut entries: Vec<String> = fs::read_dir(&root)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    entries.sort();
    ensure(
        entries == ["README.md", "domain.pddl", "domains", "plan", "problems", "solutions"],
        || format!("tree {entries:?}"),
    )?;
    ensure(root.join("problems/p01.pddl").is_file(), || "problems/p01.pddl missing".to_owned())?;
    for (file, needle) in [
        ("domain.pddl", "(define (domain rover)"),
        ("problems/p01.pddl", "(:domain rover)"),
    ] {
        let text = fs::read_to_string(root.join(file)).unwrap();
        ensure(text.contains(needle), || format!("{file} lacks {needle}"))?;
        let check = mypddl(&root, &["check", file]);
        ensure(check.status.code() == Some(0), || {
            format!("check {file}: {}", String::from_utf8_lossy(&check.stdout))
        })?;
    }
    Ok("six-entry tree; domain.pddl and p01.pddl pass check".to_owned())
}

fn planner_harness() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let domain = dir.path().join("domain.pddl");
    let problem = dir.path().join("p01.pddl");
    fs::write(&domain, "(define (domain d))").unwrap();
    fs::write(&problem, "(define (problem p) (:domain d))").unwrap();
    let script = fixtures().join("planners/positional.sh");
    let template = format!("sh '{}' {{domain}} {{problem}} {{solution_dir}}", script.display());
    let config = PlannerConfig::new(template).map_err(|e| e.to_string())?;
    let result = run_planner(&config, &domain, &problem).map_err(|e| e.to_string())?;
    let solution = result
        .solution_path
        .ok_or_else(|| format!("no solution found; stderr: {}", result.stderr))?;

    let missing = PlannerConfig::new("no-such-planner-binary {domain} {problem}").unwrap();
    match run_planner(&missing, &domain, &problem) {
        Err(PlannerError::Spawn { .. }) => {}
        other => return Err(format!("nonexistent binary gave {other:?}")),
    }
    Ok(format!(
        "stub wrote {}; missing binary is a spawn error",
        solution.file_name().unwrap().to_string_lossy()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("distance reproduction", distance_reproduction),
        ("n-squared law", n_squared_law),
        ("construct round-trip", construct_round_trip),
        ("lossless parsing", lossless_parsing),
        ("corpus type graphs", corpus_type_graphs),
        ("highlighting soundness/sensitivity", highlighting),
        ("DOT determinism", dot_determinism),
        ("snippet contract", snippet_contract),
        ("scaffold validity", scaffold_validity),
        ("planner harness", planner_harness),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".to_owned());
            Err(format!("panic: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
