use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use mypddl_core::check::check_text;
use mypddl_core::config::{Settings, CONFIG_FILE};
use mypddl_core::construct::{add_construct, insert_constructs, parse_constructs, read_construct};
use mypddl_core::distance::{augment_with_distances, DistanceError, DEFAULT_LOCATION_PREDICATE};
use mypddl_core::highlight::{emit_tokens_json, render_html};
use mypddl_core::planner::{run_planner, PlannerConfig, DEFAULT_COMMAND};
use mypddl_core::scaffold::{create_project, default_templates, load_template_dir, merge_templates};
use mypddl_core::snippets::{list_snippets, SnippetSet};
use mypddl_core::typegraph::render_diagram;
use mypddl_core::{tokenize, LineIndex, ParseDiagnostic, Severity};

/// PDDL knowledge-engineering tools.
#[derive(Parser)]
#[command(name = "mypddl", version, arg_required_else_help = true)]
struct Cli {
    /// Print only results and errors.
    #[arg(long, global = true)]
    quiet: bool,
    /// Machine-readable output where supported.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Create a project skeleton.
    New {
        name: String,
        /// Parent directory of the new project.
        #[arg(long, default_value = ".")]
        dir: PathBuf,
        /// Directory of templates that add to or replace the defaults.
        #[arg(long)]
        templates: Option<PathBuf>,
    },
    /// Expand a snippet trigger such as `domain` or `p2`.
    Snippet {
        #[arg(required_unless_present = "list")]
        trigger: Option<String>,
        /// List available snippets instead.
        #[arg(long)]
        list: bool,
        /// Directory with user snippets, one file per trigger.
        #[arg(long)]
        snippets_dir: Option<PathBuf>,
        /// Keep `${n:default}` tab stops.
        #[arg(long)]
        raw: bool,
    },
    /// Scope every token of a file.
    Tokens {
        file: PathBuf,
        /// Write a standalone HTML page instead of JSON.
        #[arg(long)]
        html: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw the type hierarchy of a domain.
    Diagram {
        domain: PathBuf,
        /// Output root holding domains/, dot/ and diagrams/. Defaults to the
        /// directory of the domain file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write DOT only.
        #[arg(long)]
        no_render: bool,
        /// Renderer command, called as `<cmd> -Tpng <dot> -o <png>`.
        #[arg(long, conflicts_with = "no_render")]
        renderer: Option<String>,
    },
    /// Print every block headed by a keyword.
    Extract { file: PathBuf, keyword: String },
    /// Append constructs to the first block headed by a keyword.
    Insert {
        file: PathBuf,
        keyword: String,
        construct: String,
        /// Print the result instead of rewriting the file.
        #[arg(long)]
        stdout: bool,
    },
    /// Add pairwise Euclidean distance facts to a problem.
    Distance {
        problem: PathBuf,
        #[arg(long, default_value = DEFAULT_LOCATION_PREDICATE)]
        predicate: String,
        #[arg(long, conflicts_with = "out")]
        in_place: bool,
        /// Defaults to `<name>_dist.pddl` next to the problem.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the configured planner.
    Plan(PlanArgs),
    /// Report problems in PDDL files.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long, default_value = "domain.pddl")]
    domain: PathBuf,
    #[arg(long, default_value = "problems/p01.pddl")]
    problem: PathBuf,
    /// Settings file; `mypddl.toml` in the current directory if present.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Planner command template with {domain}, {problem}, {solution_dir}.
    #[arg(long)]
    command: Option<String>,
    #[arg(long)]
    timeout: Option<u64>,
    #[arg(long)]
    solutions: Option<PathBuf>,
}

struct Ctx {
    quiet: bool,
    json: bool,
}

impl Ctx {
    fn info(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

/// Error caused by the input rather than the invocation; exit code 1.
#[derive(Debug)]
struct Reported;

impl std::fmt::Display for Reported {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("errors reported")
    }
}

impl std::error::Error for Reported {}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let ctx = Ctx {
        quiet: cli.quiet,
        json: cli.json,
    };
    match run(cli.command, &ctx) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.is::<Reported>() {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(1)
        }
    }
}

fn settings() -> Result<Settings> {
    Ok(Settings::discover(Path::new("."))?)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn run(command: Cmd, ctx: &Ctx) -> Result<()> {
    match command {
        Cmd::New {
            name,
            dir,
            templates,
        } => cmd_new(ctx, &name, &dir, templates),
        Cmd::Snippet {
            trigger,
            list,
            snippets_dir,
            raw,
        } => cmd_snippet(ctx, trigger.as_deref(), list, snippets_dir, raw),
        Cmd::Tokens { file, html, out } => {
            let text = read(&file)?;
            let tokens = tokenize(&text);
            let rendered = if html {
                render_html(&tokens, &text)
            } else {
                emit_tokens_json(&tokens, &text) + "\n"
            };
            emit(out.as_deref(), &rendered)
        }
        Cmd::Diagram {
            domain,
            out,
            no_render,
            renderer,
        } => cmd_diagram(ctx, &domain, out, no_render, renderer),
        Cmd::Extract { file, keyword } => {
            let blocks = read_construct(&keyword, &file)?;
            if ctx.json {
                let sources: Vec<String> = blocks.iter().map(|b| b.to_source()).collect();
                println!("{}", serde_json::to_string(&sources)?);
            } else {
                for block in blocks {
                    println!("{}", block.to_source());
                }
            }
            Ok(())
        }
        Cmd::Insert {
            file,
            keyword,
            construct,
            stdout,
        } => {
            let nodes = parse_constructs(&construct)?;
            if stdout {
                print!("{}", insert_constructs(&read(&file)?, &keyword, &nodes)?);
            } else {
                add_construct(&file, &keyword, &nodes)?;
                ctx.info(format!(
                    "added {} construct(s) to {keyword} in {}",
                    nodes.len(),
                    file.display()
                ));
            }
            Ok(())
        }
        Cmd::Distance {
            problem,
            predicate,
            in_place,
            out,
        } => cmd_distance(ctx, &problem, &predicate, in_place, out),
        Cmd::Plan(args) => cmd_plan(ctx, args),
        Cmd::Check { files } => cmd_check(ctx, &files),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_new(ctx: &Ctx, name: &str, dir: &Path, templates: Option<PathBuf>) -> Result<()> {
    let template_dir = match templates {
        Some(t) => Some(t),
        None => settings()?.template_dir,
    };
    let mut set = default_templates();
    if let Some(dir) = template_dir {
        set = merge_templates(set, load_template_dir(&dir)?);
    }
    let created = create_project(name, dir, &set)?;
    if ctx.json {
        println!("{}", serde_json::to_string(&created)?);
    } else if !ctx.quiet {
        for path in created {
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn cmd_snippet(
    ctx: &Ctx,
    trigger: Option<&str>,
    list: bool,
    snippets_dir: Option<PathBuf>,
    raw: bool,
) -> Result<()> {
    let dir = match snippets_dir {
        Some(d) => Some(d),
        None => settings()?.snippets_dir,
    };
    let mut set = SnippetSet::builtin();
    if let Some(dir) = dir {
        for warning in set.load_dir(&dir)? {
            ctx.info(format!("warning: {warning}"));
        }
    }
    if list {
        let rows = list_snippets(&set);
        if ctx.json {
            #[derive(Serialize)]
            struct Row<'a> {
                trigger: &'a str,
                description: &'a str,
            }
            let rows: Vec<Row> = rows
                .iter()
                .map(|(t, d)| Row {
                    trigger: t,
                    description: d,
                })
                .collect();
            println!("{}", serde_json::to_string(&rows)?);
        } else {
            for (trigger, description) in rows {
                println!("{trigger:<18}{description}");
            }
        }
        return Ok(());
    }
    let trigger = trigger.ok_or_else(|| anyhow!("no trigger given"))?;
    let text = if raw {
        set.expand(trigger)?
    } else {
        set.expand_plain(trigger)?
    };
    if text.ends_with('\n') {
        print!("{text}");
    } else {
        println!("{text}");
    }
    Ok(())
}

fn cmd_diagram(
    ctx: &Ctx,
    domain: &Path,
    out: Option<PathBuf>,
    no_render: bool,
    renderer: Option<String>,
) -> Result<()> {
    let renderer = if no_render {
        None
    } else {
        Some(match renderer {
            Some(r) => r,
            None => settings()?.renderer.unwrap_or_else(|| "dot".to_owned()),
        })
    };
    let root = out.unwrap_or_else(|| match domain.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    });
    let art = render_diagram(domain, &root, renderer.as_deref())?;
    let text = read(domain)?;
    print_diagnostics(ctx, &mut io::stderr(), domain, &text, &art.diagnostics)?;
    for warning in &art.warnings {
        ctx.info(format!("warning: {warning}"));
    }
    if ctx.json {
        #[derive(Serialize)]
        struct Out<'a> {
            revision: u32,
            domain: &'a Path,
            dot: &'a Path,
            image: Option<&'a Path>,
        }
        let out = Out {
            revision: art.revision,
            domain: &art.copied_domain_path,
            dot: &art.dot_path,
            image: art.image_path.as_deref(),
        };
        println!("{}", serde_json::to_string(&out)?);
    } else if !ctx.quiet {
        println!("revision {}", art.revision);
        println!("{}", art.copied_domain_path.display());
        println!("{}", art.dot_path.display());
        if let Some(image) = &art.image_path {
            println!("{}", image.display());
        }
    }
    Ok(())
}

fn cmd_distance(
    ctx: &Ctx,
    problem: &Path,
    predicate: &str,
    in_place: bool,
    out: Option<PathBuf>,
) -> Result<()> {
    let text = read(problem)?;
    let augmented = match augment_with_distances(&text, predicate) {
        Ok(a) => a,
        Err(DistanceError::InvalidLocations(diags)) => {
            print_diagnostics(ctx, &mut io::stderr(), problem, &text, &diags)?;
            return Err(Reported.into());
        }
        Err(e) => return Err(e.into()),
    };
    for d in &augmented.diagnostics {
        ctx.info(format!("warning: {}", d.message));
    }
    if augmented.facts.is_empty() {
        return Ok(());
    }
    let target = if in_place {
        problem.to_path_buf()
    } else if let Some(out) = out {
        out
    } else {
        let stem = problem
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| anyhow!("cannot derive an output name from {}", problem.display()))?;
        problem.with_file_name(format!("{stem}_dist.pddl"))
    };
    mypddl_core::fsutil::write_atomic(&target, augmented.text.as_bytes())
        .with_context(|| format!("cannot write {}", target.display()))?;
    if !ctx.quiet {
        println!(
            "{} locations, {} distance facts -> {}",
            augmented.locations.len(),
            augmented.facts.len(),
            target.display()
        );
    }
    Ok(())
}

fn cmd_plan(ctx: &Ctx, args: PlanArgs) -> Result<()> {
    let settings = match &args.config {
        Some(path) => Settings::load(path)?,
        None => settings()?,
    };
    let template = args
        .command
        .or(settings.command)
        .unwrap_or_else(|| DEFAULT_COMMAND.to_owned());
    let mut config = PlannerConfig::new(template)
        .with_context(|| format!("invalid planner command (set `command` in {CONFIG_FILE})"))?
        .with_timeout(args.timeout.or(settings.timeout_seconds));
    if let Some(dir) = args.solutions {
        config = config.with_solution_dir(dir);
    }
    let result = run_planner(&config, &args.domain, &args.problem)?;
    if ctx.json {
        #[derive(Serialize)]
        struct Out<'a> {
            exit_code: Option<i32>,
            timed_out: bool,
            elapsed_seconds: f64,
            solution_path: Option<&'a Path>,
            stdout: &'a str,
            stderr: &'a str,
        }
        let out = Out {
            exit_code: result.exit_code,
            timed_out: result.timed_out,
            elapsed_seconds: result.elapsed.as_secs_f64(),
            solution_path: result.solution_path.as_deref(),
            stdout: &result.stdout,
            stderr: &result.stderr,
        };
        println!("{}", serde_json::to_string(&out)?);
    } else {
        print!("{}", result.stdout);
        eprint!("{}", result.stderr);
        if let Some(path) = &result.solution_path {
            ctx.info(format!("solution: {}", path.display()));
        }
        ctx.info(format!("planner finished in {:.3}s", result.elapsed.as_secs_f64()));
    }
    if result.timed_out {
        bail!("planner timed out");
    }
    match result.exit_code {
        Some(0) => Ok(()),
        Some(code) => bail!("planner exited with status {code}"),
        None => bail!("planner was terminated by a signal"),
    }
}

fn severity_name(severity: Severity) -> &'static str {
    match severity {
        Severity::Error => "error",
        Severity::Warning => "warning",
    }
}

#[derive(Serialize)]
struct JsonDiagnostic<'a> {
    file: String,
    line: usize,
    column: usize,
    severity: &'static str,
    code: &'a str,
    message: &'a str,
}

fn json_diagnostics<'a>(
    file: &Path,
    text: &str,
    diagnostics: &'a [ParseDiagnostic],
) -> Vec<JsonDiagnostic<'a>> {
    let index = LineIndex::new(text);
    diagnostics
        .iter()
        .map(|d| {
            let (line, column) = index.line_col(d.span.start);
            JsonDiagnostic {
                file: file.display().to_string(),
                line,
                column,
                severity: severity_name(d.severity),
                code: d.code,
                message: &d.message,
            }
        })
        .collect()
}

/// `file:line:col: severity: message [code]`, one per line. Warnings are
/// dropped under `--quiet`.
fn print_diagnostics(
    ctx: &Ctx,
    out: &mut dyn Write,
    file: &Path,
    text: &str,
    diagnostics: &[ParseDiagnostic],
) -> io::Result<()> {
    if ctx.json {
        return Ok(());
    }
    for d in json_diagnostics(file, text, diagnostics) {
        if ctx.quiet && d.severity == "warning" {
            continue;
        }
        writeln!(
            out,
            "{}:{}:{}: {}: {} [{}]",
            d.file, d.line, d.column, d.severity, d.message, d.code
        )?;
    }
    Ok(())
}

fn cmd_check(ctx: &Ctx, files: &[PathBuf]) -> Result<()> {
    let texts = files.iter().map(|f| read(f)).collect::<Result<Vec<_>>>()?;
    let reports: Vec<_> = texts.iter().map(|t| check_text(t)).collect();
    let failed = reports.iter().any(|r| r.errors() > 0);

    if ctx.json {
        #[derive(Serialize)]
        struct FileReport<'a> {
            file: String,
            errors: usize,
            warnings: usize,
            invalid_regions: usize,
            diagnostics: Vec<JsonDiagnostic<'a>>,
        }
        let out: Vec<FileReport> = files
            .iter()
            .zip(&texts)
            .zip(&reports)
            .map(|((file, text), report)| FileReport {
                file: file.display().to_string(),
                errors: report.errors(),
                warnings: report.warnings(),
                invalid_regions: report.invalid_regions.len(),
                diagnostics: json_diagnostics(file, text, &report.diagnostics),
            })
            .collect();
        println!("{}", serde_json::to_string(&out)?);
    } else {
        for ((file, text), report) in files.iter().zip(&texts).zip(&reports) {
            print_diagnostics(ctx, &mut io::stdout(), file, text, &report.diagnostics)?;
            if !ctx.quiet {
                println!(
                    "{}: {} errors, {} warnings, {} invalid regions",
                    file.display(),
                    report.errors(),
                    report.warnings(),
                    report.invalid_regions.len()
                );
            }
        }
    }
    if failed {
        Err(Reported.into())
    } else {
        Ok(())
    }
}
