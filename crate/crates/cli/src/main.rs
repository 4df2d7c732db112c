mod cache;

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use stacklab::bracket::{jones_capped, kauffman_bracket_capped, DEFAULT_STATE_CAP};
use stacklab::expected::expected;
use stacklab::grouppres::{abelianization, is_free, parse_presentation, tietze_simplify, wirtinger, Abelianization, DEFAULT_BUDGET};
use stacklab::kishino::{enumerate_variants, identify, KishinoLabel};
use stacklab::permcensus::{census, DEFAULT_MAX_GENERATORS};
use stacklab::pipeline::{group_census, PipelineOptions};
use stacklab::report::{build_report, Cache, ReportOptions};
use stacklab::{build_stack, parse_diagram, StackSequence, VirtualDiagram};

use cache::FileCache;

#[derive(Parser)]
#[command(name = "stacklab", version, about = "Stacks of virtual link diagrams and their invariants")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "STACKLAB_THREADS")]
    threads: Option<usize>,
    /// Result cache directory.
    #[arg(long, global = true, default_value = ".stacklab-cache")]
    cache: PathBuf,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Same as `--format pretty`.
    #[arg(long, global = true)]
    pretty: bool,
    /// Largest classical crossing count for the bracket state sum.
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,
    /// Tietze simplification step budget.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Symmetric group degree for epimorphism counts.
    #[arg(long, global = true, default_value_t = 5)]
    degree: usize,
    /// Refuse censuses of presentations with more generators than this.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_GENERATORS)]
    max_generators: usize,
    /// Zero all timings so output is reproducible byte for byte.
    #[arg(long, global = true)]
    deterministic: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a diagram and report its basic data.
    Parse(Input),
    /// Build a stack of a diagram.
    Stack {
        /// Layer signs, top layer first, e.g. "+-".
        #[arg(long)]
        layers: String,
        #[command(flatten)]
        input: Input,
    },
    /// Wirtinger presentation of a diagram (or a stack of it), simplified.
    Group(StackedInput),
    /// Count epimorphisms onto S_n of a presentation or a diagram's group.
    EpiCount(StackedInput),
    /// Jones polynomial in t.
    Jones(StackedInput),
    /// Kauffman bracket in A.
    Bracket(StackedInput),
    /// Kishino fixture recovery.
    Kishino {
        #[command(subcommand)]
        command: KishinoCommand,
    },
    /// Reproduce every reference census and Jones value.
    Report,
}

#[derive(Subcommand)]
enum KishinoCommand {
    /// Match the 16 over/under variants of the Kishino shadow to the labels.
    Identify {
        /// Also write `<label>.pd` and `<label>.json` into this directory.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Input {
    /// Input file; stdin when absent or `-`.
    file: Option<PathBuf>,
}

#[derive(Args)]
struct StackedInput {
    /// Stack the diagram first, e.g. "+-".
    #[arg(long)]
    layers: Option<String>,
    #[command(flatten)]
    input: Input,
}

enum Failure {
    Usage(String),
    Compute(String),
}

type Outcome = Result<(serde_json::Value, String), Failure>;

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn compute<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Compute(e.to_string())
}

fn read_input(input: &Input) -> Result<String, Failure> {
    match input.file.as_deref() {
        None => read_stdin(),
        Some(p) if p == Path::new("-") => read_stdin(),
        Some(p) => fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display()))),
    }
}

fn read_stdin() -> Result<String, Failure> {
    let mut s = String::new();
    io::stdin().read_to_string(&mut s).map_err(usage)?;
    Ok(s)
}

fn read_diagram(input: &StackedInput) -> Result<VirtualDiagram, Failure> {
    read_diagram_text(&read_input(&input.input)?, input.layers.as_deref())
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("output serializes")
}

fn abelian_text(a: &Abelianization) -> String {
    let mut parts: Vec<String> = a.divisors.iter().map(|d| format!("Z/{d}")).collect();
    match a.free_rank {
        0 => {}
        1 => parts.push("Z".into()),
        r => parts.push(format!("Z^{r}")),
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn summarize(d: &VirtualDiagram) -> (serde_json::Value, String) {
    let gauss = d.gauss_code().ok();
    let v = json!({
        "classical_crossings": d.classical_count(),
        "virtual_crossings": d.virtual_count(),
        "components": d.components(),
        "writhe": d.writhe(),
        "gauss_code": gauss,
        "pd": d.to_pd(),
        "diagram": d,
    });
    let mut t = format!(
        "{} classical, {} virtual crossings; {} component(s); writhe {}\n{}\n",
        d.classical_count(),
        d.virtual_count(),
        d.components(),
        d.writhe(),
        d.to_pd()
    );
    if let Some(g) = gauss {
        t.push_str(&format!("gauss code {g}\n"));
    }
    (v, t)
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let opts = PipelineOptions {
        degree: g.degree,
        budget: g.budget,
        max_generators: g.max_generators,
        state_cap: g.state_cap,
    };
    match &cli.command {
        Command::Parse(input) => {
            let d = parse_diagram(&read_input(input)?).map_err(usage)?;
            let bad = d.validate();
            if !bad.is_empty() {
                let list: Vec<String> = bad.iter().map(|v| v.to_string()).collect();
                return Err(Failure::Usage(list.join("; ")));
            }
            Ok(summarize(&d))
        }
        Command::Stack { layers, input } => {
            let d = parse_diagram(&read_input(input)?).map_err(usage)?;
            let seq: StackSequence = layers.parse().map_err(usage)?;
            let s = build_stack(&d, &seq).map_err(compute)?;
            let (_, text) = summarize(&s);
            Ok((to_value(&s), text))
        }
        Command::Group(input) => {
            let d = read_diagram(input)?;
            let w = wirtinger(&d);
            let s = tietze_simplify(&w, g.budget);
            let ab = abelianization(&s.presentation);
            let free = is_free(&s.presentation);
            let text = format!(
                "wirtinger: {} generators, {} relators\nsimplified: {}\nabelianization: {}\n{}",
                w.generator_count,
                w.relators.len(),
                s.presentation,
                abelian_text(&ab),
                if s.partial { "tietze budget exhausted\n" } else { "" }
            );
            let v = json!({
                "wirtinger": w,
                "simplified": s.presentation,
                "tietze_steps": s.steps,
                "partial": s.partial,
                "free_rank": free,
                "abelianization": ab,
            });
            Ok((v, text))
        }
        Command::EpiCount(input) => {
            let text = read_input(&input.input)?;
            let t = text.trim_start();
            let is_pres = t.starts_with('<') || (t.starts_with('{') && t.contains("\"generator_count\""));
            let mut report = if is_pres {
                if input.layers.is_some() {
                    return Err(Failure::Usage("--layers applies to diagram input only".into()));
                }
                let p = parse_presentation(&text).map_err(usage)?;
                census(&p, g.degree, g.max_generators).map_err(compute)?
            } else {
                let d = read_diagram_text(&text, input.layers.as_deref())?;
                group_census(&d, &opts).map_err(compute)?.census
            };
            if g.deterministic {
                report.elapsed_ms = 0;
            }
            let text = format!(
                "S{}: {} homomorphisms, {} epimorphisms, {} up to conjugation\n",
                report.degree, report.total_homs, report.total_epis, report.orbit_count
            );
            Ok((to_value(&report), text))
        }
        Command::Jones(input) => {
            let d = read_diagram(input)?;
            let j = jones_capped(&d, g.state_cap).map_err(compute)?;
            let v = json!({ "jones": j.to_string(), "q_terms": j.0.terms().collect::<Vec<_>>() });
            Ok((v, format!("{j}\n")))
        }
        Command::Bracket(input) => {
            let d = read_diagram(input)?;
            let b = kauffman_bracket_capped(&d, g.state_cap).map_err(compute)?;
            let v = json!({ "bracket": b.to_string(), "a_terms": b.0.terms().collect::<Vec<_>>() });
            Ok((v, format!("{b}\n")))
        }
        Command::Kishino { command: KishinoCommand::Identify { fixtures } } => {
            let id = identify(&enumerate_variants(), expected(), &opts);
            if let Some(dir) = fixtures {
                fs::create_dir_all(dir).map_err(compute)?;
                for b in &id.bindings {
                    let base = dir.join(b.label.name());
                    fs::write(base.with_extension("pd"), format!("{}\n", b.pd)).map_err(compute)?;
                    fs::write(base.with_extension("json"), format!("{}\n", b.diagram.to_json())).map_err(compute)?;
                }
            }
            let mut text = String::new();
            for label in KishinoLabel::ALL {
                match (id.get(label), id.failures.iter().find(|f| f.label == label)) {
                    (Some(b), _) => {
                        let note = if b.exact { String::new() } else { format!("  nearest; differs in {}", b.mismatches.join(", ")) };
                        text.push_str(&format!("{:<9} {}  {}{note}\n", label.name(), b.mask, b.pd));
                    }
                    (None, Some(f)) => text.push_str(&format!("{:<9} unbound: {}\n", label.name(), f.reason)),
                    (None, None) => {}
                }
            }
            Ok((to_value(&id), text))
        }
        Command::Report => {
            let ropts = ReportOptions { pipeline: opts.clone(), deterministic: g.deterministic };
            let id = identify(&enumerate_variants(), expected(), &opts);
            let file_cache = if g.no_cache { None } else { Some(FileCache::open(g.cache.clone()).map_err(compute)?) };
            let report = build_report(&id, expected(), &ropts, file_cache.as_ref().map(|c| c as &dyn Cache));
            let errors: Vec<String> = report
                .rows
                .iter()
                .filter(|r| r.status == stacklab::report::Status::Error)
                .map(|r| format!("{} {}: {}", r.label, r.stack.as_deref().unwrap_or(""), r.error.as_deref().unwrap_or("")))
                .collect();
            if !errors.is_empty() {
                return Err(Failure::Compute(errors.join("\n")));
            }
            Ok((to_value(&report), report.render()))
        }
    }
}

fn read_diagram_text(text: &str, layers: Option<&str>) -> Result<VirtualDiagram, Failure> {
    let d = parse_diagram(text).map_err(usage)?;
    match layers {
        None => Ok(d),
        Some(l) => build_stack(&d, &l.parse().map_err(usage)?).map_err(compute),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("thread pool configured once");
    }
    let pretty = cli.global.pretty || cli.global.format == Format::Pretty;
    match run(&cli) {
        Ok((value, text)) => {
            if pretty {
                print!("{text}");
            } else {
                println!("{}", serde_json::to_string_pretty(&value).expect("output serializes"));
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
