//! Command-line frontend: parse or compile an automaton, compute its hull,
//! enumerate sample points, or report structural facts. Built for scripts:
//! deterministic byte-identical output, machine-readable JSON on request,
//! diagnostics and traces on stderr.

use std::collections::BTreeSet;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use aahull::automaton::{
    check_block_aligned, parse_automaton, restrict, ArithmeticAutomaton, AutomatonError,
    StateClass, DEFAULT_MAX_STATES,
};
use aahull::compiler::{self, Domain};
use aahull::geometry::{FacetSystem, HConstraint, VPolyhedron};
use aahull::pipeline::{self, AnalyzeOptions};

#[derive(Parser)]
#[command(
    name = "aahull",
    about = "Exact rational convex hulls of sets recognized by arithmetic automata",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the hull of an automaton in a .aaut file (or stdin with `-`).
    Hull(HullArgs),
    /// Compile linear constraints into a .aaut automaton.
    Compile(CompileArgs),
    /// Enumerate sample members of the represented set.
    Enumerate(EnumerateArgs),
    /// Validate a .aaut file and report its structure.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct HullArgs {
    /// Path to the automaton, or `-` for stdin.
    path: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Which representation(s) to print.
    #[arg(long, value_enum, default_value_t = OutputKind::Both)]
    output: OutputKind,
    /// Machine-readable JSON on stdout.
    #[arg(long)]
    json: bool,
    /// Per-stage progress on stderr; never changes stdout.
    #[arg(long)]
    trace: bool,
    /// Reject automata needing the block-aligning product instead of
    /// applying it.
    #[arg(long)]
    no_normalize: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputKind {
    V,
    H,
    Both,
}

#[derive(Args)]
struct CompileArgs {
    /// Constraint file, or an inline system like "3*x1 - x2 > 0; x2 >= 0".
    input: String,
    /// Solution domain when the input does not declare one.
    #[arg(long, value_enum, default_value_t = DomainArg::Nat)]
    domain: DomainArg,
    /// Basis of decomposition when the input does not declare one.
    #[arg(long, default_value_t = 2)]
    basis: u32,
    /// Compute the hull of the compiled automaton instead of printing it.
    #[arg(long)]
    hull: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Nat,
    Int,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Path to the automaton, or `-` for stdin.
    path: String,
    /// Bound on integer digit blocks and decimal digits sampled.
    #[arg(long, default_value_t = 3)]
    depth: usize,
}

#[derive(Args)]
struct ValidateArgs {
    /// Path to the automaton, or `-` for stdin.
    path: String,
}

#[derive(Serialize)]
struct JsonHull {
    basis: String,
    dim: String,
    empty: bool,
    points: Vec<Vec<String>>,
    rays: Vec<Vec<String>>,
    facets: Vec<JsonConstraint>,
    equalities: Vec<JsonConstraint>,
}

#[derive(Serialize)]
struct JsonConstraint {
    a: Vec<String>,
    b: String,
    rel: String,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            // Anything user-facing (parse, validation, constraint syntax)
            // exits 2; internal invariant failures exit 1.
            let user_error = err.is::<AutomatonError>()
                || err.is::<compiler::CompileError>()
                || err.is::<std::io::Error>()
                || err
                    .downcast_ref::<pipeline::PipelineError>()
                    .is_some_and(is_input_error);
            ExitCode::from(if user_error { 2 } else { 1 })
        }
    }
}

fn is_input_error(err: &pipeline::PipelineError) -> bool {
    !matches!(err, pipeline::PipelineError::Internal(_))
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Hull(args) => {
            let automaton = load_automaton(&args.path)?;
            print_hull(&automaton, &args.output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compile(args) => {
            let text = if PathBuf::from(&args.input).is_file() {
                std::fs::read_to_string(&args.input)
                    .with_context(|| format!("reading {}", args.input))?
            } else {
                args.input.clone()
            };
            let source = compiler::parse_constraints(&text)?;
            let domain = match args.domain {
                DomainArg::Nat => Domain::Nat,
                DomainArg::Int => Domain::Int,
            };
            let system = compiler::system_from_source(&source, domain, args.basis)?;
            let automaton = compiler::compile_with_limit(&system, max_states())?;
            if args.hull {
                print_hull(&automaton, &args.output)?;
            } else {
                print!("{}", automaton.to_aaut());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate(args) => {
            if args.depth == 0 {
                return Err(anyhow!("--depth must be at least 1"));
            }
            let automaton = load_automaton(&args.path)?;
            let points: BTreeSet<_> = pipeline::enumerate_points(&automaton, args.depth)?;
            for p in points {
                println!("{p}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate(args) => {
            let automaton = load_automaton(&args.path)?;
            let report = aahull::automaton::validate(&automaton)?;
            let partition = &report.partition;
            println!("states {}", automaton.state_count());
            println!("live-core {}", report.live_core.len());
            println!("sign-states {}", partition.sign_states.len());
            println!("integer-states {}", partition.integer_states.len());
            println!("decimal-states {}", partition.decimal_states.len());
            let trimmed = automaton.restricted_to(&report.live_core);
            let repartition = aahull::automaton::partition_states(&trimmed)?;
            for (class, name) in [
                (StateClass::Sign, "sign"),
                (StateClass::Integer, "integer"),
                (StateClass::Decimal, "decimal"),
            ] {
                let g = restrict(&trimmed, &repartition, class);
                let aligned = check_block_aligned(&g, automaton.ctx().dim()).is_ok();
                println!("block-aligned {name} {}", if aligned { "yes" } else { "no" });
            }
            println!("live-acceptance-sets {}", report.live_sets.len());
            for set in &report.live_sets {
                let names: Vec<&str> = set.iter().map(|&q| automaton.name(q)).collect();
                println!("  {{ {} }}", names.join(" "));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn max_states() -> usize {
    std::env::var("AAHULL_MAX_STATES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_STATES)
}

fn load_automaton(path: &str) -> Result<ArithmeticAutomaton> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading stdin")?;
        buf
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?
    };
    Ok(parse_automaton(&text)?)
}

fn print_hull(automaton: &ArithmeticAutomaton, args: &OutputArgs) -> Result<()> {
    let options = AnalyzeOptions { max_states: max_states(), align: !args.no_normalize };
    let analysis = pipeline::analyze_with(automaton, &options, args.trace)?;
    if args.trace {
        for line in &analysis.trace {
            eprintln!("trace: {line}");
        }
    }
    let hull: &VPolyhedron = &analysis.hull;
    let ctx = automaton.ctx();

    let want_v = matches!(args.output, OutputKind::V | OutputKind::Both);
    let want_h = matches!(args.output, OutputKind::H | OutputKind::Both);
    let facets: Option<FacetSystem> = if want_h && !hull.is_empty() {
        Some(hull.facets()?)
    } else {
        None
    };

    if args.json {
        let to_strings = |v: &aahull::geometry::QVec| -> Vec<String> {
            v.entries().iter().map(|e| e.to_string()).collect()
        };
        let constraint = |c: &HConstraint, rel: &str| JsonConstraint {
            a: c.coeffs.iter().map(|a| a.to_string()).collect(),
            b: c.bound.to_string(),
            rel: rel.to_string(),
        };
        let json = JsonHull {
            basis: ctx.basis().to_string(),
            dim: ctx.dim().to_string(),
            empty: hull.is_empty(),
            points: if want_v {
                hull.points().iter().map(to_strings).collect()
            } else {
                vec![]
            },
            rays: if want_v {
                hull.rays().iter().map(to_strings).collect()
            } else {
                vec![]
            },
            facets: facets
                .as_ref()
                .map(|f| f.inequalities.iter().map(|c| constraint(c, "<=")).collect())
                .unwrap_or_default(),
            equalities: facets
                .as_ref()
                .map(|f| f.equalities.iter().map(|c| constraint(c, "=")).collect())
                .unwrap_or_default(),
        };
        println!("{}", serde_json::to_string_pretty(&json)?);
        return Ok(());
    }

    println!("basis {}", ctx.basis());
    println!("dim {}", ctx.dim());
    if hull.is_empty() {
        println!("empty");
        return Ok(());
    }
    if want_v {
        for p in hull.points() {
            println!("point {p}");
        }
        for r in hull.rays() {
            println!("ray {r}");
        }
    }
    if let Some(facets) = facets {
        for c in &facets.equalities {
            println!("equality {}", c.render("="));
        }
        for c in &facets.inequalities {
            println!("facet {}", c.render("<="));
        }
    }
    Ok(())
}
