//! `ifc`: run labeled monadic programs over a policy-labeled database, show
//! an observer's view of a configuration, and execute the law and theorem
//! suites.
//!
//! Exit codes for `run`: 0 on termination, 2 on fuel exhaustion, 1 on parse
//! or validation errors. `check` exits 0 iff no suite reported a failure.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ifc_core::erase::erase_program;
use ifc_core::eval::{eval_with, Fuel, Mutation, StepOutcome};
use ifc_core::label::{ConfIntegLabel, Label, PowersetLabel, TwoPointLabel};
use ifc_core::meta::{run_suite, GenConfig, Suite};
use ifc_core::term::Program;
use ifc_core::text::{
    db_digest, db_to_json, parse_db, parse_program, render_db_pretty, render_program, render_term,
};

#[derive(Parser)]
#[command(name = "ifc", version, about = "Label-based information-flow interpreter and property fuzzer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a program against a database until it stops or runs out of
    /// fuel.
    Run(RunArgs),
    /// Print the observer's view of a program and its database, in the same
    /// file formats.
    Erase(EraseArgs),
    /// Run law and theorem suites over generated programs.
    Check(CheckArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Program file (s-expression grammar).
    program: PathBuf,
    /// Database file (JSON).
    db: PathBuf,
    #[arg(long, default_value = "twopoint")]
    lattice: String,
    #[arg(long, default_value_t = 1000)]
    fuel: u64,
    /// Print each top-level step; `--trace=full` prints whole databases
    /// instead of digests.
    #[arg(long, value_name = "MODE", num_args = 0..=1, default_missing_value = "digest")]
    trace: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EraseArgs {
    program: PathBuf,
    db: PathBuf,
    #[arg(long, default_value = "twopoint")]
    lattice: String,
    /// Observer label (defaults to bottom).
    #[arg(long)]
    observer: Option<String>,
    /// Write the erased program here instead of stdout.
    #[arg(long)]
    out_program: Option<PathBuf>,
    /// Write the erased database here instead of stdout.
    #[arg(long)]
    out_db: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// laws | safety | idempotence | monotonicity | simulation |
    /// simulation-star | noninterference | all
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 1000)]
    fuel: u64,
    #[arg(long, default_value = "twopoint")]
    lattice: String,
    /// Observer label (defaults to bottom).
    #[arg(long)]
    observer: Option<String>,
    #[arg(long)]
    json: bool,
    /// Run the evaluator with a known-leaky rule variant; the
    /// noninterference suite must then fail. One of
    /// insert-skip-value-taint | update-skip-table-taint.
    #[arg(long)]
    mutate: Option<String>,
}

/// Which lattice instance the files and generators use.
enum Lattice {
    TwoPoint,
    Powerset(Vec<String>),
    ConfInteg,
}

fn parse_lattice(s: &str) -> Result<Lattice> {
    if s == "twopoint" {
        return Ok(Lattice::TwoPoint);
    }
    if s == "confinteg" {
        return Ok(Lattice::ConfInteg);
    }
    if let Some(rest) = s.strip_prefix("powerset:") {
        let principals: Vec<String> = rest.split(',').map(str::to_string).collect();
        if principals.iter().any(String::is_empty) {
            bail!("empty principal in `{s}`");
        }
        if principals.len() > 6 {
            bail!("at most 6 principals supported (law checking is exhaustive)");
        }
        let mut sorted = principals.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != principals.len() {
            bail!("duplicate principal in `{s}`");
        }
        return Ok(Lattice::Powerset(sorted));
    }
    bail!("unknown lattice `{s}`: expected twopoint, powerset:A,B,..., or confinteg")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run(args) => dispatch_run(&args),
        Command::Erase(args) => dispatch_erase(&args),
        Command::Check(args) => dispatch_check(&args),
    };
    match code {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch_run(args: &RunArgs) -> Result<ExitCode> {
    match parse_lattice(&args.lattice)? {
        Lattice::TwoPoint => run_cmd::<TwoPointLabel>(args, &[]),
        Lattice::Powerset(universe) => run_cmd::<PowersetLabel>(args, &universe),
        Lattice::ConfInteg => run_cmd::<ConfIntegLabel<TwoPointLabel>>(args, &[]),
    }
}

fn dispatch_erase(args: &EraseArgs) -> Result<ExitCode> {
    match parse_lattice(&args.lattice)? {
        Lattice::TwoPoint => erase_cmd::<TwoPointLabel>(args, &[]),
        Lattice::Powerset(universe) => erase_cmd::<PowersetLabel>(args, &universe),
        Lattice::ConfInteg => erase_cmd::<ConfIntegLabel<TwoPointLabel>>(args, &[]),
    }
}

fn dispatch_check(args: &CheckArgs) -> Result<ExitCode> {
    match parse_lattice(&args.lattice)? {
        Lattice::TwoPoint => {
            check_cmd::<TwoPointLabel>(args, vec![TwoPointLabel::Public, TwoPointLabel::Secret])
        }
        Lattice::Powerset(universe) => {
            check_cmd::<PowersetLabel>(args, PowersetLabel::all_subsets(&universe))
        }
        Lattice::ConfInteg => {
            let pool = [TwoPointLabel::Public, TwoPointLabel::Secret]
                .iter()
                .flat_map(|c| {
                    [TwoPointLabel::Public, TwoPointLabel::Secret]
                        .map(|i| ConfIntegLabel::new(*c, i))
                })
                .collect();
            check_cmd::<ConfIntegLabel<TwoPointLabel>>(args, pool)
        }
    }
}

/// Loads and validates a program + database pair; all labels must belong to
/// the selected lattice (for powersets, to the declared universe).
fn load<L: Label>(
    program_path: &PathBuf,
    db_path: &PathBuf,
    universe: &[String],
) -> Result<Program<L>> {
    let program_src = std::fs::read_to_string(program_path)
        .with_context(|| format!("reading {}", program_path.display()))?;
    let db_src =
        std::fs::read_to_string(db_path).with_context(|| format!("reading {}", db_path.display()))?;
    let parsed = parse_program::<L>(&program_src)
        .map_err(|e| anyhow!("{}: {e}", program_path.display()))?;
    let db = parse_db::<L>(&db_src).map_err(|e| anyhow!("{}: {e}", db_path.display()))?;

    let report = db.validate();
    if !report.passed() {
        let mut msg = String::from("database policy validation failed:");
        for v in &report.violations {
            msg.push_str(&format!("\n  {v}"));
        }
        bail!(msg);
    }
    let program = parsed.assemble(db);
    check_universe(&program, universe)?;
    Ok(program)
}

/// Powerset labels in files must mention only declared principals.
fn check_universe<L: Label>(program: &Program<L>, universe: &[String]) -> Result<()> {
    if universe.is_empty() {
        return Ok(());
    }
    let mut bad: Option<String> = None;
    let mut check = |l: &L| {
        if bad.is_none() {
            let rendered = l.render();
            if let Ok(ps) = PowersetLabel::parse(&rendered) {
                if !ps.is_subset_of_universe(universe) {
                    bad = Some(rendered);
                }
            }
        }
    };
    program.db().for_each_label(&mut check);
    if let Program::Pg { label, term, .. } = program {
        check(label);
        term.for_each_label(&mut check);
    }
    match bad {
        Some(l) => bail!("label {l} uses principals outside the declared universe"),
        None => Ok(()),
    }
}

/// One observed top-level configuration. The first entry is the input
/// configuration; labels along a trace are monotone under the lattice
/// order.
struct TraceEntry {
    step: u64,
    label: Option<String>,
    term: String,
    /// Digest of the canonical database rendering, or the whole database
    /// under `--trace=full`.
    db: serde_json::Value,
}

struct RunTrace {
    entries: Vec<TraceEntry>,
    full: bool,
}

impl RunTrace {
    fn new(full: bool) -> Self {
        RunTrace { entries: Vec::new(), full }
    }

    fn record<L: Label>(&mut self, step: u64, p: &Program<L>) {
        let (label, term) = match p {
            Program::Pg { label, term, .. } => (Some(label.render()), render_term(term)),
            Program::Hole { .. } => (None, "pghole".to_string()),
        };
        let db = if self.full {
            db_to_json(p.db())
        } else {
            serde_json::json!(db_digest(p.db()))
        };
        self.entries.push(TraceEntry { step, label, term, db });
    }

    fn print_text(&self) {
        for e in &self.entries {
            let state = e
                .label
                .as_ref()
                .map_or("pghole".to_string(), |l| format!("pg {l} {}", e.term));
            if self.full {
                println!("step {}: {state}\n  db: {}", e.step, e.db);
            } else {
                println!("step {}: {state} db={}", e.step, e.db.as_str().unwrap_or_default());
            }
        }
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "step": e.step,
                        "label": e.label,
                        "term": e.term,
                        if self.full { "db" } else { "dbDigest" }: e.db,
                    })
                })
                .collect(),
        )
    }
}

fn run_cmd<L: Label>(args: &RunArgs, universe: &[String]) -> Result<ExitCode> {
    let mut program = load::<L>(&args.program, &args.db, universe)?;
    let trace = match args.trace.as_deref() {
        None => None,
        Some("digest") => Some(RunTrace::new(false)),
        Some("full") => Some(RunTrace::new(true)),
        Some(other) => bail!("unknown trace mode `{other}`"),
    };
    let mut trace = trace;

    let mut fuel = Fuel::new(args.fuel);
    let mut steps = 0u64;
    if let Some(t) = trace.as_mut() {
        t.record(0, &program);
    }
    let outcome = loop {
        let stop = match &program {
            Program::Hole { .. } => true,
            Program::Pg { term, .. } => term.is_value(),
        };
        if stop {
            break Ok(program);
        }
        match eval_with(program, &mut fuel, Mutation::None) {
            StepOutcome::Stepped(next) => {
                steps += 1;
                if let Some(t) = trace.as_mut() {
                    t.record(steps, &next);
                }
                program = next;
            }
            StepOutcome::Exhausted(last) => break Err(last),
        }
    };

    let fuel_used = args.fuel - fuel.remaining();
    let (terminated, final_program) = match &outcome {
        Ok(p) => (true, p),
        Err(p) => (false, p),
    };
    if args.json {
        let out = serde_json::json!({
            "outcome": if terminated { "terminated" } else { "fuel-exhausted" },
            "label": final_program.current_label().map(Label::render),
            "term": final_program.term().map(render_term),
            "db": db_to_json(final_program.db()),
            "fuelUsed": fuel_used,
            "trace": trace.as_ref().map(RunTrace::to_json),
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        if let Some(t) = &trace {
            t.print_text();
        }
        if !terminated {
            println!("fuel exhausted after {fuel_used} steps; last configuration:");
        }
        println!("{}", render_program(final_program));
        println!("{}", render_db_pretty(final_program.db()));
    }
    Ok(ExitCode::from(if terminated { 0 } else { 2 }))
}

fn erase_cmd<L: Label>(args: &EraseArgs, universe: &[String]) -> Result<ExitCode> {
    let program = load::<L>(&args.program, &args.db, universe)?;
    let observer = match &args.observer {
        Some(s) => L::parse(s).map_err(|e| anyhow!("--observer: {e}"))?,
        None => L::bottom(),
    };
    let erased = erase_program(&observer, &program);
    let program_text = render_program(&erased);
    let db_text = render_db_pretty(erased.db());
    match &args.out_program {
        Some(path) => std::fs::write(path, format!("{program_text}\n"))?,
        None => println!("{program_text}"),
    }
    match &args.out_db {
        Some(path) => std::fs::write(path, format!("{db_text}\n"))?,
        None => println!("{db_text}"),
    }
    Ok(ExitCode::from(0))
}

fn check_cmd<L: Label>(args: &CheckArgs, pool: Vec<L>) -> Result<ExitCode> {
    let observer = match &args.observer {
        Some(s) => L::parse(s).map_err(|e| anyhow!("--observer: {e}"))?,
        None => L::bottom(),
    };
    let mutation = match &args.mutate {
        None => Mutation::None,
        Some(s) => Mutation::parse(s)
            .ok_or_else(|| anyhow!("unknown mutation `{s}`"))?,
    };
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::all().to_vec()
    } else {
        vec![Suite::parse(&args.suite).ok_or_else(|| anyhow!("unknown suite `{}`", args.suite))?]
    };

    let mut cfg = GenConfig::new(pool, observer);
    cfg.seed = args.seed;
    cfg.trials = args.trials;
    cfg.fuel = args.fuel;

    let reports: Vec<_> = suites.iter().map(|s| run_suite(&cfg, *s, mutation)).collect();
    if args.json {
        println!("{}", serde_json::to_string_pretty(&reports)?);
    } else {
        for report in &reports {
            print!("{}", report.to_text());
        }
    }
    let clean = reports.iter().all(|r| r.zero_failures());
    Ok(ExitCode::from(if clean { 0 } else { 1 }))
}
