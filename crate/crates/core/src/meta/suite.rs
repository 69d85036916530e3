//! Suite runners: execute a property over many seeded trials (in parallel,
//! with deterministic reports), aggregate verdicts, and minimize the first
//! failure.

use rayon::prelude::*;
use serde::Serialize;

use crate::erase::{erase_db, erase_program, erase_term};
use crate::eval::{eval_star_logged, Fuel, Mutation, Outcome, StepRecord};
use crate::label::{check_laws, Label};
use crate::term::Program;
use crate::text::{render_db, render_program};

use super::checks::{
    check_noninterference_star_with, check_noninterference_with, check_simulation_star_with,
    check_simulation_with, divergence, FailWitness, Verdict,
};
use super::gen::{gen_low_equiv_pair, gen_program, trial_seed, GenConfig};
use super::shrink::{shrink_failure, witness_still_fails};

/// The named property suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Laws,
    Safety,
    Idempotence,
    Monotonicity,
    Simulation,
    SimulationStar,
    Noninterference,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Laws => "laws",
            Suite::Safety => "safety",
            Suite::Idempotence => "idempotence",
            Suite::Monotonicity => "monotonicity",
            Suite::Simulation => "simulation",
            Suite::SimulationStar => "simulation-star",
            Suite::Noninterference => "noninterference",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "laws" => Some(Suite::Laws),
            "safety" => Some(Suite::Safety),
            "idempotence" => Some(Suite::Idempotence),
            "monotonicity" => Some(Suite::Monotonicity),
            "simulation" => Some(Suite::Simulation),
            "simulation-star" => Some(Suite::SimulationStar),
            "noninterference" => Some(Suite::Noninterference),
            _ => None,
        }
    }

    pub fn all() -> [Suite; 7] {
        [
            Suite::Laws,
            Suite::Safety,
            Suite::Idempotence,
            Suite::Monotonicity,
            Suite::Simulation,
            Suite::SimulationStar,
            Suite::Noninterference,
        ]
    }
}

/// A failing trial, rendered in the program/database file formats so it can
/// be replayed.
#[derive(Debug, Clone, Serialize)]
pub struct FailureReport {
    pub trial: u64,
    pub trial_seed: u64,
    pub property: String,
    pub divergence: String,
    pub program: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub program_alt: Option<String>,
    pub database: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub database_alt: Option<String>,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimized: Option<MinimizedWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimizedWitness {
    pub program: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub program_alt: Option<String>,
    pub database: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub database_alt: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawSummary {
    pub domain_size: usize,
    pub triples_per_law: u64,
    pub quadruples_per_law: u64,
    pub violations: Vec<String>,
}

/// Deterministic result of running one suite: identical configuration and
/// seed produce an identical report, including its serialized form.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: u64,
    pub passed: u64,
    pub failed: u64,
    pub inconclusive: u64,
    pub failures: Vec<FailureReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub laws: Option<LawSummary>,
}

impl SuiteReport {
    pub fn zero_failures(&self) -> bool {
        self.failed == 0
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "suite={} seed={} trials={} passed={} failed={} inconclusive={}\n",
            self.suite, self.seed, self.trials, self.passed, self.failed, self.inconclusive
        );
        if let Some(laws) = &self.laws {
            out.push_str(&format!(
                "  domain={} triples/law={} quadruples/law={}\n",
                laws.domain_size, laws.triples_per_law, laws.quadruples_per_law
            ));
            for v in &laws.violations {
                out.push_str(&format!("  violation: {v}\n"));
            }
        }
        for f in &self.failures {
            out.push_str(&format!(
                "  FAIL trial={} seed={} property={} divergence={}\n",
                f.trial, f.trial_seed, f.property, f.divergence
            ));
            out.push_str(&format!("    program: {}\n", f.program));
            if let Some(alt) = &f.program_alt {
                out.push_str(&format!("    program': {alt}\n"));
            }
            out.push_str(&format!("    db: {}\n", f.database));
            if let Some(alt) = &f.database_alt {
                out.push_str(&format!("    db': {alt}\n"));
            }
            out.push_str(&format!("    lhs: {}\n", f.lhs));
            out.push_str(&format!("    rhs: {}\n", f.rhs));
            if let Some(min) = &f.minimized {
                out.push_str(&format!("    minimized: {}\n", min.program));
                if let Some(alt) = &min.program_alt {
                    out.push_str(&format!("    minimized': {alt}\n"));
                }
                out.push_str(&format!("    minimized-db: {}\n", min.database));
                if let Some(alt) = &min.database_alt {
                    out.push_str(&format!("    minimized-db': {alt}\n"));
                }
            }
        }
        out
    }
}

/// Runs the named suite over `cfg.trials` seeded trials. Trials execute in
/// parallel; reports are identical to a serial run for the same seeds.
pub fn run_suite<L: Label>(cfg: &GenConfig<L>, suite: Suite, mutation: Mutation) -> SuiteReport {
    match suite {
        Suite::Laws => laws_report(cfg),
        _ => trials_report(cfg, suite, mutation),
    }
}

fn laws_report<L: Label>(cfg: &GenConfig<L>) -> SuiteReport {
    let report = check_laws(&cfg.labels);
    let passed = report.passed();
    SuiteReport {
        suite: Suite::Laws.name().to_string(),
        seed: cfg.seed,
        trials: 1,
        passed: passed as u64,
        failed: (!passed) as u64,
        inconclusive: 0,
        failures: Vec::new(),
        laws: Some(LawSummary {
            domain_size: report.domain_size,
            triples_per_law: report.triples_per_law,
            quadruples_per_law: report.quadruples_per_law,
            violations: report.violations.iter().map(|v| v.to_string()).collect(),
        }),
    }
}

const MAX_REPORTED_FAILURES: usize = 8;

fn trials_report<L: Label>(cfg: &GenConfig<L>, suite: Suite, mutation: Mutation) -> SuiteReport {
    let verdicts: Vec<(u64, u64, Verdict<L>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(cfg.seed, i);
            (i, seed, run_trial(cfg, suite, seed, mutation))
        })
        .collect();

    let mut passed = 0;
    let mut failed = 0;
    let mut inconclusive = 0;
    let mut failures = Vec::new();
    for (trial, seed, verdict) in verdicts {
        match verdict {
            Verdict::Pass { .. } => passed += 1,
            Verdict::Inconclusive { .. } => inconclusive += 1,
            Verdict::Fail(mut witness) => {
                failed += 1;
                witness.seed = seed;
                if failures.len() < MAX_REPORTED_FAILURES {
                    let minimize = failures.is_empty();
                    failures.push(render_failure(cfg, trial, &witness, mutation, minimize));
                }
            }
        }
    }
    SuiteReport {
        suite: suite.name().to_string(),
        seed: cfg.seed,
        trials: cfg.trials,
        passed,
        failed,
        inconclusive,
        failures,
        laws: None,
    }
}

fn render_failure<L: Label>(
    cfg: &GenConfig<L>,
    trial: u64,
    witness: &FailWitness<L>,
    mutation: Mutation,
    minimize: bool,
) -> FailureReport {
    let minimized = if minimize {
        let smaller = shrink_failure(&cfg.observer, cfg.fuel, mutation, witness);
        if witness_still_fails(&cfg.observer, cfg.fuel, mutation, witness.property, &smaller) {
            Some(MinimizedWitness {
                program: render_program(&smaller[0]),
                program_alt: smaller.get(1).map(render_program),
                database: render_db(smaller[0].db()),
                database_alt: smaller.get(1).map(|p| render_db(p.db())),
            })
        } else {
            None
        }
    } else {
        None
    };
    FailureReport {
        trial,
        trial_seed: witness.seed,
        property: witness.property.to_string(),
        divergence: witness.first_divergence.clone(),
        program: render_program(&witness.programs[0]),
        program_alt: witness.programs.get(1).map(render_program),
        database: render_db(witness.programs[0].db()),
        database_alt: witness.programs.get(1).map(|p| render_db(p.db())),
        lhs: render_program(&witness.lhs),
        rhs: render_program(&witness.rhs),
        minimized,
    }
}

fn run_trial<L: Label>(cfg: &GenConfig<L>, suite: Suite, seed: u64, mutation: Mutation) -> Verdict<L> {
    match suite {
        Suite::Laws => unreachable!("laws suite has no trials"),
        Suite::Simulation => {
            let p = gen_program(cfg, seed);
            check_simulation_with(&cfg.observer, &p, cfg.fuel, mutation)
        }
        Suite::SimulationStar => {
            let p = gen_program(cfg, seed);
            check_simulation_star_with(&cfg.observer, &p, cfg.fuel, mutation)
        }
        Suite::Noninterference => {
            let (p1, p2) = gen_low_equiv_pair(cfg, seed);
            let single = check_noninterference_with(&cfg.observer, &p1, &p2, cfg.fuel, mutation);
            if single.is_fail() {
                return single;
            }
            let star = check_noninterference_star_with(&cfg.observer, &p1, &p2, cfg.fuel, mutation);
            match (single, star) {
                (_, fail @ Verdict::Fail(_)) => fail,
                (Verdict::Inconclusive { fuel_exhausted: a }, Verdict::Inconclusive { fuel_exhausted: b }) => {
                    Verdict::Inconclusive { fuel_exhausted: a + b }
                }
                (Verdict::Inconclusive { fuel_exhausted }, _)
                | (_, Verdict::Inconclusive { fuel_exhausted }) => {
                    Verdict::Inconclusive { fuel_exhausted }
                }
                _ => Verdict::Pass { trials: 1 },
            }
        }
        Suite::Idempotence => idempotence_trial(cfg, seed),
        Suite::Monotonicity => monotonicity_trial(cfg, seed, mutation),
        Suite::Safety => safety_trial(cfg, seed, mutation),
    }
}

fn fail_here<L: Label>(
    property: &'static str,
    input: &Program<L>,
    lhs: Program<L>,
    rhs: Program<L>,
) -> Verdict<L> {
    Verdict::Fail(Box::new(FailWitness {
        seed: 0,
        property,
        programs: vec![input.clone()],
        database: input.db().clone(),
        first_divergence: divergence(&lhs, &rhs),
        lhs,
        rhs,
    }))
}

/// Erasing twice equals erasing once, for the generated term, program and
/// database.
fn idempotence_trial<L: Label>(cfg: &GenConfig<L>, seed: u64) -> Verdict<L> {
    let p = gen_program(cfg, seed);
    let obs = &cfg.observer;

    if let Program::Pg { term, db, label } = &p {
        let once = erase_term(obs, term);
        let twice = erase_term(obs, &once);
        if once != twice {
            let mk = |t| Program::Pg { label: label.clone(), db: db.clone(), term: t };
            return fail_here("idempotence-term", &p, mk(once), mk(twice));
        }
    }
    let once = erase_program(obs, &p);
    let twice = erase_program(obs, &once);
    if once != twice {
        return fail_here("idempotence-program", &p, once, twice);
    }
    let db_once = erase_db(obs, p.db());
    let db_twice = erase_db(obs, &db_once);
    if db_once != db_twice {
        let mk = |db| Program::Hole { db };
        return fail_here("idempotence-db", &p, mk(db_once), mk(db_twice));
    }
    Verdict::Pass { trials: 1 }
}

/// The current label never decreases: checked per step (via the step log)
/// and end to end for terminated runs.
fn monotonicity_trial<L: Label>(cfg: &GenConfig<L>, seed: u64, mutation: Mutation) -> Verdict<L> {
    let p = gen_program(cfg, seed);
    let mut log: Vec<StepRecord<L>> = Vec::new();
    let outcome = eval_star_logged(p.clone(), &mut Fuel::new(cfg.fuel), mutation, &mut log);
    for record in &log {
        if !record.label_before.can_flow_to(&record.label_after) {
            return fail_here("monotonicity-step", &p, p.clone(), outcome.program().clone());
        }
    }
    match outcome {
        Outcome::FuelExhausted(_) => Verdict::Inconclusive { fuel_exhausted: 1 },
        Outcome::Terminated(q) => {
            let start = p.current_label().expect("generated programs are not holes");
            let end = q.current_label().expect("evaluation preserves non-holes");
            if start.can_flow_to(end) {
                Verdict::Pass { trials: 1 }
            } else {
                fail_here("monotonicity", &p, p.clone(), q.clone())
            }
        }
    }
}

/// Generator contracts and evaluation-time safety: generated programs are
/// write-safe over valid databases; every eval application preserves write
/// safety; row counts only change under a current label that flows into the
/// table label; database values survive erasure as database values.
fn safety_trial<L: Label>(cfg: &GenConfig<L>, seed: u64, mutation: Mutation) -> Verdict<L> {
    let p = gen_program(cfg, seed);
    if !p.is_safe() || !p.db().validate().passed() {
        return fail_here("safety-generator", &p, p.clone(), p.clone());
    }
    for (_, table) in &p.db().tables {
        for row in &table.rows {
            for v in [&row.v1, &row.v2] {
                if !erase_term(&cfg.observer, v).is_db_value() {
                    return fail_here("safety-db-value-erasure", &p, p.clone(), p.clone());
                }
            }
        }
    }
    let mut log: Vec<StepRecord<L>> = Vec::new();
    let outcome = eval_star_logged(p.clone(), &mut Fuel::new(cfg.fuel), mutation, &mut log);
    for record in &log {
        if !record.safe_after {
            return fail_here("safety-preservation", &p, p.clone(), outcome.program().clone());
        }
        for ((name, before, table_label), (_, after, _)) in
            record.tables_before.iter().zip(record.tables_after.iter())
        {
            if before != after && !record.label_before.can_flow_to(table_label) {
                let _ = name;
                return fail_here("safety-table-length", &p, p.clone(), outcome.program().clone());
            }
        }
    }
    if !outcome.program().db().validate().passed() {
        return fail_here("safety-final-db", &p, p.clone(), outcome.program().clone());
    }
    Verdict::Pass { trials: 1 }
}
