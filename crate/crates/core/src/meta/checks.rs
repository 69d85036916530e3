//! Executable theorem checks: simulation (single-step and star) and
//! noninterference, plus structural divergence paths for witnesses.

use crate::db::Database;
use crate::erase::erase_program;
use crate::eval::{eval_star_with, eval_with, Fuel, Mutation, Outcome, StepOutcome};
use crate::label::Label;
use crate::term::{Program, Term};

/// Outcome of one theorem check. `Inconclusive` counts runs that did not
/// finish within fuel. Such runs are never failures (the theorems are
/// termination-insensitive) but they are never passes either.
#[derive(Debug, Clone)]
pub enum Verdict<L> {
    Pass { trials: u64 },
    Fail(Box<FailWitness<L>>),
    Inconclusive { fuel_exhausted: u64 },
}

impl<L> Verdict<L> {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }
}

/// Everything needed to understand and replay a failure deterministically.
#[derive(Debug, Clone)]
pub struct FailWitness<L> {
    /// Seed that regenerates the input(s); filled in by the suite runner.
    pub seed: u64,
    pub property: &'static str,
    /// The input program, or the low-equivalent pair.
    pub programs: Vec<Program<L>>,
    pub database: Database<L>,
    pub lhs: Program<L>,
    pub rhs: Program<L>,
    pub first_divergence: String,
}

/// One step of evaluation commutes with erasure: erasing before or after
/// yields the same attacker view.
pub fn check_simulation<L: Label>(observer: &L, p: &Program<L>, fuel: u64) -> Verdict<L> {
    check_simulation_with(observer, p, fuel, Mutation::None)
}

pub fn check_simulation_with<L: Label>(
    observer: &L,
    p: &Program<L>,
    fuel: u64,
    mutation: Mutation,
) -> Verdict<L> {
    debug_assert!(p.is_safe());
    let erased = erase_program(observer, p);
    let left = eval_with(erased, &mut Fuel::new(fuel), mutation);
    let right = eval_with(p.clone(), &mut Fuel::new(fuel), mutation);
    match (left, right) {
        (StepOutcome::Stepped(a), StepOutcome::Stepped(b)) => {
            conclude(observer, "simulation", p, &a, &b)
        }
        _ => Verdict::Inconclusive { fuel_exhausted: 1 },
    }
}

/// Full evaluation commutes with erasure, given both runs terminate within
/// the same budget.
pub fn check_simulation_star<L: Label>(observer: &L, p: &Program<L>, fuel: u64) -> Verdict<L> {
    check_simulation_star_with(observer, p, fuel, Mutation::None)
}

pub fn check_simulation_star_with<L: Label>(
    observer: &L,
    p: &Program<L>,
    fuel: u64,
    mutation: Mutation,
) -> Verdict<L> {
    debug_assert!(p.is_safe());
    let erased = erase_program(observer, p);
    let left = eval_star_with(erased, &mut Fuel::new(fuel), mutation);
    let right = eval_star_with(p.clone(), &mut Fuel::new(fuel), mutation);
    match (left, right) {
        (Outcome::Terminated(a), Outcome::Terminated(b)) => {
            conclude(observer, "simulation-star", p, &a, &b)
        }
        _ => Verdict::Inconclusive { fuel_exhausted: 1 },
    }
}

/// Erased-equal inputs step to erased-equal outputs.
///
/// The precondition `ε p1 == ε p2` is the generator's contract; violating it
/// is a generator defect, so it panics rather than producing a verdict.
pub fn check_noninterference<L: Label>(
    observer: &L,
    p1: &Program<L>,
    p2: &Program<L>,
    fuel: u64,
) -> Verdict<L> {
    check_noninterference_with(observer, p1, p2, fuel, Mutation::None)
}

pub fn check_noninterference_with<L: Label>(
    observer: &L,
    p1: &Program<L>,
    p2: &Program<L>,
    fuel: u64,
    mutation: Mutation,
) -> Verdict<L> {
    require_low_equivalent(observer, p1, p2);
    let left = eval_with(p1.clone(), &mut Fuel::new(fuel), mutation);
    let right = eval_with(p2.clone(), &mut Fuel::new(fuel), mutation);
    match (left, right) {
        (StepOutcome::Stepped(a), StepOutcome::Stepped(b)) => {
            conclude_pair(observer, "noninterference", p1, p2, &a, &b)
        }
        _ => Verdict::Inconclusive { fuel_exhausted: 1 },
    }
}

/// Erased-equal inputs evaluate to erased-equal results (termination
/// insensitive: both runs must finish within their budgets).
pub fn check_noninterference_star<L: Label>(
    observer: &L,
    p1: &Program<L>,
    p2: &Program<L>,
    fuel: u64,
) -> Verdict<L> {
    check_noninterference_star_with(observer, p1, p2, fuel, Mutation::None)
}

pub fn check_noninterference_star_with<L: Label>(
    observer: &L,
    p1: &Program<L>,
    p2: &Program<L>,
    fuel: u64,
    mutation: Mutation,
) -> Verdict<L> {
    require_low_equivalent(observer, p1, p2);
    let left = eval_star_with(p1.clone(), &mut Fuel::new(fuel), mutation);
    let right = eval_star_with(p2.clone(), &mut Fuel::new(fuel), mutation);
    match (left, right) {
        (Outcome::Terminated(a), Outcome::Terminated(b)) => {
            conclude_pair(observer, "noninterference-star", p1, p2, &a, &b)
        }
        _ => Verdict::Inconclusive { fuel_exhausted: 1 },
    }
}

fn require_low_equivalent<L: Label>(observer: &L, p1: &Program<L>, p2: &Program<L>) {
    assert!(p1.is_safe() && p2.is_safe(), "noninterference inputs must be write-safe");
    assert!(
        erase_program(observer, p1) == erase_program(observer, p2),
        "generator defect: noninterference inputs are not low-equivalent"
    );
}

fn conclude<L: Label>(
    observer: &L,
    property: &'static str,
    input: &Program<L>,
    a: &Program<L>,
    b: &Program<L>,
) -> Verdict<L> {
    let lhs = erase_program(observer, a);
    let rhs = erase_program(observer, b);
    if lhs == rhs {
        Verdict::Pass { trials: 1 }
    } else {
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
}

fn conclude_pair<L: Label>(
    observer: &L,
    property: &'static str,
    p1: &Program<L>,
    p2: &Program<L>,
    a: &Program<L>,
    b: &Program<L>,
) -> Verdict<L> {
    let lhs = erase_program(observer, a);
    let rhs = erase_program(observer, b);
    if lhs == rhs {
        Verdict::Pass { trials: 1 }
    } else {
        Verdict::Fail(Box::new(FailWitness {
            seed: 0,
            property,
            programs: vec![p1.clone(), p2.clone()],
            database: p1.db().clone(),
            first_divergence: divergence(&lhs, &rhs),
            lhs,
            rhs,
        }))
    }
}

/// A human-readable path to the first structural difference between two
/// configurations.
pub fn divergence<L: Label>(a: &Program<L>, b: &Program<L>) -> String {
    match (a, b) {
        _ if a == b => "equal".to_string(),
        (Program::Hole { db: da }, Program::Hole { db: db_ }) => {
            db_divergence(da, db_).unwrap_or_else(|| "db".to_string())
        }
        (Program::Pg { .. }, Program::Hole { .. }) | (Program::Hole { .. }, Program::Pg { .. }) => {
            "program(pg≠pghole)".to_string()
        }
        (
            Program::Pg { label: la, db: da, term: ta },
            Program::Pg { label: lb, db: db_, term: tb },
        ) => {
            if la != lb {
                return format!("label({}≠{})", la.render(), lb.render());
            }
            if let Some(path) = db_divergence(da, db_) {
                return path;
            }
            let mut path = String::from("term");
            term_divergence(ta, tb, &mut path);
            path
        }
    }
}

fn term_divergence<L: Label>(a: &Term<L>, b: &Term<L>, path: &mut String) {
    if a.tag() != b.tag() {
        path.push_str(&format!("({}≠{})", a.tag(), b.tag()));
        return;
    }
    let ca = a.children();
    let cb = b.children();
    for (i, (x, y)) in ca.iter().zip(cb.iter()).enumerate() {
        if x != y {
            path.push_str(&format!("/{}[{}]", a.tag(), i));
            term_divergence(x, y, path);
            return;
        }
    }
    // Same constructor, equal children: a leaf payload differs.
    path.push_str(&format!("/{}(payload)", a.tag()));
}

fn db_divergence<L: Label>(a: &Database<L>, b: &Database<L>) -> Option<String> {
    if a == b {
        return None;
    }
    if a.tables.len() != b.tables.len() {
        return Some("db(table count)".to_string());
    }
    for ((na, ta), (nb, tb)) in a.tables.iter().zip(b.tables.iter()) {
        if na != nb {
            return Some(format!("db(name {na}≠{nb})"));
        }
        if ta.policy != tb.policy {
            return Some(format!("db[{na}].policy"));
        }
        if ta.rows.len() != tb.rows.len() {
            return Some(format!("db[{na}](row count {}≠{})", ta.rows.len(), tb.rows.len()));
        }
        for (i, (ra, rb)) in ta.rows.iter().zip(tb.rows.iter()).enumerate() {
            if ra.key != rb.key {
                return Some(format!("db[{na}].rows[{i}].key"));
            }
            if ra.v1 != rb.v1 {
                return Some(format!("db[{na}].rows[{i}].v1"));
            }
            if ra.v2 != rb.v2 {
                return Some(format!("db[{na}].rows[{i}].v2"));
            }
        }
    }
    Some("db".to_string())
}
