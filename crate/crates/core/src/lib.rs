//! A label-based information-flow calculus over a policy-labeled database:
//! security-label lattices, a small-step interpreter for labeled monadic
//! programs, observer-indexed erasure, and a seeded property fuzzer that
//! runs the simulation and noninterference theorems as executable checks.
//!
//! The crate is organized along the moving parts:
//!
//! - [`label`]: the lattice interface, three instances, and exhaustive law
//!   checking over finite domains.
//! - [`term`]: abstract syntax of terms and program configurations,
//!   substitution, and the value/write-safety predicates.
//! - [`db`]: the labeled store: table policies, row predicates with
//!   syntactic arity, and the four check-free query primitives.
//! - [`mod@eval`]: the fuel-bounded small-step evaluator.
//! - [`erase`]: the attacker's view.
//! - [`text`]: the s-expression program grammar and the JSON database file
//!   format, shared by the CLI and by fuzzer reports.
//! - [`meta`]: seeded generation of safe programs and low-equivalent pairs,
//!   theorem checks, witness shrinking, and suite runners.

pub mod db;
pub mod erase;
pub mod eval;
pub mod label;
pub mod meta;
pub mod term;
pub mod text;

pub use db::{Database, FieldRef, LabelFn, PolicyViolation, Pred, Row, Table, TablePolicy, ValidationReport};
pub use erase::{erase_db, erase_program, erase_row, erase_table, erase_term};
pub use eval::{eval, eval_star, eval_star_logged, eval_star_with, eval_term, eval_with, Fuel, Mutation, Outcome, StepOutcome, StepRecord};
pub use label::{check_laws, close_under_ops, ConfIntegLabel, HasTop, Label, LabelParseError, LatticeLaw, LawReport, LawViolation, PowersetLabel, TwoPointLabel};
pub use term::{LabelOp, Name, Program, Term, Var};
