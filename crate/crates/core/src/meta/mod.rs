//! Randomized, seeded generation of safe programs and databases, executable
//! checks of the simulation and noninterference theorems and their
//! supporting lemmas, witness shrinking, and suite runners.

mod checks;
mod gen;
mod shrink;
mod suite;

pub use checks::{
    check_noninterference, check_noninterference_star, check_noninterference_star_with,
    check_noninterference_with, check_simulation, check_simulation_star,
    check_simulation_star_with, check_simulation_with, divergence, FailWitness, Verdict,
};
pub use gen::{gen_database, gen_low_equiv_pair, gen_program, trial_seed, GenConfig};
pub use shrink::shrink_failure;
pub use suite::{run_suite, FailureReport, LawSummary, MinimizedWitness, Suite, SuiteReport};
