//! Measurement and analysis of run-length distributions (RLDs) of stochastic
//! local search SAT solvers.
//!
//! The crate covers the full pipeline:
//!
//! - [`cnf`]: CNF formulas, DIMACS I/O, incremental satisfaction scoring.
//! - [`instancegen`]: Random-3-SAT generation and DPLL satisfiability
//!   filtering into reproducible test sets.
//! - [`sls`]: GSAT / GWSAT / WalkSAT runs with exact flip counts.
//! - [`rld`]: trial harness, empirical RLDs, censoring-aware summary
//!   statistics, test-set averaging, hardness distributions.
//! - [`fit`]: base-2 exponential and Weibull models, censored maximum
//!   likelihood fitting, chi-square goodness-of-fit tests.
//! - [`analysis`]: everything derived from a distribution — tail-bound and
//!   optimal cutoffs, restart and parallel transforms, dominance and
//!   crossover comparison, anytime schedules, expected utility.
//!
//! All randomness flows from explicit 64-bit seeds (see [`seed`]); rerunning
//! any pipeline with the same inputs reproduces identical results.

pub mod analysis;
pub mod cnf;
pub mod fit;
pub mod instancegen;
pub mod rld;
pub mod seed;
pub mod sls;

pub use cnf::{Assignment, CompletenessClass, Formula, Lit};
pub use rld::Rld;
pub use sls::{RunOutcome, RunRecord, SolverConfig};
