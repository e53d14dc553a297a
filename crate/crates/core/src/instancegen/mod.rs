//! Random-3-SAT generation at the phase transition and satisfiability
//! filtering with a complete solver.

mod dpll;

pub use dpll::{dpll_sat, dpll_sat_bounded, BudgetExceeded, SatResult};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Formula, Lit};
use crate::seed::{derive_seed, make_rng};

/// Phase-transition clause-to-variable ratio used by default (430/100).
pub const DEFAULT_CLAUSE_RATIO: f64 = 4.3;

/// Default DPLL node cap per filter candidate.
pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

/// Index salt separating the filter solver's tie-break stream from the
/// generator stream of the same candidate.
const DPLL_SEED_SALT: u64 = 0xd911;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("random 3-SAT needs at least 3 variables, got {0}")]
    TooFewVariables(usize),
    #[error("clause count must be positive")]
    ZeroClauses,
    #[error("test set count must be positive")]
    ZeroCount,
    #[error("gave up after {examined} candidates without finding {missing} more satisfiable instances")]
    CandidateLimitReached { examined: u64, missing: usize },
}

/// Uniform Random-3-SAT: each clause draws 3 distinct variables without
/// replacement and independent fair-coin polarities. Duplicate clauses across
/// the formula are allowed; tautologies are impossible by construction.
pub fn generate_random_3sat(
    num_vars: usize,
    num_clauses: usize,
    seed: u64,
) -> Result<Formula, GenError> {
    if num_vars < 3 {
        return Err(GenError::TooFewVariables(num_vars));
    }
    if num_clauses == 0 {
        return Err(GenError::ZeroClauses);
    }
    let mut rng = make_rng(seed);
    let clauses = (0..num_clauses)
        .map(|_| {
            rand::seq::index::sample(&mut rng, num_vars, 3)
                .iter()
                .map(|v| {
                    let code = (v + 1) as i32;
                    Lit::new(if rand::Rng::gen::<bool>(&mut rng) { code } else { -code })
                        .expect("variable codes are non-zero")
                })
                .collect()
        })
        .collect();
    Ok(Formula::new(num_vars, clauses).expect("generated clauses are well-formed"))
}

/// Identifies a test set: regeneration from the descriptor reproduces the
/// exact instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestSetDescriptor {
    pub num_vars: usize,
    pub num_clauses: usize,
    pub count: usize,
    pub base_seed: u64,
    /// Candidates rejected as unsatisfiable.
    pub discarded_unsat: u64,
    /// Candidates dropped because the filter solver hit its node budget.
    pub discarded_budget: u64,
}

/// Satisfiable Random-3-SAT instances plus their generation descriptor.
#[derive(Clone, Debug)]
pub struct TestSet {
    pub instances: Vec<Formula>,
    pub descriptor: TestSetDescriptor,
}

#[derive(Clone, Copy, Debug)]
pub struct FilterOptions {
    /// DPLL node cap; over-budget candidates are discarded, never kept.
    pub node_budget: u64,
    /// Hard stop on examined candidates (guards pathological ratios).
    pub max_candidates: u64,
}

impl Default for FilterOptions {
    fn default() -> Self {
        FilterOptions { node_budget: DEFAULT_NODE_BUDGET, max_candidates: 0 }
    }
}

impl FilterOptions {
    fn candidate_cap(&self, count: usize) -> u64 {
        if self.max_candidates > 0 {
            self.max_candidates
        } else {
            1000 * count as u64 + 1000
        }
    }
}

/// Build `count` satisfiable instances at `round(clause_ratio * num_vars)`
/// clauses. Candidate `i` is generated from `derive_seed(base_seed, i)`;
/// unsatisfiable and over-budget candidates are discarded and counted. The
/// result is the first `count` satisfiable candidates in index order, so it
/// does not depend on scheduling.
pub fn build_test_set(
    num_vars: usize,
    clause_ratio: f64,
    count: usize,
    base_seed: u64,
) -> Result<TestSet, GenError> {
    build_test_set_with(num_vars, clause_ratio, count, base_seed, FilterOptions::default())
}

pub fn build_test_set_with(
    num_vars: usize,
    clause_ratio: f64,
    count: usize,
    base_seed: u64,
    opts: FilterOptions,
) -> Result<TestSet, GenError> {
    if count == 0 {
        return Err(GenError::ZeroCount);
    }
    let num_clauses = (clause_ratio * num_vars as f64).round() as usize;
    if num_clauses == 0 {
        return Err(GenError::ZeroClauses);
    }
    let cap = opts.candidate_cap(count);

    enum Verdict {
        Keep(Formula),
        Unsat,
        OverBudget,
    }

    let mut kept: Vec<Formula> = Vec::with_capacity(count);
    let mut discarded_unsat = 0u64;
    let mut discarded_budget = 0u64;
    let mut next_index = 0u64;
    let batch = (count.max(8)) as u64;

    while kept.len() < count && next_index < cap {
        let hi = (next_index + batch).min(cap);
        let verdicts: Vec<Verdict> = (next_index..hi)
            .into_par_iter()
            .map(|i| {
                let gen_seed = derive_seed(base_seed, i);
                let formula = generate_random_3sat(num_vars, num_clauses, gen_seed)
                    .expect("arguments validated above");
                match dpll_sat_bounded(&formula, derive_seed(gen_seed, DPLL_SEED_SALT), opts.node_budget)
                {
                    Ok(SatResult::Sat(_)) => Verdict::Keep(formula),
                    Ok(SatResult::Unsat) => Verdict::Unsat,
                    Err(_) => Verdict::OverBudget,
                }
            })
            .collect();
        for verdict in verdicts {
            next_index += 1;
            match verdict {
                Verdict::Keep(f) => {
                    kept.push(f);
                    if kept.len() == count {
                        break;
                    }
                }
                Verdict::Unsat => discarded_unsat += 1,
                Verdict::OverBudget => discarded_budget += 1,
            }
        }
    }

    if kept.len() < count {
        return Err(GenError::CandidateLimitReached {
            examined: next_index,
            missing: count - kept.len(),
        });
    }
    Ok(TestSet {
        instances: kept,
        descriptor: TestSetDescriptor {
            num_vars,
            num_clauses,
            count,
            base_seed,
            discarded_unsat,
            discarded_budget,
        },
    })
}

/// Rebuild a test set from its descriptor.
pub fn regenerate_test_set(descriptor: &TestSetDescriptor) -> Result<TestSet, GenError> {
    let ratio = descriptor.num_clauses as f64 / descriptor.num_vars as f64;
    build_test_set(descriptor.num_vars, ratio, descriptor.count, descriptor.base_seed)
}
