//! Instrumented stochastic local search solvers: GSAT, GSAT with random walk
//! (GWSAT), and WalkSAT (WSAT, break-count heuristic).
//!
//! A run starts from a uniformly random assignment and performs one variable
//! flip per step. The solution check happens after initialization and after
//! every flip, so a run length of 0 is possible. Runs are deterministic in
//! `(formula, config, cutoff, seed)`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::score::{OccurrenceIndex, ScoreState};
use crate::cnf::Formula;
use crate::seed::{make_rng, TrialRng};

/// Algorithm selection plus its noise parameter.
///
/// Serializes as `{"algorithm":"wsat","noise":0.55}` and the like.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "lowercase")]
pub enum SolverConfig {
    Gsat,
    Gwsat {
        /// Probability of taking a random-walk step instead of a GSAT step.
        wp: f64,
    },
    Wsat {
        /// Probability of a random flip when no zero-break variable exists.
        noise: f64,
    },
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{name} must lie in [0,1], got {value}")]
    ParameterOutOfRange { name: &'static str, value: f64 },
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let check = |name: &'static str, value: f64| {
            if (0.0..=1.0).contains(&value) {
                Ok(())
            } else {
                Err(ConfigError::ParameterOutOfRange { name, value })
            }
        };
        match *self {
            SolverConfig::Gsat => Ok(()),
            SolverConfig::Gwsat { wp } => check("wp", wp),
            SolverConfig::Wsat { noise } => check("noise", noise),
        }
    }

    /// Short label used in file names: `gsat`, `gwsat-wp0.55`, `wsat-n0.55`.
    pub fn label(&self) -> String {
        match *self {
            SolverConfig::Gsat => "gsat".to_string(),
            SolverConfig::Gwsat { wp } => format!("gwsat-wp{wp}"),
            SolverConfig::Wsat { noise } => format!("wsat-n{noise}"),
        }
    }
}

/// Outcome of one trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum RunOutcome {
    /// Solved after `run_length` flips.
    Success { run_length: u64 },
    /// Ran `cutoff` flips without reaching a solution.
    Censored { cutoff: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    #[serde(flatten)]
    pub outcome: RunOutcome,
    pub seed: u64,
}

impl RunRecord {
    pub fn run_length(&self) -> Option<u64> {
        match self.outcome {
            RunOutcome::Success { run_length } => Some(run_length),
            RunOutcome::Censored { .. } => None,
        }
    }
}

/// Run one trial on a formula.
pub fn run(formula: &Formula, config: &SolverConfig, cutoff: u64, seed: u64) -> RunRecord {
    let idx = OccurrenceIndex::new(formula);
    run_indexed(&idx, config, cutoff, seed)
}

/// Run one trial over a prebuilt index (the harness shares one index across
/// all trials of an instance).
pub fn run_indexed(
    idx: &OccurrenceIndex,
    config: &SolverConfig,
    cutoff: u64,
    seed: u64,
) -> RunRecord {
    run_observed(idx, config, cutoff, seed, |_, _| {})
}

/// As [`run_indexed`], invoking `observe(flips, &state)` after initialization
/// and after every flip. Instrumentation hook for consistency checks.
pub fn run_observed(
    idx: &OccurrenceIndex,
    config: &SolverConfig,
    cutoff: u64,
    seed: u64,
    mut observe: impl FnMut(u64, &ScoreState<'_>),
) -> RunRecord {
    config.validate().expect("invalid solver configuration");
    assert!(cutoff >= 1, "cutoff must be at least 1 flip");

    let mut rng = make_rng(seed);
    let mut state = ScoreState::random(idx, &mut rng);
    let mut selector = Selector::new(idx.num_vars());
    observe(0, &state);
    if state.is_satisfied() {
        return RunRecord { outcome: RunOutcome::Success { run_length: 0 }, seed };
    }
    for flips in 1..=cutoff {
        let var = selector.select(&state, config, &mut rng);
        state.flip(var);
        observe(flips, &state);
        if state.is_satisfied() {
            return RunRecord { outcome: RunOutcome::Success { run_length: flips }, seed };
        }
    }
    RunRecord { outcome: RunOutcome::Censored { cutoff }, seed }
}

/// Reusable scratch buffers for step selection.
struct Selector {
    ties: Vec<usize>,
}

impl Selector {
    fn new(num_vars: usize) -> Selector {
        Selector { ties: Vec::with_capacity(num_vars) }
    }

    fn select(&mut self, state: &ScoreState<'_>, config: &SolverConfig, rng: &mut TrialRng) -> usize {
        match *config {
            SolverConfig::Gsat => self.gsat_step(state, rng),
            SolverConfig::Gwsat { wp } => {
                if rng.gen::<f64>() < wp {
                    self.random_walk_step(state, rng)
                } else {
                    self.gsat_step(state, rng)
                }
            }
            SolverConfig::Wsat { noise } => self.wsat_step(state, noise, rng),
        }
    }

    /// Flip a variable maximizing the decrease of the unsat count, ties
    /// uniform at random. Sideways and uphill moves are taken if nothing
    /// better exists.
    fn gsat_step(&mut self, state: &ScoreState<'_>, rng: &mut TrialRng) -> usize {
        let mut best = i64::MIN;
        self.ties.clear();
        for var in 1..=state.num_vars() {
            let improvement = state.improvement(var);
            if improvement > best {
                best = improvement;
                self.ties.clear();
                self.ties.push(var);
            } else if improvement == best {
                self.ties.push(var);
            }
        }
        self.ties[rng.gen_range(0..self.ties.len())]
    }

    /// Uniform variable of a uniform unsatisfied clause.
    fn random_walk_step(&mut self, state: &ScoreState<'_>, rng: &mut TrialRng) -> usize {
        let clause = self.random_unsat_clause(state, rng);
        clause[rng.gen_range(0..clause.len())].var()
    }

    /// WalkSAT/SKC: in a uniform unsatisfied clause, flip a zero-break
    /// variable if one exists; otherwise flip a uniform variable with
    /// probability `noise`, else a minimum-break variable. All ties uniform.
    fn wsat_step(&mut self, state: &ScoreState<'_>, noise: f64, rng: &mut TrialRng) -> usize {
        let clause = self.random_unsat_clause(state, rng);
        let mut min_break = u32::MAX;
        self.ties.clear();
        for lit in clause {
            let b = state.break_count(lit.var());
            if b < min_break {
                min_break = b;
                self.ties.clear();
                self.ties.push(lit.var());
            } else if b == min_break {
                self.ties.push(lit.var());
            }
        }
        if min_break == 0 {
            return self.ties[rng.gen_range(0..self.ties.len())];
        }
        if rng.gen::<f64>() < noise {
            return clause[rng.gen_range(0..clause.len())].var();
        }
        self.ties[rng.gen_range(0..self.ties.len())]
    }

    fn random_unsat_clause<'s>(
        &mut self,
        state: &'s ScoreState<'_>,
        rng: &mut TrialRng,
    ) -> &'s [crate::cnf::Lit] {
        let unsat = state.unsat_clauses();
        debug_assert!(!unsat.is_empty());
        state.clause_lits(unsat[rng.gen_range(0..unsat.len())])
    }
}
