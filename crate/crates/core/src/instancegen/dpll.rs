//! Complete randomized DPLL used to filter unsatisfiable instances.
//!
//! Counter-based state (per-clause true/unassigned counts) with a trail for
//! backtracking. Each decision node runs unit propagation and pure-literal
//! elimination to fixpoint, then branches on a variable drawn uniformly from
//! the shortest undetermined clauses, with random first polarity.

use crate::cnf::score::OccurrenceIndex;
use crate::cnf::{count_unsat, Assignment, Formula};
use crate::seed::{make_rng, TrialRng};

use rand::Rng;
use thiserror::Error;

/// Verdict of a complete solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    /// Satisfiable, with a verified model.
    Sat(Assignment),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

/// The configured node cap was hit before the search finished. Distinct from
/// an UNSAT verdict: the instance's status is unknown.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("DPLL node budget of {budget} exhausted")]
pub struct BudgetExceeded {
    pub budget: u64,
}

/// Decide satisfiability with an unlimited node budget.
pub fn dpll_sat(formula: &Formula, seed: u64) -> SatResult {
    dpll_sat_bounded(formula, seed, u64::MAX).expect("unlimited budget cannot be exceeded")
}

/// Decide satisfiability, giving up after `node_budget` decision nodes.
pub fn dpll_sat_bounded(
    formula: &Formula,
    seed: u64,
    node_budget: u64,
) -> Result<SatResult, BudgetExceeded> {
    let idx = OccurrenceIndex::new(formula);
    let mut solver = Dpll::new(formula, &idx, make_rng(seed), node_budget);
    let sat = solver.search()?;
    if sat {
        let model = solver.model();
        debug_assert_eq!(count_unsat(formula, &model).unwrap(), 0);
        Ok(SatResult::Sat(model))
    } else {
        Ok(SatResult::Unsat)
    }
}

struct Dpll<'a> {
    idx: &'a OccurrenceIndex,
    num_clauses: usize,
    values: Vec<Option<bool>>,
    num_true: Vec<u32>,
    num_unassigned: Vec<u32>,
    num_sat_clauses: usize,
    trail: Vec<usize>,
    unit_queue: Vec<u32>,
    rng: TrialRng,
    nodes: u64,
    budget: u64,
    // scratch for branch selection
    branch_vars: Vec<usize>,
    seen: Vec<bool>,
}

impl<'a> Dpll<'a> {
    fn new(formula: &Formula, idx: &'a OccurrenceIndex, rng: TrialRng, budget: u64) -> Dpll<'a> {
        let n = formula.num_vars();
        let num_clauses = idx.num_clauses();
        let num_unassigned: Vec<u32> =
            (0..num_clauses).map(|ci| idx.clause(ci as u32).len() as u32).collect();
        // Clauses that are unit from the start must be queued up front;
        // they re-propagate at the root and stay assigned for the whole
        // search, so clearing the queue on backtrack never loses them.
        let unit_queue =
            (0..num_clauses as u32).filter(|&ci| num_unassigned[ci as usize] == 1).collect();
        Dpll {
            idx,
            num_clauses,
            values: vec![None; n + 1],
            num_true: vec![0; num_clauses],
            num_unassigned,
            num_sat_clauses: 0,
            trail: Vec::with_capacity(n),
            unit_queue,
            rng,
            nodes: 0,
            budget,
            branch_vars: Vec::new(),
            seen: vec![false; n + 1],
        }
    }

    fn model(&self) -> Assignment {
        Assignment::new(
            (1..self.values.len()).map(|v| self.values[v].unwrap_or(false)).collect(),
        )
    }

    /// Returns false on conflict. Newly unit clauses go on the queue.
    fn assign(&mut self, var: usize, value: bool) -> bool {
        debug_assert!(self.values[var].is_none());
        let idx = self.idx;
        self.values[var] = Some(value);
        self.trail.push(var);
        for &ci in idx.occ(var, value) {
            let c = ci as usize;
            if self.num_true[c] == 0 {
                self.num_sat_clauses += 1;
            }
            self.num_true[c] += 1;
            self.num_unassigned[c] -= 1;
        }
        let mut ok = true;
        for &ci in idx.occ(var, !value) {
            let c = ci as usize;
            self.num_unassigned[c] -= 1;
            if self.num_true[c] == 0 {
                match self.num_unassigned[c] {
                    0 => ok = false,
                    1 => self.unit_queue.push(ci),
                    _ => {}
                }
            }
        }
        ok
    }

    fn unassign(&mut self, var: usize) {
        let idx = self.idx;
        let value = self.values[var].take().expect("unassigning an assigned variable");
        for &ci in idx.occ(var, value) {
            let c = ci as usize;
            self.num_true[c] -= 1;
            if self.num_true[c] == 0 {
                self.num_sat_clauses -= 1;
            }
            self.num_unassigned[c] += 1;
        }
        for &ci in idx.occ(var, !value) {
            self.num_unassigned[ci as usize] += 1;
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().unwrap();
            self.unassign(var);
        }
        self.unit_queue.clear();
    }

    /// Unit propagation to fixpoint; false on conflict.
    fn propagate_units(&mut self) -> bool {
        while let Some(ci) = self.unit_queue.pop() {
            let c = ci as usize;
            if self.num_true[c] > 0 {
                continue;
            }
            match self.num_unassigned[c] {
                0 => return false,
                1 => {
                    let lit = self
                        .idx
                        .clause(ci)
                        .iter()
                        .copied()
                        .find(|l| self.values[l.var()].is_none())
                        .expect("unit clause has an unassigned literal");
                    if !self.assign(lit.var(), lit.is_positive()) {
                        return false;
                    }
                }
                _ => {} // stale entry
            }
        }
        true
    }

    /// Assign variables that occur with a single polarity among undetermined
    /// clauses. Returns the number of assignments made (never conflicts).
    fn eliminate_pure_literals(&mut self) -> usize {
        const NONE: u8 = 0;
        const POS: u8 = 1;
        const NEG: u8 = 2;
        let mut polarity = vec![NONE; self.values.len()];
        for c in 0..self.num_clauses {
            if self.num_true[c] > 0 {
                continue;
            }
            for &lit in self.idx.clause(c as u32) {
                if self.values[lit.var()].is_none() {
                    polarity[lit.var()] |= if lit.is_positive() { POS } else { NEG };
                }
            }
        }
        let mut assigned = 0;
        for var in 1..self.values.len() {
            if self.values[var].is_none() && (polarity[var] == POS || polarity[var] == NEG) {
                let ok = self.assign(var, polarity[var] == POS);
                debug_assert!(ok, "pure literal assignment cannot conflict");
                assigned += 1;
            }
        }
        assigned
    }

    /// Unit propagation and pure-literal rounds until stable; false on conflict.
    fn simplify(&mut self) -> bool {
        loop {
            if !self.propagate_units() {
                return false;
            }
            if self.eliminate_pure_literals() == 0 {
                return true;
            }
        }
    }

    fn solved(&self) -> bool {
        self.num_sat_clauses == self.num_clauses || self.trail.len() == self.values.len() - 1
    }

    /// Uniform pick among unassigned variables of the shortest undetermined
    /// clauses, with a random polarity to try first.
    fn pick_branch(&mut self) -> (usize, bool) {
        let mut shortest = u32::MAX;
        for c in 0..self.num_clauses {
            if self.num_true[c] == 0 && self.num_unassigned[c] < shortest {
                shortest = self.num_unassigned[c];
            }
        }
        debug_assert!(shortest >= 2, "unit clauses must be propagated before branching");
        self.branch_vars.clear();
        for c in 0..self.num_clauses {
            if self.num_true[c] == 0 && self.num_unassigned[c] == shortest {
                for &lit in self.idx.clause(c as u32) {
                    let v = lit.var();
                    if self.values[v].is_none() && !self.seen[v] {
                        self.seen[v] = true;
                        self.branch_vars.push(v);
                    }
                }
            }
        }
        let var = self.branch_vars[self.rng.gen_range(0..self.branch_vars.len())];
        for &v in &self.branch_vars {
            self.seen[v] = false;
        }
        (var, self.rng.gen::<bool>())
    }

    fn search(&mut self) -> Result<bool, BudgetExceeded> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(BudgetExceeded { budget: self.budget });
        }
        let mark = self.trail.len();
        if !self.simplify() {
            self.undo_to(mark);
            return Ok(false);
        }
        if self.solved() {
            return Ok(true);
        }
        let (var, first) = self.pick_branch();
        for value in [first, !first] {
            let mark_branch = self.trail.len();
            if self.assign(var, value) && self.propagate_after_decision() && self.search()? {
                return Ok(true);
            }
            self.undo_to(mark_branch);
        }
        self.undo_to(mark);
        Ok(false)
    }

    /// The decision's own unit consequences; the recursive call re-simplifies.
    fn propagate_after_decision(&mut self) -> bool {
        self.propagate_units()
    }
}
