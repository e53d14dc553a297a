//! Incremental satisfaction scoring for local search.
//!
//! [`OccurrenceIndex`] is built once per formula and shared read-only across
//! trials; [`ScoreState`] is the per-trial mutable state. A flip costs time
//! proportional to the flipped variable's clause occurrences: per-clause true
//! counts, the unsat-clause list, and per-variable make/break counts are all
//! maintained in place.
//!
//! The index stores clauses with duplicate literals removed and tautological
//! clauses dropped; neither affects which clauses count as unsatisfied, so
//! [`ScoreState::num_unsat`] always equals [`super::count_unsat`] on the
//! original formula.

use rand::Rng;

use super::{Assignment, Formula, Lit};

/// Immutable per-formula occurrence structure, shareable across trials.
#[derive(Debug)]
pub struct OccurrenceIndex {
    num_vars: usize,
    /// Normalized clauses: distinct literals, tautologies removed.
    clauses: Vec<Vec<Lit>>,
    /// Clause indices containing the positive literal of each variable.
    pos_occ: Vec<Vec<u32>>,
    /// Clause indices containing the negative literal of each variable.
    neg_occ: Vec<Vec<u32>>,
}

impl OccurrenceIndex {
    pub fn new(formula: &Formula) -> OccurrenceIndex {
        let num_vars = formula.num_vars();
        let mut clauses: Vec<Vec<Lit>> = Vec::with_capacity(formula.num_clauses());
        for clause in formula.clauses() {
            let mut lits: Vec<Lit> = clause.clone();
            lits.sort_unstable();
            lits.dedup();
            let tautological =
                lits.iter().any(|l| lits.binary_search(&l.negated()).is_ok());
            if !tautological {
                clauses.push(lits);
            }
        }
        let mut pos_occ = vec![Vec::new(); num_vars + 1];
        let mut neg_occ = vec![Vec::new(); num_vars + 1];
        for (ci, clause) in clauses.iter().enumerate() {
            for &lit in clause {
                if lit.is_positive() {
                    pos_occ[lit.var()].push(ci as u32);
                } else {
                    neg_occ[lit.var()].push(ci as u32);
                }
            }
        }
        OccurrenceIndex { num_vars, clauses, pos_occ, neg_occ }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Number of indexed clauses (tautologies excluded).
    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clause(&self, ci: u32) -> &[Lit] {
        &self.clauses[ci as usize]
    }

    pub(crate) fn occ(&self, var: usize, positive: bool) -> &[u32] {
        if positive {
            &self.pos_occ[var]
        } else {
            &self.neg_occ[var]
        }
    }
}

/// Per-trial search state over an [`OccurrenceIndex`].
pub struct ScoreState<'a> {
    idx: &'a OccurrenceIndex,
    values: Vec<bool>,
    /// Number of true literals per indexed clause.
    num_true: Vec<u32>,
    /// For clauses with exactly one true literal, the variable of that literal.
    critical_var: Vec<u32>,
    /// Unsatisfied clause indices, swap-removed via `unsat_pos`.
    unsat: Vec<u32>,
    unsat_pos: Vec<u32>,
    /// make[v]: unsat clauses that flipping v would satisfy.
    make: Vec<u32>,
    /// brk[v]: satisfied clauses that flipping v would unsatisfy.
    brk: Vec<u32>,
}

impl<'a> ScoreState<'a> {
    pub fn new(idx: &'a OccurrenceIndex, assignment: &Assignment) -> ScoreState<'a> {
        assert_eq!(assignment.len(), idx.num_vars, "assignment length mismatch");
        let n_clauses = idx.clauses.len();
        let mut st = ScoreState {
            idx,
            values: assignment.values().to_vec(),
            num_true: vec![0; n_clauses],
            critical_var: vec![0; n_clauses],
            unsat: Vec::with_capacity(n_clauses),
            unsat_pos: vec![u32::MAX; n_clauses],
            make: vec![0; idx.num_vars + 1],
            brk: vec![0; idx.num_vars + 1],
        };
        for (ci, clause) in idx.clauses.iter().enumerate() {
            let mut true_count = 0;
            let mut last_true = 0u32;
            for &lit in clause {
                if st.lit_true(lit) {
                    true_count += 1;
                    last_true = lit.var() as u32;
                }
            }
            st.num_true[ci] = true_count;
            match true_count {
                0 => {
                    st.unsat_pos[ci] = st.unsat.len() as u32;
                    st.unsat.push(ci as u32);
                    for &lit in clause {
                        st.make[lit.var()] += 1;
                    }
                }
                1 => {
                    st.critical_var[ci] = last_true;
                    st.brk[last_true as usize] += 1;
                }
                _ => {}
            }
        }
        st
    }

    /// Fresh state with a uniformly random assignment.
    pub fn random(idx: &'a OccurrenceIndex, rng: &mut impl Rng) -> ScoreState<'a> {
        let a = Assignment::random(idx.num_vars, rng);
        ScoreState::new(idx, &a)
    }

    fn lit_true(&self, lit: Lit) -> bool {
        self.values[lit.var() - 1] == lit.is_positive()
    }

    pub fn num_vars(&self) -> usize {
        self.idx.num_vars
    }

    pub fn num_unsat(&self) -> usize {
        self.unsat.len()
    }

    pub fn is_satisfied(&self) -> bool {
        self.unsat.is_empty()
    }

    pub fn unsat_clauses(&self) -> &[u32] {
        &self.unsat
    }

    pub fn clause_lits(&self, ci: u32) -> &[Lit] {
        self.idx.clause(ci)
    }

    pub fn make_count(&self, var: usize) -> u32 {
        self.make[var]
    }

    pub fn break_count(&self, var: usize) -> u32 {
        self.brk[var]
    }

    /// Decrease of the unsat count if `var` were flipped (GSAT's objective).
    pub fn improvement(&self, var: usize) -> i64 {
        i64::from(self.make[var]) - i64::from(self.brk[var])
    }

    pub fn value(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    pub fn assignment(&self) -> Assignment {
        Assignment::new(self.values.clone())
    }

    fn remove_unsat(&mut self, ci: u32) {
        let pos = self.unsat_pos[ci as usize];
        let last = *self.unsat.last().expect("unsat list non-empty");
        self.unsat[pos as usize] = last;
        self.unsat_pos[last as usize] = pos;
        self.unsat.pop();
        self.unsat_pos[ci as usize] = u32::MAX;
    }

    fn push_unsat(&mut self, ci: u32) {
        self.unsat_pos[ci as usize] = self.unsat.len() as u32;
        self.unsat.push(ci);
    }

    /// Flip one variable, updating all bookkeeping.
    pub fn flip(&mut self, var: usize) {
        let idx = self.idx;
        let old_value = self.values[var - 1];
        self.values[var - 1] = !old_value;

        // Clauses whose literal of `var` just became true.
        for &ci in idx.occ(var, !old_value) {
            let c = ci as usize;
            self.num_true[c] += 1;
            match self.num_true[c] {
                1 => {
                    self.remove_unsat(ci);
                    self.critical_var[c] = var as u32;
                    self.brk[var] += 1;
                    for &lit in idx.clause(ci) {
                        self.make[lit.var()] -= 1;
                    }
                }
                2 => {
                    let u = self.critical_var[c] as usize;
                    self.brk[u] -= 1;
                }
                _ => {}
            }
        }

        // Clauses whose literal of `var` just became false.
        for &ci in idx.occ(var, old_value) {
            let c = ci as usize;
            self.num_true[c] -= 1;
            match self.num_true[c] {
                0 => {
                    self.push_unsat(ci);
                    self.brk[var] -= 1;
                    for &lit in idx.clause(ci) {
                        self.make[lit.var()] += 1;
                    }
                }
                1 => {
                    let survivor = idx
                        .clause(ci)
                        .iter()
                        .find(|&&lit| self.lit_true(lit))
                        .expect("clause with num_true == 1 has a true literal");
                    let u = survivor.var();
                    self.critical_var[c] = u as u32;
                    self.brk[u] += 1;
                }
                _ => {}
            }
        }
    }

    /// Recompute everything from scratch and compare with the incremental
    /// state. Used by instrumented runs and tests; O(formula).
    pub fn check_consistency(&self) -> Result<(), String> {
        let fresh = ScoreState::new(self.idx, &self.assignment());
        if fresh.num_true != self.num_true {
            return Err("per-clause true counts diverged".into());
        }
        if fresh.make != self.make {
            return Err("make counts diverged".into());
        }
        if fresh.brk != self.brk {
            return Err("break counts diverged".into());
        }
        let mut a = self.unsat.clone();
        let mut b = fresh.unsat.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err("unsat clause set diverged".into());
        }
        Ok(())
    }
}
