//! CNF formulas, assignments, and clause-satisfaction bookkeeping.
//!
//! Variables are 1-indexed everywhere, matching DIMACS. A [`Lit`] is a signed
//! variable index; a [`Formula`] is a conjunction of non-empty clauses. The
//! solvers in [`crate::sls`] never touch clauses directly: they drive a
//! [`score::ScoreState`] built over a shared [`score::OccurrenceIndex`].

mod dimacs;
pub mod score;

pub use dimacs::{parse_dimacs, parse_dimacs_str, to_dimacs_string, write_dimacs, DimacsParseError};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A literal: variable index with polarity, stored DIMACS-style as a
/// non-zero signed integer.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Lit(i32);

impl Lit {
    /// Build a literal from a non-zero DIMACS code.
    pub fn new(code: i32) -> Result<Lit, FormulaError> {
        if code == 0 {
            return Err(FormulaError::ZeroLiteral);
        }
        Ok(Lit(code))
    }

    /// 1-indexed variable.
    pub fn var(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn negated(self) -> Lit {
        Lit(-self.0)
    }

    /// The raw DIMACS code.
    pub fn code(self) -> i32 {
        self.0
    }

    /// True under `a` iff the variable's value matches the polarity.
    pub fn satisfied_by(self, a: &Assignment) -> bool {
        a.value(self.var()) == self.is_positive()
    }
}

impl std::fmt::Debug for Lit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::fmt::Display for Lit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A CNF formula over variables `1..=num_vars`.
///
/// Comments captured while parsing are carried along as metadata; they do
/// not take part in equality and are not written back out.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Formula {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    comments: Vec<String>,
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.num_vars == other.num_vars && self.clauses == other.clauses
    }
}
impl Eq for Formula {}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("literal 0 is not a valid DIMACS literal")]
    ZeroLiteral,
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("literal {lit} in clause {clause} is out of range 1..={num_vars}")]
    LiteralOutOfRange { lit: i32, clause: usize, num_vars: usize },
    #[error("assignment has {got} values, formula has {expected} variables")]
    AssignmentLengthMismatch { got: usize, expected: usize },
    #[error("variable {var} out of range 1..={num_vars}")]
    VariableOutOfRange { var: usize, num_vars: usize },
}

impl Formula {
    /// Validates that no clause is empty and every literal is in range.
    pub fn new(num_vars: usize, clauses: Vec<Vec<Lit>>) -> Result<Formula, FormulaError> {
        for (i, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(FormulaError::EmptyClause { clause: i });
            }
            for &lit in clause {
                if lit.var() > num_vars {
                    return Err(FormulaError::LiteralOutOfRange {
                        lit: lit.code(),
                        clause: i,
                        num_vars,
                    });
                }
            }
        }
        Ok(Formula { num_vars, clauses, comments: Vec::new() })
    }

    /// Convenience constructor from raw DIMACS codes; panics on invalid input.
    /// Intended for literal formulas in tests and examples.
    pub fn from_codes(num_vars: usize, clauses: &[&[i32]]) -> Formula {
        let clauses = clauses
            .iter()
            .map(|c| c.iter().map(|&l| Lit::new(l).expect("zero literal")).collect())
            .collect();
        Formula::new(num_vars, clauses).expect("invalid formula")
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    pub(crate) fn set_comments(&mut self, comments: Vec<String>) {
        self.comments = comments;
    }
}

/// A complete truth assignment for a formula's variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Assignment {
        Assignment { values }
    }

    /// Uniform random assignment over `num_vars` variables.
    pub fn random(num_vars: usize, rng: &mut impl rand::Rng) -> Assignment {
        Assignment { values: (0..num_vars).map(|_| rng.gen::<bool>()).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value of 1-indexed variable `var`.
    pub fn value(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    pub fn flip(&mut self, var: usize) {
        self.values[var - 1] = !self.values[var - 1];
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}

/// Completeness classification of a Las Vegas algorithm: whether its success
/// probability reaches 1 in bounded time, in the limit, or not at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompletenessClass {
    Complete,
    ApproximatelyComplete,
    EssentiallyIncomplete,
}

fn check_assignment(formula: &Formula, a: &Assignment) -> Result<(), FormulaError> {
    if a.len() != formula.num_vars() {
        return Err(FormulaError::AssignmentLengthMismatch {
            got: a.len(),
            expected: formula.num_vars(),
        });
    }
    Ok(())
}

/// Number of clauses with no satisfied literal under `a`.
pub fn count_unsat(formula: &Formula, a: &Assignment) -> Result<usize, FormulaError> {
    check_assignment(formula, a)?;
    Ok(formula
        .clauses()
        .iter()
        .filter(|clause| !clause.iter().any(|lit| lit.satisfied_by(a)))
        .count())
}

/// Change in `count_unsat` if variable `v` were flipped. Neither the formula
/// nor the assignment is modified.
pub fn flip_delta(formula: &Formula, a: &Assignment, v: usize) -> Result<i64, FormulaError> {
    check_assignment(formula, a)?;
    if v == 0 || v > formula.num_vars() {
        return Err(FormulaError::VariableOutOfRange { var: v, num_vars: formula.num_vars() });
    }
    let mut delta = 0i64;
    for clause in formula.clauses() {
        if !clause.iter().any(|lit| lit.var() == v) {
            continue;
        }
        let sat_before = clause.iter().any(|lit| lit.satisfied_by(a));
        let sat_after = clause
            .iter()
            .any(|lit| if lit.var() == v { !lit.satisfied_by(a) } else { lit.satisfied_by(a) });
        delta += i64::from(!sat_after) - i64::from(!sat_before);
    }
    Ok(delta)
}
