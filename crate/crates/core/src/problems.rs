//! Source problems of the hardness constructions: CNF formulas and binary
//! issue selection.

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("literal refers to variable {var} but the formula has {num_vars}")]
    VariableRange { var: usize, num_vars: usize },
    #[error("clause {clause} has {len} literals, expected 3")]
    ClauseWidth { clause: usize, len: usize },
    #[error("clause {clause} repeats variable {var}")]
    RepeatedVariable { clause: usize, var: usize },
    #[error("assignment has {found} values, expected {expected}")]
    AssignmentLength { expected: usize, found: usize },
    #[error("issue selection needs positions of equal length with 0/1 entries")]
    MalformedBisc,
    #[error("3-SAT needs at least 3 variables, got {0}")]
    TooFewVariables(usize),
}

/// Variable index (0-based) with polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Literal {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Literal {
        Literal { var, negated: true }
    }

    pub fn holds(&self, assignment: &[bool]) -> bool {
        assignment[self.var] != self.negated
    }
}

/// Conjunction of clauses of arbitrary width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    num_vars: usize,
    clauses: Vec<Vec<Literal>>,
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Cnf, ProblemError> {
        for lit in clauses.iter().flatten() {
            if lit.var >= num_vars {
                return Err(ProblemError::VariableRange { var: lit.var, num_vars });
            }
        }
        Ok(Cnf { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars
            && self.clauses.iter().all(|c| c.iter().any(|l| l.holds(assignment)))
    }
}

/// A CNF formula whose clauses have exactly three distinct variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatFormula {
    cnf: Cnf,
}

impl SatFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<SatFormula, ProblemError> {
        for (i, c) in clauses.iter().enumerate() {
            if c.len() != 3 {
                return Err(ProblemError::ClauseWidth { clause: i, len: c.len() });
            }
            for a in 0..3 {
                for b in a + 1..3 {
                    if c[a].var == c[b].var {
                        return Err(ProblemError::RepeatedVariable { clause: i, var: c[a].var });
                    }
                }
            }
        }
        Ok(SatFormula { cnf: Cnf::new(num_vars, clauses)? })
    }

    /// Uniform random clauses over three distinct variables each.
    pub fn random(rng: &mut impl Rng, num_vars: usize, num_clauses: usize) -> Result<SatFormula, ProblemError> {
        if num_vars < 3 {
            return Err(ProblemError::TooFewVariables(num_vars));
        }
        let clauses = (0..num_clauses)
            .map(|_| {
                let vars = rand::seq::index::sample(rng, num_vars, 3);
                vars.iter().map(|var| Literal { var, negated: rng.random() }).collect()
            })
            .collect();
        SatFormula::new(num_vars, clauses)
    }

    pub fn cnf(&self) -> &Cnf {
        &self.cnf
    }

    pub fn num_vars(&self) -> usize {
        self.cnf.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.cnf.clauses
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.cnf.satisfied_by(assignment)
    }
}

/// Binary issue selection with two candidates: choose a nonempty subset of
/// issues so the target wins plurality when only those issues count.
#[derive(Clone, Debug, PartialEq)]
pub struct BiscInstance {
    pub target: Vec<f64>,
    pub rival: Vec<f64>,
    pub voters: Vec<Vec<f64>>,
}

impl BiscInstance {
    pub fn new(target: Vec<f64>, rival: Vec<f64>, voters: Vec<Vec<f64>>) -> Result<BiscInstance, ProblemError> {
        let d = target.len();
        let binary = |x: &Vec<f64>| x.len() == d && x.iter().all(|&v| v == 0.0 || v == 1.0);
        if d == 0 || voters.is_empty() || !binary(&target) || !binary(&rival) || !voters.iter().all(binary) {
            return Err(ProblemError::MalformedBisc);
        }
        Ok(BiscInstance { target, rival, voters })
    }

    pub fn dimension(&self) -> usize {
        self.target.len()
    }

    /// Whether the target wins with only the issues in `subset` counted.
    /// Voters at equal restricted distance vote for the target, and the
    /// target wins a tied count.
    pub fn target_wins(&self, subset: &[bool]) -> bool {
        let restricted = |a: &[f64], b: &[f64]| {
            a.iter().zip(b).zip(subset).filter(|((x, y), &s)| s && x != y).count()
        };
        let votes = self
            .voters
            .iter()
            .filter(|v| restricted(v, &self.target) <= restricted(v, &self.rival))
            .count();
        2 * votes >= self.voters.len()
    }
}
