//! DIMACS CNF input restricted to 3-literal clauses.

use spatial_control::problems::{Literal, ProblemError, SatFormula};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DimacsError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("clause ending on line {line}: {source}")]
    Clause { line: usize, source: ProblemError },
}

pub fn parse_dimacs(text: &str) -> Result<SatFormula, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        let syntax = |message: String| DimacsError::Syntax { line, message };
        if trimmed.starts_with('p') {
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if header.is_some() || fields.len() != 4 || fields[1] != "cnf" {
                return Err(syntax(format!("bad header `{trimmed}`")));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|_| syntax(format!("bad number `{s}`")));
            header = Some((num(fields[2])?, num(fields[3])?));
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(DimacsError::MissingHeader);
        };
        for tok in trimmed.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| syntax(format!("bad literal `{tok}`")))?;
            if lit == 0 {
                let clause = std::mem::take(&mut current);
                SatFormula::new(vars, vec![clause.clone()])
                    .map_err(|source| DimacsError::Clause { line, source: renumber(source, clauses.len()) })?;
                clauses.push(clause);
                last_line = line;
            } else {
                let var = lit.unsigned_abs() as usize;
                if var > vars {
                    return Err(syntax(format!("variable {var} exceeds the declared {vars}")));
                }
                current.push(Literal { var: var - 1, negated: lit < 0 });
            }
        }
    }
    let Some((vars, declared)) = header else {
        return Err(DimacsError::MissingHeader);
    };
    if !current.is_empty() {
        return Err(DimacsError::Syntax { line: last_line.max(1), message: "last clause is not terminated by 0".into() });
    }
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCount { declared, found: clauses.len() });
    }
    SatFormula::new(vars, clauses).map_err(|source| DimacsError::Clause { line: last_line, source })
}

fn renumber(err: ProblemError, clause: usize) -> ProblemError {
    match err {
        ProblemError::ClauseWidth { len, .. } => ProblemError::ClauseWidth { clause, len },
        ProblemError::RepeatedVariable { var, .. } => ProblemError::RepeatedVariable { clause, var },
        e => e,
    }
}

/// DIMACS text for a formula.
pub fn write_dimacs(formula: &SatFormula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.num_vars(), formula.clauses().len());
    for clause in formula.clauses() {
        for lit in clause {
            let v = lit.var as i64 + 1;
            out.push_str(&format!("{} ", if lit.negated { -v } else { v }));
        }
        out.push_str("0\n");
    }
    out
}
