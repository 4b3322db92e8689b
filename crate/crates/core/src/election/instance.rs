use std::collections::HashMap;

use super::{ElectionError, Metric, Norm, ScoringRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IssueSpace {
    Binary,
    Real,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Make the target win.
    Constructive,
    /// Make the target lose.
    Destructive,
}

/// Voters sharing one position.
#[derive(Clone, Debug, PartialEq)]
pub struct OpinionGroup {
    pub position: Vec<f64>,
    pub weight: u64,
}

/// Voters either listed one by one or already collapsed into weighted groups.
#[derive(Clone, Debug, PartialEq)]
pub enum Electorate {
    Voters(Vec<Vec<f64>>),
    Groups(Vec<OpinionGroup>),
}

impl Electorate {
    /// Number of entries (voters or groups) as stored.
    pub fn len(&self) -> usize {
        match self {
            Electorate::Voters(v) => v.len(),
            Electorate::Groups(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entry `j` as `(position, weight)`.
    pub fn entry(&self, j: usize) -> (&[f64], u64) {
        match self {
            Electorate::Voters(v) => (&v[j], 1),
            Electorate::Groups(g) => (&g[j].position, g[j].weight),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[f64], u64)> + '_ {
        (0..self.len()).map(move |j| self.entry(j))
    }

    /// Total number of voters `m`.
    pub fn total_weight(&self) -> u64 {
        self.entries().map(|(_, w)| w).sum()
    }
}

/// Non-fatal validation findings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    CoincidentCandidates(usize, usize),
}

/// A perception-manipulation problem. Candidate 0 is the target.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    issue_space: IssueSpace,
    dimension: usize,
    candidates: Vec<Vec<f64>>,
    electorate: Electorate,
    norm: Norm,
    scoring: ScoringRule,
    objective: Objective,
    budget: f64,
    warnings: Vec<Warning>,
}

fn check_point(
    x: &[f64],
    d: usize,
    space: IssueSpace,
    what: &'static str,
    index: usize,
) -> Result<(), ElectionError> {
    if x.len() != d {
        return Err(ElectionError::DimensionMismatch { expected: d, found: x.len() });
    }
    for (coord, &value) in x.iter().enumerate() {
        if !value.is_finite() {
            return Err(ElectionError::NonFinite { what, index, coord });
        }
        if space == IssueSpace::Binary && value != 0.0 && value != 1.0 {
            return Err(ElectionError::NonBinary { what, index, coord, value });
        }
    }
    Ok(())
}

impl Instance {
    pub fn new(
        issue_space: IssueSpace,
        candidates: Vec<Vec<f64>>,
        electorate: Electorate,
        norm: Norm,
        scoring: ScoringRule,
        objective: Objective,
        budget: f64,
    ) -> Result<Instance, ElectionError> {
        if let Norm::L(0) = norm {
            return Err(ElectionError::InvalidNorm);
        }
        let n = candidates.len();
        if n < 2 {
            return Err(ElectionError::TooFewCandidates(n));
        }
        let d = candidates[0].len();
        if d == 0 {
            return Err(ElectionError::ZeroDimension);
        }
        if electorate.is_empty() {
            return Err(ElectionError::NoVoters);
        }
        if scoring.len() != n {
            return Err(ElectionError::ScoringLength { expected: n, found: scoring.len() });
        }
        if !budget.is_finite() || budget < 0.0 {
            return Err(ElectionError::InvalidBudget(budget));
        }
        for (i, c) in candidates.iter().enumerate() {
            check_point(c, d, issue_space, "candidate", i)?;
        }
        match &electorate {
            Electorate::Voters(vs) => {
                for (j, v) in vs.iter().enumerate() {
                    check_point(v, d, issue_space, "voter", j)?;
                }
            }
            Electorate::Groups(gs) => {
                for (j, g) in gs.iter().enumerate() {
                    check_point(&g.position, d, issue_space, "group", j)?;
                    if g.weight == 0 {
                        return Err(ElectionError::ZeroWeight(j));
                    }
                }
            }
        }
        let mut warnings = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if candidates[a] == candidates[b] {
                    warnings.push(Warning::CoincidentCandidates(a, b));
                }
            }
        }
        Ok(Instance {
            issue_space,
            dimension: d,
            candidates,
            electorate,
            norm,
            scoring,
            objective,
            budget,
            warnings,
        })
    }

    pub fn issue_space(&self) -> IssueSpace {
        self.issue_space
    }

    pub fn is_binary(&self) -> bool {
        self.issue_space == IssueSpace::Binary
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn candidates(&self) -> &[Vec<f64>] {
        &self.candidates
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn target(&self) -> &[f64] {
        &self.candidates[0]
    }

    pub fn electorate(&self) -> &Electorate {
        &self.electorate
    }

    /// Total number of voters.
    pub fn num_voters(&self) -> u64 {
        self.electorate.total_weight()
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    pub fn metric(&self) -> Metric {
        Metric { norm: self.norm, binary: self.is_binary() }
    }

    pub fn scoring(&self) -> &ScoringRule {
        &self.scoring
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    /// Distinct voter positions with multiplicities, in first-occurrence order.
    pub fn opinion_groups(&self) -> Vec<OpinionGroup> {
        group_weighted(self.electorate.entries())
    }

    pub fn with_budget(&self, budget: f64) -> Result<Instance, ElectionError> {
        if !budget.is_finite() || budget < 0.0 {
            return Err(ElectionError::InvalidBudget(budget));
        }
        Ok(Instance { budget, ..self.clone() })
    }

    pub fn with_objective(&self, objective: Objective) -> Instance {
        Instance { objective, ..self.clone() }
    }

    pub fn with_electorate(&self, electorate: Electorate) -> Result<Instance, ElectionError> {
        Instance::new(
            self.issue_space,
            self.candidates.clone(),
            electorate,
            self.norm,
            self.scoring.clone(),
            self.objective,
            self.budget,
        )
    }

    /// Same election with every group expanded into individual voters.
    pub fn expanded(&self) -> Instance {
        let voters = self
            .electorate
            .entries()
            .flat_map(|(p, w)| std::iter::repeat_n(p.to_vec(), w as usize))
            .collect();
        Instance { electorate: Electorate::Voters(voters), ..self.clone() }
    }

    /// Same election with voters collapsed into opinion groups.
    pub fn grouped(&self) -> Instance {
        Instance {
            electorate: Electorate::Groups(self.opinion_groups()),
            ..self.clone()
        }
    }
}

fn bits_key(x: &[f64]) -> Vec<u64> {
    // -0.0 and 0.0 are the same position.
    x.iter()
        .map(|&v| if v == 0.0 { 0 } else { v.to_bits() })
        .collect()
}

fn group_weighted<'a>(entries: impl Iterator<Item = (&'a [f64], u64)>) -> Vec<OpinionGroup> {
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut groups: Vec<OpinionGroup> = Vec::new();
    for (pos, w) in entries {
        match index.entry(bits_key(pos)) {
            std::collections::hash_map::Entry::Occupied(e) => groups[*e.get()].weight += w,
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(groups.len());
                groups.push(OpinionGroup { position: pos.to_vec(), weight: w });
            }
        }
    }
    groups
}

/// Exact deduplication of voter positions with counts, first occurrence first.
pub fn group_opinions(voters: &[Vec<f64>]) -> Vec<OpinionGroup> {
    group_weighted(voters.iter().map(|v| (v.as_slice(), 1)))
}
