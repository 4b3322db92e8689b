use thiserror::Error;

use crate::election::{verify_witness, Certificate, ElectionError, Instance};
use crate::l2::GeometryError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Yes,
    No,
}

/// A certified manipulated target position.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub position: Vec<f64>,
    pub scores: Vec<f64>,
    pub target_ranks: Vec<usize>,
    pub budget_slack: f64,
}

impl Witness {
    pub fn from_certificate(position: Vec<f64>, cert: &Certificate) -> Witness {
        Witness {
            position,
            scores: cert.outcome.scores.clone(),
            target_ranks: cert.outcome.target_ranks.clone(),
            budget_slack: cert.budget_slack,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Scenario leaves whose feasibility was evaluated.
    pub scenarios: u64,
    /// Search-tree nodes visited, leaves included.
    pub nodes: u64,
    /// Candidate points scored.
    pub points: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub witness: Option<Witness>,
    pub stats: SolveStats,
}

impl Verdict {
    pub fn decision(&self) -> Decision {
        if self.witness.is_some() {
            Decision::Yes
        } else {
            Decision::No
        }
    }

    pub fn is_yes(&self) -> bool {
        self.witness.is_some()
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("{solver} requires {requirement}")]
    Unsupported {
        solver: &'static str,
        requirement: String,
    },
    #[error("{what} is {value}, above the practical limit {limit}")]
    LimitExceeded {
        what: &'static str,
        value: u128,
        limit: u128,
    },
    #[error(transparent)]
    Election(#[from] ElectionError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl SolveError {
    pub(crate) fn unsupported(solver: &'static str, requirement: impl Into<String>) -> SolveError {
        SolveError::Unsupported { solver, requirement: requirement.into() }
    }
}

/// Caps that turn exponential blowups into explicit refusals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Opinion groups for binary scenario search.
    pub bvpm_groups: usize,
    /// Opinion groups for l_infinity scenario search.
    pub linf_groups: usize,
    /// Opinion groups for l2 scenario search.
    pub l2_groups: usize,
    /// Dimension for the l_infinity endpoint grid.
    pub linf_grid_dimension: usize,
    /// Points in the l_infinity endpoint grid.
    pub linf_grid_points: u128,
    /// Dimension for the l2 representative-point arrangement.
    pub l2_dimension: usize,
    /// Sphere subsets examined by the l2 arrangement.
    pub sphere_subsets: u128,
    /// Nodes of a scenario search tree.
    pub scenario_nodes: u64,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            bvpm_groups: 12,
            linf_groups: 8,
            l2_groups: 5,
            linf_grid_dimension: 16,
            linf_grid_points: 4_000_000,
            l2_dimension: 3,
            sphere_subsets: 2_000_000,
            scenario_nodes: 20_000_000,
        }
    }
}

/// How scenario trees are explored.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchMode {
    /// Stop at the first certified witness, pruning scenarios whose best case
    /// cannot reach the objective.
    #[default]
    FirstWitness,
    /// Evaluate every scenario leaf; the reported witness is still the first.
    Exhaustive,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub mode: SearchMode,
    pub limits: Limits,
}

/// Certifies a candidate point from scratch.
pub(crate) fn certify(instance: &Instance, point: &[f64]) -> Result<Option<Witness>, SolveError> {
    let cert = verify_witness(instance, point)?;
    Ok(cert.passed().then(|| Witness::from_certificate(point.to_vec(), &cert)))
}
