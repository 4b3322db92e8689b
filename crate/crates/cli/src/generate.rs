//! Seeded random instances.

use std::collections::HashSet;

use rand::Rng;
use spatial_control::election::group_opinions;
use spatial_control::problems::{BiscInstance, ProblemError};
use spatial_control::{ElectionError, Electorate, Instance, IssueSpace, Norm, Objective, OpinionGroup, ScoringRule};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Election(#[from] ElectionError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

#[derive(Clone, Debug)]
pub struct RandomSpec {
    pub issue_space: IssueSpace,
    pub dimension: usize,
    pub candidates: usize,
    pub voters: u64,
    /// Number of distinct voter positions; every position gets at least one voter.
    pub groups: Option<usize>,
    /// Store the electorate as weighted groups instead of one entry per voter.
    pub grouped: bool,
    pub norm: Norm,
    pub epsilon: f64,
    pub objective: Objective,
    pub scoring: ScoringRule,
}

fn point(rng: &mut impl Rng, space: IssueSpace, d: usize) -> Vec<f64> {
    match space {
        IssueSpace::Binary => (0..d).map(|_| f64::from(rng.random::<bool>() as u8)).collect(),
        IssueSpace::Real => (0..d).map(|_| rng.random_range(-1.0..1.0)).collect(),
    }
}

fn distinct_points(rng: &mut impl Rng, space: IssueSpace, d: usize, q: usize) -> Result<Vec<Vec<f64>>, GenerateError> {
    if space == IssueSpace::Binary && d < 64 && (q as u128) > 1u128 << d {
        return Err(GenerateError::Invalid(format!("{q} distinct binary positions need dimension above {d}")));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(q);
    while out.len() < q {
        let p = point(rng, space, d);
        if seen.insert(p.iter().map(|x| x.to_bits()).collect::<Vec<_>>()) {
            out.push(p);
        }
    }
    Ok(out)
}

pub fn random_instance(rng: &mut impl Rng, spec: &RandomSpec) -> Result<Instance, GenerateError> {
    let (space, d) = (spec.issue_space, spec.dimension);
    if d == 0 || spec.voters == 0 {
        return Err(GenerateError::Invalid("dimension and voters must be positive".into()));
    }
    let candidates = (0..spec.candidates).map(|_| point(rng, space, d)).collect();
    let electorate = match spec.groups {
        Some(q) => {
            if q == 0 || q as u64 > spec.voters {
                return Err(GenerateError::Invalid(format!("{q} groups need between 1 and {} voters", spec.voters)));
            }
            let positions = distinct_points(rng, space, d, q)?;
            let mut weights = vec![1u64; q];
            for _ in q as u64..spec.voters {
                weights[rng.random_range(0..q)] += 1;
            }
            if spec.grouped {
                Electorate::Groups(
                    positions.into_iter().zip(weights).map(|(position, weight)| OpinionGroup { position, weight }).collect(),
                )
            } else {
                Electorate::Voters(
                    positions.iter().zip(&weights).flat_map(|(p, &w)| (0..w).map(move |_| p.clone())).collect(),
                )
            }
        }
        None => {
            let voters: Vec<Vec<f64>> = (0..spec.voters).map(|_| point(rng, space, d)).collect();
            if spec.grouped {
                Electorate::Groups(group_opinions(&voters))
            } else {
                Electorate::Voters(voters)
            }
        }
    };
    Ok(Instance::new(space, candidates, electorate, spec.norm, spec.scoring.clone(), spec.objective, spec.epsilon)?)
}

/// Target and rival disagree everywhere; voters are uniform.
pub fn random_bisc(rng: &mut impl Rng, dimension: usize, voters: usize) -> Result<BiscInstance, GenerateError> {
    let target = point(rng, IssueSpace::Binary, dimension);
    let rival = target.iter().map(|x| 1.0 - x).collect();
    let voters = (0..voters).map(|_| point(rng, IssueSpace::Binary, dimension)).collect();
    Ok(BiscInstance::new(target, rival, voters)?)
}
