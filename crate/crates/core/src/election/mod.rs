//! The spatial election model: positions, norms, scoring rules, rankings with
//! adversary-favorable ties, and independent witness certification.

mod evaluator;
mod instance;
mod norm;
mod scoring;
mod tally;
mod thresholds;
mod verify;

pub use evaluator::{Evaluation, Evaluator, GroupRanking};
pub use instance::{group_opinions, Electorate, Instance, IssueSpace, Objective, OpinionGroup, Warning};
pub use norm::{
    approx_eq, approx_le, definitely_lt, distance, distance_pow, flip_budget, hamming, Metric, Norm,
    TAU,
};
pub use scoring::{score_partition, ScorePartition, ScoringKind, ScoringRule};
pub use tally::{rank_target, sort_rivals, tally_and_decide, OutcomeReport};
pub use thresholds::{rank_thresholds, thresholds_from_sorted, RankThresholds};
pub use verify::{verify_witness, Certificate, CertificationFailure};

pub(crate) use norm::distance_unchecked;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ElectionError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("norm exponent must be at least 1")]
    InvalidNorm,
    #[error("scoring table is empty")]
    EmptyScoring,
    #[error("scoring table is increasing at rank {rank}")]
    NonMonotoneScoring { rank: usize },
    #[error("scoring table has a non-finite value at rank {rank}")]
    NonFiniteScore { rank: usize },
    #[error("k-approval needs 1 <= k <= n, got k = {k}, n = {n}")]
    InvalidApproval { k: usize, n: usize },
    #[error("scoring table has {found} entries but there are {expected} candidates")]
    ScoringLength { expected: usize, found: usize },
    #[error("at least two candidates are required, got {0}")]
    TooFewCandidates(usize),
    #[error("at least one voter is required")]
    NoVoters,
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("{what} {index} has non-finite coordinate {coord}")]
    NonFinite { what: &'static str, index: usize, coord: usize },
    #[error("{what} {index} has coordinate {coord} = {value}, expected 0 or 1")]
    NonBinary {
        what: &'static str,
        index: usize,
        coord: usize,
        value: f64,
    },
    #[error("opinion group {0} has zero weight")]
    ZeroWeight(usize),
    #[error("budget must be finite and nonnegative, got {0}")]
    InvalidBudget(f64),
    #[error("voter index {index} out of range ({len} entries)")]
    VoterIndex { index: usize, len: usize },
}
