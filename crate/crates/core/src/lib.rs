//! Election control by perception manipulation in spatial voting.
//!
//! A campaigner may move how voters perceive a target candidate within a
//! norm ball. The library decides whether some perceived position makes the
//! target win (constructive) or lose (destructive), with exact solvers for
//! the tractable cases, brute-force oracles, and generators for the hardness
//! constructions.

pub mod bvpm;
pub mod election;
pub mod l2;
pub mod linf;
pub mod oracle;
pub mod problems;
pub mod reductions;
mod scenario;
pub mod verdict;

pub use bvpm::{solve_bvpm, solve_bvpm_with};
pub use election::{
    tally_and_decide, verify_witness, Electorate, ElectionError, Instance, IssueSpace, Norm, Objective,
    OpinionGroup, ScoringRule,
};
pub use l2::{
    solve_l2_constant_issues, solve_l2_constant_issues_with, solve_l2_constant_voters, solve_l2_constant_voters_with,
};
pub use linf::{
    solve_linf_constant_issues, solve_linf_constant_issues_with, solve_linf_constant_voters,
    solve_linf_constant_voters_with, two_candidate_constructive,
};
pub use verdict::{Decision, Limits, SearchMode, SolveError, SolveOptions, SolveStats, Verdict, Witness};
