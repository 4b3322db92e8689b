//! Depth-first enumeration of breakpoint scenarios, one rank per opinion
//! group, shared by every scenario-based solver.
//!
//! A scenario fixes, for every group, the block of ranks the target must
//! reach. A solver-specific realizer turns a complete scenario into a point
//! (or reports it infeasible). Two prunings apply in
//! [`SearchMode::FirstWitness`]:
//!  * a score bound: the partial scenario completed with the best possible
//!    ranks for the adversary must already achieve the objective, since
//!    scores are monotone in the ranks;
//!  * partial feasibility, delegated to the realizer.

use crate::election::{Evaluator, Instance, Objective, ScorePartition};
use crate::verdict::{certify, SearchMode, SolveError, SolveStats, Verdict};

pub(crate) trait ScenarioRealizer {
    /// Whether the constraints of the first `assigned.len()` groups can hold
    /// simultaneously. Must never reject a realizable prefix.
    fn partial_feasible(&mut self, _assigned: &[usize]) -> Result<bool, SolveError> {
        Ok(true)
    }

    /// A point meeting every group's threshold for the scenario.
    fn realize(&mut self, scenario: &[usize]) -> Result<Option<Vec<f64>>, SolveError>;
}

pub(crate) struct ScenarioSearch<'a> {
    pub instance: &'a Instance,
    pub evaluator: &'a Evaluator,
    pub partition: &'a ScorePartition,
    pub mode: SearchMode,
    pub max_nodes: u64,
}

struct State<'s, R> {
    search: &'s ScenarioSearch<'s>,
    realizer: R,
    order: Vec<usize>,
    extreme: usize,
    ranks: Vec<usize>,
    stats: SolveStats,
    witness: Option<crate::verdict::Witness>,
}

impl ScenarioSearch<'_> {
    pub fn run<R: ScenarioRealizer>(&self, realizer: R) -> Result<Verdict, SolveError> {
        let q = self.evaluator.groups().len();
        let r = self.partition.unique_count();
        if self.mode == SearchMode::Exhaustive {
            let leaves = (r as u128).checked_pow(q as u32).unwrap_or(u128::MAX);
            if leaves > self.max_nodes as u128 {
                return Err(SolveError::LimitExceeded {
                    what: "scenario count",
                    value: leaves,
                    limit: self.max_nodes as u128,
                });
            }
        }
        let extreme = match self.partition.objective() {
            Objective::Constructive => 1,
            Objective::Destructive => self.partition.num_ranks(),
        };
        let mut state = State {
            search: self,
            realizer,
            order: self.partition.adversary_order(),
            extreme,
            ranks: vec![extreme; q],
            stats: SolveStats::default(),
            witness: None,
        };
        state.dfs(0)?;
        Ok(Verdict { witness: state.witness, stats: state.stats })
    }
}

impl<R: ScenarioRealizer> State<'_, R> {
    /// Returns `true` once the search should stop.
    fn dfs(&mut self, depth: usize) -> Result<bool, SolveError> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.search.max_nodes {
            return Err(SolveError::LimitExceeded {
                what: "scenario search nodes",
                value: self.stats.nodes as u128,
                limit: self.search.max_nodes as u128,
            });
        }
        let exhaustive = self.search.mode == SearchMode::Exhaustive;
        let q = self.ranks.len();
        if depth == q {
            return self.leaf();
        }
        for i in 0..self.order.len() {
            self.ranks[depth] = self.order[i];
            if !exhaustive {
                if !self.search.evaluator.evaluate_ranks(&self.ranks).success {
                    continue;
                }
                if !self.realizer.partial_feasible(&self.ranks[..=depth])? {
                    continue;
                }
            }
            if self.dfs(depth + 1)? {
                self.ranks[depth] = self.extreme;
                return Ok(true);
            }
        }
        self.ranks[depth] = self.extreme;
        Ok(false)
    }

    fn leaf(&mut self) -> Result<bool, SolveError> {
        self.stats.scenarios += 1;
        let exhaustive = self.search.mode == SearchMode::Exhaustive;
        let Some(point) = self.realizer.realize(&self.ranks)? else {
            return Ok(false);
        };
        self.stats.points += 1;
        if self.witness.is_some() || !self.search.evaluator.success(&point) {
            return Ok(false);
        }
        if let Some(w) = certify(self.search.instance, &point)? {
            self.witness = Some(w);
            return Ok(!exhaustive);
        }
        Ok(false)
    }
}
