use super::{
    norm::{approx_eq, approx_le, definitely_lt},
    ElectionError, Instance, Objective,
};

/// Rank (1-based) of the target among `rival_keys`. Constructive: the target
/// wins every comparison at equal distance. Destructive: it loses them.
/// Counting rather than bisecting keeps this exact when tolerance ties leave
/// the keys out of strict order.
pub fn rank_target(rival_keys: &[f64], target_key: f64, objective: Objective) -> usize {
    let ahead = match objective {
        Objective::Constructive => rival_keys.iter().filter(|&&k| definitely_lt(k, target_key)).count(),
        Objective::Destructive => rival_keys.iter().filter(|&&k| approx_le(k, target_key)).count(),
    };
    ahead + 1
}

/// Sorts `(candidate, key)` pairs by key; keys equal within tolerance are
/// ordered by candidate index. Returns whether any such tie occurred.
pub fn sort_rivals(rivals: &mut [(usize, f64)]) -> bool {
    rivals.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    let mut tie = false;
    let mut start = 0;
    while start < rivals.len() {
        let mut end = start + 1;
        while end < rivals.len() && approx_eq(rivals[end - 1].1, rivals[end].1) {
            end += 1;
        }
        if end - start > 1 {
            tie = true;
            rivals[start..end].sort_by_key(|r| r.0);
        }
        start = end;
    }
    tie
}

/// Outcome of the election with the target perceived at a given point.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeReport {
    /// Total score per candidate, index 0 is the target.
    pub scores: Vec<f64>,
    /// Target rank for each electorate entry, in storage order.
    pub target_ranks: Vec<usize>,
    /// Whether the objective is achieved.
    pub success: bool,
    /// Declared winner under the objective's tie convention.
    pub winner: usize,
    /// Some voter saw two rivals at equal distance; ordered by index.
    pub rival_ties: bool,
}

impl OutcomeReport {
    pub fn target_score(&self) -> f64 {
        self.scores[0]
    }

    /// Highest rival score and the lowest-index rival attaining it.
    pub fn best_rival(&self) -> (usize, f64) {
        let mut best = (1, self.scores[1]);
        for (i, &s) in self.scores.iter().enumerate().skip(2) {
            if s > best.1 && !approx_eq(s, best.1) {
                best = (i, s);
            }
        }
        best
    }
}

/// Decide success from total scores: constructive requires the target to be
/// at least every rival, destructive requires some rival at least the target.
pub(crate) fn decide(target: f64, best_rival: f64, objective: Objective) -> bool {
    match objective {
        Objective::Constructive => approx_le(best_rival, target),
        Objective::Destructive => approx_le(target, best_rival),
    }
}

/// Tallies the election from scratch with the target moved to `perceived`.
pub fn tally_and_decide(instance: &Instance, perceived: &[f64]) -> Result<OutcomeReport, ElectionError> {
    let d = instance.dimension();
    if perceived.len() != d {
        return Err(ElectionError::DimensionMismatch { expected: d, found: perceived.len() });
    }
    let n = instance.num_candidates();
    let metric = instance.metric();
    let f = instance.scoring();
    let objective = instance.objective();
    let mut scores = vec![0.0; n];
    let mut target_ranks = Vec::with_capacity(instance.electorate().len());
    let mut rival_ties = false;
    let mut rivals: Vec<(usize, f64)> = Vec::with_capacity(n - 1);
    for (voter, weight) in instance.electorate().entries() {
        rivals.clear();
        rivals.extend(
            instance.candidates()[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| (i + 1, metric.key(c, voter))),
        );
        rival_ties |= sort_rivals(&mut rivals);
        let keys: Vec<f64> = rivals.iter().map(|r| r.1).collect();
        let rank = rank_target(&keys, metric.key(perceived, voter), objective);
        let w = weight as f64;
        scores[0] += w * f.value(rank);
        for (k, &(cand, _)) in rivals.iter().enumerate() {
            let r = if k + 1 < rank { k + 1 } else { k + 2 };
            scores[cand] += w * f.value(r);
        }
        target_ranks.push(rank);
    }
    let mut report = OutcomeReport { scores, target_ranks, success: false, winner: 0, rival_ties };
    let (best, best_score) = report.best_rival();
    report.success = decide(report.scores[0], best_score, objective);
    report.winner = match (objective, report.success) {
        (Objective::Constructive, true) | (Objective::Destructive, false) => 0,
        _ => best,
    };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{Electorate, IssueSpace, Norm, ScoringRule};

    #[test]
    fn rank_examples() {
        assert_eq!(rank_target(&[1.0, 2.0], 1.0, Objective::Constructive), 1);
        assert_eq!(rank_target(&[1.0, 2.0], 1.0, Objective::Destructive), 2);
        for obj in [Objective::Constructive, Objective::Destructive] {
            assert_eq!(rank_target(&[1.0, 2.0], 5.0, obj), 3);
        }
        assert_eq!(rank_target(&[1.0, 2.0], 1.0 + 1e-12, Objective::Constructive), 1);
    }

    #[test]
    fn rival_ties_broken_by_index() {
        let mut r = vec![(3, 1.0), (1, 1.0 + 1e-13), (2, 0.5)];
        assert!(sort_rivals(&mut r));
        assert_eq!(r.iter().map(|x| x.0).collect::<Vec<_>>(), vec![2, 1, 3]);
        let mut s = vec![(1, 2.0), (2, 1.0)];
        assert!(!sort_rivals(&mut s));
    }

    fn two_voter(objective: Objective) -> Instance {
        // Voter 0 prefers the target, voter 1 the rival: plurality 1-1.
        Instance::new(
            IssueSpace::Real,
            vec![vec![0.0], vec![10.0]],
            Electorate::Voters(vec![vec![1.0], vec![9.0]]),
            Norm::L(2),
            ScoringRule::plurality(2),
            objective,
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn final_ties_favor_the_adversary() {
        let c = tally_and_decide(&two_voter(Objective::Constructive), &[0.0]).unwrap();
        assert_eq!(c.scores, vec![1.0, 1.0]);
        assert!(c.success);
        assert_eq!(c.winner, 0);
        let d = tally_and_decide(&two_voter(Objective::Destructive), &[0.0]).unwrap();
        assert!(d.success);
        assert_eq!(d.winner, 1);
    }

    #[test]
    fn borda_ranks_one_and_two() {
        let inst = Instance::new(
            IssueSpace::Real,
            vec![vec![0.0], vec![-3.0], vec![3.0]],
            Electorate::Voters(vec![vec![0.5], vec![2.5]]),
            Norm::L(1),
            ScoringRule::borda(3),
            Objective::Constructive,
            0.0,
        )
        .unwrap();
        let r = tally_and_decide(&inst, &[0.0]).unwrap();
        assert_eq!(r.target_ranks, vec![1, 2]);
        assert_eq!(r.target_score(), 3.0);
        let total: f64 = r.scores.iter().sum();
        assert_eq!(total, 2.0 * inst.scoring().total());
    }

    #[test]
    fn wrong_dimension() {
        assert!(tally_and_decide(&two_voter(Objective::Constructive), &[0.0, 1.0]).is_err());
    }
}
