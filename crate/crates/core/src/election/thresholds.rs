use super::{sort_rivals, ElectionError, Instance, Objective, ScorePartition};

/// Per-voter distance thresholds `d^t`, in the instance's ranking metric:
/// Hamming counts for binary instances, l_p distances for real ones.
///
/// Constructive: the target reaches rank `t` or better iff its distance is at
/// most `d^t`, the `t`-th closest rival distance (`d^n` is infinite).
/// Destructive: the target falls to rank `t` or worse iff its distance is at
/// least `d^t`, the `(t-1)`-th closest rival distance (`d^1` is zero).
#[derive(Clone, Debug, PartialEq)]
pub struct RankThresholds {
    objective: Objective,
    origin: f64,
    by_rank: Vec<f64>,
}

impl RankThresholds {
    /// `d^0`: distance between the voter and the unmoved target.
    pub fn origin(&self) -> f64 {
        self.origin
    }

    /// `d^t` for `1 <= t <= n`.
    pub fn at(&self, t: usize) -> f64 {
        self.by_rank[t - 1]
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn num_ranks(&self) -> usize {
        self.by_rank.len()
    }
}

/// Builds thresholds from rival keys sorted ascending.
pub fn thresholds_from_sorted(rival_keys: &[f64], origin: f64, objective: Objective) -> RankThresholds {
    let n = rival_keys.len() + 1;
    let by_rank = (1..=n)
        .map(|t| match objective {
            Objective::Constructive if t == n => f64::INFINITY,
            Objective::Constructive => rival_keys[t - 1],
            Objective::Destructive if t == 1 => 0.0,
            Objective::Destructive => rival_keys[t - 2],
        })
        .collect();
    RankThresholds { objective, origin, by_rank }
}

/// Thresholds for electorate entry `j` under the partition's objective.
pub fn rank_thresholds(
    instance: &Instance,
    j: usize,
    partition: &ScorePartition,
) -> Result<RankThresholds, ElectionError> {
    let len = instance.electorate().len();
    if j >= len {
        return Err(ElectionError::VoterIndex { index: j, len });
    }
    let (voter, _) = instance.electorate().entry(j);
    let metric = instance.metric();
    let mut rivals: Vec<(usize, f64)> = instance.candidates()[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| (i + 1, metric.key(c, voter)))
        .collect();
    sort_rivals(&mut rivals);
    let keys: Vec<f64> = rivals.iter().map(|r| r.1).collect();
    Ok(thresholds_from_sorted(&keys, metric.key(instance.target(), voter), partition.objective()))
}
