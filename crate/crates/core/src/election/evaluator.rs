//! Incremental scoring for many candidate target positions over one fixed
//! electorate. Rival rankings never change when only the target moves, so
//! they are computed once per opinion group.

use super::{
    rank_target, sort_rivals, tally::decide, thresholds_from_sorted, Instance, Metric, Objective,
    RankThresholds,
};

/// Rivals of one opinion group in preference order.
#[derive(Clone, Debug)]
pub struct GroupRanking {
    pub position: Vec<f64>,
    pub weight: u64,
    /// Rival candidate indices, closest first.
    pub rivals: Vec<usize>,
    /// Matching ranking keys, ascending.
    pub keys: Vec<f64>,
    /// Key between the group and the unmoved target.
    pub origin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub success: bool,
    pub target_score: f64,
    pub best_rival_score: f64,
}

#[derive(Clone, Debug)]
pub struct Evaluator {
    metric: Metric,
    objective: Objective,
    f: Vec<f64>,
    groups: Vec<GroupRanking>,
    /// Rival scores when the target is ranked last by everyone.
    base: Vec<f64>,
    /// Sorted positions `k` (1-based) with `f(k) != f(k+1)`.
    drops: Vec<usize>,
}

impl Evaluator {
    pub fn new(instance: &Instance) -> Evaluator {
        let metric = instance.metric();
        let n = instance.num_candidates();
        let f = instance.scoring().values().to_vec();
        let mut base = vec![0.0; n];
        let groups: Vec<GroupRanking> = instance
            .opinion_groups()
            .into_iter()
            .map(|g| {
                let mut rivals: Vec<(usize, f64)> = instance.candidates()[1..]
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (i + 1, metric.key(c, &g.position)))
                    .collect();
                sort_rivals(&mut rivals);
                for (k, &(c, _)) in rivals.iter().enumerate() {
                    base[c] += g.weight as f64 * f[k];
                }
                GroupRanking {
                    origin: metric.key(instance.target(), &g.position),
                    position: g.position,
                    weight: g.weight,
                    rivals: rivals.iter().map(|r| r.0).collect(),
                    keys: rivals.iter().map(|r| r.1).collect(),
                }
            })
            .collect();
        let drops = (1..n).filter(|&k| f[k - 1] != f[k]).collect();
        Evaluator { metric, objective: instance.objective(), f, groups, base, drops }
    }

    pub fn groups(&self) -> &[GroupRanking] {
        &self.groups
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn thresholds(&self, group: usize) -> RankThresholds {
        let g = &self.groups[group];
        thresholds_from_sorted(&g.keys, g.origin, self.objective)
    }

    /// Target rank in each group for a perceived position.
    pub fn ranks(&self, point: &[f64]) -> Vec<usize> {
        self.groups
            .iter()
            .map(|g| rank_target(&g.keys, self.metric.key(point, &g.position), self.objective))
            .collect()
    }

    /// Scores the election given the target's rank in every group.
    pub fn evaluate_ranks(&self, ranks: &[usize]) -> Evaluation {
        let mut rival = self.base.clone();
        let mut target = 0.0;
        for (g, &t) in self.groups.iter().zip(ranks) {
            let w = g.weight as f64;
            target += w * self.f[t - 1];
            let from = self.drops.partition_point(|&k| k < t);
            for &k in &self.drops[from..] {
                rival[g.rivals[k - 1]] += w * (self.f[k] - self.f[k - 1]);
            }
        }
        let best = rival[1..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Evaluation {
            success: decide(target, best, self.objective),
            target_score: target,
            best_rival_score: best,
        }
    }

    pub fn evaluate(&self, point: &[f64]) -> Evaluation {
        self.evaluate_ranks(&self.ranks(point))
    }

    pub fn success(&self, point: &[f64]) -> bool {
        self.evaluate(point).success
    }
}
