use super::{norm::approx_eq, ElectionError, Objective};

/// Which named constructor produced a rule, kept for serialization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScoringKind {
    Plurality,
    Veto,
    Borda,
    KApproval(usize),
    Table,
}

/// Positional scoring rule: the candidate ranked `t` by a voter receives
/// `value(t)`. Values are non-increasing in `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoringRule {
    kind: ScoringKind,
    values: Vec<f64>,
}

impl ScoringRule {
    pub fn plurality(n: usize) -> ScoringRule {
        let mut values = vec![0.0; n];
        if n > 0 {
            values[0] = 1.0;
        }
        ScoringRule { kind: ScoringKind::Plurality, values }
    }

    pub fn veto(n: usize) -> ScoringRule {
        let mut values = vec![1.0; n];
        if n > 0 {
            values[n - 1] = 0.0;
        }
        ScoringRule { kind: ScoringKind::Veto, values }
    }

    pub fn borda(n: usize) -> ScoringRule {
        let values = (1..=n).map(|t| (n - t) as f64).collect();
        ScoringRule { kind: ScoringKind::Borda, values }
    }

    pub fn k_approval(n: usize, k: usize) -> Result<ScoringRule, ElectionError> {
        if k == 0 || k > n {
            return Err(ElectionError::InvalidApproval { k, n });
        }
        let values = (0..n).map(|t| if t < k { 1.0 } else { 0.0 }).collect();
        Ok(ScoringRule { kind: ScoringKind::KApproval(k), values })
    }

    pub fn from_table(values: Vec<f64>) -> Result<ScoringRule, ElectionError> {
        if values.is_empty() {
            return Err(ElectionError::EmptyScoring);
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(ElectionError::NonFiniteScore { rank: i + 1 });
            }
        }
        for (i, w) in values.windows(2).enumerate() {
            if w[1] > w[0] {
                return Err(ElectionError::NonMonotoneScoring { rank: i + 2 });
            }
        }
        Ok(ScoringRule { kind: ScoringKind::Table, values })
    }

    pub fn kind(&self) -> ScoringKind {
        self.kind
    }

    /// Number of ranks the rule covers.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Score at 1-based rank `t`.
    pub fn value(&self, t: usize) -> f64 {
        self.values[t - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sum of `f(t)` over all ranks; every voter hands out exactly this much.
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Number of distinct values of `f`.
    pub fn unique_count(&self) -> usize {
        1 + self
            .values
            .windows(2)
            .filter(|w| !approx_eq(w[0], w[1]))
            .count()
    }
}

/// Representative ranks of the equal-value blocks of a scoring rule.
///
/// Constructive: the last rank of every block (the worst rank that still earns
/// the block's value). Destructive: the first rank of every block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScorePartition {
    objective: Objective,
    breakpoints: Vec<usize>,
    n: usize,
}

impl ScorePartition {
    pub fn objective(&self) -> Objective {
        self.objective
    }

    /// Breakpoint ranks in increasing order.
    pub fn breakpoints(&self) -> &[usize] {
        &self.breakpoints
    }

    pub fn unique_count(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn num_ranks(&self) -> usize {
        self.n
    }

    /// Rank range `lo..=hi` of the block represented by breakpoint `idx`.
    pub fn block(&self, idx: usize) -> (usize, usize) {
        match self.objective {
            Objective::Constructive => {
                let lo = if idx == 0 { 1 } else { self.breakpoints[idx - 1] + 1 };
                (lo, self.breakpoints[idx])
            }
            Objective::Destructive => {
                let hi = self
                    .breakpoints
                    .get(idx + 1)
                    .map(|&s| s - 1)
                    .unwrap_or(self.n);
                (self.breakpoints[idx], hi)
            }
        }
    }

    /// Breakpoints in the order the adversary prefers to try them: best target
    /// ranks first when constructing, worst ranks first when destroying.
    pub fn adversary_order(&self) -> Vec<usize> {
        let mut order = self.breakpoints.clone();
        if self.objective == Objective::Destructive {
            order.reverse();
        }
        order
    }
}

pub fn score_partition(scoring: &ScoringRule, objective: Objective) -> ScorePartition {
    let f = scoring.values();
    let n = f.len();
    let mut breakpoints = Vec::new();
    match objective {
        Objective::Constructive => {
            for t in 1..=n {
                if t == n || !approx_eq(f[t - 1], f[t]) {
                    breakpoints.push(t);
                }
            }
        }
        Objective::Destructive => {
            for t in 1..=n {
                if t == 1 || !approx_eq(f[t - 2], f[t - 1]) {
                    breakpoints.push(t);
                }
            }
        }
    }
    ScorePartition { objective, breakpoints, n }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn named_rules() {
        assert_eq!(ScoringRule::plurality(3).values(), &[1.0, 0.0, 0.0]);
        assert_eq!(ScoringRule::veto(3).values(), &[1.0, 1.0, 0.0]);
        assert_eq!(ScoringRule::borda(3).values(), &[2.0, 1.0, 0.0]);
        assert_eq!(
            ScoringRule::k_approval(4, 2).unwrap().values(),
            &[1.0, 1.0, 0.0, 0.0]
        );
        assert!(ScoringRule::k_approval(3, 0).is_err());
        assert!(ScoringRule::k_approval(3, 4).is_err());
    }

    #[test]
    fn increasing_table_rejected() {
        assert_eq!(
            ScoringRule::from_table(vec![1.0, 0.0, 0.5]),
            Err(ElectionError::NonMonotoneScoring { rank: 3 })
        );
        assert!(ScoringRule::from_table(vec![]).is_err());
        assert!(ScoringRule::from_table(vec![f64::NAN]).is_err());
    }

    #[test]
    fn partition_examples() {
        let c = score_partition(&ScoringRule::plurality(3), Objective::Constructive);
        assert_eq!(c.breakpoints(), &[1, 3]);
        let b = score_partition(&ScoringRule::borda(3), Objective::Constructive);
        assert_eq!(b.breakpoints(), &[1, 2, 3]);
        let v = score_partition(&ScoringRule::veto(3), Objective::Destructive);
        assert_eq!(v.breakpoints(), &[1, 3]);
        assert_eq!(v.block(0), (1, 2));
        assert_eq!(v.block(1), (3, 3));
        assert_eq!(c.block(1), (2, 3));
        assert_eq!(v.adversary_order(), vec![3, 1]);
    }

    fn arb_rule() -> impl Strategy<Value = ScoringRule> {
        prop::collection::vec(0u8..4, 2..8).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            ScoringRule::from_table(v.into_iter().map(f64::from).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn breakpoints_delimit_constant_blocks(rule in arb_rule(), destructive in any::<bool>()) {
            let obj = if destructive { Objective::Destructive } else { Objective::Constructive };
            let part = score_partition(&rule, obj);
            let bp = part.breakpoints();
            prop_assert!(bp.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(part.unique_count(), rule.unique_count());
            let mut covered = 0;
            for idx in 0..bp.len() {
                let (lo, hi) = part.block(idx);
                prop_assert!(lo <= hi);
                covered += hi - lo + 1;
                for t in lo..=hi {
                    prop_assert_eq!(rule.value(t), rule.value(lo));
                }
                if hi < rule.len() {
                    prop_assert!(rule.value(hi + 1) != rule.value(hi));
                }
            }
            prop_assert_eq!(covered, rule.len());
            match obj {
                Objective::Constructive => prop_assert_eq!(*bp.last().unwrap(), rule.len()),
                Objective::Destructive => prop_assert_eq!(bp[0], 1),
            }
        }
    }
}
