//! Exact solver for binary issues.
//!
//! Issues on which every opinion group holds the same relabeled value are
//! interchangeable, so a manipulation is described by how many issues of each
//! equivalence class get flipped. Each breakpoint scenario becomes a small
//! integer feasibility problem over those counts.

use std::collections::HashSet;

use crate::election::{
    flip_budget, score_partition, Evaluator, Instance, Norm, Objective, RankThresholds,
};
use crate::scenario::{ScenarioRealizer, ScenarioSearch};
use crate::verdict::{certify, SolveError, SolveOptions, SolveStats, Verdict};

/// Issues sharing one voter-value column, after relabeling so that the target
/// holds 1 on every issue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClass {
    /// Relabeled value held by each voter (or group) on these issues.
    pub pattern: Vec<bool>,
    /// Issue indices, ascending.
    pub members: Vec<usize>,
    /// `+1` where the voter holds 1 (a flip moves the target away), else `-1`.
    pub signs: Vec<i8>,
}

impl EquivalenceClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Number of issues flipped in each class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipPlan {
    pub counts: Vec<u64>,
}

impl FlipPlan {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Groups issues by their relabeled voter columns. Classes are ordered by
/// their smallest member.
pub fn issue_equivalence_classes(voters: &[Vec<f64>], target: &[f64]) -> Vec<EquivalenceClass> {
    let mut classes: Vec<EquivalenceClass> = Vec::new();
    let mut by_pattern: std::collections::HashMap<Vec<bool>, usize> = Default::default();
    for (k, &t) in target.iter().enumerate() {
        let pattern: Vec<bool> = voters.iter().map(|v| (v[k] == 1.0) == (t == 1.0)).collect();
        match by_pattern.get(&pattern) {
            Some(&i) => classes[i].members.push(k),
            None => {
                by_pattern.insert(pattern.clone(), classes.len());
                let signs = pattern.iter().map(|&b| if b { 1 } else { -1 }).collect();
                classes.push(EquivalenceClass { pattern, members: vec![k], signs });
            }
        }
    }
    classes
}

/// One distance constraint normalized to `sum_i a_i x_i <= rhs`, `a_i = ±1`.
struct Row {
    coeffs: Vec<i64>,
    rhs: i64,
}

fn rows(
    classes: &[EquivalenceClass],
    thresholds: &[RankThresholds],
    scenario: &[usize],
    objective: Objective,
) -> Vec<Row> {
    let mut out = Vec::new();
    for (j, (th, &t)) in thresholds.iter().zip(scenario).enumerate() {
        let bound = th.at(t);
        if bound.is_infinite() {
            continue;
        }
        let (origin, bound) = (th.origin() as i64, bound as i64);
        let z = classes.iter().map(|c| c.signs[j] as i64);
        out.push(match objective {
            Objective::Constructive => Row { coeffs: z.collect(), rhs: bound - origin },
            Objective::Destructive => Row { coeffs: z.map(|a| -a).collect(), rhs: origin - bound },
        });
    }
    out
}

struct IntSearch<'a> {
    sizes: Vec<u64>,
    rows: &'a [Row],
    /// `relief[i][j]`: total size of classes `i..` with coefficient -1 in row j.
    relief: Vec<Vec<u64>>,
    x: Vec<u64>,
    sums: Vec<i64>,
}

impl IntSearch<'_> {
    fn dfs(&mut self, i: usize, budget: u64) -> bool {
        for (j, row) in self.rows.iter().enumerate() {
            let best = self.sums[j] - budget.min(self.relief[i][j]) as i64;
            if best > row.rhs {
                return false;
            }
        }
        if i == self.sizes.len() {
            return true;
        }
        let top = self.sizes[i].min(budget);
        for v in 0..=top {
            self.x[i] = v;
            for (j, row) in self.rows.iter().enumerate() {
                self.sums[j] += row.coeffs[i] * v as i64;
            }
            let ok = self.dfs(i + 1, budget - v);
            for (j, row) in self.rows.iter().enumerate() {
                self.sums[j] -= row.coeffs[i] * v as i64;
            }
            if ok {
                return true;
            }
        }
        self.x[i] = 0;
        false
    }
}

/// Finds flip counts meeting every group's threshold for the scenario, with
/// at most `flips` flips in total. `thresholds` are in Hamming units.
pub fn scenario_feasibility(
    classes: &[EquivalenceClass],
    thresholds: &[RankThresholds],
    scenario: &[usize],
    flips: u64,
    objective: Objective,
) -> Option<FlipPlan> {
    let rows = rows(classes, thresholds, scenario, objective);
    let c = classes.len();
    let mut relief = vec![vec![0u64; rows.len()]; c + 1];
    for i in (0..c).rev() {
        for (j, row) in rows.iter().enumerate() {
            relief[i][j] = relief[i + 1][j] + if row.coeffs[i] < 0 { classes[i].size() as u64 } else { 0 };
        }
    }
    let mut search = IntSearch {
        sizes: classes.iter().map(|c| c.size() as u64).collect(),
        rows: &rows,
        relief,
        x: vec![0; c],
        sums: vec![0; rows.len()],
    };
    search.dfs(0, flips).then_some(FlipPlan { counts: search.x })
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("plan flips {count} issues in class {class} of size {size}")]
pub struct PlanError {
    pub class: usize,
    pub count: u64,
    pub size: usize,
}

/// Flips the lowest-index `x_i` members of every class on the original target.
pub fn apply_flips(
    target: &[f64],
    classes: &[EquivalenceClass],
    plan: &FlipPlan,
) -> Result<Vec<f64>, PlanError> {
    let mut out = target.to_vec();
    for (i, (class, &count)) in classes.iter().zip(&plan.counts).enumerate() {
        if count as usize > class.size() {
            return Err(PlanError { class: i, count, size: class.size() });
        }
        for &k in &class.members[..count as usize] {
            out[k] = 1.0 - out[k];
        }
    }
    Ok(out)
}

struct BvpmRealizer<'a> {
    target: &'a [f64],
    classes: Vec<EquivalenceClass>,
    thresholds: Vec<RankThresholds>,
    flips: u64,
    objective: Objective,
}

impl ScenarioRealizer for BvpmRealizer<'_> {
    fn partial_feasible(&mut self, assigned: &[usize]) -> Result<bool, SolveError> {
        Ok(scenario_feasibility(
            &self.classes,
            &self.thresholds[..assigned.len()],
            assigned,
            self.flips,
            self.objective,
        )
        .is_some())
    }

    fn realize(&mut self, scenario: &[usize]) -> Result<Option<Vec<f64>>, SolveError> {
        let Some(plan) =
            scenario_feasibility(&self.classes, &self.thresholds, scenario, self.flips, self.objective)
        else {
            return Ok(None);
        };
        let point = apply_flips(self.target, &self.classes, &plan)
            .expect("feasibility respects class sizes");
        Ok(Some(point))
    }
}

pub fn solve_bvpm(instance: &Instance) -> Result<Verdict, SolveError> {
    solve_bvpm_with(instance, &SolveOptions::default())
}

pub fn solve_bvpm_with(instance: &Instance, options: &SolveOptions) -> Result<Verdict, SolveError> {
    if !instance.is_binary() {
        return Err(SolveError::unsupported("bvpm", "a binary issue space"));
    }
    let evaluator = Evaluator::new(instance);
    let q = evaluator.groups().len();
    if q > options.limits.bvpm_groups {
        return Err(SolveError::LimitExceeded {
            what: "opinion groups",
            value: q as u128,
            limit: options.limits.bvpm_groups as u128,
        });
    }
    let p = match instance.norm() {
        Norm::Inf => return solve_linf_dichotomy(instance, &evaluator),
        Norm::L(p) => p,
    };
    let positions: Vec<Vec<f64>> = evaluator.groups().iter().map(|g| g.position.clone()).collect();
    let partition = score_partition(instance.scoring(), instance.objective());
    let realizer = BvpmRealizer {
        target: instance.target(),
        classes: issue_equivalence_classes(&positions, instance.target()),
        thresholds: (0..q).map(|g| evaluator.thresholds(g)).collect(),
        flips: flip_budget(instance.budget(), p),
        objective: instance.objective(),
    };
    ScenarioSearch {
        instance,
        evaluator: &evaluator,
        partition: &partition,
        mode: options.mode,
        max_nodes: options.limits.scenario_nodes,
    }
    .run(realizer)
}

/// Under l_infinity a binary target is either stuck (budget below 1) or can
/// move anywhere. Anywhere, its distance to each voter is 0 or 1, so the only
/// outcomes come from sitting on one group's position or on none of them.
fn solve_linf_dichotomy(instance: &Instance, evaluator: &Evaluator) -> Result<Verdict, SolveError> {
    let mut stats = SolveStats::default();
    let mut candidates = vec![instance.target().to_vec()];
    if crate::election::approx_le(1.0, instance.budget()) {
        let groups: HashSet<Vec<u64>> = evaluator
            .groups()
            .iter()
            .map(|g| g.position.iter().map(|&v| v as u64).collect())
            .collect();
        candidates.extend(evaluator.groups().iter().map(|g| g.position.clone()));
        let d = instance.dimension();
        // Among q + 1 distinct bit patterns at least one is not a group position.
        let outside = (0..=groups.len() as u64)
            .take_while(|&i| d >= 64 || i < (1u64 << d))
            .map(|i| (0..d).map(|k| if k < 64 { (i >> k) & 1 } else { 0 }).collect::<Vec<u64>>())
            .find(|bits| !groups.contains(bits));
        if let Some(bits) = outside {
            candidates.push(bits.into_iter().map(|b| b as f64).collect());
        }
    }
    for point in candidates {
        stats.scenarios += 1;
        stats.points += 1;
        if evaluator.success(&point) {
            if let Some(w) = certify(instance, &point)? {
                return Ok(Verdict { witness: Some(w), stats });
            }
        }
    }
    Ok(Verdict { witness: None, stats })
}
