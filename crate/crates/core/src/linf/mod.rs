//! Exact solvers for real issues under the l_infinity norm.
//!
//! Every region of interest is an intersection of axis-aligned cubes or of
//! their complements, so candidate coordinates can be restricted to cube faces
//! on each dimension independently.

mod cover;

pub use cover::{
    feasibility_constant_constraints, feasibility_constant_constraints_traced, CoverFamily,
    CoverMember,
};

use fixedbitset::FixedBitSet;

use crate::election::{approx_eq, approx_le, score_partition, Evaluator, Instance, Norm, Objective};
use crate::scenario::{ScenarioRealizer, ScenarioSearch};
use crate::verdict::{certify, SolveError, SolveOptions, SolveStats, Verdict};

/// `{x : ||x - center||_inf <= radius}`; as a constraint to avoid, its
/// interior.
#[derive(Clone, Debug, PartialEq)]
pub struct Cube {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Cube {
    pub fn distance(&self, x: &[f64]) -> f64 {
        crate::election::distance_unchecked(x, &self.center, Norm::Inf)
    }
}

/// The closed-form manipulation for two candidates: move towards the rival on
/// every issue, as far as the budget allows.
pub fn two_candidate_point(c1: &[f64], c2: &[f64], epsilon: f64) -> Vec<f64> {
    c1.iter()
        .zip(c2)
        .map(|(&a, &b)| a + (b - a).signum() * (b - a).abs().min(epsilon))
        .collect()
}

pub fn two_candidate_constructive(instance: &Instance) -> Result<Verdict, SolveError> {
    if instance.num_candidates() != 2
        || instance.is_binary()
        || instance.norm() != Norm::Inf
        || instance.objective() != Objective::Constructive
    {
        return Err(SolveError::unsupported(
            "two-cand",
            "two candidates, real issues, the l_infinity norm and a constructive objective",
        ));
    }
    let c = instance.candidates();
    let point = two_candidate_point(&c[0], &c[1], instance.budget());
    let stats = SolveStats { scenarios: 0, nodes: 0, points: 1 };
    Ok(Verdict { witness: certify(instance, &point)?, stats })
}

/// Intersects closed boxes inside the budget cube and returns the midpoint of
/// the intersection. Boxes with infinite radius impose nothing.
pub fn box_scenario_constructive(budget: &Cube, boxes: &[Cube]) -> Option<Vec<f64>> {
    let d = budget.center.len();
    let mut out = Vec::with_capacity(d);
    for j in 0..d {
        let mut lo = budget.center[j] - budget.radius;
        let mut hi = budget.center[j] + budget.radius;
        for b in boxes.iter().filter(|b| b.radius.is_finite()) {
            lo = lo.max(b.center[j] - b.radius);
            hi = hi.min(b.center[j] + b.radius);
        }
        if !approx_le(lo, hi) {
            return None;
        }
        out.push(if lo <= hi { 0.5 * (lo + hi) } else { lo });
    }
    Some(out)
}

/// Candidate coordinates per dimension and the cubes each one escapes.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionEndpoints {
    /// Ascending candidate coordinates for every dimension.
    pub points: Vec<Vec<f64>>,
    /// `covers[j][i]`: cubes `c` with `|points[j][i] - c.center[j]| >= c.radius`.
    pub covers: Vec<Vec<FixedBitSet>>,
}

impl DimensionEndpoints {
    /// Number of points in the cross product, saturating.
    pub fn product_size(&self) -> u128 {
        self.points
            .iter()
            .fold(1u128, |acc, p| acc.saturating_mul(p.len() as u128))
    }
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|b, a| approx_eq(*a, *b));
    v
}

/// Faces of every cube clipped to the budget interval on each dimension, or
/// the budget center where no face falls inside.
pub fn endpoint_grid(boxes: &[Cube], budget: &Cube) -> DimensionEndpoints {
    let d = budget.center.len();
    let mut points = Vec::with_capacity(d);
    let mut covers = Vec::with_capacity(d);
    for j in 0..d {
        let y = budget.center[j];
        let (lo, hi) = (y - budget.radius, y + budget.radius);
        let mut col = Vec::new();
        for b in boxes.iter().filter(|b| b.radius.is_finite()) {
            for face in [b.center[j] - b.radius, b.center[j] + b.radius] {
                if approx_le(lo, face) && approx_le(face, hi) {
                    col.push(face.clamp(lo, hi));
                }
            }
        }
        let mut col = sorted_unique(col);
        if col.is_empty() {
            col.push(y);
        }
        covers.push(
            col.iter()
                .map(|&p| {
                    let mut s = FixedBitSet::with_capacity(boxes.len());
                    for (i, b) in boxes.iter().enumerate() {
                        if approx_le(b.radius, (p - b.center[j]).abs()) {
                            s.insert(i);
                        }
                    }
                    s
                })
                .collect(),
        );
        points.push(col);
    }
    DimensionEndpoints { points, covers }
}

fn require_linf(instance: &Instance, solver: &'static str) -> Result<(), SolveError> {
    if instance.is_binary() || instance.norm() != Norm::Inf {
        return Err(SolveError::unsupported(solver, "real issues and the l_infinity norm"));
    }
    Ok(())
}

pub fn solve_linf_constant_issues(instance: &Instance) -> Result<Verdict, SolveError> {
    solve_linf_constant_issues_with(instance, &SolveOptions::default())
}

/// Builds the grid the constant-issues solver would scan, without scanning.
pub fn constant_issues_grid(instance: &Instance, evaluator: &Evaluator) -> Vec<Vec<f64>> {
    let partition = score_partition(instance.scoring(), instance.objective());
    let budget = Cube { center: instance.target().to_vec(), radius: instance.budget() };
    let mut boxes = vec![budget.clone()];
    for g in 0..evaluator.groups().len() {
        let th = evaluator.thresholds(g);
        for &t in partition.breakpoints() {
            let r = th.at(t);
            if r.is_finite() {
                boxes.push(Cube { center: evaluator.groups()[g].position.clone(), radius: r });
            }
        }
    }
    let grid = endpoint_grid(&boxes, &budget);
    grid.points
        .into_iter()
        .zip(instance.target())
        .map(|(mut col, &y)| {
            // The unmoved coordinate also stands for the empty-fallback case of
            // every sub-arrangement.
            col.push(y);
            sorted_unique(col)
        })
        .collect()
}

pub fn solve_linf_constant_issues_with(
    instance: &Instance,
    options: &SolveOptions,
) -> Result<Verdict, SolveError> {
    require_linf(instance, "linf-issues")?;
    let d = instance.dimension();
    if d > options.limits.linf_grid_dimension {
        return Err(SolveError::LimitExceeded {
            what: "dimension",
            value: d as u128,
            limit: options.limits.linf_grid_dimension as u128,
        });
    }
    let evaluator = Evaluator::new(instance);
    let grid = constant_issues_grid(instance, &evaluator);
    let size = grid.iter().fold(1u128, |a, c| a.saturating_mul(c.len() as u128));
    if size > options.limits.linf_grid_points {
        return Err(SolveError::LimitExceeded {
            what: "endpoint grid size",
            value: size,
            limit: options.limits.linf_grid_points,
        });
    }
    let mut stats = SolveStats::default();
    let mut idx = vec![0usize; d];
    let mut point: Vec<f64> = grid.iter().map(|c| c[0]).collect();
    loop {
        stats.points += 1;
        if evaluator.success(&point) {
            if let Some(w) = certify(instance, &point)? {
                return Ok(Verdict { witness: Some(w), stats });
            }
        }
        let mut j = 0;
        loop {
            if j == d {
                return Ok(Verdict { witness: None, stats });
            }
            idx[j] += 1;
            if idx[j] < grid[j].len() {
                point[j] = grid[j][idx[j]];
                break;
            }
            idx[j] = 0;
            point[j] = grid[j][0];
            j += 1;
        }
    }
}

struct LinfRealizer<'a> {
    evaluator: &'a Evaluator,
    budget: Cube,
    objective: Objective,
}

impl LinfRealizer<'_> {
    fn cubes(&self, scenario: &[usize]) -> Vec<Cube> {
        scenario
            .iter()
            .enumerate()
            .filter_map(|(g, &t)| {
                let r = self.evaluator.thresholds(g).at(t);
                // Infinite containment and zero avoidance radii are vacuous.
                let vacuous = match self.objective {
                    Objective::Constructive => r.is_infinite(),
                    Objective::Destructive => r == 0.0,
                };
                (!vacuous).then(|| Cube { center: self.evaluator.groups()[g].position.clone(), radius: r })
            })
            .collect()
    }

    fn solve(&self, scenario: &[usize]) -> Option<Vec<f64>> {
        let cubes = self.cubes(scenario);
        match self.objective {
            Objective::Constructive => box_scenario_constructive(&self.budget, &cubes),
            Objective::Destructive => {
                feasibility_constant_constraints(&self.budget.center, self.budget.radius, &cubes)
            }
        }
    }
}

impl ScenarioRealizer for LinfRealizer<'_> {
    fn partial_feasible(&mut self, assigned: &[usize]) -> Result<bool, SolveError> {
        Ok(self.solve(assigned).is_some())
    }

    fn realize(&mut self, scenario: &[usize]) -> Result<Option<Vec<f64>>, SolveError> {
        Ok(self.solve(scenario))
    }
}

pub fn solve_linf_constant_voters(instance: &Instance) -> Result<Verdict, SolveError> {
    solve_linf_constant_voters_with(instance, &SolveOptions::default())
}

pub fn solve_linf_constant_voters_with(
    instance: &Instance,
    options: &SolveOptions,
) -> Result<Verdict, SolveError> {
    require_linf(instance, "linf-voters")?;
    let evaluator = Evaluator::new(instance);
    let q = evaluator.groups().len();
    if q > options.limits.linf_groups {
        return Err(SolveError::LimitExceeded {
            what: "opinion groups",
            value: q as u128,
            limit: options.limits.linf_groups as u128,
        });
    }
    let partition = score_partition(instance.scoring(), instance.objective());
    let realizer = LinfRealizer {
        evaluator: &evaluator,
        budget: Cube { center: instance.target().to_vec(), radius: instance.budget() },
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
