//! Exact solvers for real issues under the Euclidean norm.
//!
//! Every scenario region is cut out by spheres, so it suffices to test one
//! point on each nonempty intersection of at most `d` sphere boundaries.
//! Intersections are computed by subtracting sphere equations pairwise, which
//! leaves linear equations, and meeting the resulting affine subspace with the
//! first sphere.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::election::{
    approx_eq, approx_le, distance_unchecked, score_partition, Evaluator, Instance, Norm, Objective,
};
use crate::scenario::{ScenarioRealizer, ScenarioSearch};
use crate::verdict::{certify, SolveError, SolveOptions, SolveStats, Verdict};

const GEOM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("sphere system is ill-conditioned: residual {residual:e}")]
    Conditioning { residual: f64 },
    #[error("{subsets} sphere subsets exceed the limit {limit}")]
    SubsetBudget { subsets: u128, limit: u128 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn distance(&self, x: &[f64]) -> f64 {
        distance_unchecked(x, &self.center, Norm::L(2))
    }

    /// `| ||x - c|| - r |`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        (self.distance(x) - self.radius).abs()
    }

    fn coincides(&self, other: &Ball) -> bool {
        approx_eq(self.radius, other.radius)
            && self.center.iter().zip(&other.center).all(|(a, b)| approx_eq(*a, *b))
    }
}

fn residual_ok(ball: &Ball, x: &[f64]) -> bool {
    ball.residual(x) < GEOM_TOL * ball.radius.max(1.0)
}

fn dedupe(balls: &[Ball]) -> Vec<Ball> {
    let mut out: Vec<Ball> = Vec::new();
    for b in balls {
        if !out.iter().any(|o| o.coincides(b)) {
            out.push(b.clone());
        }
    }
    out
}

/// Orthonormal basis of the span of `vectors`, by modified Gram-Schmidt.
fn orthonormalize(vectors: impl IntoIterator<Item = DVector<f64>>, mut basis: Vec<DVector<f64>>) -> Vec<DVector<f64>> {
    let start = basis.len();
    for mut v in vectors {
        let scale = v.norm().max(1.0);
        for b in &basis {
            let c = b.dot(&v);
            v -= b * c;
        }
        let nv = v.norm();
        if nv > 1e-10 * scale {
            basis.push(v / nv);
        }
    }
    basis.split_off(start)
}

/// Points on the common boundary of the given spheres: both points when the
/// intersection is two points, the touching point when tangent, one canonical
/// point when it is a sphere of positive dimension, nothing when empty.
pub fn sphere_subset_representatives(spheres: &[Ball]) -> Result<Vec<Vec<f64>>, GeometryError> {
    let spheres = dedupe(spheres);
    let Some(first) = spheres.first() else {
        return Ok(Vec::new());
    };
    let d = first.center.len();
    let c0 = DVector::from_column_slice(&first.center);
    let r0 = first.radius;
    let k = spheres.len() - 1;
    let mut a = DMatrix::zeros(k, d);
    let mut rhs = DVector::zeros(k);
    for (row, s) in spheres[1..].iter().enumerate() {
        let ci = DVector::from_column_slice(&s.center);
        if (&ci - &c0).norm() <= GEOM_TOL * c0.norm().max(1.0) {
            // Concentric with different radii.
            return Ok(Vec::new());
        }
        a.set_row(row, &(2.0 * (&ci - &c0)).transpose());
        rhs[row] = r0 * r0 - s.radius * s.radius + ci.norm_squared() - c0.norm_squared();
    }

    let row_basis = orthonormalize((0..k).map(|i| a.row(i).transpose()), Vec::new());
    let rank = row_basis.len();
    let x_p = if k == 0 {
        c0.clone()
    } else {
        let svd = a.clone().svd(true, true);
        let x = svd.solve(&rhs, 1e-12).map_err(|_| GeometryError::Conditioning { residual: f64::NAN })?;
        let residual = (&a * &x - &rhs).norm();
        if residual > GEOM_TOL * rhs.norm().max(1.0) {
            if rank < k {
                // Dependent, contradictory hyperplanes: no common point.
                return Ok(Vec::new());
            }
            return Err(GeometryError::Conditioning { residual });
        }
        x
    };
    let null = orthonormalize((0..d).map(|i| DVector::from_fn(d, |j, _| (i == j) as u8 as f64)), row_basis);

    let mut q = x_p.clone();
    let offset = &c0 - &x_p;
    for n in &null {
        q += n * n.dot(&offset);
    }
    let h2 = (&c0 - &q).norm_squared();
    let rho2 = r0 * r0 - h2;
    let scale = (r0 * r0).max(1.0);
    let mut points: Vec<DVector<f64>> = Vec::new();
    if rho2 < -GEOM_TOL * scale || (null.is_empty() && rho2 > GEOM_TOL * scale) {
        // Either the hyperplanes miss the first sphere, or they pin a single
        // point strictly inside it.
        return Ok(Vec::new());
    }
    if rho2 <= GEOM_TOL * scale {
        points.push(q.clone());
    } else {
        let rho = rho2.sqrt();
        points.push(&q + &null[0] * rho);
        if null.len() == 1 {
            points.push(&q - &null[0] * rho);
        }
    }
    let points: Vec<Vec<f64>> = points.into_iter().map(|p| p.as_slice().to_vec()).collect();
    for p in &points {
        for s in &spheres {
            if !residual_ok(s, p) {
                return Err(GeometryError::Conditioning { residual: s.residual(p) });
            }
        }
    }
    Ok(points)
}

/// Representative points of an arrangement of balls.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RepresentativeSet {
    pub points: Vec<Vec<f64>>,
    pub subsets: u64,
    /// Subsets skipped because their equations were too ill-conditioned.
    pub degenerate: u64,
}

fn binomial_prefix_sum(k: usize, upto: usize) -> u128 {
    let mut total = 0u128;
    let mut c = 1u128;
    for s in 1..=upto.min(k) {
        c = c * (k - s + 1) as u128 / s as u128;
        total = total.saturating_add(c);
    }
    total
}

fn key(p: &[f64]) -> Vec<i64> {
    p.iter().map(|&v| (v / GEOM_TOL).round() as i64).collect()
}

/// Union of [`sphere_subset_representatives`] over all boundary subsets of at
/// most `max_size` balls, deduplicated.
pub fn representative_points(
    balls: &[Ball],
    max_size: usize,
    max_subsets: u128,
) -> Result<RepresentativeSet, GeometryError> {
    let balls = dedupe(balls);
    let k = balls.len();
    let total = binomial_prefix_sum(k, max_size);
    if total > max_subsets {
        return Err(GeometryError::SubsetBudget { subsets: total, limit: max_subsets });
    }
    let mut out = RepresentativeSet::default();
    let mut seen = HashSet::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut scratch: Vec<Ball> = Vec::new();
    fn walk(
        start: usize,
        balls: &[Ball],
        max_size: usize,
        chosen: &mut Vec<usize>,
        scratch: &mut Vec<Ball>,
        seen: &mut HashSet<Vec<i64>>,
        out: &mut RepresentativeSet,
    ) {
        for i in start..balls.len() {
            chosen.push(i);
            scratch.clear();
            scratch.extend(chosen.iter().map(|&j| balls[j].clone()));
            out.subsets += 1;
            match sphere_subset_representatives(scratch) {
                Ok(points) => {
                    let nonempty = !points.is_empty();
                    for p in points {
                        if seen.insert(key(&p)) {
                            out.points.push(p);
                        }
                    }
                    // Supersets of an empty intersection stay empty.
                    if nonempty && chosen.len() < max_size {
                        walk(i + 1, balls, max_size, chosen, scratch, seen, out);
                    }
                }
                Err(_) => out.degenerate += 1,
            }
            chosen.pop();
        }
    }
    walk(0, &balls, max_size, &mut chosen, &mut scratch, &mut seen, &mut out);
    Ok(out)
}

fn require_l2(instance: &Instance, solver: &'static str) -> Result<(), SolveError> {
    if instance.is_binary() || instance.norm() != Norm::L(2) {
        return Err(SolveError::unsupported(solver, "real issues and the l2 norm"));
    }
    Ok(())
}

pub fn solve_l2_constant_issues(instance: &Instance) -> Result<Verdict, SolveError> {
    solve_l2_constant_issues_with(instance, &SolveOptions::default())
}

/// All balls of every group at every breakpoint, plus the budget ball first.
pub fn arrangement_balls(instance: &Instance, evaluator: &Evaluator) -> Vec<Ball> {
    let partition = score_partition(instance.scoring(), instance.objective());
    let mut balls = vec![Ball { center: instance.target().to_vec(), radius: instance.budget() }];
    for g in 0..evaluator.groups().len() {
        let th = evaluator.thresholds(g);
        for &t in partition.breakpoints() {
            let r = th.at(t);
            let vacuous = match instance.objective() {
                Objective::Constructive => r.is_infinite(),
                Objective::Destructive => r == 0.0,
            };
            if !vacuous {
                balls.push(Ball { center: evaluator.groups()[g].position.clone(), radius: r });
            }
        }
    }
    balls
}

pub fn solve_l2_constant_issues_with(
    instance: &Instance,
    options: &SolveOptions,
) -> Result<Verdict, SolveError> {
    require_l2(instance, "l2-issues")?;
    let d = instance.dimension();
    if d > options.limits.l2_dimension {
        return Err(SolveError::LimitExceeded {
            what: "dimension",
            value: d as u128,
            limit: options.limits.l2_dimension as u128,
        });
    }
    let evaluator = Evaluator::new(instance);
    let balls = arrangement_balls(instance, &evaluator);
    let reps = representative_points(&balls, d, options.limits.sphere_subsets)?;
    let budget = &balls[0];
    let mut stats = SolveStats::default();
    let candidates = std::iter::once(instance.target().to_vec()).chain(reps.points);
    for p in candidates {
        if !approx_le(budget.distance(&p), budget.radius) {
            continue;
        }
        stats.points += 1;
        if evaluator.success(&p) {
            if let Some(w) = certify(instance, &p)? {
                return Ok(Verdict { witness: Some(w), stats });
            }
        }
    }
    Ok(Verdict { witness: None, stats })
}

struct L2Realizer<'a> {
    evaluator: &'a Evaluator,
    budget: Ball,
    objective: Objective,
    max_subsets: u128,
}

impl L2Realizer<'_> {
    fn admissible(&self, balls: &[Ball], p: &[f64]) -> bool {
        approx_le(self.budget.distance(p), self.budget.radius)
            && balls.iter().all(|b| match self.objective {
                Objective::Constructive => approx_le(b.distance(p), b.radius),
                Objective::Destructive => approx_le(b.radius, b.distance(p)),
            })
    }

    fn solve(&self, scenario: &[usize]) -> Result<Option<Vec<f64>>, SolveError> {
        let groups = self.evaluator.groups();
        let balls: Vec<Ball> = scenario
            .iter()
            .enumerate()
            .filter_map(|(g, &t)| {
                let r = self.evaluator.thresholds(g).at(t);
                let vacuous = match self.objective {
                    Objective::Constructive => r.is_infinite(),
                    Objective::Destructive => r == 0.0,
                };
                (!vacuous).then(|| Ball { center: groups[g].position.clone(), radius: r })
            })
            .collect();
        if self.admissible(&balls, &self.budget.center) {
            return Ok(Some(self.budget.center.clone()));
        }
        let mut all = vec![self.budget.clone()];
        all.extend(balls.iter().cloned());
        let d = self.budget.center.len();
        let reps = representative_points(&all, all.len().min(d), self.max_subsets)?;
        Ok(reps.points.into_iter().find(|p| self.admissible(&balls, p)))
    }
}

impl ScenarioRealizer for L2Realizer<'_> {
    fn partial_feasible(&mut self, assigned: &[usize]) -> Result<bool, SolveError> {
        Ok(self.solve(assigned)?.is_some())
    }

    fn realize(&mut self, scenario: &[usize]) -> Result<Option<Vec<f64>>, SolveError> {
        self.solve(scenario)
    }
}

pub fn solve_l2_constant_voters(instance: &Instance) -> Result<Verdict, SolveError> {
    solve_l2_constant_voters_with(instance, &SolveOptions::default())
}

pub fn solve_l2_constant_voters_with(
    instance: &Instance,
    options: &SolveOptions,
) -> Result<Verdict, SolveError> {
    require_l2(instance, "l2-voters")?;
    let evaluator = Evaluator::new(instance);
    let q = evaluator.groups().len();
    if q > options.limits.l2_groups {
        return Err(SolveError::LimitExceeded {
            what: "opinion groups",
            value: q as u128,
            limit: options.limits.l2_groups as u128,
        });
    }
    let partition = score_partition(instance.scoring(), instance.objective());
    let realizer = L2Realizer {
        evaluator: &evaluator,
        budget: Ball { center: instance.target().to_vec(), radius: instance.budget() },
        objective: instance.objective(),
        max_subsets: options.limits.sphere_subsets,
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

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(center: &[f64], radius: f64) -> Ball {
        Ball { center: center.to_vec(), radius }
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn two_circles() {
        let r = 2f64.sqrt();
        let pts = sphere_subset_representatives(&[ball(&[0.0, 0.0], r), ball(&[2.0, 0.0], r)]).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().any(|p| close(p, &[1.0, 1.0])));
        assert!(pts.iter().any(|p| close(p, &[1.0, -1.0])));
    }

    #[test]
    fn single_sphere_and_disjoint() {
        let pts = sphere_subset_representatives(&[ball(&[0.0, 0.0], 1.0)]).unwrap();
        assert_eq!(pts, vec![vec![1.0, 0.0]]);
        let none = sphere_subset_representatives(&[ball(&[0.0, 0.0], 1.0), ball(&[5.0, 0.0], 1.0)]);
        assert_eq!(none.unwrap(), Vec::<Vec<f64>>::new());
    }

    #[test]
    fn tangent_and_coincident() {
        let t = sphere_subset_representatives(&[ball(&[0.0, 0.0], 1.0), ball(&[2.0, 0.0], 1.0)]).unwrap();
        assert_eq!(t.len(), 1);
        assert!(close(&t[0], &[1.0, 0.0]));
        let c = sphere_subset_representatives(&[ball(&[0.0, 0.0], 1.0), ball(&[0.0, 0.0], 1.0)]).unwrap();
        assert_eq!(c, vec![vec![1.0, 0.0]]);
        let concentric =
            sphere_subset_representatives(&[ball(&[0.0, 0.0], 1.0), ball(&[0.0, 0.0], 2.0)]).unwrap();
        assert!(concentric.is_empty());
    }

    #[test]
    fn circle_in_three_dimensions() {
        let pts = sphere_subset_representatives(&[ball(&[0.0, 0.0, 0.0], 2.0), ball(&[2.0, 0.0, 0.0], 2.0)])
            .unwrap();
        assert_eq!(pts.len(), 1);
        assert!((pts[0][0] - 1.0).abs() < 1e-12);
        assert!((pts[0][1].hypot(pts[0][2]) - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn arrangement_examples() {
        let one = representative_points(&[ball(&[0.0, 0.0], 1.0)], 2, 100).unwrap();
        assert_eq!(one.points, vec![vec![1.0, 0.0]]);
        let two = representative_points(&[ball(&[0.0, 0.0], 1.0), ball(&[1.0, 0.0], 1.0)], 2, 100).unwrap();
        // Two canonical points plus the lens corners.
        assert_eq!(two.points.len(), 4);
        let dup = representative_points(
            &[ball(&[0.0, 0.0], 1.0), ball(&[1.0, 0.0], 1.0), ball(&[0.0, 0.0], 1.0)],
            2,
            100,
        )
        .unwrap();
        assert_eq!(dup.points, two.points);
        assert!(representative_points(&[ball(&[0.0], 1.0); 1], 1, 0).is_err());
    }
}
