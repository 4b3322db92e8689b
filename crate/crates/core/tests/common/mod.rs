#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use spatial_control::linf::Cube;
use spatial_control::problems::{BiscInstance, Literal, SatFormula};
use spatial_control::{Electorate, Instance, IssueSpace, Norm, Objective, ScoringRule};

pub fn bits(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| if rng.random() { 1.0 } else { 0.0 }).collect()
}

pub fn scoring(rng: &mut impl Rng, n: usize) -> ScoringRule {
    match rng.random_range(0..4) {
        0 => ScoringRule::plurality(n),
        1 => ScoringRule::veto(n),
        2 => ScoringRule::borda(n),
        _ => ScoringRule::k_approval(n, 2.min(n)).unwrap(),
    }
}

pub fn objective(rng: &mut impl Rng) -> Objective {
    if rng.random() {
        Objective::Constructive
    } else {
        Objective::Destructive
    }
}

/// Binary instance with d <= 10, m <= 3, n <= 3 and p in {1, 2, 3}.
pub fn random_bvpm(rng: &mut impl Rng) -> Instance {
    let d = rng.random_range(1..=10);
    let m = rng.random_range(1..=3);
    let n = rng.random_range(2..=3);
    let p = rng.random_range(1..=3);
    // Small budgets keep a healthy share of NO instances.
    let flips: u32 = rng.random_range(0..=(d as u32).min(3));
    let budget = (flips as f64 + rng.random_range(0.0..0.99)).powf(1.0 / p as f64);
    Instance::new(
        IssueSpace::Binary,
        (0..n).map(|_| bits(rng, d)).collect(),
        Electorate::Voters((0..m).map(|_| bits(rng, d)).collect()),
        Norm::L(p),
        scoring(rng, n),
        objective(rng),
        budget,
    )
    .unwrap()
}

pub fn real_point(rng: &mut impl Rng, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-scale..scale)).collect()
}

/// Two-candidate constructive plurality instance under l_infinity.
pub fn random_linf_two(rng: &mut impl Rng) -> Instance {
    let d = rng.random_range(1..=6);
    let m = rng.random_range(1..=50);
    Instance::new(
        IssueSpace::Real,
        vec![real_point(rng, d, 1.0), real_point(rng, d, 1.0)],
        Electorate::Voters((0..m).map(|_| real_point(rng, d, 1.0)).collect()),
        Norm::Inf,
        ScoringRule::plurality(2),
        Objective::Constructive,
        rng.random_range(0.0..1.0),
    )
    .unwrap()
}

/// Small planar l2 instance.
pub fn random_l2_plane(rng: &mut impl Rng) -> Instance {
    let n = rng.random_range(2..=3);
    let m = rng.random_range(1..=4);
    let scoring = if rng.random() { ScoringRule::plurality(n) } else { ScoringRule::borda(n) };
    Instance::new(
        IssueSpace::Real,
        (0..n).map(|_| real_point(rng, 2, 1.0)).collect(),
        Electorate::Voters((0..m).map(|_| real_point(rng, 2, 1.0)).collect()),
        Norm::L(2),
        scoring,
        objective(rng),
        rng.random_range(0.0..0.8),
    )
    .unwrap()
}

fn dyadic(rng: &mut impl Rng, lo: i32, hi: i32) -> f64 {
    rng.random_range(lo..=hi) as f64 / 4.0
}

/// Feasibility problem with quarter-integer data, k <= 4 cubes, d <= 8.
pub fn random_feasibility(rng: &mut impl Rng) -> (Vec<f64>, f64, Vec<Cube>) {
    let d = rng.random_range(1..=8);
    let k = rng.random_range(0..=4);
    let y: Vec<f64> = (0..d).map(|_| dyadic(rng, -4, 4)).collect();
    let eps = dyadic(rng, 0, 6);
    let cubes = (0..k)
        .map(|_| Cube { center: (0..d).map(|_| dyadic(rng, -6, 6)).collect(), radius: dyadic(rng, 1, 10) })
        .collect();
    (y, eps, cubes)
}

/// Mostly opposed target and rival (any shared issue makes selection
/// trivial) with voters leaning towards the rival.
pub fn random_bisc(rng: &mut impl Rng) -> BiscInstance {
    let d = rng.random_range(1..=8);
    let m = rng.random_range(1..=7);
    let target = bits(rng, d);
    let rival = if rng.random_bool(0.8) { target.iter().map(|b| 1.0 - b).collect() } else { bits(rng, d) };
    let voters = (0..m)
        .map(|_| (0..d).map(|k| if rng.random_bool(0.7) { rival[k] } else { target[k] }).collect())
        .collect();
    BiscInstance::new(target, rival, voters).unwrap()
}

/// Random 3-SAT with at most 8 variables and 15 clauses. A third contain
/// all eight sign patterns over one variable triple (unsatisfiable), a third
/// are dense formulas over few variables, the rest are unrestricted.
pub fn random_sat(rng: &mut impl Rng) -> SatFormula {
    match rng.random_range(0..3) {
        0 => {
            let vars = rng.random_range(3..=8);
            let triple = rand::seq::index::sample(rng, vars, 3).into_vec();
            let mut clauses: Vec<Vec<Literal>> = (0..8u8)
                .map(|signs| (0..3).map(|k| Literal { var: triple[k], negated: signs >> k & 1 == 1 }).collect())
                .collect();
            let more = rng.random_range(0..=7);
            let extra = SatFormula::random(rng, vars, more).unwrap();
            clauses.extend(extra.clauses().iter().cloned());
            clauses.shuffle(rng);
            SatFormula::new(vars, clauses).unwrap()
        }
        1 => {
            let (vars, clauses) = (rng.random_range(3..=4), rng.random_range(10..=15));
            SatFormula::random(rng, vars, clauses).unwrap()
        }
        _ => {
            let (vars, clauses) = (rng.random_range(3..=8), rng.random_range(1..=15));
            SatFormula::random(rng, vars, clauses).unwrap()
        }
    }
}

/// Plurality votes the target collects at perceived position `x`.
pub fn target_votes(instance: &Instance, x: &[f64]) -> usize {
    spatial_control::tally_and_decide(instance, x).unwrap().scores[0] as usize
}

/// Least-squares slope of log(time) against log(size).
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// Best of repeated runs, in seconds; the minimum is the least noisy
/// estimate of the cost itself.
pub fn best_duration(runs: &[std::time::Duration]) -> f64 {
    runs.iter().min().expect("at least one run").as_secs_f64()
}
