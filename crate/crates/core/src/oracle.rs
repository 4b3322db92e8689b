//! Ground-truth engines that search exhaustively (or sample) without any of
//! the solvers' structural shortcuts. They rely only on the tally, the
//! incremental evaluator and witness verification from the election model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::election::{
    approx_le, distance, flip_budget, verify_witness, ElectionError, Evaluator, Instance, Norm,
};
use crate::linf::Cube;
use crate::problems::{BiscInstance, Cnf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleDecision {
    Yes,
    No,
    /// Non-exhaustive search found nothing; says nothing about NO.
    NotFound,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub decision: OracleDecision,
    /// Perceived target position, or for issue selection the 0/1 indicator of
    /// the chosen issues.
    pub witness: Option<Vec<f64>>,
    pub examined: u64,
    pub exhaustive: bool,
}

impl OracleReport {
    fn exhaustive(witness: Option<Vec<f64>>, examined: u64) -> OracleReport {
        let decision = if witness.is_some() { OracleDecision::Yes } else { OracleDecision::No };
        OracleReport { decision, witness, examined, exhaustive: true }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{what} is {value}, above the oracle limit {limit}")]
    TooLarge { what: &'static str, value: u128, limit: u128 },
    #[error("oracle needs {0}")]
    Unsupported(&'static str),
    #[error(transparent)]
    Election(#[from] ElectionError),
}

const MAX_BINARY_DIM: usize = 16;

fn binary_positions(instance: &Instance) -> Result<Vec<Vec<f64>>, OracleError> {
    if !instance.is_binary() {
        return Err(OracleError::Unsupported("a binary issue space"));
    }
    let d = instance.dimension();
    if d > MAX_BINARY_DIM {
        return Err(OracleError::TooLarge { what: "dimension", value: d as u128, limit: MAX_BINARY_DIM as u128 });
    }
    let reach = match instance.norm() {
        Norm::L(p) => flip_budget(instance.budget(), p).min(d as u64) as u32,
        Norm::Inf if approx_le(1.0, instance.budget()) => d as u32,
        Norm::Inf => 0,
    };
    let c1 = instance.target();
    Ok((0u32..1 << d)
        .filter(|mask| mask.count_ones() <= reach)
        .map(|mask| {
            c1.iter()
                .enumerate()
                .map(|(k, &v)| if mask >> k & 1 == 1 { 1.0 - v } else { v })
                .collect()
        })
        .collect())
}

/// Every reachable binary position, flip masks in increasing order.
pub fn brute_force_bvpm(instance: &Instance) -> Result<OracleReport, OracleError> {
    let mut examined = 0;
    for p in binary_positions(instance)? {
        examined += 1;
        if verify_witness(instance, &p)?.passed() {
            return Ok(OracleReport::exhaustive(Some(p), examined));
        }
    }
    Ok(OracleReport::exhaustive(None, examined))
}

/// All reachable binary positions that achieve the objective.
pub fn bvpm_winning_points(instance: &Instance) -> Result<Vec<Vec<f64>>, OracleError> {
    let mut out = Vec::new();
    for p in binary_positions(instance)? {
        if verify_witness(instance, &p)?.passed() {
            out.push(p);
        }
    }
    Ok(out)
}

const MAX_ENDPOINT_DIM: usize = 4;
const MAX_ENDPOINT_POINTS: u128 = 4_000_000;

fn clipped_faces(faces: impl IntoIterator<Item = f64>, lo: f64, hi: f64) -> Vec<f64> {
    let mut col: Vec<f64> = faces
        .into_iter()
        .filter(|&x| approx_le(lo, x) && approx_le(x, hi))
        .map(|x| x.clamp(lo, hi))
        .collect();
    col.sort_by(f64::total_cmp);
    col.dedup();
    col
}

/// Every combination of per-dimension coordinates drawn from the faces of all
/// voter-centred cubes through each candidate, the budget faces, the voters'
/// own coordinates and the unmoved target.
pub fn endpoint_oracle_linf(instance: &Instance) -> Result<OracleReport, OracleError> {
    if instance.is_binary() || instance.norm() != Norm::Inf {
        return Err(OracleError::Unsupported("real issues and the l_infinity norm"));
    }
    let d = instance.dimension();
    if d > MAX_ENDPOINT_DIM {
        return Err(OracleError::TooLarge { what: "dimension", value: d as u128, limit: MAX_ENDPOINT_DIM as u128 });
    }
    let c1 = instance.target();
    let eps = instance.budget();
    let voters: Vec<&[f64]> = instance.electorate().entries().map(|(v, _)| v).collect();
    let mut radii = Vec::new();
    for v in &voters {
        let mut rs = Vec::new();
        for c in instance.candidates() {
            rs.push(distance(c, v, Norm::Inf)?);
        }
        radii.push(rs);
    }
    let grid: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            let mut faces = vec![c1[j] - eps, c1[j] + eps, c1[j]];
            for (v, rs) in voters.iter().zip(&radii) {
                faces.push(v[j]);
                for &r in rs {
                    faces.push(v[j] - r);
                    faces.push(v[j] + r);
                }
            }
            clipped_faces(faces, c1[j] - eps, c1[j] + eps)
        })
        .collect();
    let size = grid.iter().fold(1u128, |a, c| a.saturating_mul(c.len() as u128));
    if size > MAX_ENDPOINT_POINTS {
        return Err(OracleError::TooLarge { what: "endpoint grid", value: size, limit: MAX_ENDPOINT_POINTS });
    }
    let evaluator = Evaluator::new(instance);
    let mut examined = 0;
    let mut idx = vec![0usize; d];
    loop {
        let p: Vec<f64> = idx.iter().zip(&grid).map(|(&i, c)| c[i]).collect();
        examined += 1;
        if evaluator.success(&p) && verify_witness(instance, &p)?.passed() {
            return Ok(OracleReport::exhaustive(Some(p), examined));
        }
        let mut j = 0;
        while j < d {
            idx[j] += 1;
            if idx[j] < grid[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == d {
            return Ok(OracleReport::exhaustive(None, examined));
        }
    }
}

/// Largest number of voters that can weakly prefer a moved target over a
/// single rival under l_infinity, with a point attaining it. Searches the
/// same face grid as [`endpoint_oracle_linf`], one dimension at a time,
/// discarding partial points whose surviving voter set is dominated.
pub fn endpoint_max_support_linf(
    target: &[f64],
    rival: &[f64],
    voters: &[Vec<f64>],
    epsilon: f64,
) -> Result<(usize, Vec<f64>), OracleError> {
    let d = target.len();
    let mut radii = Vec::with_capacity(voters.len());
    for v in voters {
        radii.push(distance(rival, v, Norm::Inf)?);
    }
    let grid: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            let mut faces = vec![target[j] - epsilon, target[j] + epsilon, target[j]];
            for (v, &r) in voters.iter().zip(&radii) {
                faces.extend([v[j] - r, v[j] + r]);
            }
            clipped_faces(faces, target[j] - epsilon, target[j] + epsilon)
        })
        .collect();
    // Voter i survives coordinate x_j when |x_j - v_ij| <= r_i.
    let alive = |j: usize, x: f64| -> Vec<bool> {
        voters.iter().zip(&radii).map(|(v, &r)| approx_le((x - v[j]).abs(), r)).collect()
    };
    let mut frontier: Vec<(Vec<bool>, Vec<f64>)> = vec![(vec![true; voters.len()], Vec::new())];
    for (j, col) in grid.iter().enumerate() {
        let mut next: Vec<(Vec<bool>, Vec<f64>)> = Vec::new();
        let columns: Vec<Vec<bool>> = col.iter().map(|&x| alive(j, x)).collect();
        for (set, coords) in &frontier {
            for (&x, a) in col.iter().zip(&columns) {
                let s: Vec<bool> = set.iter().zip(a).map(|(p, q)| *p && *q).collect();
                let mut c = coords.clone();
                c.push(x);
                next.push((s, c));
            }
        }
        let subset = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(x, y)| !*x || *y);
        let mut keep = vec![true; next.len()];
        for a in 0..next.len() {
            for b in 0..next.len() {
                if a != b && keep[b] && subset(&next[a].0, &next[b].0) && (next[a].0 != next[b].0 || b < a) {
                    keep[a] = false;
                    break;
                }
            }
        }
        frontier = next.into_iter().zip(keep).filter_map(|(x, k)| k.then_some(x)).collect();
    }
    let (set, point) = frontier
        .into_iter()
        .max_by_key(|(s, _)| s.iter().filter(|&&x| x).count())
        .expect("grid columns are never empty");
    Ok((set.iter().filter(|&&x| x).count(), point))
}

/// Uniform samples from the budget ball of the instance's norm, unmoved
/// target first. Only ever certifies YES.
pub fn sampling_oracle(instance: &Instance, samples: u64, seed: u64) -> Result<OracleReport, OracleError> {
    if instance.is_binary() {
        return Err(OracleError::Unsupported("a real issue space"));
    }
    let evaluator = Evaluator::new(instance);
    let c1 = instance.target();
    let eps = instance.budget();
    let found = |p: &[f64]| -> Result<bool, OracleError> {
        Ok(evaluator.success(p) && verify_witness(instance, p)?.passed())
    };
    let report = |witness: Option<Vec<f64>>, examined| OracleReport {
        decision: if witness.is_some() { OracleDecision::Yes } else { OracleDecision::NotFound },
        witness,
        examined,
        exhaustive: false,
    };
    if found(c1)? {
        return Ok(report(Some(c1.to_vec()), 1));
    }
    if eps == 0.0 {
        return Ok(report(None, 1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampler = BudgetSampler::new(c1, eps, instance.norm());
    for i in 0..samples {
        let p = sampler.sample(&mut rng);
        if found(&p)? {
            return Ok(report(Some(p), i + 2));
        }
    }
    Ok(report(None, samples + 1))
}

/// Uniform sampler over `{x : ||x - center||_p <= radius}`.
pub struct BudgetSampler {
    center: Vec<f64>,
    radius: f64,
    norm: Norm,
}

impl BudgetSampler {
    pub fn new(center: &[f64], radius: f64, norm: Norm) -> BudgetSampler {
        BudgetSampler { center: center.to_vec(), radius, norm }
    }

    pub fn sample(&mut self, rng: &mut impl Rng) -> Vec<f64> {
        let d = self.center.len();
        match self.norm {
            Norm::Inf => self
                .center
                .iter()
                .map(|&c| c + self.radius * rng.random_range(-1.0..=1.0))
                .collect(),
            Norm::L(2) => {
                let dir: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                let len = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
                let scale = self.radius * rng.random::<f64>().powf(1.0 / d as f64) / len;
                self.center.iter().zip(dir).map(|(c, x)| c + scale * x).collect()
            }
            Norm::L(p) => loop {
                let offset: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..=1.0)).collect();
                let s: f64 = offset.iter().map(|x: &f64| x.abs().powi(p as i32)).sum();
                if s <= 1.0 {
                    break self.center.iter().zip(offset).map(|(c, x)| c + self.radius * x).collect();
                }
            },
        }
    }
}

/// Every nonempty issue subset in increasing bitmask order.
pub fn bisc_brute_force(bisc: &BiscInstance) -> Result<OracleReport, OracleError> {
    let d = bisc.dimension();
    if d > MAX_BINARY_DIM {
        return Err(OracleError::TooLarge { what: "dimension", value: d as u128, limit: MAX_BINARY_DIM as u128 });
    }
    let mut examined = 0;
    for mask in 1u32..1 << d {
        examined += 1;
        let subset: Vec<bool> = (0..d).map(|k| mask >> k & 1 == 1).collect();
        if bisc.target_wins(&subset) {
            let w = subset.iter().map(|&s| s as u8 as f64).collect();
            return Ok(OracleReport::exhaustive(Some(w), examined));
        }
    }
    Ok(OracleReport::exhaustive(None, examined))
}

const MAX_SAT_VARS: usize = 20;

/// First satisfying assignment in binary counting order (variable 0 is the
/// lowest bit, `true` = 1).
pub fn sat_brute_force(cnf: &Cnf) -> Result<Option<Vec<bool>>, OracleError> {
    let v = cnf.num_vars();
    if v > MAX_SAT_VARS {
        return Err(OracleError::TooLarge { what: "variables", value: v as u128, limit: MAX_SAT_VARS as u128 });
    }
    for mask in 0u32..1 << v {
        let a: Vec<bool> = (0..v).map(|k| mask >> k & 1 == 1).collect();
        if cnf.satisfied_by(&a) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

const MAX_NAIVE_POINTS: u128 = 1 << 24;

/// Tests every point of the per-dimension face grid (always including the
/// budget center coordinate) against the avoid-cube constraints.
pub fn naive_feasibility(y: &[f64], epsilon: f64, cubes: &[Cube]) -> Result<Option<Vec<f64>>, OracleError> {
    let grid: Vec<Vec<f64>> = (0..y.len())
        .map(|j| {
            let (lo, hi) = (y[j] - epsilon, y[j] + epsilon);
            let mut col: Vec<f64> = cubes
                .iter()
                .flat_map(|c| [c.center[j] - c.radius, c.center[j] + c.radius])
                .filter(|&x| lo <= x && x <= hi)
                .collect();
            col.push(y[j]);
            col.sort_by(f64::total_cmp);
            col.dedup();
            col
        })
        .collect();
    let size = grid.iter().fold(1u128, |a, c| a.saturating_mul(c.len() as u128));
    if size > MAX_NAIVE_POINTS {
        return Err(OracleError::TooLarge { what: "cross product", value: size, limit: MAX_NAIVE_POINTS });
    }
    fn dfs(j: usize, grid: &[Vec<f64>], cubes: &[Cube], escaped: &[bool], point: &mut Vec<f64>) -> bool {
        if j == grid.len() {
            return escaped.iter().all(|&e| e);
        }
        for &x in &grid[j] {
            let next: Vec<bool> = escaped
                .iter()
                .zip(cubes)
                .map(|(&e, c)| e || (x - c.center[j]).abs() >= c.radius)
                .collect();
            point.push(x);
            if dfs(j + 1, grid, cubes, &next, point) {
                return true;
            }
            point.pop();
        }
        false
    }
    let mut point = Vec::with_capacity(y.len());
    Ok(dfs(0, &grid, cubes, &vec![false; cubes.len()], &mut point).then_some(point))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{Electorate, IssueSpace, Objective, ScoringRule};
    use crate::problems::Literal;

    fn bin(bits: &[u8]) -> Vec<f64> {
        bits.iter().map(|&b| b as f64).collect()
    }

    fn worked(eps: f64) -> Instance {
        Instance::new(
            IssueSpace::Binary,
            vec![bin(&[1, 1, 1]), bin(&[0, 0, 0])],
            Electorate::Voters(vec![bin(&[0, 0, 0]), bin(&[0, 0, 1])]),
            Norm::L(1),
            ScoringRule::plurality(2),
            Objective::Constructive,
            eps,
        )
        .unwrap()
    }

    #[test]
    fn bvpm_brute_force() {
        let wins = bvpm_winning_points(&worked(1.0)).unwrap();
        assert!(wins.contains(&bin(&[0, 1, 1])));
        assert_eq!(brute_force_bvpm(&worked(0.5)).unwrap().examined, 1);
        let all = brute_force_bvpm(&worked(3.0).with_objective(Objective::Destructive)).unwrap();
        assert_eq!(all.decision, OracleDecision::Yes);
        let none = worked(3.0);
        assert_eq!(binary_positions(&none).unwrap().len(), 8);
    }

    #[test]
    fn endpoint_zero_budget_examines_target() {
        let inst = Instance::new(
            IssueSpace::Real,
            vec![vec![0.0, 0.0], vec![1.0, 1.0]],
            Electorate::Voters(vec![vec![2.0, 2.0]]),
            Norm::Inf,
            ScoringRule::plurality(2),
            Objective::Constructive,
            0.0,
        )
        .unwrap();
        let r = endpoint_oracle_linf(&inst).unwrap();
        assert_eq!(r.examined, 1);
        assert_eq!(r.decision, OracleDecision::No);
        let s = sampling_oracle(&inst, 100, 1).unwrap();
        assert_eq!(s.examined, 1);
        assert_eq!(s.decision, OracleDecision::NotFound);
        assert!(!s.exhaustive);
    }

    #[test]
    fn sampling_finds_large_regions() {
        // Any point within 0.5 of the voter wins; that is a quarter of the box.
        let inst = Instance::new(
            IssueSpace::Real,
            vec![vec![0.0, 0.0], vec![3.0, 3.0]],
            Electorate::Voters(vec![vec![1.0, 1.0]]),
            Norm::Inf,
            ScoringRule::plurality(2),
            Objective::Constructive,
            1.0,
        )
        .unwrap();
        let r = sampling_oracle(&inst, 1000, 7).unwrap();
        assert_eq!(r.decision, OracleDecision::Yes);
        assert!(verify_witness(&inst, r.witness.as_ref().unwrap()).unwrap().passed());
    }

    #[test]
    fn sampler_stays_in_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for norm in [Norm::L(1), Norm::L(2), Norm::L(3), Norm::Inf] {
            let mut s = BudgetSampler::new(&[1.0, -1.0, 0.5], 0.7, norm);
            for _ in 0..500 {
                let p = s.sample(&mut rng);
                assert!(distance(&p, &[1.0, -1.0, 0.5], norm).unwrap() <= 0.7 + 1e-12);
            }
        }
    }

    #[test]
    fn bisc_examples() {
        let b = BiscInstance::new(bin(&[1, 0]), bin(&[0, 1]), vec![bin(&[1, 1]), bin(&[1, 0])]).unwrap();
        assert_eq!(bisc_brute_force(&b).unwrap().witness, Some(bin(&[1, 0])));
        let same = BiscInstance::new(bin(&[1, 0]), bin(&[1, 0]), vec![bin(&[0, 1])]).unwrap();
        assert_eq!(bisc_brute_force(&same).unwrap().decision, OracleDecision::Yes);
    }

    #[test]
    fn sat_examples() {
        let f = Cnf::new(3, vec![vec![Literal::pos(0), Literal::neg(1), Literal::pos(2)]]).unwrap();
        assert!(f.satisfied_by(&sat_brute_force(&f).unwrap().unwrap()));
        let contra = Cnf::new(1, vec![vec![Literal::pos(0)], vec![Literal::neg(0)]]).unwrap();
        assert_eq!(sat_brute_force(&contra).unwrap(), None);
        assert_eq!(sat_brute_force(&Cnf::new(2, vec![]).unwrap()).unwrap(), Some(vec![false, false]));
    }

    #[test]
    fn naive_examples() {
        let c = Cube { center: vec![0.5], radius: 0.7 };
        assert_eq!(naive_feasibility(&[0.0], 1.0, &[c]).unwrap().map(|p| p.len()), Some(1));
        let big = Cube { center: vec![0.0, 0.0], radius: 3.0 };
        assert_eq!(naive_feasibility(&[0.0, 0.0], 1.0, &[big]).unwrap(), None);
    }

    #[test]
    fn max_support_two_voters() {
        // The second voter is won only from the budget face at 1.
        let (best, p) = endpoint_max_support_linf(&[0.0], &[4.0], &[vec![1.0], vec![2.5]], 1.0).unwrap();
        assert_eq!((best, p), (2, vec![1.0]));
        let (one, _) = endpoint_max_support_linf(&[0.0], &[4.0], &[vec![1.0], vec![3.0]], 1.0).unwrap();
        assert_eq!(one, 1);
    }
}
