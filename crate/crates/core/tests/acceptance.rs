//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spatial_control::election::{distance, Evaluator};
use spatial_control::l2::{arrangement_balls, sphere_subset_representatives};
use spatial_control::linf::{feasibility_constant_constraints, two_candidate_point, Cube};
use spatial_control::oracle::{
    bisc_brute_force, brute_force_bvpm, endpoint_max_support_linf, naive_feasibility, sampling_oracle,
    sat_brute_force, BudgetSampler, OracleDecision,
};
use spatial_control::reductions::{
    bisc_to_bvpm, decode_witness, sat_to_rvpm_constructive_linf, sat_to_rvpm_destructive_linf,
    sat_to_rvpm_destructive_lp, Decoded, ReductionOutput,
};
use spatial_control::{
    solve_bvpm, solve_bvpm_with, solve_l2_constant_issues, solve_l2_constant_voters, solve_linf_constant_issues,
    two_candidate_constructive, verify_witness, Electorate, Instance, IssueSpace, Norm, Objective, OpinionGroup,
    ScoringRule, SearchMode, SolveOptions,
};

use common::*;

type Check = Result<String, String>;

fn certified(instance: &Instance, x: &[f64]) -> bool {
    verify_witness(instance, x).map(|c| c.passed()).unwrap_or(false)
}

fn bvpm_oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let start = Instant::now();
    let mut yes = 0;
    for i in 0..500 {
        let inst = random_bvpm(&mut rng);
        let verdict = solve_bvpm(&inst).map_err(|e| format!("instance {i}: {e}"))?;
        let oracle = brute_force_bvpm(&inst).map_err(|e| format!("instance {i}: {e}"))?;
        if verdict.is_yes() != (oracle.decision == OracleDecision::Yes) {
            return Err(format!("instance {i}: solver {:?}, oracle {:?}", verdict.decision(), oracle.decision));
        }
        if let Some(w) = &verdict.witness {
            if !certified(&inst, &w.position) {
                return Err(format!("instance {i}: witness fails certification"));
            }
            yes += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 60.0 {
        return Err(format!("took {elapsed:.1} s"));
    }
    Ok(format!("500/500 decisions agree ({yes} YES, all certified) in {elapsed:.2} s"))
}

fn opinion_group_scaling() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let d = 8;
    let positions: Vec<Vec<f64>> = (0..3).map(|_| bits(&mut rng, d)).collect();
    let candidates: Vec<Vec<f64>> = (0..3).map(|_| bits(&mut rng, d)).collect();
    let scoring = ScoringRule::borda(3);
    let r = scoring.unique_count() as u64;
    let options = SolveOptions { mode: SearchMode::Exhaustive, ..SolveOptions::default() };
    let mut timings = Vec::new();
    let mut decisions = Vec::new();
    for &m in &[1_000usize, 10_000, 100_000] {
        let mut counts = [0u64; 3];
        let voters: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let q = if i < 3 { i } else { rng.random_range(0..3) };
                counts[q] += 1;
                positions[q].clone()
            })
            .collect();
        let groups: Vec<OpinionGroup> = positions
            .iter()
            .zip(counts)
            .map(|(p, w)| OpinionGroup { position: p.clone(), weight: w })
            .collect();
        let mut runs = Vec::new();
        for objective in [Objective::Constructive, Objective::Destructive] {
            let make = |e: Electorate| {
                Instance::new(IssueSpace::Binary, candidates.clone(), e, Norm::L(1), scoring.clone(), objective, 3.0)
                    .unwrap()
            };
            let full = make(Electorate::Voters(voters.clone()));
            let collapsed = make(Electorate::Groups(groups.clone()));
            let a = solve_bvpm_with(&full, &options).map_err(|e| e.to_string())?;
            let b = solve_bvpm_with(&collapsed, &options).map_err(|e| e.to_string())?;
            if a.decision() != b.decision() {
                return Err(format!("m={m} {objective:?}: grouped {:?} vs collapsed {:?}", a.decision(), b.decision()));
            }
            for s in [a.stats.scenarios, b.stats.scenarios] {
                if s != r.pow(3) {
                    return Err(format!("m={m}: {s} scenarios, expected {}", r.pow(3)));
                }
            }
            decisions.push(a.decision());
            for _ in 0..7 {
                let t = Instant::now();
                let v = solve_bvpm_with(&full, &options).map_err(|e| e.to_string())?;
                runs.push(t.elapsed());
                std::hint::black_box(v);
            }
        }
        timings.push((m as f64, best_duration(&runs)));
    }
    let slope = log_log_slope(&timings);
    let shown: Vec<String> = timings.iter().map(|(m, t)| format!("m={m}: {:.3} ms", t * 1e3)).collect();
    if slope > 1.2 {
        return Err(format!("log-log slope {slope:.2} > 1.2 ({})", shown.join(", ")));
    }
    Ok(format!(
        "decisions {decisions:?} identical grouped/collapsed, {} scenarios per run, slope {slope:.2} ({})",
        r.pow(3),
        shown.join(", ")
    ))
}

fn two_candidate_linf() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut worst = Duration::ZERO;
    for i in 0..200 {
        let inst = random_linf_two(&mut rng);
        let start = Instant::now();
        let verdict = two_candidate_constructive(&inst).map_err(|e| format!("instance {i}: {e}"))?;
        worst = worst.max(start.elapsed());
        let (c1, c2, eps) = (inst.target(), &inst.candidates()[1], inst.budget());
        let point = two_candidate_point(c1, c2, eps);
        let votes = target_votes(&inst, &point);
        let m = inst.num_voters() as usize;
        if verdict.is_yes() != (2 * votes >= m) {
            return Err(format!("instance {i}: decision disagrees with the closed-form tally"));
        }
        let mut sampler = BudgetSampler::new(c1, eps, Norm::Inf);
        for _ in 0..10_000 {
            let x = sampler.sample(&mut rng);
            if target_votes(&inst, &x) > votes {
                return Err(format!("instance {i}: a sample beats the closed form"));
            }
        }
        let voters: Vec<Vec<f64>> = inst.electorate().entries().map(|(v, _)| v.to_vec()).collect();
        let (best, _) = endpoint_max_support_linf(c1, c2, &voters, eps).map_err(|e| e.to_string())?;
        if best != votes {
            return Err(format!("instance {i}: closed form {votes} votes, endpoint oracle {best}"));
        }
    }
    if worst >= Duration::from_millis(10) {
        return Err(format!("slowest solve {worst:?}"));
    }
    Ok(format!("200/200 optimal vs 10000 samples and endpoint oracle, slowest solve {worst:?}"))
}

fn satisfies_all(x: &[f64], y: &[f64], eps: f64, cubes: &[Cube]) -> bool {
    x.iter().zip(y).all(|(a, b)| (a - b).abs() <= eps)
        && cubes.iter().all(|c| x.iter().zip(&c.center).any(|(a, b)| (a - b).abs() >= c.radius))
}

fn constant_constraint_feasibility() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut feasible = 0;
    for i in 0..500 {
        let (y, eps, cubes) = random_feasibility(&mut rng);
        let fast = feasibility_constant_constraints(&y, eps, &cubes);
        let naive = naive_feasibility(&y, eps, &cubes).map_err(|e| e.to_string())?;
        if fast.is_some() != naive.is_some() {
            return Err(format!("problem {i}: algorithm {:?}, naive {:?}", fast, naive));
        }
        for x in fast.iter().chain(&naive) {
            if !satisfies_all(x, &y, eps, &cubes) {
                return Err(format!("problem {i}: point {x:?} violates a constraint"));
            }
        }
        feasible += fast.is_some() as usize;
    }
    let mut timings = Vec::new();
    for &d in &[8usize, 64, 512] {
        let mut cubes = vec![Cube { center: vec![0.0; d], radius: 2.0 }];
        for _ in 0..3 {
            cubes.push(Cube { center: (0..d).map(|_| rng.random_range(-4..=4) as f64 / 4.0).collect(), radius: 0.5 });
        }
        let y = vec![0.0; d];
        let reps = 200;
        let mut runs = Vec::new();
        for _ in 0..15 {
            let t = Instant::now();
            for _ in 0..reps {
                std::hint::black_box(feasibility_constant_constraints(&y, 1.0, &cubes));
            }
            runs.push(t.elapsed() / reps);
        }
        timings.push((d as f64, best_duration(&runs)));
    }
    let slope = log_log_slope(&timings);
    let shown: Vec<String> = timings.iter().map(|(d, t)| format!("d={d}: {:.1} us", t * 1e6)).collect();
    if slope > 1.2 {
        return Err(format!("log-log slope {slope:.2} > 1.2 ({})", shown.join(", ")));
    }
    Ok(format!("500/500 agree ({feasible} feasible, zero violations), slope {slope:.2} ({})", shown.join(", ")))
}

fn decoded_assignment(out: &ReductionOutput, x: &[f64]) -> Result<Vec<bool>, String> {
    match decode_witness(out, x).map_err(|e| e.to_string())? {
        Decoded::Assignment { values, .. } => Ok(values),
        Decoded::Subset(_) => Err("expected an assignment".into()),
    }
}

fn sat_round_trip(
    seed: u64,
    build: fn(&spatial_control::problems::SatFormula) -> Result<ReductionOutput, spatial_control::reductions::ReductionError>,
    check_pairs: bool,
) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    let (mut sat, mut pairs) = (0, 0);
    for i in 0..100 {
        let f = random_sat(&mut rng);
        let truth = sat_brute_force(f.cnf()).map_err(|e| e.to_string())?;
        let out = build(&f).map_err(|e| format!("formula {i}: {e}"))?;
        if check_pairs {
            for &(v, c) in &out.metadata.pairs {
                let dist = distance(out.instance.electorate().entry(v).0, &out.instance.candidates()[c], Norm::Inf)
                    .map_err(|e| e.to_string())?;
                if dist != 0.5 {
                    return Err(format!("formula {i}: gadget pair at distance {dist}"));
                }
                pairs += 1;
            }
        }
        let verdict = solve_linf_constant_issues(&out.instance).map_err(|e| format!("formula {i}: {e}"))?;
        if verdict.is_yes() != truth.is_some() {
            return Err(format!("formula {i}: solver {:?}, satisfiable {}", verdict.decision(), truth.is_some()));
        }
        if let Some(w) = &verdict.witness {
            let a = decoded_assignment(&out, &w.position).map_err(|e| format!("formula {i}: {e}"))?;
            if !f.satisfied_by(&a) {
                return Err(format!("formula {i}: decoded assignment {a:?} falsifies the formula"));
            }
            sat += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 120.0 {
        return Err(format!("took {elapsed:.1} s"));
    }
    let pair_note = if check_pairs { format!(", {pairs} gadget pairs at distance 1/2") } else { String::new() };
    Ok(format!("100/100 match ({sat} satisfiable, {} not), decoded assignments satisfy{pair_note}, {elapsed:.2} s", 100 - sat))
}

fn bisc_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut yes = 0;
    for i in 0..100 {
        let bisc = random_bisc(&mut rng);
        let p = rng.random_range(1..=3);
        let out = bisc_to_bvpm(&bisc, p).map_err(|e| e.to_string())?;
        let truth = bisc_brute_force(&bisc).map_err(|e| e.to_string())?;
        let verdict = solve_bvpm(&out.instance).map_err(|e| format!("instance {i}: {e}"))?;
        if verdict.is_yes() != (truth.decision == OracleDecision::Yes) {
            return Err(format!("instance {i}: solver {:?}, brute force {:?}", verdict.decision(), truth.decision));
        }
        if let Some(w) = &verdict.witness {
            let Decoded::Subset(s) = decode_witness(&out, &w.position).map_err(|e| e.to_string())? else {
                return Err("expected a subset".into());
            };
            if !s.iter().any(|&b| b) || !bisc.target_wins(&s) {
                return Err(format!("instance {i}: decoded subset {s:?} is empty or loses"));
            }
            yes += 1;
        }
    }
    Ok(format!("100/100 agree ({yes} YES), decoded subsets nonempty and winning"))
}

fn l2_plane() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let (mut yes, mut no, mut points) = (0, 0, 0);
    let mut worst_residual: f64 = 0.0;
    for i in 0..200 {
        let inst = random_l2_plane(&mut rng);
        let balls = arrangement_balls(&inst, &Evaluator::new(&inst));
        for a in 0..balls.len() {
            for b in a..balls.len() {
                let subset = if a == b { vec![balls[a].clone()] } else { vec![balls[a].clone(), balls[b].clone()] };
                let reps = sphere_subset_representatives(&subset).map_err(|e| format!("instance {i}: {e}"))?;
                for x in &reps {
                    for s in &subset {
                        worst_residual = worst_residual.max(s.residual(x));
                    }
                    points += 1;
                }
            }
        }
        let verdict = solve_l2_constant_issues(&inst).map_err(|e| format!("instance {i}: {e}"))?;
        let other = solve_l2_constant_voters(&inst).map_err(|e| format!("instance {i}: {e}"))?;
        if verdict.is_yes() != other.is_yes() {
            return Err(format!("instance {i}: constant-issues and constant-voters solvers disagree"));
        }
        match &verdict.witness {
            Some(w) => {
                if !certified(&inst, &w.position) {
                    return Err(format!("instance {i}: witness fails certification"));
                }
                yes += 1;
            }
            None => {
                let report = sampling_oracle(&inst, 1_000_000, 8000 + i).map_err(|e| e.to_string())?;
                if report.decision != OracleDecision::NotFound {
                    return Err(format!("instance {i}: solver NO but sampling found a witness"));
                }
                no += 1;
            }
        }
    }
    if worst_residual >= 1e-9 {
        return Err(format!("sphere residual {worst_residual:e}"));
    }
    Ok(format!(
        "{points} representative points, max residual {worst_residual:.1e}; {yes} YES certified; \
         {no} NO withstood 10^6 samples each (one-sided check)"
    ))
}

fn reduction_structure() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let (mut count, mut min_margin) = (0, f64::INFINITY);
    for p in [2u32, 3] {
        for d in 4..=8 {
            for _ in 0..5 {
                let clauses = rng.random_range(1..=10);
                let f = spatial_control::problems::SatFormula::random(&mut rng, d - 1, clauses).unwrap();
                let out = sat_to_rvpm_destructive_lp(&f, Norm::L(p)).map_err(|e| format!("p={p} d={d}: {e}"))?;
                let md = &out.metadata;
                let (a, eps) = (md.param("a").unwrap(), md.param("epsilon").unwrap());
                if a + eps >= 2.0 * a {
                    return Err(format!("p={p} d={d}: loyalty fails, a={a}, eps={eps}"));
                }
                let margin = md.param("margin_low").unwrap().min(md.param("margin_high").unwrap());
                if margin < 1e-9 {
                    return Err(format!("p={p} d={d}: margin {margin:e}"));
                }
                min_margin = min_margin.min(margin);
                count += 1;
            }
        }
    }
    Ok(format!("{count} instances: loyalty holds, smallest margin {min_margin:.3e}"))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 9] = [
        ("BVPM oracle equivalence", bvpm_oracle_equivalence),
        ("opinion-group scaling", opinion_group_scaling),
        ("two-candidate l_inf optimality", two_candidate_linf),
        ("constant-constraint feasibility vs naive", constant_constraint_feasibility),
        ("SAT round-trip, destructive l_inf", || sat_round_trip(505, sat_to_rvpm_destructive_linf, false)),
        ("SAT round-trip, constructive l_inf", || sat_round_trip(606, sat_to_rvpm_constructive_linf, true)),
        ("issue selection to BVPM", bisc_round_trip),
        ("l2 representative-point soundness", l2_plane),
        ("l_p reduction structure", reduction_structure),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} [{secs:.2} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {detail} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
