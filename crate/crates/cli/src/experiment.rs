//! Parameter sweeps over random instances with exhaustive scenario search.
//!
//! Each cell draws its instances from its own ChaCha stream, so results do
//! not depend on thread scheduling.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use spatial_control::{
    solve_bvpm_with, solve_l2_constant_voters_with, solve_linf_constant_voters_with, Instance, IssueSpace, Norm,
    SearchMode, SolveError, SolveOptions, Verdict,
};

use crate::format::{Exponent, IssueSpaceSpec, ObjectiveSpec, ScoringSpec};
use crate::generate::{random_instance, RandomSpec};

pub const HEADER: [&str; 10] =
    ["issue_space", "norm", "objective", "m", "q", "epsilon", "trials", "yes_rate", "mean_ms", "scenarios"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub issue_space: IssueSpaceSpec,
    pub dimension: usize,
    pub candidates: usize,
    pub norm: Exponent,
    pub scoring: ScoringSpec,
    pub objectives: Vec<ObjectiveSpec>,
    pub voters: Vec<u64>,
    pub groups: Vec<usize>,
    pub epsilons: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Cells with more opinion groups than this are reported as skipped.
    pub max_groups: usize,
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> ExperimentConfig {
        ExperimentConfig {
            issue_space: IssueSpaceSpec::Binary,
            dimension: 8,
            candidates: 3,
            norm: Exponent(Norm::L(1)),
            scoring: ScoringSpec::Plurality,
            objectives: vec![ObjectiveSpec::Constructive, ObjectiveSpec::Destructive],
            voters: vec![1_000, 10_000, 100_000],
            groups: vec![1, 2, 3, 4, 5, 6],
            epsilons: vec![2.0],
            trials: 5,
            seed: 0,
            max_groups: 7,
            timing: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Cell {
    objective: ObjectiveSpec,
    m: u64,
    q: usize,
    epsilon: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub fields: [String; 10],
}

fn cells(config: &ExperimentConfig) -> Vec<Cell> {
    let mut out = Vec::new();
    for &objective in &config.objectives {
        for &m in &config.voters {
            for &q in &config.groups {
                for &epsilon in &config.epsilons {
                    out.push(Cell { objective, m, q, epsilon });
                }
            }
        }
    }
    out
}

fn solve(instance: &Instance, options: &SolveOptions) -> Result<Verdict, SolveError> {
    match (instance.issue_space(), instance.norm()) {
        (IssueSpace::Binary, _) => solve_bvpm_with(instance, options),
        (IssueSpace::Real, Norm::Inf) => solve_linf_constant_voters_with(instance, options),
        (IssueSpace::Real, _) => solve_l2_constant_voters_with(instance, options),
    }
}

fn run_cell(config: &ExperimentConfig, index: usize, cell: Cell) -> Row {
    let norm = config.norm.0;
    let space: IssueSpace = config.issue_space.into();
    let lead = |yes_rate: String, mean_ms: String, scenarios: String| Row {
        fields: [
            match space {
                IssueSpace::Binary => "binary".into(),
                IssueSpace::Real => "real".into(),
            },
            norm.to_string(),
            match cell.objective {
                ObjectiveSpec::Constructive => "constructive".into(),
                ObjectiveSpec::Destructive => "destructive".into(),
            },
            cell.m.to_string(),
            cell.q.to_string(),
            cell.epsilon.to_string(),
            config.trials.to_string(),
            yes_rate,
            mean_ms,
            scenarios,
        ],
    };
    let skipped = |why: String| lead(format!("skipped ({why})"), String::new(), String::new());
    if cell.q > config.max_groups {
        return skipped(format!("q above the cap of {}", config.max_groups));
    }
    if space == IssueSpace::Real && !matches!(norm, Norm::L(2) | Norm::Inf) {
        return skipped(format!("no exact solver for real issues under {norm}"));
    }
    let scoring = match config.scoring.build(config.candidates) {
        Ok(s) => s,
        Err(e) => return skipped(e.to_string()),
    };
    let spec = RandomSpec {
        issue_space: space,
        dimension: config.dimension,
        candidates: config.candidates,
        voters: cell.m,
        groups: Some(cell.q),
        grouped: true,
        norm,
        epsilon: cell.epsilon,
        objective: cell.objective.into(),
        scoring,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let options = SolveOptions { mode: SearchMode::Exhaustive, ..SolveOptions::default() };
    let (mut yes, mut total_ms) = (0usize, 0.0);
    let mut scenarios: Vec<u64> = Vec::with_capacity(config.trials);
    for _ in 0..config.trials {
        let instance = match random_instance(&mut rng, &spec) {
            Ok(i) => i,
            Err(e) => return skipped(e.to_string()),
        };
        let start = Instant::now();
        let verdict = match solve(&instance, &options) {
            Ok(v) => v,
            Err(e) => return skipped(e.to_string()),
        };
        total_ms += start.elapsed().as_secs_f64() * 1e3;
        yes += usize::from(verdict.is_yes());
        scenarios.push(verdict.stats.scenarios);
    }
    let trials = config.trials.max(1) as f64;
    let (lo, hi) = (scenarios.iter().min().copied(), scenarios.iter().max().copied());
    let scenarios = match (lo, hi) {
        (Some(lo), Some(hi)) if lo == hi => lo.to_string(),
        (Some(lo), Some(hi)) => format!("{lo}-{hi}"),
        _ => String::new(),
    };
    let mean_ms = if config.timing { format!("{:.4}", total_ms / trials) } else { String::new() };
    lead(format!("{:.4}", yes as f64 / trials), mean_ms, scenarios)
}

/// Rows in cell order: objective, then m, then q, then epsilon.
pub fn run_experiment(config: &ExperimentConfig) -> Vec<Row> {
    cells(config).into_par_iter().enumerate().map(|(i, c)| run_cell(config, i, c)).collect()
}

pub fn write_csv<W: std::io::Write>(rows: &[Row], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record(&r.fields)?;
    }
    w.flush()?;
    Ok(())
}
