//! Solver selection, guarded execution and reporting.

use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use serde::Serialize;
use spatial_control::oracle::{brute_force_bvpm, endpoint_oracle_linf, sampling_oracle, OracleDecision, OracleError};
use spatial_control::{
    solve_bvpm_with, solve_l2_constant_issues_with, solve_l2_constant_voters_with, solve_linf_constant_issues_with,
    solve_linf_constant_voters_with, two_candidate_constructive, verify_witness, Instance, Limits, Norm, Objective,
    SolveError, SolveOptions,
};

/// Oracle exhaustive enumeration of l_infinity endpoints stays this small.
const ENDPOINT_ORACLE_DIMENSION: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverChoice {
    Auto,
    Bvpm,
    LinfIssues,
    LinfVoters,
    L2Issues,
    L2Voters,
    TwoCand,
    Oracle,
}

impl SolverChoice {
    pub fn name(self) -> &'static str {
        match self {
            SolverChoice::Auto => "auto",
            SolverChoice::Bvpm => "bvpm",
            SolverChoice::LinfIssues => "linf-issues",
            SolverChoice::LinfVoters => "linf-voters",
            SolverChoice::L2Issues => "l2-issues",
            SolverChoice::L2Voters => "l2-voters",
            SolverChoice::TwoCand => "two-cand",
            SolverChoice::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Plan {
    Run(SolverChoice),
    Refuse(String),
}

fn hardness(instance: &Instance) -> &'static str {
    if instance.is_binary() {
        return "BVPM is NP-complete even with two candidates and majority voting";
    }
    match (instance.norm(), instance.objective()) {
        (Norm::L(1), _) => "no exact algorithm is known for real issues under l1",
        (_, Objective::Destructive) => {
            "destructive RVPM under l_p (1 < p <= inf) is NP-complete even with two candidates and majority voting"
        }
        (_, Objective::Constructive) => "constructive RVPM under l_p (1 < p <= inf) is NP-complete for plurality voting",
    }
}

/// Picks a polynomial-time solver when one applies, otherwise refuses with
/// the matching hardness statement.
pub fn plan(instance: &Instance, limits: &Limits) -> Plan {
    let d = instance.dimension();
    let q = instance.opinion_groups().len();
    let refuse = |why: String| Plan::Refuse(format!("{}; {why}", hardness(instance)));
    if instance.is_binary() {
        return if q <= limits.bvpm_groups {
            Plan::Run(SolverChoice::Bvpm)
        } else {
            refuse(format!("{q} opinion groups exceed the cap of {}", limits.bvpm_groups))
        };
    }
    match instance.norm() {
        Norm::Inf if instance.num_candidates() == 2 && instance.objective() == Objective::Constructive => {
            Plan::Run(SolverChoice::TwoCand)
        }
        Norm::Inf if q <= limits.linf_groups => Plan::Run(SolverChoice::LinfVoters),
        Norm::Inf if d <= limits.linf_grid_dimension => Plan::Run(SolverChoice::LinfIssues),
        Norm::Inf => refuse(format!(
            "d = {d} exceeds {} and {q} opinion groups exceed {}",
            limits.linf_grid_dimension, limits.linf_groups
        )),
        Norm::L(2) if q <= limits.l2_groups => Plan::Run(SolverChoice::L2Voters),
        Norm::L(2) if d <= limits.l2_dimension => Plan::Run(SolverChoice::L2Issues),
        Norm::L(2) => refuse(format!(
            "d = {d} exceeds {} and {q} opinion groups exceed {}",
            limits.l2_dimension, limits.l2_groups
        )),
        Norm::L(p) => refuse(format!("exact solvers cover only p = 2 and p = inf, this instance has p = {p}")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Yes,
    No,
    Refused,
    Timeout,
    NotFound,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Yes => 0,
            Status::No => 1,
            Status::Refused | Status::Timeout | Status::NotFound => 2,
            Status::Error => 3,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Yes => "YES",
            Status::No => "NO",
            Status::Refused => "REFUSED",
            Status::Timeout => "TIMEOUT",
            Status::NotFound => "NOT_FOUND",
            Status::Error => "ERROR",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StatsReport {
    pub scenarios: u64,
    pub nodes: u64,
    pub points: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub status: Status,
    pub solver: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scores: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_used: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<StatsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub examined: Option<u64>,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Report {
    fn bare(status: Status, solver: &'static str, message: Option<String>) -> Report {
        Report {
            status,
            solver,
            message,
            witness: None,
            scores: None,
            budget_used: None,
            stats: None,
            examined: None,
            elapsed_ms: 0.0,
            warnings: Vec::new(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} (solver {}, {:.3} ms)\n", self.status.label(), self.solver, self.elapsed_ms);
        if let Some(m) = &self.message {
            out += &format!("message: {m}\n");
        }
        if let Some(w) = &self.witness {
            out += &format!("witness: {}\n", join(w));
        }
        if let Some(b) = self.budget_used {
            out += &format!("budget used: {b}\n");
        }
        if let Some(s) = &self.scores {
            out += &format!("scores: {}\n", join(s));
        }
        if let Some(s) = &self.stats {
            out += &format!("scenarios: {}, nodes: {}, points: {}\n", s.scenarios, s.nodes, s.points);
        }
        if let Some(e) = self.examined {
            out += &format!("examined: {e}\n");
        }
        for w in &self.warnings {
            out += &format!("warning: {w}\n");
        }
        out
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub solver: SolverChoice,
    pub solve: SolveOptions,
    pub timeout: Option<Duration>,
    pub samples: u64,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> RunOptions {
        RunOptions {
            solver: SolverChoice::Auto,
            solve: SolveOptions::default(),
            timeout: None,
            samples: 100_000,
            seed: 0,
        }
    }
}

enum Raw {
    Decided { witness: Option<Vec<f64>>, stats: Option<StatsReport>, examined: Option<u64> },
    NotFound { examined: u64 },
    Refused(String),
    Failed(String),
}

fn from_solver(result: Result<spatial_control::Verdict, SolveError>) -> Raw {
    match result {
        Ok(v) => Raw::Decided {
            witness: v.witness.map(|w| w.position),
            stats: Some(StatsReport { scenarios: v.stats.scenarios, nodes: v.stats.nodes, points: v.stats.points }),
            examined: None,
        },
        Err(e @ (SolveError::Unsupported { .. } | SolveError::LimitExceeded { .. })) => Raw::Refused(e.to_string()),
        Err(e) => Raw::Failed(e.to_string()),
    }
}

fn from_oracle(result: Result<spatial_control::oracle::OracleReport, OracleError>) -> Raw {
    match result {
        Ok(r) if r.decision == OracleDecision::NotFound => Raw::NotFound { examined: r.examined },
        Ok(r) => Raw::Decided { witness: r.witness, stats: None, examined: Some(r.examined) },
        Err(e @ (OracleError::TooLarge { .. } | OracleError::Unsupported(_))) => Raw::Refused(e.to_string()),
        Err(e) => Raw::Failed(e.to_string()),
    }
}

fn execute(instance: &Instance, solver: SolverChoice, options: &RunOptions) -> Raw {
    let o = &options.solve;
    match solver {
        SolverChoice::Bvpm => from_solver(solve_bvpm_with(instance, o)),
        SolverChoice::LinfIssues => from_solver(solve_linf_constant_issues_with(instance, o)),
        SolverChoice::LinfVoters => from_solver(solve_linf_constant_voters_with(instance, o)),
        SolverChoice::L2Issues => from_solver(solve_l2_constant_issues_with(instance, o)),
        SolverChoice::L2Voters => from_solver(solve_l2_constant_voters_with(instance, o)),
        SolverChoice::TwoCand => from_solver(two_candidate_constructive(instance)),
        SolverChoice::Oracle if instance.is_binary() => from_oracle(brute_force_bvpm(instance)),
        SolverChoice::Oracle if instance.norm() == Norm::Inf && instance.dimension() <= ENDPOINT_ORACLE_DIMENSION => {
            from_oracle(endpoint_oracle_linf(instance))
        }
        SolverChoice::Oracle => from_oracle(sampling_oracle(instance, options.samples, options.seed)),
        SolverChoice::Auto => unreachable!("auto is resolved by plan"),
    }
}

/// Plans, runs under the optional timeout, and re-certifies any witness.
pub fn run(instance: &Instance, options: &RunOptions) -> Report {
    let start = Instant::now();
    let solver = match options.solver {
        SolverChoice::Auto => match plan(instance, &options.solve.limits) {
            Plan::Run(s) => s,
            Plan::Refuse(why) => {
                let mut r = Report::bare(Status::Refused, "auto", Some(why));
                r.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
                return r;
            }
        },
        s => s,
    };
    let raw = match options.timeout {
        None => execute(instance, solver, options),
        Some(limit) => {
            let (tx, rx) = mpsc::channel();
            let (inst, opts) = (instance.clone(), *options);
            thread::spawn(move || {
                let _ = tx.send(execute(&inst, solver, &opts));
            });
            match rx.recv_timeout(limit) {
                Ok(raw) => raw,
                Err(mpsc::RecvTimeoutError::Timeout) => {
                    let mut r =
                        Report::bare(Status::Timeout, solver.name(), Some(format!("no answer within {limit:?}")));
                    r.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
                    return r;
                }
                Err(mpsc::RecvTimeoutError::Disconnected) => Raw::Failed("solver thread panicked".into()),
            }
        }
    };
    let mut report = finish(instance, solver.name(), raw);
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    report.warnings = instance.warnings().iter().map(|w| format!("{w:?}")).collect();
    report
}

fn finish(instance: &Instance, solver: &'static str, raw: Raw) -> Report {
    match raw {
        Raw::Refused(why) => Report::bare(Status::Refused, solver, Some(why)),
        Raw::Failed(why) => Report::bare(Status::Error, solver, Some(why)),
        Raw::NotFound { examined } => {
            let mut r = Report::bare(
                Status::NotFound,
                solver,
                Some("sampling found no witness; this is not a proof of NO".into()),
            );
            r.examined = Some(examined);
            r
        }
        Raw::Decided { witness: None, stats, examined } => {
            let mut r = Report::bare(Status::No, solver, None);
            r.stats = stats;
            r.examined = examined;
            r
        }
        Raw::Decided { witness: Some(w), stats, examined } => {
            let mut r = certify(instance, solver, w);
            r.stats = stats;
            r.examined = examined;
            r
        }
    }
}

/// A YES is only reported once the witness survives independent checking.
fn certify(instance: &Instance, solver: &'static str, witness: Vec<f64>) -> Report {
    match verify_witness(instance, &witness) {
        Ok(cert) if cert.passed() => {
            let mut r = Report::bare(Status::Yes, solver, None);
            r.budget_used = Some(cert.budget_used);
            r.scores = Some(cert.outcome.scores);
            r.witness = Some(witness);
            r
        }
        Ok(cert) => {
            let mut r = Report::bare(
                Status::Error,
                solver,
                Some(format!("solver witness failed certification: {:?}", cert.failures)),
            );
            r.witness = Some(witness);
            r
        }
        Err(e) => Report::bare(Status::Error, solver, Some(e.to_string())),
    }
}

/// Checks a user-supplied witness.
pub fn verify(instance: &Instance, witness: &[f64]) -> Report {
    let start = Instant::now();
    let mut r = match verify_witness(instance, witness) {
        Ok(cert) => {
            let status = if cert.passed() { Status::Yes } else { Status::No };
            let message = (!cert.passed()).then(|| format!("{:?}", cert.failures));
            let mut r = Report::bare(status, "verify", message);
            r.budget_used = Some(cert.budget_used);
            r.scores = Some(cert.outcome.scores);
            r.witness = Some(witness.to_vec());
            r
        }
        Err(e) => Report::bare(Status::Error, "verify", Some(e.to_string())),
    };
    r.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    r
}
