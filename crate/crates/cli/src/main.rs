use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spatial_control::problems::SatFormula;
use spatial_control::reductions::{
    bisc_to_bvpm, sat_to_rvpm_constructive_linf, sat_to_rvpm_constructive_lp, sat_to_rvpm_destructive_linf,
    sat_to_rvpm_destructive_lp, ReductionOutput,
};
use spatial_control::{Instance, Norm, SearchMode, SolveOptions};
use spatial_control_cli::dimacs::parse_dimacs;
use spatial_control_cli::dispatch::{run, verify, Report, RunOptions, SolverChoice};
use spatial_control_cli::experiment::{run_experiment, write_csv, ExperimentConfig};
use spatial_control_cli::format::{parse_instance, serialize_instance, Exponent, IssueSpaceSpec, ObjectiveSpec, ScoringSpec};
use spatial_control_cli::generate::{random_bisc, random_instance, RandomSpec};

#[derive(Parser)]
#[command(name = "spctl", version, about = "Decide perception-manipulation control in spatial elections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum SatVariant {
    DestructiveLinf,
    ConstructiveLinf,
    DestructiveLp,
    ConstructiveLp,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveChoice {
    Constructive,
    Destructive,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance. Exit 0 YES, 1 NO, 2 refused/timeout/not found, 3 error.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        solver: SolverChoice,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        output: OutputFormat,
        /// Evaluate every scenario instead of stopping at the first witness.
        #[arg(long)]
        exhaustive: bool,
        /// Samples for the sampling oracle.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check a perceived target position. Exit 0 if it achieves the objective.
    Verify {
        instance: PathBuf,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        witness: String,
        #[arg(long, value_enum, default_value = "json")]
        output: OutputFormat,
    },
    /// Decide with a ground-truth engine (exhaustive where possible, else sampling).
    Oracle {
        instance: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        output: OutputFormat,
    },
    /// Write a random instance.
    GenRandom {
        #[arg(long, value_enum, default_value = "binary")]
        issue_space: IssueSpaceSpec,
        #[arg(long, default_value_t = 4)]
        dimension: usize,
        #[arg(long, default_value_t = 3)]
        candidates: usize,
        #[arg(long, default_value_t = 5)]
        voters: u64,
        /// Number of distinct voter positions.
        #[arg(long)]
        groups: Option<usize>,
        /// Store voters as weighted groups.
        #[arg(long)]
        grouped: bool,
        /// Positive integer or `inf`.
        #[arg(long, default_value = "1")]
        norm: Exponent,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, value_enum, default_value = "constructive")]
        objective: ObjectiveSpec,
        /// plurality, veto, borda, k-approval:K or table:V1,V2,...
        #[arg(long, default_value = "plurality")]
        scoring: ScoringSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a 3-SAT formula (DIMACS file or random) as an instance.
    GenSat {
        dimacs: Option<PathBuf>,
        #[arg(long, value_enum)]
        variant: SatVariant,
        /// Exponent for the l_p variants.
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 5)]
        vars: usize,
        #[arg(long, default_value_t = 10)]
        clauses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a random issue-selection instance as a binary instance.
    GenBisc {
        #[arg(long, default_value_t = 6)]
        dimension: usize,
        #[arg(long, default_value_t = 5)]
        voters: usize,
        #[arg(long, default_value_t = 1)]
        p: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep voters, opinion groups and budgets; write CSV.
    Experiment {
        /// JSON config; flags below are ignored when given.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "binary")]
        issue_space: IssueSpaceSpec,
        #[arg(long, default_value_t = 8)]
        dimension: usize,
        #[arg(long, default_value_t = 3)]
        candidates: usize,
        #[arg(long, default_value = "1")]
        norm: Exponent,
        #[arg(long, default_value = "plurality")]
        scoring: ScoringSpec,
        #[arg(long, value_enum, default_value = "both")]
        objective: ObjectiveChoice,
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        voters: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6")]
        groups: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        epsilon: Vec<f64>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 7)]
        max_groups: usize,
        /// Leave mean_ms empty so output is bit-identical across runs.
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

const EXIT_ERROR: u8 = 3;

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(r: &Report, output: OutputFormat) -> u8 {
    match output {
        OutputFormat::Json => println!("{}", r.to_json()),
        OutputFormat::Text => print!("{}", r.to_text()),
    }
    r.exit_code() as u8
}

fn timeout(secs: Option<f64>) -> Result<Option<Duration>, Failure> {
    secs.map(|s| Duration::try_from_secs_f64(s).map_err(|e| Failure(format!("--timeout: {e}")))).transpose()
}

fn summarize(out: &ReductionOutput) {
    let m = &out.metadata;
    let params: Vec<String> = m.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    eprintln!(
        "{:?}: dimension {}, {} electorate entries, {} dummy voters, {} gadget pairs, {}",
        m.kind,
        out.instance.dimension(),
        out.instance.electorate().len(),
        m.dummy_voters,
        m.pairs.len(),
        params.join(" ")
    );
}

fn execute(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Solve { instance, solver, timeout: t, output, exhaustive, samples, seed } => {
            let inst = load(&instance)?;
            let mut solve = SolveOptions::default();
            if exhaustive {
                solve.mode = SearchMode::Exhaustive;
            }
            let options = RunOptions { solver, solve, timeout: timeout(t)?, samples, seed };
            Ok(report(&run(&inst, &options), output))
        }
        Command::Verify { instance, witness, output } => {
            let inst = load(&instance)?;
            let point = witness
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure(format!("--witness: {e}")))?;
            Ok(report(&verify(&inst, &point), output))
        }
        Command::Oracle { instance, samples, seed, timeout: t, output } => {
            let inst = load(&instance)?;
            let options =
                RunOptions { solver: SolverChoice::Oracle, timeout: timeout(t)?, samples, seed, ..RunOptions::default() };
            Ok(report(&run(&inst, &options), output))
        }
        Command::GenRandom {
            issue_space,
            dimension,
            candidates,
            voters,
            groups,
            grouped,
            norm,
            epsilon,
            objective,
            scoring,
            seed,
            out,
        } => {
            let spec = RandomSpec {
                issue_space: issue_space.into(),
                dimension,
                candidates,
                voters,
                groups,
                grouped,
                norm: norm.0,
                epsilon,
                objective: objective.into(),
                scoring: scoring.build(candidates)?,
            };
            let inst = random_instance(&mut ChaCha8Rng::seed_from_u64(seed), &spec)?;
            emit(&out, &serialize_instance(&inst))?;
            Ok(0)
        }
        Command::GenSat { dimacs, variant, p, vars, clauses, seed, out } => {
            let formula = match &dimacs {
                Some(path) => parse_dimacs(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))?,
                None => SatFormula::random(&mut ChaCha8Rng::seed_from_u64(seed), vars, clauses)?,
            };
            let norm = Norm::L(p);
            let output = match variant {
                SatVariant::DestructiveLinf => sat_to_rvpm_destructive_linf(&formula)?,
                SatVariant::ConstructiveLinf => sat_to_rvpm_constructive_linf(&formula)?,
                SatVariant::DestructiveLp => sat_to_rvpm_destructive_lp(&formula, norm)?,
                SatVariant::ConstructiveLp => sat_to_rvpm_constructive_lp(&formula, norm)?,
            };
            summarize(&output);
            emit(&out, &serialize_instance(&output.instance))?;
            Ok(0)
        }
        Command::GenBisc { dimension, voters, p, seed, out } => {
            let bisc = random_bisc(&mut ChaCha8Rng::seed_from_u64(seed), dimension, voters)?;
            let output = bisc_to_bvpm(&bisc, p)?;
            summarize(&output);
            emit(&out, &serialize_instance(&output.instance))?;
            Ok(0)
        }
        Command::Experiment {
            config,
            issue_space,
            dimension,
            candidates,
            norm,
            scoring,
            objective,
            voters,
            groups,
            epsilon,
            trials,
            seed,
            max_groups,
            no_timing,
            out,
        } => {
            let config = match config {
                Some(path) => serde_json::from_str::<ExperimentConfig>(&read(&path)?)
                    .map_err(|e| Failure(format!("{}: {e}", path.display())))?,
                None => ExperimentConfig {
                    issue_space,
                    dimension,
                    candidates,
                    norm,
                    scoring,
                    objectives: match objective {
                        ObjectiveChoice::Constructive => vec![ObjectiveSpec::Constructive],
                        ObjectiveChoice::Destructive => vec![ObjectiveSpec::Destructive],
                        ObjectiveChoice::Both => vec![ObjectiveSpec::Constructive, ObjectiveSpec::Destructive],
                    },
                    voters,
                    groups,
                    epsilons: epsilon,
                    trials,
                    seed,
                    max_groups,
                    timing: !no_timing,
                },
            };
            let rows = run_experiment(&config);
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            emit(&out, &String::from_utf8(buf)?)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_ERROR);
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
