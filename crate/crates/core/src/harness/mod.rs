//! Multi-trial experiments: run an optimizer from random starts on a
//! benchmark, write per-trial traces and a JSON summary, and tabulate
//! several experiments side by side.

mod compare;
mod config_file;
mod output;
pub mod stats;

use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::{dgs_minimize, es_minimize, DgsConfig, EsConfig};
use crate::benchmarks::BenchmarkSpec;
use crate::error::{Error, Result};
use crate::objective::Counted;
use crate::optimizer::{minimize, AsgfConfig};
use crate::trace::{MinimizeResult, RunTrace, Termination};

pub use compare::{compare, ComparisonRow, ComparisonTable};
pub use config_file::{overlay, ConfigFile, ExperimentSection};
pub use output::{emit_convergence_plot_data, read_trace_csv, render_convergence_svg, write_json, write_trace_csv};

/// Environment variable consulted for the default trial worker count.
pub const WORKERS_ENV: &str = "ASGF_WORKERS";

/// `ASGF_WORKERS` if set to a positive integer, otherwise the machine's
/// available parallelism.
pub fn default_worker_count() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Asgf,
    Es,
    Dgs,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Asgf => "asgf",
            Algorithm::Es => "es",
            Algorithm::Dgs => "dgs",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "asgf" => Ok(Algorithm::Asgf),
            "es" => Ok(Algorithm::Es),
            "dgs" => Ok(Algorithm::Dgs),
            other => Err(Error::invalid("algorithm", format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum AlgorithmConfig {
    Asgf(AsgfConfig),
    Es(EsConfig),
    Dgs(DgsConfig),
}

impl AlgorithmConfig {
    /// Default settings for `algorithm` on `spec`. ASGF starts from the
    /// benchmark's box-scaled radius; the baselines stop once they reach the
    /// success threshold.
    pub fn defaults_for(algorithm: Algorithm, spec: &BenchmarkSpec) -> Self {
        let target = Some(spec.global_minimum_value + spec.success_tolerance);
        match algorithm {
            Algorithm::Asgf => AlgorithmConfig::Asgf(AsgfConfig::with_sigma0(spec.default_sigma0())),
            Algorithm::Es => AlgorithmConfig::Es(EsConfig {
                target_value: target,
                ..Default::default()
            }),
            Algorithm::Dgs => AlgorithmConfig::Dgs(DgsConfig {
                target_value: target,
                ..Default::default()
            }),
        }
    }

    pub fn algorithm(&self) -> Algorithm {
        match self {
            AlgorithmConfig::Asgf(_) => Algorithm::Asgf,
            AlgorithmConfig::Es(_) => Algorithm::Es,
            AlgorithmConfig::Dgs(_) => Algorithm::Dgs,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AlgorithmConfig::Asgf(c) => c.validate(),
            AlgorithmConfig::Es(c) => c.validate(),
            AlgorithmConfig::Dgs(c) => c.validate(),
        }
    }

    fn set_seed(&mut self, seed: u64) {
        match self {
            AlgorithmConfig::Asgf(c) => c.rng_seed = seed,
            AlgorithmConfig::Es(c) => c.rng_seed = seed,
            AlgorithmConfig::Dgs(c) => c.rng_seed = seed,
        }
    }

    /// Toggles direction-level parallelism where the algorithm supports it.
    pub fn set_parallel(&mut self, parallel: bool) {
        match self {
            AlgorithmConfig::Asgf(c) => c.parallel = parallel,
            AlgorithmConfig::Dgs(c) => c.parallel = parallel,
            AlgorithmConfig::Es(_) => {}
        }
    }

    fn run(&self, objective: &Counted<'_>, x0: &[f64]) -> Result<MinimizeResult> {
        match self {
            AlgorithmConfig::Asgf(c) => minimize(objective, x0, c),
            AlgorithmConfig::Es(c) => es_minimize(objective, x0, c),
            AlgorithmConfig::Dgs(c) => dgs_minimize(objective, x0, c),
        }
    }
}

/// Everything needed to reproduce an experiment.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub benchmark: BenchmarkSpec,
    pub config: AlgorithmConfig,
    pub trial_count: usize,
    /// Trial `k` uses seed `base_seed + k` for both its start point and the
    /// optimizer's own randomness.
    pub base_seed: u64,
    pub worker_count: usize,
    /// Directory for `summary.json` and per-trial trace CSVs. `None` keeps
    /// everything in memory.
    pub output_dir: Option<PathBuf>,
}

impl ExperimentPlan {
    pub fn new(benchmark: BenchmarkSpec, algorithm: Algorithm) -> Self {
        let config = AlgorithmConfig::defaults_for(algorithm, &benchmark);
        ExperimentPlan {
            benchmark,
            config,
            trial_count: 20,
            base_seed: 0,
            worker_count: 1,
            output_dir: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trial_count == 0 {
            return Err(Error::invalid("trial_count", "must be positive"));
        }
        if self.worker_count == 0 {
            return Err(Error::invalid("worker_count", "must be positive"));
        }
        self.config.validate()
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.base_seed.wrapping_add(trial as u64)
    }

    /// Start point of trial `trial`: uniform in the benchmark box, drawn from
    /// a stream separate from the one the optimizer uses.
    pub fn start_point(&self, trial: usize) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.trial_seed(trial));
        rng.set_stream(1);
        self.benchmark.sample_start(&mut rng)
    }
}

/// Result of one trial. A trial whose optimizer returned an error counts as
/// a failure.
#[derive(Debug, Clone, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub success: bool,
    pub best_value: Option<f64>,
    pub iterations: usize,
    pub evaluations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub termination: Option<Termination>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub trace: Vec<RunTrace>,
}

/// Aggregate over the trials of one experiment. Means are taken over
/// successful trials only and are absent when none succeeded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub benchmark: String,
    pub algorithm: String,
    pub trial_count: usize,
    pub success_count: usize,
    pub success_rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_iterations: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_evaluations: Option<f64>,
}

impl SummaryRow {
    pub fn from_trials(benchmark: &str, algorithm: Algorithm, trials: &[TrialOutcome]) -> Self {
        let wins: Vec<&TrialOutcome> = trials.iter().filter(|t| t.success).collect();
        SummaryRow {
            benchmark: benchmark.to_string(),
            algorithm: algorithm.name().to_string(),
            trial_count: trials.len(),
            success_count: wins.len(),
            success_rate: if trials.is_empty() {
                0.0
            } else {
                wins.len() as f64 / trials.len() as f64
            },
            mean_iterations: stats::mean(wins.iter().map(|t| t.iterations as f64)),
            mean_evaluations: stats::mean(wins.iter().map(|t| t.evaluations as f64)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub benchmark: String,
    pub dimension: usize,
    pub algorithm: Algorithm,
    pub trial_count: usize,
    pub base_seed: u64,
    pub worker_count: usize,
    /// Raw value of `ASGF_WORKERS` at run time, if set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers_env: Option<String>,
    pub config: AlgorithmConfig,
    pub summary: SummaryRow,
    pub trials: Vec<TrialOutcome>,
}

fn run_trial(plan: &ExperimentPlan, trial: usize) -> TrialOutcome {
    let seed = plan.trial_seed(trial);
    let x0 = plan.start_point(trial);
    let mut config = plan.config.clone();
    config.set_seed(seed);
    let counted = Counted::new(&plan.benchmark);
    match config.run(&counted, &x0) {
        Ok(result) => TrialOutcome {
            trial,
            seed,
            success: plan.benchmark.is_success(result.best_value),
            best_value: Some(result.best_value),
            iterations: result.iterations,
            evaluations: result.evaluations,
            termination: Some(result.termination),
            error: None,
            trace: result.trace,
        },
        Err(err) => {
            log::warn!("trial {trial} (seed {seed}) failed: {err}");
            TrialOutcome {
                trial,
                seed,
                success: false,
                best_value: None,
                iterations: 0,
                evaluations: counted.evaluations(),
                termination: None,
                error: Some(err.to_string()),
                trace: Vec::new(),
            }
        }
    }
}

/// Runs all trials of `plan` on a pool of `worker_count` threads. Trial
/// results are independent of the worker count. When `output_dir` is set,
/// writes `summary.json` and `trials/trial_NNNN.csv` there.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentReport> {
    plan.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.worker_count)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let trials: Vec<TrialOutcome> =
        pool.install(|| (0..plan.trial_count).into_par_iter().map(|k| run_trial(plan, k)).collect());

    let id = plan.benchmark.id();
    let algorithm = plan.config.algorithm();
    let report = ExperimentReport {
        summary: SummaryRow::from_trials(&id, algorithm, &trials),
        benchmark: id,
        dimension: plan.benchmark.dimension,
        algorithm,
        trial_count: plan.trial_count,
        base_seed: plan.base_seed,
        worker_count: plan.worker_count,
        workers_env: std::env::var(WORKERS_ENV).ok(),
        config: plan.config.clone(),
        trials,
    };
    if let Some(dir) = &plan.output_dir {
        write_report(&report, dir)?;
    }
    Ok(report)
}

pub fn trace_path(dir: &Path, trial: usize) -> PathBuf {
    dir.join("trials").join(format!("trial_{trial:04}.csv"))
}

pub fn write_report(report: &ExperimentReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir.join("trials"))?;
    for trial in &report.trials {
        write_trace_csv(&trial.trace, &trace_path(dir, trial.trial))?;
    }
    write_json(report, &dir.join("summary.json"))
}
