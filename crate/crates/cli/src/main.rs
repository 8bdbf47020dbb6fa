use std::path::{Path, PathBuf};
use std::process::ExitCode;

use asgf::benchmarks::registry;
use asgf::harness::{
    compare, default_worker_count, emit_convergence_plot_data, render_convergence_svg, run_experiment, Algorithm,
    ComparisonTable, ConfigFile, ExperimentPlan, ExperimentReport, SummaryRow,
};
use asgf::{BenchmarkSpec, Error, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "asgf", version, about = "Run gradient-free optimizers on benchmark functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Repeated trials of one algorithm on one benchmark.
    Run {
        #[command(flatten)]
        common: Common,
        /// asgf, es or dgs [default: asgf].
        #[arg(long)]
        algo: Option<String>,
    },
    /// Same trials for several algorithms, tabulated together.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Comma-separated algorithm names.
        #[arg(long, value_delimiter = ',', default_value = "asgf,dgs")]
        algos: Vec<String>,
        /// Extra result rows (benchmark,algorithm,trial_count,success_rate,mean_iterations,mean_evaluations).
        #[arg(long)]
        external: Vec<PathBuf>,
    },
    /// A single run with its full trace, plot data and an SVG chart.
    Trace {
        #[command(flatten)]
        common: Common,
        /// asgf, es or dgs [default: asgf].
        #[arg(long)]
        algo: Option<String>,
    },
    /// Print the available benchmark functions.
    ListBenchmarks {
        /// Dimension used for the dimension-free functions.
        #[arg(long, default_value_t = 10)]
        dimension: usize,
    },
}

#[derive(Args)]
struct Common {
    /// Benchmark id such as `ackley-10` or `branin`.
    #[arg(long)]
    benchmark: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    /// Base seed; trial k uses seed + k.
    #[arg(long)]
    seed: Option<u64>,
    /// Trial worker threads [default: $ASGF_WORKERS or the CPU count].
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with [experiment], [asgf], [es] and [dgs] sections.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one algorithm setting, e.g. `--set sigma0=2.5`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Evaluate the directions of each step in parallel.
    #[arg(long)]
    parallel_directions: bool,
}

struct Context {
    file: ConfigFile,
    benchmark: BenchmarkSpec,
}

impl Common {
    fn context(&self) -> Result<Context> {
        let file = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let id = self
            .benchmark
            .clone()
            .or_else(|| file.experiment.benchmark.clone())
            .ok_or_else(|| Error::Config("no benchmark given (use --benchmark or [experiment] benchmark)".into()))?;
        let benchmark = BenchmarkSpec::lookup(&id)?;
        Ok(Context { file, benchmark })
    }

    fn algorithm(&self, ctx: &Context, flag: Option<&str>) -> Result<Algorithm> {
        flag.or(ctx.file.experiment.algorithm.as_deref()).unwrap_or("asgf").parse()
    }

    fn out_dir(&self, ctx: &Context) -> PathBuf {
        self.out
            .clone()
            .or_else(|| ctx.file.experiment.output.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("results"))
    }

    fn plan(&self, ctx: &Context, algorithm: Algorithm, out: &Path) -> Result<ExperimentPlan> {
        let exp = &ctx.file.experiment;
        let mut file = ctx.file.clone();
        for assignment in &self.overrides {
            file.set(algorithm, assignment)?;
        }
        let mut plan = ExperimentPlan::new(ctx.benchmark.clone(), algorithm);
        file.apply(&mut plan.config)?;
        if self.parallel_directions {
            plan.config.set_parallel(true);
        }
        plan.trial_count = self.trials.or(exp.trials).unwrap_or(plan.trial_count);
        plan.base_seed = self.seed.or(exp.seed).unwrap_or(plan.base_seed);
        plan.worker_count = self.workers.or(exp.workers).unwrap_or_else(default_worker_count);
        plan.output_dir = Some(out.to_path_buf());
        Ok(plan)
    }
}

fn print_summary(rows: &[&SummaryRow]) {
    for row in rows {
        let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.1}"));
        println!(
            "{} {}: {}/{} succeeded ({:.0}%), mean iterations {}, mean evaluations {}",
            row.algorithm,
            row.benchmark,
            row.success_count,
            row.trial_count,
            100.0 * row.success_rate,
            fmt(row.mean_iterations),
            fmt(row.mean_evaluations),
        );
    }
}

fn run(common: &Common, algo: Option<&str>) -> Result<()> {
    let ctx = common.context()?;
    let algorithm = common.algorithm(&ctx, algo)?;
    let out = common.out_dir(&ctx);
    let report = run_experiment(&common.plan(&ctx, algorithm, &out)?)?;
    print_summary(&[&report.summary]);
    println!("wrote {}", out.join("summary.json").display());
    Ok(())
}

fn run_compare(common: &Common, algos: &[String], external: &[PathBuf]) -> Result<()> {
    let ctx = common.context()?;
    let out = common.out_dir(&ctx);
    let mut reports: Vec<ExperimentReport> = Vec::new();
    for name in algos {
        let algorithm: Algorithm = name.parse()?;
        let plan = common.plan(&ctx, algorithm, &out.join(algorithm.name()))?;
        reports.push(run_experiment(&plan)?);
    }
    let external: Vec<&Path> = external.iter().map(PathBuf::as_path).collect();
    let table: ComparisonTable = compare(&reports, &external)?;
    table.write_csv(&out.join("comparison.csv"))?;
    print!("{table}");
    Ok(())
}

fn run_trace(common: &Common, algo: Option<&str>) -> Result<()> {
    let ctx = common.context()?;
    let algorithm = common.algorithm(&ctx, algo)?;
    let out = common.out_dir(&ctx);
    let mut plan = common.plan(&ctx, algorithm, &out)?;
    plan.trial_count = 1;
    plan.worker_count = 1;
    let report = run_experiment(&plan)?;
    let trial = &report.trials[0];
    if let Some(err) = &trial.error {
        return Err(Error::Config(format!("run failed: {err}")));
    }
    let traces = vec![trial.trace.clone()];
    emit_convergence_plot_data(&traces, &out.join("convergence.csv"))?;
    render_convergence_svg(
        &traces,
        ctx.benchmark.global_minimum_value,
        &format!("{} on {}", algorithm.name(), report.benchmark),
        &out.join("convergence.svg"),
    )?;
    print_summary(&[&report.summary]);
    println!(
        "best value {:e} after {} iterations, {} evaluations; wrote {}",
        trial.best_value.unwrap_or(f64::NAN),
        trial.iterations,
        trial.evaluations,
        out.display()
    );
    Ok(())
}

fn list_benchmarks(dimension: usize) -> Result<()> {
    println!("{:<16} {:>5}  {:<24} {:>14}", "id", "dim", "domain", "minimum");
    for spec in registry(dimension.max(1)) {
        let (lo, hi) = spec.bounds[0];
        let domain = if spec.bounds.iter().all(|&b| b == (lo, hi)) {
            format!("[{lo}, {hi}]^{}", spec.dimension)
        } else {
            spec.bounds.iter().map(|(l, h)| format!("[{l}, {h}]")).collect::<Vec<_>>().join(" x ")
        };
        println!(
            "{:<16} {:>5}  {:<24} {:>14.9}",
            spec.id(),
            spec.dimension,
            domain,
            spec.global_minimum_value
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { common, algo } => run(common, algo.as_deref()),
        Command::Compare {
            common,
            algos,
            external,
        } => run_compare(common, algos, external),
        Command::Trace { common, algo } => run_trace(common, algo.as_deref()),
        Command::ListBenchmarks { dimension } => list_benchmarks(*dimension),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
