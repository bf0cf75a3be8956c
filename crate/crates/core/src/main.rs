use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use postrate::covering::{cover_report, CoverClass};
use postrate::divergences::{Density, Measure};
use postrate::harness::{
    self, fit_rate, read_csv, run_experiment, write_csv, ExperimentSpec, FitOptions, ResultRow, RunOptions,
};
use postrate::hypothesis::{run_suite, Suite};
use postrate::{Error, Result};

#[derive(Parser)]
#[command(name = "postrate", version, about = "Posterior contraction rate experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Divergence between two densities of one family.
    Divergence {
        #[arg(long)]
        family: String,
        /// Comma separated parameters of p.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q: Vec<f64>,
        #[arg(long)]
        measure: Measure,
    },
    /// Cover or bracket a function class and compare with its entropy bound.
    Cover(CoverArgs),
    /// Monte Carlo error probabilities of the likelihood ratio tests.
    Tests {
        #[command(subcommand)]
        action: TestsAction,
    },
    /// Run an experiment and write `results.csv` and `report.json` into `--out`.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads, 0 for all cores. Results do not depend on it.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Record wall-clock milliseconds per replicate (makes the CSV nondeterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Rate fits on a results CSV.
    Rates {
        #[command(subcommand)]
        action: RatesAction,
    },
    /// Compare the fitted rate of a results CSV with the theory.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        model: String,
        #[command(flatten)]
        theory: TheoryArgs,
    },
}

#[derive(Subcommand)]
enum TestsAction {
    Run {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 20_000)]
        replicates: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum RatesAction {
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        /// Add a log log n column to the regression.
        #[arg(long)]
        log_term: bool,
        /// Keep the smallest sample size in the fit.
        #[arg(long)]
        include_smallest: bool,
        #[command(flatten)]
        theory: TheoryArgs,
    },
}

#[derive(Args)]
struct TheoryArgs {
    /// Experiment config whose model_config and tolerances set the theory.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Exponent tolerance, overriding the config and model default.
    #[arg(long)]
    tolerance: Option<f64>,
}

impl TheoryArgs {
    fn resolve(&self, model: &str) -> Result<(Value, f64)> {
        let (config, tol) = match &self.config {
            Some(path) => {
                let spec = ExperimentSpec::from_json_file(path)?;
                (spec.model_config.clone(), spec.tolerances.exponent)
            }
            None => (Value::Null, None),
        };
        let tol = self.tolerance.or(tol).unwrap_or_else(|| harness::default_tolerance(model, &config));
        Ok((config, tol))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassName {
    Interval,
    Ball,
    Monotone,
    PoissonSieve,
}

#[derive(Args)]
struct CoverArgs {
    #[arg(long)]
    class: ClassName,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Points sampled for the ball cover.
    #[arg(long, default_value_t = 10_000)]
    points: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    grid_size: usize,
    #[arg(long, default_value_t = 1.0)]
    lower: f64,
    #[arg(long, default_value_t = 3.0)]
    upper: f64,
    /// Number of design points for the Poisson sieve.
    #[arg(long, default_value_t = 200)]
    n: usize,
}

impl CoverArgs {
    fn class(&self) -> CoverClass {
        match self.class {
            ClassName::Interval => CoverClass::Interval { a: self.a, b: self.b },
            ClassName::Ball => {
                CoverClass::Ball { dim: self.dim, radius: self.radius, points: self.points, seed: self.seed }
            }
            ClassName::Monotone => CoverClass::Monotone { grid_size: self.grid_size },
            ClassName::PoissonSieve => CoverClass::PoissonSieve { lower: self.lower, upper: self.upper, n: self.n },
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string(value)?)
}

fn csv_model(rows: &[ResultRow]) -> Result<String> {
    rows.first().map(|r| r.model.clone()).ok_or_else(|| Error::Config("results file has no rows".into()))
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Divergence { family, p, q, measure } => {
            let p = Density::from_params(&family, &p)?;
            let q = Density::from_params(&family, &q)?;
            println!("{}", measure.evaluate(&p, &q)?);
        }
        Command::Cover(args) => println!("{}", json(&cover_report(&args.class(), args.eps)?)?),
        Command::Tests { action: TestsAction::Run { suite, replicates, seed } } => {
            for report in run_suite(suite, replicates, seed)? {
                println!("{}", json(&report)?);
            }
        }
        Command::Run { config, out, workers, timing } => {
            let spec = ExperimentSpec::from_json_file(&config)?;
            let rows = run_experiment(&spec, RunOptions { workers, record_timing: timing })?;
            std::fs::create_dir_all(&out)?;
            write_csv(&rows, out.join("results.csv"))?;
            let report = harness::report(&rows, &spec.model, &spec.model_config, Some(spec.tolerance()))?;
            std::fs::write(out.join("report.json"), serde_json::to_string_pretty(&report)?)?;
            println!("{}", json(&report.fit)?);
        }
        Command::Rates { action: RatesAction::Fit { input, log_term, include_smallest, theory } } => {
            let rows = read_csv(&input)?;
            let model = csv_model(&rows)?;
            let (config, tol) = theory.resolve(&model)?;
            let mut fit = fit_rate(&rows, FitOptions { with_log_term: log_term, include_smallest })?;
            let rate = harness::theoretical_rate(&model, &config)?;
            fit.verdict = Some(harness::verdict(&fit, rate.exponent, tol));
            println!("{}", json(&fit)?);
        }
        Command::Report { input, model, theory } => {
            let rows = read_csv(&input)?;
            let (config, tol) = theory.resolve(&model)?;
            let rows: Vec<ResultRow> = rows.into_iter().filter(|r| r.model == model).collect();
            let report = harness::report(&rows, &model, &config, Some(tol))?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
