//! `circreg` command-line front-end.
//!
//! Exit codes: 0 success, 2 usage, 3 data, 4 numerical failure.

mod settings;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use circreg::experiments::{self, MonteCarloConfig};
use circreg::report::{self, Format, ReliabilityRecord};
use circreg::{ErrorClass, DEFAULT_C0_LINEAR};
use clap::{Args, Parser, Subcommand};

use settings::{mode_of, parse_format, parse_list, pick, resolve_model, split_tuning, tuning, FileConfig, ModelChoice, Mode, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] circreg::Error),
    #[error("writing output: {0}")]
    Output(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e.class() {
                ErrorClass::Usage => 2,
                ErrorClass::Data => 3,
                ErrorClass::Numerical => 4,
            },
            CliError::Output(_) => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "circreg", version, about = "Deconvolution estimators for circular regression with noisy covariates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Monte Carlo risk of m̂(x) on the LC or CC design.
    Simulate(SimulateArgs),
    /// Risk as a function of the penalty constant c0.
    Calibrate(CalibrateArgs),
    /// Estimate a regression curve from a `distance,direction_radians` CSV.
    Estimate(EstimateArgs),
    /// Reliability ratio Var(X) / (Var(X) + Var(ε)) of a design.
    Reliability(ReliabilityArgs),
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// lc or cc
    #[arg(long)]
    model: Option<String>,
    /// Laplace error scale (lc)
    #[arg(long)]
    sigma_eps: Option<f64>,
    /// Wrapped-Laplace error parameter (cc)
    #[arg(long)]
    lambda_eps: Option<f64>,
    /// Error model as text, e.g. `gaussian:0.1`; overrides the two above
    #[arg(long)]
    noise: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// TOML file whose keys override the flags
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// Cap on worker threads
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    reps: Option<usize>,
    /// Penalty constant, `c` or `sine,cosine`
    #[arg(long)]
    c0: Option<String>,
    /// Supersmooth parameters, `gamma=..,rho=..` or `b=..,a=..`
    #[arg(long)]
    ss: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct CalibrateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated c0 values (default: the model's standard grid)
    #[arg(long)]
    grid: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// CSV with header `distance,direction_radians`
    data: PathBuf,
    /// Error model of the covariate, e.g. `laplace:0.1`
    #[arg(long)]
    noise: Option<String>,
    #[arg(long)]
    c0: Option<String>,
    #[arg(long)]
    ss: Option<String>,
    /// Comma-separated evaluation points
    #[arg(long)]
    x: Option<String>,
    /// Number of equispaced points over the data range when --x is absent
    #[arg(long)]
    grid_points: Option<usize>,
    /// Add the Fisher–Lee, SPML and trigonometric fits
    #[arg(long)]
    baselines: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct ReliabilityArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    common: CommonArgs,
}

const DEFAULT_N: usize = 200;
const DEFAULT_REPS: usize = 50;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_GRID_POINTS: usize = 101;

fn model_choice(file: &FileConfig, m: ModelArgs) -> ModelChoice {
    ModelChoice {
        model: pick(file.model.clone(), m.model),
        sigma_eps: pick(file.sigma_eps, m.sigma_eps),
        lambda_eps: pick(file.lambda_eps, m.lambda_eps),
        noise: pick(file.noise.clone(), m.noise),
    }
}

fn file_x(file: &FileConfig) -> Result<Option<f64>, CliError> {
    match &file.x {
        None => Ok(None),
        Some(s) => match parse_list("x", s)?.as_slice() {
            [x] => Ok(Some(*x)),
            _ => Err(CliError::Usage("config `x` must be a single value here".into())),
        },
    }
}

fn setup(common: &CommonArgs) -> Result<(FileConfig, Format), CliError> {
    let file = FileConfig::load(common.config.as_deref())?;
    let format = parse_format(pick(file.format.clone(), common.format.clone()))?;
    if let Some(t) = pick(file.threads, common.threads) {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok((file, format))
}

fn simulate(a: SimulateArgs) -> Result<(String, CommonArgs), CliError> {
    let (file, format) = setup(&a.common)?;
    let model = resolve_model(model_choice(&file, a.model))?;
    let (smoothing, estimator) = tuning(pick(file.c0.clone(), a.c0), pick(file.ss.clone(), a.ss), None)?;
    let mc = MonteCarloConfig {
        n: pick(file.n, a.n).unwrap_or(DEFAULT_N),
        x: pick(file_x(&file)?, a.x).unwrap_or(model.default_x()),
        reps: pick(file.reps, a.reps).unwrap_or(DEFAULT_REPS),
        seed: pick(file.seed, a.seed).unwrap_or(DEFAULT_SEED),
        estimator,
    };
    let (c0, ss) = split_tuning(&estimator);
    let run = RunConfig {
        command: "simulate",
        mode: mode_of(model.kind),
        model: Some(model.kind),
        noise: model.noise.to_string(),
        smoothing: Some(smoothing),
        c0,
        ss,
        x: Some(vec![mc.x]),
        n: Some(mc.n),
        reps: Some(mc.reps),
        seed: Some(mc.seed),
        grid: None,
        data: None,
        format,
    };
    let result = experiments::run_monte_carlo(&model, &mc)?;
    log::info!("mean error {} over {} replications", result.mean_error, mc.reps);
    Ok((report::risk_report(&result, &run, format)?, a.common))
}

fn calibrate(a: CalibrateArgs) -> Result<(String, CommonArgs), CliError> {
    let (file, format) = setup(&a.common)?;
    let model = resolve_model(model_choice(&file, a.model))?;
    let grid = match pick(file.grid.clone(), a.grid) {
        Some(g) => parse_list("grid", &g)?,
        None => model.calibration_grid().to_vec(),
    };
    let n = pick(file.n, a.n).unwrap_or(DEFAULT_N);
    let x = pick(file_x(&file)?, a.x).unwrap_or(model.default_x());
    let reps = pick(file.reps, a.reps).unwrap_or(DEFAULT_REPS);
    let seed = pick(file.seed, a.seed).unwrap_or(DEFAULT_SEED);
    let run = RunConfig {
        command: "calibrate",
        mode: mode_of(model.kind),
        model: Some(model.kind),
        noise: model.noise.to_string(),
        smoothing: Some(settings::Smoothing::Os),
        c0: None,
        ss: None,
        x: Some(vec![x]),
        n: Some(n),
        reps: Some(reps),
        seed: Some(seed),
        grid: Some(grid.clone()),
        data: None,
        format,
    };
    let curve = experiments::calibrate_c0(&model, n, x, &grid, reps, seed)?;
    Ok((report::calibration(&curve, &run, format)?, a.common))
}

fn estimate(a: EstimateArgs) -> Result<(String, CommonArgs), CliError> {
    let (file, format) = setup(&a.common)?;
    let spec = settings::parse_noise(&pick(file.noise.clone(), a.noise).unwrap_or_else(|| "none".into()))?;
    let noise = spec.to_linear()?;
    let data = experiments::load_direction_csv(&a.data)?;
    let (smoothing, estimator) = tuning(pick(file.c0.clone(), a.c0), pick(file.ss.clone(), a.ss), Some(DEFAULT_C0_LINEAR))?;
    let x_grid = match pick(file.x.clone(), a.x) {
        Some(s) => parse_list("x", &s)?,
        None => {
            let k = pick(file.grid_points, a.grid_points).unwrap_or(DEFAULT_GRID_POINTS);
            if k == 0 {
                return Err(CliError::Usage("--grid-points must be at least 1".into()));
            }
            let lo = data.z().iter().copied().fold(f64::INFINITY, f64::min);
            let hi = data.z().iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if k == 1 {
                vec![lo]
            } else {
                (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()
            }
        }
    };
    let points = experiments::estimate_curve(&data, &noise, &x_grid, &estimator)?;
    let baselines = if pick(file.baselines, Some(a.baselines)).unwrap_or(false) {
        Some(x_grid.iter().map(|&x| experiments::baseline_curves(x)).collect::<Result<Vec<_>, _>>()?)
    } else {
        None
    };
    let (c0, ss) = split_tuning(&estimator);
    let run = RunConfig {
        command: "estimate",
        mode: Mode::Linear,
        model: None,
        noise: spec.to_string(),
        smoothing: Some(smoothing),
        c0,
        ss,
        x: Some(x_grid),
        n: Some(data.len()),
        reps: None,
        seed: None,
        grid: None,
        data: Some(a.data.clone()),
        format,
    };
    Ok((report::curve(&points, baselines.as_deref(), &run, format)?, a.common))
}

fn reliability(a: ReliabilityArgs) -> Result<(String, CommonArgs), CliError> {
    let (file, format) = setup(&a.common)?;
    let model = resolve_model(model_choice(&file, a.model))?;
    let r = experiments::reliability_ratio(&model);
    let record = ReliabilityRecord {
        reliability: r,
        two_decimals: experiments::two_decimals(r),
    };
    let run = RunConfig {
        command: "reliability",
        mode: mode_of(model.kind),
        model: Some(model.kind),
        noise: model.noise.to_string(),
        smoothing: None,
        c0: None,
        ss: None,
        x: None,
        n: None,
        reps: None,
        seed: None,
        grid: None,
        data: None,
        format,
    };
    Ok((report::reliability(&record, &run, format)?, a.common))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Output(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (text, common) = match cli.command {
        Command::Simulate(a) => simulate(a)?,
        Command::Calibrate(a) => calibrate(a)?,
        Command::Estimate(a) => estimate(a)?,
        Command::Reliability(a) => reliability(a)?,
    };
    emit(&text, common.out.as_ref())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
