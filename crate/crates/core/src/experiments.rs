//! Simulation models, Monte Carlo risk, tuning-constant calibration and the
//! real-data helpers.

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angle::{atan2_dir, circ_dist, wrap, Angle, PlanePoint};
use crate::circular::{self, CircularDataset, CircularDiagnostics, LevelTables};
use crate::config::{EstimatorConfig, Tuning};
use crate::error::{positive, Error, Result};
use crate::linear::{self, LinearDataset, LinearDiagnostics};
use crate::noise::{CircularNoise, LinearNoise, NoiseSpec};
use crate::par;
use crate::sampling::{SeededRng, VonMises};

pub use crate::special::bessel_i1_i0_ratio as bessel_ratio;

/// Calibration grid for the linear-predictor constant.
pub const GRID_C0_LINEAR: [f64; 17] = [
    0.001, 0.0025, 0.005, 0.0075, 0.01, 0.025, 0.05, 0.075, 0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 1.0, 2.0, 4.0,
];

/// Calibration grid for the circular-predictor constant.
pub const GRID_C0_CIRCULAR: [f64; 18] = [
    0.001, 0.0025, 0.005, 0.0075, 0.01, 0.02, 0.04, 0.05, 0.06, 0.08, 0.09, 0.1, 0.2, 0.4, 0.6, 1.0, 2.0, 4.0,
];

pub const PLATEAU_WINDOW: usize = 3;
pub const PLATEAU_TOLERANCE: f64 = 0.2;
pub const MAX_FAILURE_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Linear covariate on `[0, 1]`.
    Lc,
    /// Circular covariate.
    Cc,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Lc => "lc",
            ModelKind::Cc => "cc",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lc" => Ok(ModelKind::Lc),
            "cc" => Ok(ModelKind::Cc),
            other => Err(Error::InvalidParameter {
                name: "model",
                reason: format!("unknown model `{other}`, expected lc or cc"),
            }),
        }
    }
}

/// One of the two simulation designs.
///
/// LC: `Θ = atan2(20X − 11, (10X − 5)² + 2) + ζ`, `X ~ U[0,1]`, `Z = X + ε`.
/// CC: `Θ = 1/2 + cos(X + 3 sin X) + ζ`, `X ~ vM(0, 0.01)`, `Z = X + ε`,
/// everything mod 2π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationModel {
    pub kind: ModelKind,
    pub noise: NoiseSpec,
    /// Concentration of the von Mises regression error ζ.
    pub regression_kappa: f64,
    /// Concentration of the von Mises covariate law (CC only).
    pub covariate_kappa: Option<f64>,
}

impl SimulationModel {
    pub fn lc(noise: NoiseSpec) -> Result<Self> {
        noise.to_linear()?;
        Ok(Self {
            kind: ModelKind::Lc,
            noise,
            regression_kappa: 10.0,
            covariate_kappa: None,
        })
    }

    pub fn cc(noise: NoiseSpec) -> Result<Self> {
        noise.to_circular()?;
        Ok(Self {
            kind: ModelKind::Cc,
            noise,
            regression_kappa: 5.0,
            covariate_kappa: Some(0.01),
        })
    }

    pub fn new(kind: ModelKind, noise: NoiseSpec) -> Result<Self> {
        match kind {
            ModelKind::Lc => Self::lc(noise),
            ModelKind::Cc => Self::cc(noise),
        }
    }

    pub fn with_regression_kappa(mut self, kappa: f64) -> Result<Self> {
        self.regression_kappa = positive("regression_kappa", kappa)?;
        Ok(self)
    }

    /// The true regression function.
    pub fn regression(&self, x: f64) -> Result<Angle> {
        match self.kind {
            ModelKind::Lc => atan2_dir(PlanePoint::new(20.0 * x - 11.0, (10.0 * x - 5.0).powi(2) + 2.0)),
            ModelKind::Cc => wrap(0.5 + (x + 3.0 * x.sin()).cos()),
        }
    }

    pub fn default_x(&self) -> f64 {
        match self.kind {
            ModelKind::Lc => 0.2,
            ModelKind::Cc => 1.5,
        }
    }

    pub fn default_c0(&self) -> f64 {
        match self.kind {
            ModelKind::Lc => crate::config::DEFAULT_C0_LINEAR,
            ModelKind::Cc => crate::config::DEFAULT_C0_CIRCULAR,
        }
    }

    pub fn calibration_grid(&self) -> &'static [f64] {
        match self.kind {
            ModelKind::Lc => &GRID_C0_LINEAR,
            ModelKind::Cc => &GRID_C0_CIRCULAR,
        }
    }

    fn noise_draw(&self, rng: &mut SeededRng) -> Result<f64> {
        match self.noise {
            NoiseSpec::None => Ok(0.0),
            NoiseSpec::Laplace(s) => rng.laplace(s),
            NoiseSpec::Gaussian(s) => rng.gaussian(s),
            NoiseSpec::WrappedLaplace(l) => Ok(rng.wrapped_laplace(l)?.radians()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SimulatedData {
    Linear(LinearDataset),
    Circular(CircularDataset),
}

impl SimulatedData {
    pub fn len(&self) -> usize {
        match self {
            SimulatedData::Linear(d) => d.len(),
            SimulatedData::Circular(d) => d.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Draws `n` observations. Per observation the order is X, ζ, ε.
pub fn simulate_dataset(model: &SimulationModel, n: usize, rng: &mut SeededRng) -> Result<SimulatedData> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "sample size must be at least 1".into(),
        });
    }
    let zeta = VonMises::new(Angle::ZERO, model.regression_kappa)?;
    let mut theta = Vec::with_capacity(n);
    match model.kind {
        ModelKind::Lc => {
            let mut z = Vec::with_capacity(n);
            for _ in 0..n {
                let x = rng.uniform01();
                let m = model.regression(x)?;
                theta.push(m.rotate(zeta.sample(rng).radians())?);
                z.push(x + model.noise_draw(rng)?);
            }
            Ok(SimulatedData::Linear(LinearDataset::new(theta, z)?))
        }
        ModelKind::Cc => {
            let kappa_x = model.covariate_kappa.unwrap_or(0.01);
            let covariate = VonMises::new(Angle::ZERO, kappa_x)?;
            let mut z = Vec::with_capacity(n);
            for _ in 0..n {
                let x = covariate.sample(rng);
                let m = model.regression(x.radians())?;
                theta.push(m.rotate(zeta.sample(rng).radians())?);
                z.push(x.rotate(model.noise_draw(rng)?)?);
            }
            Ok(SimulatedData::Circular(CircularDataset::new(theta, z)?))
        }
    }
}

/// `m̂(x)` and the smoothing parameters behind it: levels `L̂` for the
/// circular predictor, bandwidths `ĥ` for the linear one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointEstimate {
    pub m_hat: Angle,
    pub selected: [f64; 2],
}

fn circular_point(est: circular::CircularEstimate) -> PointEstimate {
    let l = est.diagnostics.selected_levels();
    PointEstimate {
        m_hat: est.m_hat,
        selected: [l[0] as f64, l[1] as f64],
    }
}

fn linear_point(est: linear::LinearEstimate) -> PointEstimate {
    PointEstimate {
        m_hat: est.m_hat,
        selected: est.diagnostics.selected_bandwidths(),
    }
}

pub fn estimate_point(model: &SimulationModel, data: &SimulatedData, x: f64, config: &EstimatorConfig) -> Result<PointEstimate> {
    match data {
        SimulatedData::Linear(d) => {
            let noise = model.noise.to_linear()?;
            linear::estimate_m_linear_quiet(d, &noise, x, config).map(linear_point)
        }
        SimulatedData::Circular(d) => {
            let noise = model.noise.to_circular()?;
            circular::estimate_m_circular(d, &noise, Angle::new(x)?, config).map(circular_point)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    pub n: usize,
    pub x: f64,
    pub reps: usize,
    pub seed: u64,
    pub estimator: EstimatorConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    /// Also the RNG stream id.
    pub replication: u64,
    pub error: Option<f64>,
    pub m_hat: Option<f64>,
    pub selected: Option<[f64; 2]>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    pub model: SimulationModel,
    pub config: MonteCarloConfig,
    pub truth: f64,
    pub reliability: f64,
    /// Mean of `d_c(m̂(x), m(x))` over successful replications.
    pub mean_error: f64,
    /// Monte Carlo standard error of `mean_error`; absent with one success.
    pub std_error: Option<f64>,
    pub failures: usize,
    pub replications: Vec<ReplicationRecord>,
}

fn mean_and_se(values: &[f64]) -> (f64, Option<f64>) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, None);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, Some((var / n).sqrt()))
}

fn check_failures(failed: usize, reps: usize) -> Result<()> {
    if failed as f64 > MAX_FAILURE_FRACTION * reps as f64 {
        Err(Error::TooManyFailures { failed, reps })
    } else {
        Ok(())
    }
}

fn check_reps(reps: usize, n: usize) -> Result<()> {
    if reps == 0 {
        return Err(Error::InvalidParameter {
            name: "reps",
            reason: "need at least one replication".into(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "sample size must be at least 1".into(),
        });
    }
    Ok(())
}

/// Replication `r` (1-based) draws its data from RNG stream `r`.
pub fn run_monte_carlo(model: &SimulationModel, config: &MonteCarloConfig) -> Result<RiskReport> {
    check_reps(config.reps, config.n)?;
    let truth = model.regression(config.x)?;
    let outcomes = par::map_indexed(config.reps, |i| {
        let mut rng = SeededRng::new(config.seed, i as u64 + 1);
        let data = simulate_dataset(model, config.n, &mut rng)?;
        estimate_point(model, &data, config.x, &config.estimator)
    });
    let mut replications = Vec::with_capacity(config.reps);
    let mut errors = Vec::with_capacity(config.reps);
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let replication = i as u64 + 1;
        match outcome {
            Ok(p) => {
                let e = circ_dist(p.m_hat, truth);
                errors.push(e);
                replications.push(ReplicationRecord {
                    replication,
                    error: Some(e),
                    m_hat: Some(p.m_hat.radians()),
                    selected: Some(p.selected),
                    failure: None,
                });
            }
            Err(Error::UndefinedDirection) => replications.push(ReplicationRecord {
                replication,
                error: None,
                m_hat: None,
                selected: None,
                failure: Some(Error::UndefinedDirection.to_string()),
            }),
            Err(e) => return Err(e),
        }
    }
    let failures = config.reps - errors.len();
    check_failures(failures, config.reps)?;
    let (mean_error, std_error) = mean_and_se(&errors);
    Ok(RiskReport {
        model: *model,
        config: *config,
        truth: truth.radians(),
        reliability: reliability_ratio(model),
        mean_error,
        std_error,
        failures,
        replications,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plateau {
    /// First grid index, inclusive.
    pub start: usize,
    /// Last grid index, inclusive.
    pub end: usize,
}

impl Plateau {
    pub fn contains(&self, index: usize) -> bool {
        (self.start..=self.end).contains(&index)
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Flat stretches of a risk curve.
///
/// A window of `window` consecutive points is flat when
/// `(max − min) ≤ tolerance · mean`. Overlapping flat windows merge into
/// segments; the longest segment (earliest on ties) is the plateau.
pub fn detect_plateau(risks: &[f64], window: usize, tolerance: f64) -> Option<Plateau> {
    if window == 0 || risks.len() < window {
        return None;
    }
    let mut segments: Vec<Plateau> = Vec::new();
    for end in window - 1..risks.len() {
        let w = &risks[end + 1 - window..=end];
        let max = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = w.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = w.iter().sum::<f64>() / window as f64;
        if max - min > tolerance * mean {
            continue;
        }
        let start = end + 1 - window;
        match segments.last_mut() {
            Some(seg) if seg.end >= start => seg.end = end,
            _ => segments.push(Plateau { start, end }),
        }
    }
    let mut best: Option<Plateau> = None;
    for seg in segments {
        if best.is_none_or(|b| seg.len() > b.len()) {
            best = Some(seg);
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationCurve {
    pub model: SimulationModel,
    pub n: usize,
    pub x: f64,
    pub reps: usize,
    pub seed: u64,
    pub grid: Vec<f64>,
    pub risks: Vec<f64>,
    pub std_errors: Vec<Option<f64>>,
    pub failures: Vec<usize>,
    pub window: usize,
    pub tolerance: f64,
    pub plateau: Option<Plateau>,
    pub plateau_start: Option<usize>,
}

impl CalibrationCurve {
    /// Whether `c0` is a grid value inside the detected plateau.
    pub fn plateau_contains(&self, c0: f64) -> bool {
        match (self.plateau, self.grid.iter().position(|&g| g == c0)) {
            (Some(p), Some(i)) => p.contains(i),
            _ => false,
        }
    }
}

enum Prepared {
    Linear { noise: LinearNoise, grid: linear::BandwidthGrid },
    Circular { noise: CircularNoise, tables: LevelTables, grid: circular::LevelGrid },
}

fn prepare(model: &SimulationModel, n: usize) -> Result<Prepared> {
    Ok(match model.kind {
        ModelKind::Lc => {
            let noise = model.noise.to_linear()?;
            let grid = linear::bandwidth_grid(n, &noise)?;
            Prepared::Linear { noise, grid }
        }
        ModelKind::Cc => {
            let noise = model.noise.to_circular()?;
            let tables = LevelTables::new(&noise, n)?;
            let grid = tables.grid()?;
            Prepared::Circular { noise, tables, grid }
        }
    })
}

// Estimates on the whole smoothing grid are independent of c₀, so each
// replication computes them once and reruns only the selection step.
fn risk_profile(prep: &Prepared, data: &SimulatedData, x: f64, truth: Angle, c0_grid: &[f64]) -> Result<Vec<Result<f64>>> {
    match (prep, data) {
        (Prepared::Linear { noise, grid }, SimulatedData::Linear(d)) => {
            let w = d.weights();
            let est = linear::estimates_on_grid(d.z(), &w, grid, noise, x)?;
            Ok(c0_grid
                .iter()
                .map(|&c0| {
                    let sine = linear::select_bandwidth(grid, d.len(), &est[0], c0);
                    let cosine = linear::select_bandwidth(grid, d.len(), &est[1], c0);
                    let (ps, pc) = (sine.selected_estimate(), cosine.selected_estimate());
                    let e = linear::finish_estimate(&w, noise, ps, pc, LinearDiagnostics::Adaptive { sine, cosine })?;
                    Ok(circ_dist(e.m_hat, truth))
                })
                .collect())
        }
        (Prepared::Circular { noise, tables, grid }, SimulatedData::Circular(d)) => {
            let w = d.weights();
            let paths = circular::projection_paths(d.z(), &w, noise, Angle::new(x)?, grid.max())?;
            Ok(c0_grid
                .iter()
                .map(|&c0| {
                    let sine = circular::select_level(grid, tables, &paths[0], c0);
                    let cosine = circular::select_level(grid, tables, &paths[1], c0);
                    let (ps, pc) = (sine.selected_estimate(), cosine.selected_estimate());
                    let e = circular::finish_estimate(&w, noise, ps, pc, CircularDiagnostics::Adaptive { sine, cosine })?;
                    Ok(circ_dist(e.m_hat, truth))
                })
                .collect())
        }
        _ => unreachable!("data kind follows the model kind"),
    }
}

/// Risk `ℛ(c₀)` over `grid` with common random numbers: replication `r`
/// uses stream `r` for every `c₀`, exactly as [`run_monte_carlo`] does.
pub fn calibrate_c0(model: &SimulationModel, n: usize, x: f64, grid: &[f64], reps: usize, seed: u64) -> Result<CalibrationCurve> {
    check_reps(reps, n)?;
    if grid.is_empty() {
        return Err(Error::EmptyGrid("calibration"));
    }
    for &c in grid {
        positive("c0", c)?;
    }
    let truth = model.regression(x)?;
    let prep = prepare(model, n)?;
    let profiles = par::map_indexed(reps, |i| {
        let mut rng = SeededRng::new(seed, i as u64 + 1);
        let data = simulate_dataset(model, n, &mut rng)?;
        risk_profile(&prep, &data, x, truth, grid)
    });
    let mut per_c0: Vec<Vec<f64>> = vec![Vec::with_capacity(reps); grid.len()];
    for profile in profiles {
        for (j, r) in profile?.into_iter().enumerate() {
            match r {
                Ok(e) => per_c0[j].push(e),
                Err(Error::UndefinedDirection) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let mut risks = Vec::with_capacity(grid.len());
    let mut std_errors = Vec::with_capacity(grid.len());
    let mut failures = Vec::with_capacity(grid.len());
    for errors in &per_c0 {
        let failed = reps - errors.len();
        check_failures(failed, reps)?;
        let (m, se) = mean_and_se(errors);
        risks.push(m);
        std_errors.push(se);
        failures.push(failed);
    }
    let plateau = detect_plateau(&risks, PLATEAU_WINDOW, PLATEAU_TOLERANCE);
    Ok(CalibrationCurve {
        model: *model,
        n,
        x,
        reps,
        seed,
        grid: grid.to_vec(),
        risks,
        std_errors,
        failures,
        window: PLATEAU_WINDOW,
        tolerance: PLATEAU_TOLERANCE,
        plateau,
        plateau_start: plateau.map(|p| p.start),
    })
}

/// `Var(X) / (Var(X) + Var(ε))`. Circular variances (one minus the mean
/// resultant length) are used for the CC model.
pub fn reliability_ratio(model: &SimulationModel) -> f64 {
    let (var_x, var_e) = match model.kind {
        ModelKind::Lc => {
            let var_e = match model.noise {
                NoiseSpec::Laplace(s) => 2.0 * s * s,
                NoiseSpec::Gaussian(s) => s * s,
                _ => 0.0,
            };
            (1.0 / 12.0, var_e)
        }
        ModelKind::Cc => {
            let var_x = 1.0 - bessel_ratio(model.covariate_kappa.unwrap_or(0.01));
            let var_e = match model.noise {
                NoiseSpec::WrappedLaplace(l) => 1.0 / (1.0 + l * l),
                _ => 0.0,
            };
            (var_x, var_e)
        }
    };
    var_x / (var_x + var_e)
}

/// Truncates to two decimals, the way reliability ratios are tabulated.
pub fn two_decimals(v: f64) -> f64 {
    ((v * 100.0) + 1e-9).floor() / 100.0
}

/// Three fixed parametric fits of direction on distance, for comparison curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Baselines {
    pub fisher_lee: Angle,
    pub spml: Angle,
    pub trig: Angle,
}

pub fn baseline_curves(x: f64) -> Result<Baselines> {
    Ok(Baselines {
        fisher_lee: wrap(1.693 + 2.0 * (-0.0066 * (x - 47.65)).atan())?,
        spml: atan2_dir(PlanePoint::new(0.157 + 0.049 * x, -1.228 + 0.03 * x))?,
        trig: atan2_dir(PlanePoint::new(1.0 + 0.021 * x, -1.49 + 0.029 * x))?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub m_hat: Option<f64>,
    pub selected: Option<[f64; 2]>,
    pub failure: Option<String>,
}

/// `m̂` at every grid point. Points where the direction is undefined are
/// kept as missing values.
pub fn estimate_curve(data: &LinearDataset, noise: &LinearNoise, x_grid: &[f64], config: &EstimatorConfig) -> Result<Vec<CurvePoint>> {
    if x_grid.is_empty() {
        return Err(Error::EmptyGrid("evaluation"));
    }
    if let Tuning::Adaptive { c0 } = config.tuning {
        for c in c0 {
            positive("c0", c)?;
        }
    }
    if let Some(x) = x_grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        log::warn!("evaluation grid leaves the covariate support [0, 1] (e.g. x = {x})");
    }
    par::map_indexed(x_grid.len(), |i| {
        let x = x_grid[i];
        match linear::estimate_m_linear_quiet(data, noise, x, config) {
            Ok(e) => Ok(CurvePoint {
                x,
                m_hat: Some(e.m_hat.radians()),
                selected: Some(e.diagnostics.selected_bandwidths()),
                failure: None,
            }),
            Err(Error::UndefinedDirection) => Ok(CurvePoint {
                x,
                m_hat: None,
                selected: None,
                failure: Some(Error::UndefinedDirection.to_string()),
            }),
            Err(e) => Err(e),
        }
    })
    .into_iter()
    .collect()
}

const CSV_HEADER: [&str; 2] = ["distance", "direction_radians"];

/// Reads `distance,direction_radians` rows; directions are wrapped.
pub fn read_direction_csv<R: Read>(reader: R) -> Result<LinearDataset> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(|e| csv_error(&e, 1))?.clone();
    if header.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(Error::Csv {
            line: 1,
            reason: format!("expected header `{}`, found `{}`", CSV_HEADER.join(","), header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    let mut theta = Vec::new();
    let mut z = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(&e, 0))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize, name: &str| -> Result<f64> {
            let raw = record.get(i).unwrap_or("");
            let v: f64 = raw.parse().map_err(|_| Error::Csv {
                line,
                reason: format!("{name} `{raw}` is not a number"),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Csv {
                    line,
                    reason: format!("{name} is not finite"),
                })
            }
        };
        z.push(field(0, "distance")?);
        theta.push(Angle::new(field(1, "direction_radians")?)?);
    }
    if theta.is_empty() {
        return Err(Error::InvalidData("csv has no data rows".into()));
    }
    LinearDataset::new(theta, z)
}

fn csv_error(e: &csv::Error, fallback_line: u64) -> Error {
    if let csv::ErrorKind::Io(io) = e.kind() {
        return Error::Io(io.to_string());
    }
    Error::Csv {
        line: e.position().map_or(fallback_line, |p| p.line()),
        reason: e.to_string(),
    }
}

pub fn load_direction_csv(path: &Path) -> Result<LinearDataset> {
    let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_direction_csv(std::io::BufReader::new(file))
}
