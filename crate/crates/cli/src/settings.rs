//! Flag/file merging and the resolved run configuration written into every
//! output.

use std::path::{Path, PathBuf};

use circreg::experiments::{ModelKind, SimulationModel};
use circreg::report::Format;
use circreg::{EstimatorConfig, NoiseSpec, SuperSmoothParams, Tuning};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Keys accepted in a `--config` TOML file. Present keys win over flags.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub sigma_eps: Option<f64>,
    pub lambda_eps: Option<f64>,
    pub noise: Option<String>,
    pub n: Option<usize>,
    pub x: Option<String>,
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub c0: Option<String>,
    pub ss: Option<String>,
    pub grid: Option<String>,
    pub grid_points: Option<usize>,
    pub baselines: Option<bool>,
    pub format: Option<String>,
    pub threads: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// `file.or(flag)`
pub fn pick<T>(file: Option<T>, flag: Option<T>) -> Option<T> {
    file.or(flag)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Circular,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothing {
    Os,
    Ss,
}

/// Everything that determines an output file, minus the output location.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelKind>,
    pub noise: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smoothing: Option<Smoothing>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c0: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ss: Option<SuperSmoothParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<PathBuf>,
    pub format: Format,
}

pub fn mode_of(kind: ModelKind) -> Mode {
    match kind {
        ModelKind::Lc => Mode::Linear,
        ModelKind::Cc => Mode::Circular,
    }
}

pub fn parse_list(name: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("--{name}: `{}` is not a number", t.trim())))
        })
        .collect()
}

pub fn parse_c0(s: &str) -> Result<[f64; 2], CliError> {
    match parse_list("c0", s)?.as_slice() {
        [a] => Ok([*a, *a]),
        [a, b] => Ok([*a, *b]),
        _ => Err(CliError::Usage("--c0 takes one value or `sine,cosine`".into())),
    }
}

/// `gamma=..,rho=..` (line) or `b=..,a=..` (circle).
pub fn parse_ss(s: &str) -> Result<SuperSmoothParams, CliError> {
    let (mut rate, mut exponent) = (None, None);
    for part in s.split(',') {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--ss: expected key=value, got `{part}`")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("--ss: `{}` is not a number", v.trim())))?;
        match k.trim() {
            "gamma" | "b" | "rate" => rate = Some(v),
            "rho" | "a" | "exponent" => exponent = Some(v),
            other => return Err(CliError::Usage(format!("--ss: unknown key `{other}`"))),
        }
    }
    match (rate, exponent) {
        (Some(r), Some(e)) => Ok(SuperSmoothParams::new(r, e)?),
        _ => Err(CliError::Usage("--ss needs both a rate (gamma|b) and an exponent (rho|a)".into())),
    }
}

pub fn parse_format(s: Option<String>) -> Result<Format, CliError> {
    match s {
        None => Ok(Format::Csv),
        Some(s) => s.parse().map_err(|e: circreg::Error| CliError::Usage(e.to_string())),
    }
}

pub fn parse_noise(s: &str) -> Result<NoiseSpec, CliError> {
    s.parse().map_err(|e: circreg::Error| CliError::Usage(e.to_string()))
}

/// Exactly one of `c0` (OS) or `ss` (SS) must be given, unless a default
/// c₀ is supplied.
pub fn tuning(c0: Option<String>, ss: Option<String>, default_c0: Option<f64>) -> Result<(Smoothing, EstimatorConfig), CliError> {
    match (c0, ss) {
        (Some(_), Some(_)) => Err(CliError::Usage("--c0 and --ss are mutually exclusive".into())),
        (None, Some(ss)) => Ok((Smoothing::Ss, EstimatorConfig::super_smooth_with(parse_ss(&ss)?))),
        (Some(c), None) => {
            let [a, b] = parse_c0(&c)?;
            Ok((Smoothing::Os, EstimatorConfig::adaptive_pair(a, b)?))
        }
        (None, None) => match default_c0 {
            Some(c) => Ok((Smoothing::Os, EstimatorConfig::adaptive(c)?)),
            None => Err(CliError::Usage("--c0 is required in OS mode (or pass --ss for SS mode)".into())),
        },
    }
}

pub fn split_tuning(cfg: &EstimatorConfig) -> (Option<[f64; 2]>, Option<SuperSmoothParams>) {
    match cfg.tuning {
        Tuning::Adaptive { c0 } => (Some(c0), None),
        Tuning::SuperSmooth { params } => (None, params),
    }
}

pub struct ModelChoice {
    pub model: Option<String>,
    pub sigma_eps: Option<f64>,
    pub lambda_eps: Option<f64>,
    pub noise: Option<String>,
}

pub fn resolve_model(c: ModelChoice) -> Result<SimulationModel, CliError> {
    let kind: ModelKind = c
        .model
        .ok_or_else(|| CliError::Usage("--model is required (lc or cc)".into()))?
        .parse()
        .map_err(|e: circreg::Error| CliError::Usage(e.to_string()))?;
    let noise = match (kind, c.noise, c.sigma_eps, c.lambda_eps) {
        (_, Some(s), _, _) => parse_noise(&s)?,
        (ModelKind::Lc, None, Some(s), None) => NoiseSpec::Laplace(s),
        (ModelKind::Cc, None, None, Some(l)) => NoiseSpec::WrappedLaplace(l),
        (ModelKind::Lc, None, _, _) => return Err(CliError::Usage("model lc needs --sigma-eps (or --noise)".into())),
        (ModelKind::Cc, None, _, _) => return Err(CliError::Usage("model cc needs --lambda-eps (or --noise)".into())),
    };
    Ok(SimulationModel::new(kind, noise)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c0_forms() {
        assert_eq!(parse_c0("0.4").unwrap(), [0.4, 0.4]);
        assert_eq!(parse_c0("0.1, 0.2").unwrap(), [0.1, 0.2]);
        assert!(parse_c0("1,2,3").is_err());
    }

    #[test]
    fn ss_forms() {
        let p = parse_ss("gamma=0.005,rho=2").unwrap();
        assert_eq!((p.rate, p.exponent), (0.005, 2.0));
        assert!(parse_ss("gamma=0.005").is_err());
        assert!(parse_ss("foo=1,rho=2").is_err());
    }

    #[test]
    fn tuning_rules() {
        assert!(tuning(None, None, None).is_err());
        assert!(tuning(Some("0.1".into()), Some("b=1,a=1".into()), None).is_err());
        assert_eq!(tuning(None, None, Some(0.08)).unwrap().0, Smoothing::Os);
    }

    #[test]
    fn file_keys_win() {
        assert_eq!(pick(Some(1), Some(2)), Some(1));
        assert_eq!(pick(None, Some(2)), Some(2));
        let f: FileConfig = toml::from_str("n = 30\nc0 = \"0.4\"").unwrap();
        assert_eq!(f.n, Some(30));
        assert!(toml::from_str::<FileConfig>("bogus = 1").is_err());
    }
}
