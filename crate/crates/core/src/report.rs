//! CSV and JSON serialisation of experiment results.
//!
//! Every document carries the tool name, version and the caller's resolved
//! configuration. CSV output puts them in leading `#` comment lines.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{Baselines, CalibrationCurve, CurvePoint, RiskReport};

pub const TOOL: &str = "circreg";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParameter {
                name: "format",
                reason: format!("unknown format `{other}`, expected csv or json"),
            }),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: &'a C,
    result: &'a T,
}

fn json<C: Serialize, T: Serialize>(config: &C, result: &T) -> Result<String> {
    let env = Envelope {
        tool: TOOL,
        version: VERSION,
        config,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn preamble<C: Serialize>(config: &C, extra: &[(&str, String)]) -> Result<String> {
    let cfg = serde_json::to_string(config).map_err(|e| Error::Io(e.to_string()))?;
    let mut s = format!("# {TOOL} {VERSION}\n# config: {cfg}\n");
    for (k, v) in extra {
        s.push_str(&format!("# {k}: {v}\n"));
    }
    Ok(s)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub fn risk_report<C: Serialize>(report: &RiskReport, config: &C, format: Format) -> Result<String> {
    match format {
        Format::Json => json(config, report),
        Format::Csv => {
            let head = preamble(
                config,
                &[
                    ("mean_error", report.mean_error.to_string()),
                    ("std_error", opt(report.std_error)),
                    ("failures", report.failures.to_string()),
                    ("reliability", report.reliability.to_string()),
                    ("truth", report.truth.to_string()),
                ],
            )?;
            let rows = report.replications.iter().map(|r| {
                vec![
                    r.replication.to_string(),
                    opt(r.error),
                    opt(r.m_hat),
                    opt(r.selected.map(|s| s[0])),
                    opt(r.selected.map(|s| s[1])),
                    r.failure.clone().unwrap_or_default(),
                ]
            });
            Ok(head + &table(&["replication", "error", "m_hat", "selected_sine", "selected_cosine", "failure"], rows)?)
        }
    }
}

pub fn calibration<C: Serialize>(curve: &CalibrationCurve, config: &C, format: Format) -> Result<String> {
    match format {
        Format::Json => json(config, curve),
        Format::Csv => {
            let plateau = curve
                .plateau
                .map(|p| format!("{}..{}", curve.grid[p.start], curve.grid[p.end]))
                .unwrap_or_else(|| "none".into());
            let head = preamble(config, &[("plateau", plateau)])?;
            let rows = (0..curve.grid.len()).map(|i| {
                vec![
                    curve.grid[i].to_string(),
                    curve.risks[i].to_string(),
                    opt(curve.std_errors[i]),
                    curve.failures[i].to_string(),
                    curve.plateau.is_some_and(|p| p.contains(i)).to_string(),
                ]
            });
            Ok(head + &table(&["c0", "risk", "std_error", "failures", "in_plateau"], rows)?)
        }
    }
}

#[derive(Serialize)]
struct CurveRow<'a> {
    #[serde(flatten)]
    point: &'a CurvePoint,
    #[serde(skip_serializing_if = "Option::is_none")]
    baselines: Option<Baselines>,
}

/// Curve records, optionally with the parametric baselines at each `x`.
pub fn curve<C: Serialize>(points: &[CurvePoint], baselines: Option<&[Baselines]>, config: &C, format: Format) -> Result<String> {
    if let Some(b) = baselines {
        if b.len() != points.len() {
            return Err(Error::InvalidData("one baseline record per curve point required".into()));
        }
    }
    let base = |i: usize| baselines.map(|b| b[i]);
    match format {
        Format::Json => {
            let rows: Vec<CurveRow> = points
                .iter()
                .enumerate()
                .map(|(i, point)| CurveRow { point, baselines: base(i) })
                .collect();
            json(config, &rows)
        }
        Format::Csv => {
            let head = preamble(config, &[])?;
            let mut header = vec!["x", "m_hat", "selected_sine", "selected_cosine"];
            if baselines.is_some() {
                header.extend(["fisher_lee", "spml", "trig"]);
            }
            let rows = points.iter().enumerate().map(|(i, p)| {
                let mut row = vec![
                    p.x.to_string(),
                    opt(p.m_hat),
                    opt(p.selected.map(|s| s[0])),
                    opt(p.selected.map(|s| s[1])),
                ];
                if let Some(b) = base(i) {
                    row.extend([b.fisher_lee, b.spml, b.trig].map(|a| a.radians().to_string()));
                }
                row
            });
            Ok(head + &table(&header, rows)?)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReliabilityRecord {
    pub reliability: f64,
    pub two_decimals: f64,
}

pub fn reliability<C: Serialize>(record: &ReliabilityRecord, config: &C, format: Format) -> Result<String> {
    match format {
        Format::Json => json(config, record),
        Format::Csv => {
            let head = preamble(config, &[])?;
            let row = vec![record.reliability.to_string(), format!("{:.2}", record.two_decimals)];
            Ok(head + &table(&["reliability", "two_decimals"], [row])?)
        }
    }
}
