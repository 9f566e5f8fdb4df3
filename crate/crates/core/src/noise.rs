//! Characteristic functions of covariate measurement errors.
//!
//! Circular errors are described by their Fourier coefficients at integer
//! frequencies, linear errors by their Fourier transform on the real line.
//! Both are assumed known; nothing here is estimated from data.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{positive, Error, Result};
use crate::quadrature;

/// Decay class of a circular characteristic function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircularSmoothness {
    /// `|f★(l)| ≍ (1 + |l|)^(-ν)`.
    Ordinary { nu: f64 },
    /// `|f★(l)| ≍ (1 + |l|)^c exp(-b |l|^a)`.
    Super { b: f64, a: f64, c: f64 },
}

/// Decay class of a characteristic function on the line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinearSmoothness {
    /// `|f★(t)| ≍ (1 + |t|)^(-r)`.
    Ordinary { r: f64 },
    /// `|f★(t)| ≍ (1 + t²)^(-ρ₀/2) exp(-γ |t|^ρ)`.
    Super { gamma: f64, rho: f64, rho0: f64, rho1: f64 },
}

pub type CircularCf = Arc<dyn Fn(i64) -> Complex64 + Send + Sync>;
pub type LinearCf = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum CircularKind {
    None,
    WrappedLaplace { lambda: f64 },
    Custom { cf: CircularCf, table_len: Option<usize> },
}

/// Covariate error on the circle.
#[derive(Clone)]
pub struct CircularNoise {
    kind: CircularKind,
    smoothness: CircularSmoothness,
}

impl fmt::Debug for CircularNoise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            CircularKind::None => write!(f, "CircularNoise::None"),
            CircularKind::WrappedLaplace { lambda } => {
                write!(f, "CircularNoise::WrappedLaplace({lambda})")
            }
            CircularKind::Custom { .. } => write!(f, "CircularNoise::Custom({:?})", self.smoothness),
        }
    }
}

impl CircularNoise {
    /// Error-free covariates: `f★ ≡ 1`. Classified ordinary smooth with ν = 0.
    pub fn none() -> Self {
        Self {
            kind: CircularKind::None,
            smoothness: CircularSmoothness::Ordinary { nu: 0.0 },
        }
    }

    /// Centered wrapped Laplace with scale λ: `f★(l) = λ² / (l² + λ²)`.
    pub fn wrapped_laplace(lambda: f64) -> Result<Self> {
        let lambda = positive("lambda", lambda)?;
        Ok(Self {
            kind: CircularKind::WrappedLaplace { lambda },
            smoothness: CircularSmoothness::Ordinary { nu: 2.0 },
        })
    }

    /// Ordinary-smooth model given by a closure. Requires `ν > 1` so that the
    /// coefficients are summable.
    pub fn custom_ordinary(nu: f64, cf: impl Fn(i64) -> Complex64 + Send + Sync + 'static) -> Result<Self> {
        if !(nu > 1.0) {
            return Err(Error::NotSummable(format!("ordinary smooth degree {nu} <= 1")));
        }
        Ok(Self {
            kind: CircularKind::Custom { cf: Arc::new(cf), table_len: None },
            smoothness: CircularSmoothness::Ordinary { nu },
        })
    }

    /// Ordinary-smooth model given by a table of `f★(0), f★(1), …`; negative
    /// frequencies are filled in by conjugation and frequencies past the end
    /// of the table are zero.
    pub fn custom_table(nu: f64, table: Vec<Complex64>) -> Result<Self> {
        if !(nu > 1.0) {
            return Err(Error::NotSummable(format!("ordinary smooth degree {nu} <= 1")));
        }
        if table.is_empty() {
            return Err(Error::InvalidParameter {
                name: "table",
                reason: "empty characteristic function table".into(),
            });
        }
        let len = table.len();
        let table = Arc::new(table);
        let cf = move |l: i64| {
            let idx = l.unsigned_abs() as usize;
            match table.get(idx) {
                Some(v) if l < 0 => v.conj(),
                Some(v) => *v,
                None => Complex64::new(0.0, 0.0),
            }
        };
        Ok(Self {
            kind: CircularKind::Custom { cf: Arc::new(cf), table_len: Some(len) },
            smoothness: CircularSmoothness::Ordinary { nu },
        })
    }

    pub fn custom_super(b: f64, a: f64, c: f64, cf: impl Fn(i64) -> Complex64 + Send + Sync + 'static) -> Result<Self> {
        positive("b", b)?;
        positive("a", a)?;
        Ok(Self {
            kind: CircularKind::Custom { cf: Arc::new(cf), table_len: None },
            smoothness: CircularSmoothness::Super { b, a, c },
        })
    }

    pub fn smoothness(&self) -> CircularSmoothness {
        self.smoothness
    }

    pub fn is_none(&self) -> bool {
        matches!(self.kind, CircularKind::None)
    }

    /// Scale λ when the model is a wrapped Laplace.
    pub fn wrapped_laplace_scale(&self) -> Option<f64> {
        match self.kind {
            CircularKind::WrappedLaplace { lambda } => Some(lambda),
            _ => None,
        }
    }

    /// `f★(l)`.
    pub fn cf(&self, l: i64) -> Complex64 {
        match &self.kind {
            CircularKind::None => Complex64::new(1.0, 0.0),
            CircularKind::WrappedLaplace { lambda } => {
                let l2 = lambda * lambda;
                let l = l as f64;
                Complex64::new(l2 / (l * l + l2), 0.0)
            }
            CircularKind::Custom { cf, .. } => cf(l),
        }
    }

    /// `|f★(l)|`.
    pub fn cf_abs(&self, l: i64) -> f64 {
        match &self.kind {
            CircularKind::None | CircularKind::WrappedLaplace { .. } => self.cf(l).re.abs(),
            CircularKind::Custom { cf, .. } => cf(l).norm(),
        }
    }

    /// `Σ_{l∈ℤ} |f★(l)|`.
    ///
    /// The error-free model returns 1 by convention (its coefficients are not
    /// summable); the variance majorant then reduces to its second branch.
    pub fn ell1_norm(&self) -> Result<f64> {
        match &self.kind {
            CircularKind::None => Ok(1.0),
            CircularKind::WrappedLaplace { lambda } => {
                // Σ_l 1/(l²+λ²) = (π/λ) coth(πλ)
                let x = PI * lambda;
                Ok(x / x.tanh())
            }
            CircularKind::Custom { table_len: Some(len), .. } => {
                let mut s = self.cf_abs(0);
                for l in 1..*len as i64 {
                    s += self.cf_abs(l) + self.cf_abs(-l);
                }
                Ok(s)
            }
            CircularKind::Custom { table_len: None, .. } => self.ell1_partial_sums(),
        }
    }

    fn ell1_partial_sums(&self) -> Result<f64> {
        const TERM_TOL: f64 = 1e-12;
        const MAX_TERMS: i64 = 50_000_000;
        let mut sum = self.cf_abs(0);
        for l in 1..=MAX_TERMS {
            let pair = self.cf_abs(l) + self.cf_abs(-l);
            sum += pair;
            if pair >= TERM_TOL {
                continue;
            }
            // Close the series with the tail implied by the declared decay,
            // extrapolated from the current term.
            let lf = l as f64;
            let tail = match self.smoothness {
                CircularSmoothness::Ordinary { nu } => {
                    if nu <= 1.0 {
                        return Err(Error::NotSummable(format!("degree {nu} <= 1")));
                    }
                    // Σ_{k>l} c k^{-ν} ≈ ∫_{l+1/2}^∞ c x^{-ν} dx
                    pair * lf.powf(nu) * (lf + 0.5).powf(1.0 - nu) / (nu - 1.0)
                }
                CircularSmoothness::Super { b, a, .. } => {
                    let ratio = (-b * ((lf + 1.0).powf(a) - lf.powf(a))).exp();
                    if ratio >= 1.0 {
                        continue;
                    }
                    pair * ratio / (1.0 - ratio)
                }
            };
            return Ok(sum + tail);
        }
        Err(Error::NotSummable(format!("terms still above {TERM_TOL} after {MAX_TERMS}")))
    }
}

#[derive(Clone)]
enum LinearKind {
    None,
    Laplace { sigma: f64 },
    Gaussian { sigma: f64 },
    Custom { cf: LinearCf },
}

/// Covariate error on the real line.
#[derive(Clone)]
pub struct LinearNoise {
    kind: LinearKind,
    smoothness: LinearSmoothness,
}

impl fmt::Debug for LinearNoise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            LinearKind::None => write!(f, "LinearNoise::None"),
            LinearKind::Laplace { sigma } => write!(f, "LinearNoise::Laplace({sigma})"),
            LinearKind::Gaussian { sigma } => write!(f, "LinearNoise::Gaussian({sigma})"),
            LinearKind::Custom { .. } => write!(f, "LinearNoise::Custom({:?})", self.smoothness),
        }
    }
}

/// Closed-form family of a linear noise model, when it has one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinearFamily {
    None,
    Laplace(f64),
    Gaussian(f64),
    Custom,
}

impl LinearNoise {
    pub fn none() -> Self {
        Self {
            kind: LinearKind::None,
            smoothness: LinearSmoothness::Ordinary { r: 0.0 },
        }
    }

    /// Centered Laplace with scale σ: `f★(t) = 1 / (1 + σ²t²)`.
    pub fn laplace(sigma: f64) -> Result<Self> {
        let sigma = positive("sigma", sigma)?;
        Ok(Self {
            kind: LinearKind::Laplace { sigma },
            smoothness: LinearSmoothness::Ordinary { r: 2.0 },
        })
    }

    /// Centered Gaussian with standard deviation σ: `f★(t) = exp(-σ²t²/2)`.
    pub fn gaussian(sigma: f64) -> Result<Self> {
        let sigma = positive("sigma", sigma)?;
        Ok(Self {
            kind: LinearKind::Gaussian { sigma },
            smoothness: LinearSmoothness::Super {
                gamma: 0.5 * sigma * sigma,
                rho: 2.0,
                rho0: 0.0,
                rho1: 0.0,
            },
        })
    }

    pub fn custom_ordinary(r: f64, cf: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Result<Self> {
        if !(r > 1.0) {
            return Err(Error::NotSummable(format!("ordinary smooth degree {r} <= 1")));
        }
        Ok(Self {
            kind: LinearKind::Custom { cf: Arc::new(cf) },
            smoothness: LinearSmoothness::Ordinary { r },
        })
    }

    pub fn custom_super(
        gamma: f64,
        rho: f64,
        rho0: f64,
        rho1: f64,
        cf: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self> {
        positive("gamma", gamma)?;
        positive("rho", rho)?;
        Ok(Self {
            kind: LinearKind::Custom { cf: Arc::new(cf) },
            smoothness: LinearSmoothness::Super { gamma, rho, rho0, rho1 },
        })
    }

    pub fn smoothness(&self) -> LinearSmoothness {
        self.smoothness
    }

    pub fn family(&self) -> LinearFamily {
        match self.kind {
            LinearKind::None => LinearFamily::None,
            LinearKind::Laplace { sigma } => LinearFamily::Laplace(sigma),
            LinearKind::Gaussian { sigma } => LinearFamily::Gaussian(sigma),
            LinearKind::Custom { .. } => LinearFamily::Custom,
        }
    }

    /// Variance of the error, when known in closed form.
    pub fn variance(&self) -> Option<f64> {
        match self.kind {
            LinearKind::None => Some(0.0),
            LinearKind::Laplace { sigma } => Some(2.0 * sigma * sigma),
            LinearKind::Gaussian { sigma } => Some(sigma * sigma),
            LinearKind::Custom { .. } => None,
        }
    }

    /// `f★(t)`.
    pub fn cf(&self, t: f64) -> Complex64 {
        match &self.kind {
            LinearKind::None => Complex64::new(1.0, 0.0),
            LinearKind::Laplace { sigma } => Complex64::new(1.0 / (1.0 + sigma * sigma * t * t), 0.0),
            LinearKind::Gaussian { sigma } => Complex64::new((-0.5 * sigma * sigma * t * t).exp(), 0.0),
            LinearKind::Custom { cf } => cf(t),
        }
    }

    /// `∫ |f★(t)| dt`.
    pub fn l1_norm(&self) -> Result<f64> {
        match &self.kind {
            LinearKind::None => Err(Error::NotSummable("f★ ≡ 1 is not integrable".into())),
            LinearKind::Laplace { sigma } => Ok(PI / sigma),
            LinearKind::Gaussian { sigma } => Ok((2.0 * PI).sqrt() / sigma),
            LinearKind::Custom { cf } => {
                let pos = quadrature::integrate_half_line(|t| cf(t).norm(), 1e-8)?;
                let neg = quadrature::integrate_half_line(|t| cf(-t).norm(), 1e-8)?;
                Ok(pos + neg)
            }
        }
    }
}

/// A noise model parsed from `name:param` text, e.g. `laplace:0.075`,
/// `wrapped_laplace:2.54`, `gaussian:0.1` or `none`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    None,
    Laplace(f64),
    Gaussian(f64),
    WrappedLaplace(f64),
}

impl NoiseSpec {
    pub fn to_linear(self) -> Result<LinearNoise> {
        match self {
            NoiseSpec::None => Ok(LinearNoise::none()),
            NoiseSpec::Laplace(s) => LinearNoise::laplace(s),
            NoiseSpec::Gaussian(s) => LinearNoise::gaussian(s),
            NoiseSpec::WrappedLaplace(_) => Err(Error::InvalidParameter {
                name: "noise",
                reason: "wrapped_laplace is a circular error model".into(),
            }),
        }
    }

    pub fn to_circular(self) -> Result<CircularNoise> {
        match self {
            NoiseSpec::None => Ok(CircularNoise::none()),
            NoiseSpec::WrappedLaplace(l) => CircularNoise::wrapped_laplace(l),
            other => Err(Error::InvalidParameter {
                name: "noise",
                reason: format!("{other} is a linear error model"),
            }),
        }
    }
}

impl fmt::Display for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoiseSpec::None => write!(f, "none"),
            NoiseSpec::Laplace(s) => write!(f, "laplace:{s}"),
            NoiseSpec::Gaussian(s) => write!(f, "gaussian:{s}"),
            NoiseSpec::WrappedLaplace(l) => write!(f, "wrapped_laplace:{l}"),
        }
    }
}

impl Serialize for NoiseSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NoiseSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for NoiseSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("none") {
            return Ok(NoiseSpec::None);
        }
        let bad = |reason: String| Error::InvalidParameter { name: "noise", reason };
        let (name, param) = s
            .split_once(':')
            .ok_or_else(|| bad(format!("expected `name:value`, got `{s}`")))?;
        let value: f64 = param
            .trim()
            .parse()
            .map_err(|_| bad(format!("`{param}` is not a number")))?;
        let value = positive("noise parameter", value)?;
        match name.trim().to_ascii_lowercase().as_str() {
            "laplace" => Ok(NoiseSpec::Laplace(value)),
            "gaussian" | "normal" => Ok(NoiseSpec::Gaussian(value)),
            "wrapped_laplace" | "wrapped-laplace" => Ok(NoiseSpec::WrappedLaplace(value)),
            other => Err(bad(format!("unknown noise model `{other}`"))),
        }
    }
}
