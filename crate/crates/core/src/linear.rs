//! Regression on a real covariate observed with additive error.
//!
//! `p_j(x)` is estimated with a sinc deconvolution kernel: each observation
//! contributes `w_h(Z_k - x)`, the inverse Fourier transform of
//! `K★(th) / f★_ε(t)`. Bandwidths come from a Goldenshluger–Lepski
//! comparison (ordinary smooth errors) or a closed form (supersmooth errors).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::angle::{atan2_dir, Angle, PlanePoint};
use crate::circular::TrigWeights;
use crate::config::{Component, EstimatorConfig, SuperSmoothParams, Tuning};
use crate::error::{positive, Error, Result};
use crate::noise::{LinearFamily, LinearNoise, LinearSmoothness};
use crate::quadrature;
use crate::util::pairwise_sum;

const QUAD_REL_TOL: f64 = 1e-12;
const TAYLOR_LIMIT: f64 = 0.5;
const IMAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearDataset {
    theta: Vec<Angle>,
    z: Vec<f64>,
}

impl LinearDataset {
    pub fn new(theta: Vec<Angle>, z: Vec<f64>) -> Result<Self> {
        if theta.len() != z.len() {
            return Err(Error::InvalidData(format!(
                "{} responses but {} covariates",
                theta.len(),
                z.len()
            )));
        }
        if theta.is_empty() {
            return Err(Error::InvalidData("empty dataset".into()));
        }
        if let Some(bad) = z.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(*bad));
        }
        Ok(Self { theta, z })
    }

    pub fn from_radians(theta: &[f64], z: &[f64]) -> Result<Self> {
        let theta = theta.iter().map(|&t| Angle::new(t)).collect::<Result<_>>()?;
        Self::new(theta, z.to_vec())
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn theta(&self) -> &[Angle] {
        &self.theta
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn weights(&self) -> TrigWeights {
        TrigWeights::from_responses(&self.theta)
    }
}

/// Deconvolution kernel, described by its Fourier transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeconvKernel {
    /// `K(y) = sin(y)/(πy)`, `K★ = 1` on `[-1, 1]`.
    #[default]
    Sinc,
}

impl DeconvKernel {
    pub fn fourier(self, t: f64) -> f64 {
        match self {
            DeconvKernel::Sinc => {
                if t.abs() <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// `M(K) = ‖K‖₁ ‖K★‖_∞` as used in the variance bounds.
    pub fn m_constant(self) -> f64 {
        match self {
            DeconvKernel::Sinc => 1.0,
        }
    }
}

// (1/π) ∫_0^T (1 + s t²) cos(tu) dt, with s = σ² (zero for no noise).
fn polynomial_weight(u: f64, t_max: f64, s: f64) -> f64 {
    let x = u * t_max;
    if x.abs() < TAYLOR_LIMIT {
        // Σ_k (-1)^k u^{2k}/(2k)! [T^{2k+1}/(2k+1) + s T^{2k+3}/(2k+3)]
        let u2 = u * u;
        let mut coef = 1.0;
        let mut t_pow = t_max;
        let mut sum = 0.0;
        for k in 0..30 {
            let k2 = 2.0 * k as f64;
            let term = coef * (t_pow / (k2 + 1.0) + s * t_pow * t_max * t_max / (k2 + 3.0));
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
            coef *= -u2 / ((k2 + 1.0) * (k2 + 2.0));
            t_pow *= t_max * t_max;
        }
        sum / PI
    } else {
        let (sn, cs) = x.sin_cos();
        let base = sn / u;
        let quad = t_max * t_max * sn / u + 2.0 * t_max * cs / (u * u) - 2.0 * sn / (u * u * u);
        (base + s * quad) / PI
    }
}

fn generic_weight(u: f64, t_max: f64, noise: &LinearNoise) -> Result<f64> {
    let mut bad = None;
    let mut inv = |t: f64| {
        let f = noise.cf(t);
        if f.norm() == 0.0 || !f.norm().is_finite() {
            bad.get_or_insert(t);
            num_complex::Complex64::new(0.0, 0.0)
        } else {
            f.inv()
        }
    };
    // Absolute floor on the scale of ∫|1/f★|, and about two periods of e^{itu} per panel.
    let scale = 2.0 * t_max * [0.0, 0.5, 1.0].iter().map(|&s| inv(s * t_max).norm()).fold(0.0, f64::max);
    let abs_tol = QUAD_REL_TOL * scale;
    let panels = ((t_max * u.abs() / PI).ceil() as usize).clamp(1, 1 << 16);
    // ∫_{-T}^{T} e^{itu}/f★(t) dt, split into real and imaginary parts.
    let re = quadrature::integrate_split(
        |t| {
            let g = inv(t);
            let (s, c) = (t * u).sin_cos();
            c * g.re - s * g.im
        },
        -t_max,
        t_max,
        panels,
        QUAD_REL_TOL,
        abs_tol,
    )?;
    let im = quadrature::integrate_split(
        |t| {
            let g = inv(t);
            let (s, c) = (t * u).sin_cos();
            s * g.re + c * g.im
        },
        -t_max,
        t_max,
        panels,
        QUAD_REL_TOL,
        abs_tol,
    )?;
    if let Some(t) = bad {
        return Err(Error::IllPosedWeight(t));
    }
    let (re, im) = (re / (2.0 * PI), im / (2.0 * PI));
    if im.abs() > IMAG_TOL * (1.0 + re.abs()) {
        return Err(Error::InvalidParameter {
            name: "noise",
            reason: format!("deconvolution weight has imaginary part {im:e}; f★ is not Hermitian"),
        });
    }
    Ok(re)
}

/// `(1/2π) ∫_{-1/h}^{1/h} e^{itu} / f★_ε(t) dt`.
pub fn deconv_weight(u: f64, h: f64, noise: &LinearNoise) -> Result<f64> {
    let h = positive("h", h)?;
    if !u.is_finite() {
        return Err(Error::NonFinite(u));
    }
    let t_max = 1.0 / h;
    match noise.family() {
        LinearFamily::None => Ok(polynomial_weight(u, t_max, 0.0)),
        LinearFamily::Laplace(sigma) => Ok(polynomial_weight(u, t_max, sigma * sigma)),
        LinearFamily::Gaussian(_) | LinearFamily::Custom => generic_weight(u, t_max, noise),
    }
}

/// `p̂_{j,h}(x) = (1/n) Σ_k w_k(j) · deconv_weight(Z_k - x, h)`.
pub fn projection_estimate_linear(
    data: &LinearDataset,
    weights: &TrigWeights,
    component: Component,
    h: f64,
    noise: &LinearNoise,
    x: f64,
) -> Result<f64> {
    Ok(projection_pair(data.z(), weights, h, noise, x)?[component.index()])
}

fn projection_pair(z: &[f64], weights: &TrigWeights, h: f64, noise: &LinearNoise, x: f64) -> Result<[f64; 2]> {
    if weights.len() != z.len() {
        return Err(Error::InvalidData("weights and covariates differ in length".into()));
    }
    let kernel: Vec<f64> = z.iter().map(|zk| deconv_weight(zk - x, h, noise)).collect::<Result<_>>()?;
    let n = z.len() as f64;
    let mut out = [0.0; 2];
    let mut buf = vec![0.0; z.len()];
    for c in Component::BOTH {
        for (b, (w, k)) in buf.iter_mut().zip(weights.component(c).iter().zip(&kernel)) {
            *b = w * k;
        }
        out[c.index()] = pairwise_sum(&buf) / n;
    }
    Ok(out)
}

/// `(K_{h'} ∗ p̂_{j,h})(x)`. With sinc kernels the product of indicators
/// collapses this to the estimate at `max(h, h')`.
pub fn double_smooth_estimate(
    data: &LinearDataset,
    weights: &TrigWeights,
    component: Component,
    h: f64,
    h_prime: f64,
    noise: &LinearNoise,
    x: f64,
) -> Result<f64> {
    projection_estimate_linear(data, weights, component, h.max(h_prime), noise, x)
}

/// `‖K★_h/f★_ε‖₁` and `‖K★_h/f★_ε‖₂²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelNorms {
    pub l1: f64,
    pub l2_sq: f64,
}

impl KernelNorms {
    pub fn ratio(&self) -> f64 {
        self.l2_sq / (self.l1 * self.l1)
    }
}

pub fn kernel_norms(h: f64, noise: &LinearNoise) -> Result<KernelNorms> {
    let h = positive("h", h)?;
    let t = 1.0 / h;
    match noise.family() {
        LinearFamily::None => Ok(KernelNorms { l1: 2.0 * t, l2_sq: 2.0 * t }),
        LinearFamily::Laplace(sigma) => {
            let s2 = sigma * sigma;
            Ok(KernelNorms {
                l1: 2.0 * t + 2.0 / 3.0 * s2 * t.powi(3),
                l2_sq: 2.0 * t + 4.0 / 3.0 * s2 * t.powi(3) + 0.4 * s2 * s2 * t.powi(5),
            })
        }
        LinearFamily::Gaussian(_) | LinearFamily::Custom => {
            let mut bad = None;
            let mut inv_abs = |s: f64| {
                let m = noise.cf(s).norm();
                if m == 0.0 {
                    bad.get_or_insert(s);
                    0.0
                } else {
                    1.0 / m
                }
            };
            let l1 = quadrature::integrate(&mut inv_abs, -t, t, QUAD_REL_TOL, 1e-300)?;
            let l2_sq = quadrature::integrate(|s| inv_abs(s).powi(2), -t, t, QUAD_REL_TOL, 1e-300)?;
            match bad {
                Some(s) => Err(Error::IllPosedWeight(s)),
                None => Ok(KernelNorms { l1, l2_sq }),
            }
        }
    }
}

fn v0_from_norms(n: usize, norms: KernelNorms, cf_l1: Option<f64>) -> f64 {
    let first = norms.l1 * norms.l1;
    let bound = match cf_l1 {
        Some(l1) => (norms.l2_sq * l1).min(first),
        None => first,
    };
    bound / ((2.0 * PI).powi(2) * n as f64)
}

fn cf_l1_or_none(noise: &LinearNoise) -> Result<Option<f64>> {
    match noise.family() {
        LinearFamily::None => Ok(None),
        _ => noise.l1_norm().map(Some),
    }
}

/// `Ṽ₀(n, h)`. Without covariate error `‖f★‖₁` is infinite, so only the
/// `‖K★_h/f★‖₁²` branch applies.
pub fn v0_linear(n: usize, h: f64, noise: &LinearNoise) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidData("sample size must be positive".into()));
    }
    Ok(v0_from_norms(n, kernel_norms(h, noise)?, cf_l1_or_none(noise)?))
}

/// Admissible bandwidths `1/k`, in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthGrid {
    inverse: Vec<usize>,
    norms: Vec<KernelNorms>,
    v0: Vec<f64>,
}

impl BandwidthGrid {
    pub fn bandwidths(&self) -> Vec<f64> {
        self.inverse.iter().map(|&k| 1.0 / k as f64).collect()
    }

    /// The `k` in `h = 1/k`, ascending.
    pub fn inverse_bandwidths(&self) -> &[usize] {
        &self.inverse
    }

    pub fn len(&self) -> usize {
        self.inverse.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inverse.is_empty()
    }

    pub fn contains(&self, h: f64) -> bool {
        self.inverse.iter().any(|&k| 1.0 / k as f64 == h)
    }

    /// `Ṽ₀(n, h)` for each bandwidth, same order.
    pub fn v0(&self) -> &[f64] {
        &self.v0
    }

    pub fn norms(&self) -> &[KernelNorms] {
        &self.norms
    }
}

pub fn bandwidth_grid(n: usize, noise: &LinearNoise) -> Result<BandwidthGrid> {
    if n == 0 {
        return Err(Error::InvalidData("sample size must be positive".into()));
    }
    let threshold = (n as f64).ln() / n as f64;
    let cf_l1 = cf_l1_or_none(noise)?;
    let mut grid = BandwidthGrid {
        inverse: Vec::new(),
        norms: Vec::new(),
        v0: Vec::new(),
    };
    for k in 1..=n {
        let norms = match kernel_norms(1.0 / k as f64, noise) {
            Ok(v) => v,
            // the error cf vanishes inside [-k, k], and so for every larger k
            Err(Error::IllPosedWeight(_)) => break,
            Err(e) => return Err(e),
        };
        if norms.ratio() >= threshold {
            grid.inverse.push(k);
            grid.norms.push(norms);
            grid.v0.push(v0_from_norms(n, norms, cf_l1));
        }
    }
    if grid.is_empty() {
        return Err(Error::EmptyGrid("bandwidth"));
    }
    Ok(grid)
}

/// Outcome of one Goldenshluger–Lepski bandwidth selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthSelection {
    /// Descending.
    pub bandwidths: Vec<f64>,
    pub estimates: Vec<f64>,
    pub a_values: Vec<f64>,
    pub sqrt_v: Vec<f64>,
    pub selected: f64,
    pub c0: f64,
}

impl BandwidthSelection {
    pub fn selected_estimate(&self) -> f64 {
        let idx = self.bandwidths.iter().position(|&h| h == self.selected).expect("selected bandwidth is in grid");
        self.estimates[idx]
    }
}

/// Selection from estimates already computed on `grid` (same order).
pub fn select_bandwidth(grid: &BandwidthGrid, n: usize, estimates: &[f64], c0: f64) -> BandwidthSelection {
    let log_n = (n as f64).ln();
    let bandwidths = grid.bandwidths();
    let sqrt_v: Vec<f64> = grid.v0().iter().map(|v| (c0 * log_n * v).sqrt()).collect();
    // p̂_{h,h'} = p̂_{max(h,h')}, so comparisons with h' ≥ h vanish.
    let a_values: Vec<f64> = (0..bandwidths.len())
        .map(|i| {
            (i + 1..bandwidths.len())
                .map(|k| (estimates[i] - estimates[k]).abs() - sqrt_v[k])
                .fold(0.0, f64::max)
        })
        .collect();
    let mut best = 0;
    for i in 1..bandwidths.len() {
        if a_values[i] + sqrt_v[i] < a_values[best] + sqrt_v[best] {
            best = i;
        }
    }
    BandwidthSelection {
        selected: bandwidths[best],
        bandwidths,
        estimates: estimates.to_vec(),
        a_values,
        sqrt_v,
        c0,
    }
}

pub(crate) fn estimates_on_grid(z: &[f64], weights: &TrigWeights, grid: &BandwidthGrid, noise: &LinearNoise, x: f64) -> Result<[Vec<f64>; 2]> {
    let mut out = [Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len())];
    for h in grid.bandwidths() {
        let [s, c] = projection_pair(z, weights, h, noise, x)?;
        out[0].push(s);
        out[1].push(c);
    }
    Ok(out)
}

pub fn gl_select_bandwidth(
    data: &LinearDataset,
    weights: &TrigWeights,
    component: Component,
    noise: &LinearNoise,
    x: f64,
    c0: f64,
) -> Result<BandwidthSelection> {
    positive("c0", c0)?;
    let grid = bandwidth_grid(data.len(), noise)?;
    let est = estimates_on_grid(data.z(), weights, &grid, noise, x)?;
    Ok(select_bandwidth(&grid, data.len(), &est[component.index()], c0))
}

/// `(log n / 2γ)^{-1/ρ}`, capped at 1.
pub fn h_opt_ss(n: usize, gamma: f64, rho: f64) -> f64 {
    ((n as f64).ln() / (2.0 * gamma)).powf(-1.0 / rho).min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LinearDiagnostics {
    Adaptive { sine: BandwidthSelection, cosine: BandwidthSelection },
    SuperSmooth { bandwidth: f64 },
}

impl LinearDiagnostics {
    pub fn selected_bandwidths(&self) -> [f64; 2] {
        match self {
            LinearDiagnostics::Adaptive { sine, cosine } => [sine.selected, cosine.selected],
            LinearDiagnostics::SuperSmooth { bandwidth } => [*bandwidth, *bandwidth],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearEstimate {
    pub m_hat: Angle,
    pub p_sine: f64,
    pub p_cosine: f64,
    pub diagnostics: LinearDiagnostics,
}

fn ss_params(noise: &LinearNoise, override_params: Option<SuperSmoothParams>) -> Result<SuperSmoothParams> {
    match (override_params, noise.smoothness()) {
        (Some(p), _) => Ok(p),
        (None, LinearSmoothness::Super { gamma, rho, .. }) => SuperSmoothParams::new(gamma, rho),
        (None, LinearSmoothness::Ordinary { .. }) => Err(Error::InvalidParameter {
            name: "tuning",
            reason: "supersmooth tuning needs (γ, ρ) but the noise model is ordinary smooth".into(),
        }),
    }
}

fn rounding_floor(w: &[f64], h: f64, noise: &LinearNoise) -> Result<f64> {
    let mean_abs = w.iter().map(|v| v.abs()).sum::<f64>() / w.len() as f64;
    Ok(64.0 * f64::EPSILON * (1.0 + mean_abs) * kernel_norms(h, noise)?.l1 / (2.0 * PI))
}

/// `m̂(x) = atan2(p̂_{1,ĥ₁}(x), p̂_{2,ĥ₂}(x))`.
pub fn estimate_m_linear(data: &LinearDataset, noise: &LinearNoise, x: f64, config: &EstimatorConfig) -> Result<LinearEstimate> {
    if x.is_finite() && !(0.0..=1.0).contains(&x) {
        log::warn!("evaluation point {x} lies outside the covariate support [0, 1]");
    }
    estimate_m_linear_quiet(data, noise, x, config)
}

pub(crate) fn estimate_m_linear_quiet(
    data: &LinearDataset,
    noise: &LinearNoise,
    x: f64,
    config: &EstimatorConfig,
) -> Result<LinearEstimate> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    let weights = data.weights();
    let n = data.len();
    let (p_sine, p_cosine, diagnostics) = match config.tuning {
        Tuning::Adaptive { c0 } => {
            for c in c0 {
                positive("c0", c)?;
            }
            let grid = bandwidth_grid(n, noise)?;
            let est = estimates_on_grid(data.z(), &weights, &grid, noise, x)?;
            let sine = select_bandwidth(&grid, n, &est[0], c0[0]);
            let cosine = select_bandwidth(&grid, n, &est[1], c0[1]);
            (
                sine.selected_estimate(),
                cosine.selected_estimate(),
                LinearDiagnostics::Adaptive { sine, cosine },
            )
        }
        Tuning::SuperSmooth { params } => {
            let p = ss_params(noise, params)?;
            let bandwidth = h_opt_ss(n.max(2), p.rate, p.exponent);
            let [s, c] = projection_pair(data.z(), &weights, bandwidth, noise, x)?;
            (s, c, LinearDiagnostics::SuperSmooth { bandwidth })
        }
    };
    finish_estimate(&weights, noise, p_sine, p_cosine, diagnostics)
}

pub(crate) fn finish_estimate(
    weights: &TrigWeights,
    noise: &LinearNoise,
    p_sine: f64,
    p_cosine: f64,
    diagnostics: LinearDiagnostics,
) -> Result<LinearEstimate> {
    let h = diagnostics.selected_bandwidths();
    if p_sine.abs() <= rounding_floor(weights.component(Component::Sine), h[0], noise)?
        && p_cosine.abs() <= rounding_floor(weights.component(Component::Cosine), h[1], noise)?
    {
        return Err(Error::UndefinedDirection);
    }
    let m_hat = atan2_dir(PlanePoint::new(p_sine, p_cosine))?;
    Ok(LinearEstimate {
        m_hat,
        p_sine,
        p_cosine,
        diagnostics,
    })
}
