//! Regression on a circular covariate observed with circular error.
//!
//! The sine and cosine moment functions `p₁ = E[sin Θ | X] f_X` and
//! `p₂ = E[cos Θ | X] f_X` are estimated by truncated Fourier series whose
//! empirical coefficients are divided by the error's Fourier coefficients.
//! The truncation level is picked per component by a Goldenshluger–Lepski
//! comparison (ordinary smooth errors) or fixed in closed form (supersmooth
//! errors), and the regression angle is `atan2(p̂₁, p̂₂)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angle::{atan2_dir, Angle, PlanePoint};
use crate::config::{Component, EstimatorConfig, SuperSmoothParams, Tuning};
use crate::error::{Error, Result};
use crate::noise::{CircularNoise, CircularSmoothness};
use crate::util::pairwise_sum;

#[derive(Debug, Clone, PartialEq)]
pub struct CircularDataset {
    theta: Vec<Angle>,
    z: Vec<Angle>,
}

impl CircularDataset {
    pub fn new(theta: Vec<Angle>, z: Vec<Angle>) -> Result<Self> {
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
        Ok(Self { theta, z })
    }

    /// Builds a dataset from raw radians, wrapping both coordinates.
    pub fn from_radians(theta: &[f64], z: &[f64]) -> Result<Self> {
        let theta = theta.iter().map(|&t| Angle::new(t)).collect::<Result<_>>()?;
        let z = z.iter().map(|&t| Angle::new(t)).collect::<Result<_>>()?;
        Self::new(theta, z)
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

    pub fn z(&self) -> &[Angle] {
        &self.z
    }

    pub fn weights(&self) -> TrigWeights {
        TrigWeights::from_responses(&self.theta)
    }
}

/// `sin Θ_j` and `cos Θ_j`, computed once per dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigWeights {
    sin: Vec<f64>,
    cos: Vec<f64>,
}

impl TrigWeights {
    pub fn from_responses(theta: &[Angle]) -> Self {
        let (sin, cos) = theta.iter().map(|t| t.radians().sin_cos()).unzip();
        Self { sin, cos }
    }

    pub fn component(&self, c: Component) -> &[f64] {
        match c {
            Component::Sine => &self.sin,
            Component::Cosine => &self.cos,
        }
    }

    pub fn len(&self) -> usize {
        self.sin.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sin.is_empty()
    }
}

/// Prefix sums of `1/|f★(l)|` and `1/|f★(l)|²` over symmetric frequency
/// windows, so that every `V₀(n, L)` and grid ratio is O(1).
#[derive(Debug, Clone)]
pub struct LevelTables {
    n: usize,
    ell1: f64,
    // inv_abs[L] = Σ_{|l|≤L} 1/|f★(l)|
    inv_abs: Vec<f64>,
    // inv_sq[L] = Σ_{|l|≤L} 1/|f★(l)|²
    inv_sq: Vec<f64>,
    // largest L with f★(l) ≠ 0 for all |l| ≤ L
    max_level: usize,
}

impl LevelTables {
    /// Tables covering levels `1..=n` for sample size `n`.
    pub fn new(noise: &CircularNoise, n: usize) -> Result<Self> {
        Self::with_max_level(noise, n, n)
    }

    pub fn with_max_level(noise: &CircularNoise, n: usize, max_level: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidData("sample size must be positive".into()));
        }
        let ell1 = noise.ell1_norm()?;
        let top = 2 * max_level;
        let mut inv_abs = Vec::with_capacity(top + 1);
        let mut inv_sq = Vec::with_capacity(top + 1);
        let mut usable = None;
        let (mut a, mut s) = (0.0, 0.0);
        for l in 0..=top as i64 {
            let terms: &[i64] = if l == 0 { &[0] } else { &[l, -l] };
            for &k in terms {
                let m = noise.cf_abs(k);
                if m == 0.0 && usable.is_none() {
                    usable = Some((l as usize).saturating_sub(1));
                }
                a += 1.0 / m;
                s += 1.0 / (m * m);
            }
            inv_abs.push(a);
            inv_sq.push(s);
        }
        if usable == Some(0) && noise.cf_abs(0) == 0.0 {
            return Err(Error::IllPosedWeight(0.0));
        }
        Ok(Self {
            n,
            ell1,
            inv_abs,
            inv_sq,
            max_level: usable.unwrap_or(top).min(max_level),
        })
    }

    pub fn sample_size(&self) -> usize {
        self.n
    }

    pub fn ell1(&self) -> f64 {
        self.ell1
    }

    /// Largest level at which the estimator is defined.
    pub fn max_level(&self) -> usize {
        self.max_level
    }

    /// `V₀(n, L)`: the variance majorant of `p̂_L(x)`.
    pub fn v0(&self, level: usize) -> f64 {
        let first = self.inv_abs[level].powi(2);
        let second = self.ell1 * self.inv_sq[2 * level];
        first.min(second) / ((2.0 * PI).powi(2) * self.n as f64)
    }

    /// Admissibility ratio `Σ_{|l|≤2L} |f★|⁻² / (Σ_{|l|≤L} |f★|⁻¹)²`.
    pub fn ratio(&self, level: usize) -> f64 {
        self.inv_sq[2 * level] / self.inv_abs[level].powi(2)
    }

    pub fn grid(&self) -> Result<LevelGrid> {
        let n = self.n as f64;
        let threshold = n.ln() / n;
        let levels: Vec<usize> = (1..=self.max_level.min(self.n))
            .filter(|&l| self.ratio(l) >= threshold)
            .collect();
        if levels.is_empty() {
            return Err(Error::EmptyGrid("level"));
        }
        Ok(LevelGrid { levels })
    }
}

/// Admissible truncation levels, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelGrid {
    levels: Vec<usize>,
}

impl LevelGrid {
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn contains(&self, level: usize) -> bool {
        self.levels.binary_search(&level).is_ok()
    }

    pub fn max(&self) -> usize {
        *self.levels.last().expect("grid is non-empty")
    }

    pub fn min(&self) -> usize {
        self.levels[0]
    }
}

/// `V₀(n, L)` computed by direct summation.
pub fn v0_circular(n: usize, level: usize, noise: &CircularNoise) -> Result<f64> {
    if n == 0 || level == 0 {
        return Err(Error::InvalidParameter {
            name: "level",
            reason: "n and L must be at least 1".into(),
        });
    }
    Ok(LevelTables::with_max_level(noise, n, level)?.v0(level))
}

pub fn level_grid(n: usize, noise: &CircularNoise) -> Result<LevelGrid> {
    LevelTables::new(noise, n)?.grid()
}

/// Cumulative projection estimates `p̂_L(x)` for `L = 0..=max_level`, for
/// both components at once.
///
/// Frequency `l` contributes `Σ_j w_j e^{il(Z_j - x)} / f★(l)` plus its
/// mirror at `-l`; the sums over `j` are pairwise.
pub fn projection_paths(
    z: &[Angle],
    weights: &TrigWeights,
    noise: &CircularNoise,
    x: Angle,
    max_level: usize,
) -> Result<[Vec<f64>; 2]> {
    let n = z.len();
    if n == 0 || weights.len() != n {
        return Err(Error::InvalidData("weights and covariates differ in length".into()));
    }
    let scale = 1.0 / (2.0 * PI * n as f64);
    let shifted: Vec<f64> = z.iter().map(|zj| zj.radians() - x.radians()).collect();
    let mut paths = [Vec::with_capacity(max_level + 1), Vec::with_capacity(max_level + 1)];
    let mut running = [0.0f64; 2];
    let mut buf_re = vec![0.0; n];
    let mut buf_im = vec![0.0; n];
    let mut cos_l = vec![0.0; n];
    let mut sin_l = vec![0.0; n];
    for l in 0..=max_level as i64 {
        let f_pos = noise.cf(l);
        let f_neg = noise.cf(-l);
        if f_pos.norm() == 0.0 || f_neg.norm() == 0.0 {
            return Err(Error::IllPosedWeight(l as f64));
        }
        for (j, u) in shifted.iter().enumerate() {
            let (s, c) = (l as f64 * u).sin_cos();
            cos_l[j] = c;
            sin_l[j] = s;
        }
        for comp in Component::BOTH {
            let w = weights.component(comp);
            for j in 0..n {
                buf_re[j] = w[j] * cos_l[j];
                buf_im[j] = w[j] * sin_l[j];
            }
            let s = Complex64::new(pairwise_sum(&buf_re), pairwise_sum(&buf_im));
            let contribution = if l == 0 {
                s / f_pos
            } else {
                // the -l coefficient sum is the conjugate since weights are real
                s / f_pos + s.conj() / f_neg
            };
            debug_assert!(
                contribution.im.abs() * scale <= 1e-10 * (1.0 + (running[comp.index()] + contribution.re * scale).abs()),
                "non-Hermitian residual {} at l = {l}",
                contribution.im
            );
            running[comp.index()] += contribution.re * scale;
            paths[comp.index()].push(running[comp.index()]);
        }
    }
    Ok(paths)
}

/// `p̂_L(x)` for one component.
pub fn projection_estimate(
    data: &CircularDataset,
    weights: &TrigWeights,
    component: Component,
    level: usize,
    noise: &CircularNoise,
    x: Angle,
) -> Result<f64> {
    let paths = projection_paths(data.z(), weights, noise, x, level)?;
    Ok(paths[component.index()][level])
}

/// Outcome of one Goldenshluger–Lepski level selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSelection {
    pub levels: Vec<usize>,
    pub estimates: Vec<f64>,
    pub a_values: Vec<f64>,
    pub sqrt_v: Vec<f64>,
    pub selected: usize,
    pub c0: f64,
}

impl LevelSelection {
    pub fn selected_estimate(&self) -> f64 {
        let idx = self.levels.iter().position(|&l| l == self.selected).expect("selected level is in grid");
        self.estimates[idx]
    }
}

/// Selection over a precomputed path. `path[L]` is `p̂_L(x)`.
pub fn select_level(grid: &LevelGrid, tables: &LevelTables, path: &[f64], c0: f64) -> LevelSelection {
    let n = tables.sample_size() as f64;
    let levels = grid.levels().to_vec();
    let estimates: Vec<f64> = levels.iter().map(|&l| path[l]).collect();
    let sqrt_v: Vec<f64> = levels.iter().map(|&l| (c0 * n.ln() * tables.v0(l)).sqrt()).collect();
    // L' ≤ L gives a zero difference, so only larger levels can raise A(L).
    let a_values: Vec<f64> = (0..levels.len())
        .map(|i| {
            (i + 1..levels.len())
                .map(|k| (estimates[k] - estimates[i]).abs() - sqrt_v[k])
                .fold(0.0, f64::max)
        })
        .collect();
    let mut best = 0;
    for i in 1..levels.len() {
        if a_values[i] + sqrt_v[i] < a_values[best] + sqrt_v[best] {
            best = i;
        }
    }
    LevelSelection {
        selected: levels[best],
        levels,
        estimates,
        a_values,
        sqrt_v,
        c0,
    }
}

/// Goldenshluger–Lepski level for one component at `x`.
pub fn gl_select_level(
    data: &CircularDataset,
    weights: &TrigWeights,
    component: Component,
    noise: &CircularNoise,
    x: Angle,
    c0: f64,
) -> Result<LevelSelection> {
    crate::error::positive("c0", c0)?;
    let tables = LevelTables::new(noise, data.len())?;
    let grid = tables.grid()?;
    let paths = projection_paths(data.z(), weights, noise, x, grid.max())?;
    Ok(select_level(&grid, &tables, &paths[component.index()], c0))
}

/// `max(1, round((log n / 2b)^{1/a}))`.
pub fn l_opt_ss(n: usize, b: f64, a: f64) -> usize {
    let v = ((n as f64).ln() / (2.0 * b)).powf(1.0 / a);
    (v.round() as usize).max(1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CircularDiagnostics {
    Adaptive { sine: LevelSelection, cosine: LevelSelection },
    SuperSmooth { level: usize },
}

impl CircularDiagnostics {
    pub fn selected_levels(&self) -> [usize; 2] {
        match self {
            CircularDiagnostics::Adaptive { sine, cosine } => [sine.selected, cosine.selected],
            CircularDiagnostics::SuperSmooth { level } => [*level, *level],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircularEstimate {
    pub m_hat: Angle,
    pub p_sine: f64,
    pub p_cosine: f64,
    pub diagnostics: CircularDiagnostics,
}

fn ss_params(noise: &CircularNoise, override_params: Option<SuperSmoothParams>) -> Result<SuperSmoothParams> {
    match (override_params, noise.smoothness()) {
        (Some(p), _) => Ok(p),
        (None, CircularSmoothness::Super { b, a, .. }) => SuperSmoothParams::new(b, a),
        (None, CircularSmoothness::Ordinary { .. }) => Err(Error::InvalidParameter {
            name: "tuning",
            reason: "supersmooth tuning needs (b, a) but the noise model is ordinary smooth".into(),
        }),
    }
}

// Magnitude below which a projection estimate is indistinguishable from
// rounding in the weights (sin π ≠ 0 in floating point) and in the sums.
fn rounding_floor(w: &[f64], noise: &CircularNoise, level: usize) -> f64 {
    let mean_abs = w.iter().map(|v| v.abs()).sum::<f64>() / w.len() as f64;
    let inv: f64 = (-(level as i64)..=level as i64).map(|l| 1.0 / noise.cf_abs(l)).sum();
    64.0 * f64::EPSILON * (1.0 + mean_abs) * inv / (2.0 * PI)
}

/// `m̂(x) = atan2(p̂₁(x), p̂₂(x))` with data-driven or closed-form levels.
pub fn estimate_m_circular(
    data: &CircularDataset,
    noise: &CircularNoise,
    x: Angle,
    config: &EstimatorConfig,
) -> Result<CircularEstimate> {
    let weights = data.weights();
    let n = data.len();
    let (p_sine, p_cosine, diagnostics) = match config.tuning {
        Tuning::Adaptive { c0 } => {
            for c in c0 {
                crate::error::positive("c0", c)?;
            }
            let tables = LevelTables::new(noise, n)?;
            let grid = tables.grid()?;
            let paths = projection_paths(data.z(), &weights, noise, x, grid.max())?;
            let sine = select_level(&grid, &tables, &paths[0], c0[0]);
            let cosine = select_level(&grid, &tables, &paths[1], c0[1]);
            (
                sine.selected_estimate(),
                cosine.selected_estimate(),
                CircularDiagnostics::Adaptive { sine, cosine },
            )
        }
        Tuning::SuperSmooth { params } => {
            let p = ss_params(noise, params)?;
            let level = l_opt_ss(n.max(2), p.rate, p.exponent);
            let paths = projection_paths(data.z(), &weights, noise, x, level)?;
            (paths[0][level], paths[1][level], CircularDiagnostics::SuperSmooth { level })
        }
    };
    finish_estimate(&weights, noise, p_sine, p_cosine, diagnostics)
}

pub(crate) fn finish_estimate(
    weights: &TrigWeights,
    noise: &CircularNoise,
    p_sine: f64,
    p_cosine: f64,
    diagnostics: CircularDiagnostics,
) -> Result<CircularEstimate> {
    let levels = diagnostics.selected_levels();
    let negligible = |c: Component| {
        let v = [p_sine, p_cosine][c.index()];
        v.abs() <= rounding_floor(weights.component(c), noise, levels[c.index()])
    };
    if negligible(Component::Sine) && negligible(Component::Cosine) {
        return Err(Error::UndefinedDirection);
    }
    let m_hat = atan2_dir(PlanePoint::new(p_sine, p_cosine))?;
    Ok(CircularEstimate {
        m_hat,
        p_sine,
        p_cosine,
        diagnostics,
    })
}
