use serde::{Deserialize, Serialize};

use crate::error::{positive, Result};

/// Default GL constant for the circular-covariate estimator.
pub const DEFAULT_C0_CIRCULAR: f64 = 0.08;
/// Default GL constant for the linear-covariate estimator.
pub const DEFAULT_C0_LINEAR: f64 = 0.4;

/// Which of the two conditional moments a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    /// `E[sin Θ | X] f_X`
    Sine,
    /// `E[cos Θ | X] f_X`
    Cosine,
}

impl Component {
    pub const BOTH: [Component; 2] = [Component::Sine, Component::Cosine];

    pub fn index(self) -> usize {
        match self {
            Component::Sine => 0,
            Component::Cosine => 1,
        }
    }
}

/// Rate and exponent of a supersmooth decay `exp(-rate · |t|^exponent)`:
/// `(b, a)` on the circle, `(γ, ρ)` on the line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperSmoothParams {
    pub rate: f64,
    pub exponent: f64,
}

impl SuperSmoothParams {
    pub fn new(rate: f64, exponent: f64) -> Result<Self> {
        Ok(Self {
            rate: positive("rate", rate)?,
            exponent: positive("exponent", exponent)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Tuning {
    /// Goldenshluger–Lepski selection per component with penalty constants
    /// `c0 = [sine, cosine]`.
    Adaptive { c0: [f64; 2] },
    /// Closed-form smoothing parameter for supersmooth errors. Parameters
    /// default to the noise model's declared smoothness.
    SuperSmooth { params: Option<SuperSmoothParams> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub tuning: Tuning,
}

impl EstimatorConfig {
    pub fn adaptive(c0: f64) -> Result<Self> {
        Self::adaptive_pair(c0, c0)
    }

    pub fn adaptive_pair(c0_sine: f64, c0_cosine: f64) -> Result<Self> {
        Ok(Self {
            tuning: Tuning::Adaptive {
                c0: [positive("c0_sine", c0_sine)?, positive("c0_cosine", c0_cosine)?],
            },
        })
    }

    pub fn super_smooth() -> Self {
        Self {
            tuning: Tuning::SuperSmooth { params: None },
        }
    }

    pub fn super_smooth_with(params: SuperSmoothParams) -> Self {
        Self {
            tuning: Tuning::SuperSmooth { params: Some(params) },
        }
    }

    pub fn circular_default() -> Self {
        Self {
            tuning: Tuning::Adaptive {
                c0: [DEFAULT_C0_CIRCULAR; 2],
            },
        }
    }

    pub fn linear_default() -> Self {
        Self {
            tuning: Tuning::Adaptive {
                c0: [DEFAULT_C0_LINEAR; 2],
            },
        }
    }
}
