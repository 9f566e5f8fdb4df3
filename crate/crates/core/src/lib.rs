//! Nonparametric regression of a circular response on an error-contaminated
//! covariate, either circular or linear.
//!
//! The regression angle is recovered as `m(x) = atan2(m₁(x), m₂(x))` from
//! the conditional sine and cosine moments. Each moment (times the covariate
//! density) is estimated by deconvolution: a truncated Fourier series when
//! the covariate lives on the circle ([`circular`]), a sinc-kernel estimator
//! when it lives on the line ([`linear`]). Smoothing parameters are chosen by
//! a Goldenshluger–Lepski comparison, or in closed form for supersmooth
//! errors.
//!
//! ```
//! use circreg::{linear, EstimatorConfig, LinearNoise};
//!
//! let theta = [0.1, 0.3, 0.2, 0.5, 0.4, 0.6];
//! let z = [0.05, 0.2, 0.35, 0.5, 0.65, 0.8];
//! let data = linear::LinearDataset::from_radians(&theta, &z)?;
//! let noise = LinearNoise::laplace(0.05)?;
//! let est = linear::estimate_m_linear(&data, &noise, 0.4, &EstimatorConfig::linear_default())?;
//! assert!(est.m_hat.radians().abs() < std::f64::consts::PI);
//! # Ok::<(), circreg::Error>(())
//! ```

pub mod angle;
pub mod circular;
pub mod config;
pub mod error;
pub mod experiments;
pub mod linear;
pub mod noise;
pub mod par;
pub mod quadrature;
pub mod report;
pub mod sampling;
pub mod special;
mod util;

pub use angle::{arc_dist, atan2_dir, circ_dist, wrap, Angle, CircularMoment, PlanePoint};
pub use config::{Component, EstimatorConfig, SuperSmoothParams, Tuning, DEFAULT_C0_CIRCULAR, DEFAULT_C0_LINEAR};
pub use error::{Error, ErrorClass, Result};
pub use noise::{CircularNoise, LinearNoise, NoiseSpec};
