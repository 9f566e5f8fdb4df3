//! Angular primitives: wrapping onto `[-π, π)`, the piecewise two-argument
//! arctangent used to recover a direction from its (sine, cosine) moments,
//! and the cosine dissimilarity `1 - cos(a - b)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An angle in radians, always stored in `[-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    /// Wraps `theta` onto `[-π, π)`.
    pub fn new(theta: f64) -> Result<Self> {
        wrap(theta)
    }

    /// Caller guarantees `theta` already lies in `[-π, π)`.
    #[inline]
    pub(crate) fn from_wrapped(theta: f64) -> Self {
        debug_assert!((-PI..PI).contains(&theta), "{theta}");
        Angle(theta)
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    /// Unit-circle coordinates `(cos θ, sin θ)`.
    #[inline]
    pub fn to_unit(self) -> (f64, f64) {
        let (s, c) = self.0.sin_cos();
        (c, s)
    }

    /// Shifts by `delta` radians and re-wraps.
    pub fn rotate(self, delta: f64) -> Result<Self> {
        wrap(self.0 + delta)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

/// Reduces `theta` modulo 2π onto the half-open interval `[-π, π)`.
pub fn wrap(theta: f64) -> Result<Angle> {
    if !theta.is_finite() {
        return Err(Error::NonFinite(theta));
    }
    Ok(Angle(wrap_unchecked(theta)))
}

#[inline]
pub(crate) fn wrap_unchecked(theta: f64) -> f64 {
    if (-PI..PI).contains(&theta) {
        return theta;
    }
    let r = (theta + PI).rem_euclid(TAU) - PI;
    // rem_euclid can round up to exactly TAU
    if r >= PI {
        -PI
    } else {
        r
    }
}

/// A point of the plane given as (sine ordinate, cosine abscissa).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub w1: f64,
    pub w2: f64,
}

impl PlanePoint {
    pub fn new(w1: f64, w2: f64) -> Self {
        Self { w1, w2 }
    }
}

/// Piecewise two-argument arctangent with `arctan` valued in `[-π/2, π/2]`.
///
/// The negative horizontal axis (`w1 = 0, w2 < 0`) maps to `-π`, which
/// differs from the IEEE `atan2(+0, -1) = +π`. The raw value lies in
/// `[-π, π]`; it is wrapped, so a result that rounds to `+π` becomes `-π`.
pub fn atan2_dir(p: PlanePoint) -> Result<Angle> {
    let PlanePoint { w1, w2 } = p;
    if !w1.is_finite() {
        return Err(Error::NonFinite(w1));
    }
    if !w2.is_finite() {
        return Err(Error::NonFinite(w2));
    }
    let raw = if w2 > 0.0 {
        if w1 == 0.0 {
            0.0
        } else {
            (w1 / w2).atan()
        }
    } else if w2 == 0.0 {
        if w1 > 0.0 {
            FRAC_PI_2
        } else if w1 < 0.0 {
            -FRAC_PI_2
        } else {
            return Err(Error::UndefinedDirection);
        }
    } else if w1 > 0.0 {
        (w1 / w2).atan() + PI
    } else {
        (w1 / w2).atan() - PI
    };
    wrap(raw)
}

/// Cosine dissimilarity `1 - cos(a - b)`, in `[0, 2]`.
#[inline]
pub fn circ_dist(a: Angle, b: Angle) -> f64 {
    1.0 - (a.0 - b.0).cos()
}

/// Shortest arc length between two angles. Only used for diagnostics.
pub fn arc_dist(a: Angle, b: Angle) -> f64 {
    wrap_unchecked(a.0 - b.0).abs()
}

/// First trigonometric moment of a sample of angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularMoment {
    pub mean_cos: f64,
    pub mean_sin: f64,
}

impl CircularMoment {
    pub fn of(angles: impl IntoIterator<Item = f64>) -> Self {
        let (mut c, mut s, mut n) = (0.0, 0.0, 0usize);
        for a in angles {
            let (sa, ca) = a.sin_cos();
            c += ca;
            s += sa;
            n += 1;
        }
        let n = n.max(1) as f64;
        Self {
            mean_cos: c / n,
            mean_sin: s / n,
        }
    }

    pub fn resultant_length(&self) -> f64 {
        self.mean_cos.hypot(self.mean_sin)
    }

    /// `1 - R̄`.
    pub fn circular_variance(&self) -> f64 {
        1.0 - self.resultant_length()
    }

    pub fn mean_direction(&self) -> Result<Angle> {
        atan2_dir(PlanePoint::new(self.mean_sin, self.mean_cos))
    }
}
