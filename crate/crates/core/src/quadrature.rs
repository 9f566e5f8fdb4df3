//! Adaptive Gauss–Kronrod (7/15-point) quadrature.
//!
//! Used for characteristic functions without a closed-form antiderivative
//! (Gaussian and user-supplied noise models).

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: u32 = 50;
const MAX_PANELS: usize = 200_000;

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` to within `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Quadrature { a, b });
    }
    let (whole, _) = gk15(&mut f, a, b);
    let mut stack = vec![(a, b, 0u32)];
    let mut total = 0.0;
    let mut panels = 0usize;
    // Local tolerance is scaled by panel width, so accepted errors add up to at most the target.
    let width = (b - a).abs();
    let target = abs_tol.max(rel_tol * whole.abs());
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(&mut f, lo, hi);
        panels += 1;
        let local = target * ((hi - lo).abs() / width);
        if err <= local.max(f64::EPSILON * val.abs()) || depth >= MAX_DEPTH {
            if !val.is_finite() {
                return Err(Error::Quadrature { a: lo, b: hi });
            }
            total += val;
        } else {
            if panels > MAX_PANELS {
                return Err(Error::Quadrature { a, b });
            }
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    Ok(total)
}

/// [`integrate`] over `panels` equal pieces of `[a, b]`, sharing `abs_tol`
/// between them. Meant for oscillatory integrands, one piece per few periods.
pub fn integrate_split<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize, rel_tol: f64, abs_tol: f64) -> Result<f64> {
    let panels = panels.max(1);
    let step = (b - a) / panels as f64;
    let mut parts = Vec::with_capacity(panels);
    for i in 0..panels {
        let lo = a + step * i as f64;
        let hi = if i + 1 == panels { b } else { lo + step };
        parts.push(integrate(&mut f, lo, hi, rel_tol, abs_tol / panels as f64)?);
    }
    Ok(crate::util::pairwise_sum(&parts))
}

/// Integrates `f` over `[0, ∞)` by summing doubling panels `[2^k, 2^(k+1)]`
/// until a panel contributes less than the tolerance.
pub fn integrate_half_line<F: FnMut(f64) -> f64>(mut f: F, rel_tol: f64) -> Result<f64> {
    let mut total = integrate(&mut f, 0.0, 1.0, rel_tol, 0.0)?;
    let mut lo = 1.0;
    for _ in 0..1100 {
        let hi = 2.0 * lo;
        let part = integrate(&mut f, lo, hi, rel_tol, rel_tol * total.abs() * 1e-3)?;
        total += part;
        if part.abs() <= rel_tol * total.abs() * 1e-2 {
            return Ok(total);
        }
        lo = hi;
        if !lo.is_finite() {
            break;
        }
    }
    Err(Error::Quadrature { a: 0.0, b: f64::INFINITY })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let v = integrate(|t| 1.0 + 0.01 * t * t, -3.0, 3.0, 1e-12, 0.0).unwrap();
        assert_relative_eq!(v, 6.0 + 0.02 * 9.0, max_relative = 1e-14);
    }

    #[test]
    fn oscillatory_integrand() {
        // ∫_0^T cos(tu) dt = sin(uT)/u
        let (u, t) = (7.3, 40.0);
        let v = integrate(|s| (s * u).cos(), 0.0, t, 1e-12, 1e-14).unwrap();
        assert_relative_eq!(v, (u * t).sin() / u, max_relative = 1e-10);
    }

    #[test]
    fn split_matches_closed_form_for_fast_oscillation() {
        let (u, t) = (170.0, 18.5);
        let panels = (t * u / PI).ceil() as usize;
        let v = integrate_split(|s| (s * u).cos(), -t, t, panels, 1e-12, 1e-12 * 2.0 * t).unwrap();
        assert!((v - 2.0 * (u * t).sin() / u).abs() < 1e-11);
    }

    #[test]
    fn gaussian_half_line() {
        let v = integrate_half_line(|t| (-0.5 * t * t).exp(), 1e-12).unwrap();
        assert_relative_eq!(v, (PI / 2.0).sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn lorentzian_half_line() {
        let s = 0.1;
        let v = integrate_half_line(|t| 1.0 / (1.0 + s * s * t * t), 1e-10).unwrap();
        assert_relative_eq!(v, PI / (2.0 * s), max_relative = 1e-8);
    }
}
