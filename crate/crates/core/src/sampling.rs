//! Seeded random variates for the simulation studies.
//!
//! Every replication owns a [`SeededRng`] keyed by `(seed, stream)`; the
//! ChaCha stream id keeps replications disjoint regardless of scheduling.

use std::f64::consts::PI;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::angle::{wrap_unchecked, Angle};
use crate::error::{positive, Result};

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, stream, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform01(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    fn open01(&mut self) -> f64 {
        self.inner.sample(Open01)
    }

    /// Centered Laplace with scale σ (density `e^{-|x|/σ} / 2σ`), by inverse CDF.
    pub fn laplace(&mut self, sigma: f64) -> Result<f64> {
        positive("sigma", sigma)?;
        Ok(self.laplace_unchecked(sigma))
    }

    fn laplace_unchecked(&mut self, sigma: f64) -> f64 {
        let u = self.open01() - 0.5;
        -sigma * u.signum() * (-2.0 * u.abs()).ln_1p()
    }

    pub fn gaussian(&mut self, sigma: f64) -> Result<f64> {
        positive("sigma", sigma)?;
        let z: f64 = self.inner.sample(StandardNormal);
        Ok(sigma * z)
    }

    /// Laplace(0, 1/λ) wrapped onto the circle; its integer Fourier
    /// coefficients are `λ² / (l² + λ²)`.
    pub fn wrapped_laplace(&mut self, lambda: f64) -> Result<Angle> {
        positive("lambda", lambda)?;
        let y = self.laplace_unchecked(1.0 / lambda);
        Ok(Angle::new(y).expect("finite Laplace draw"))
    }

    pub fn von_mises(&mut self, mu: Angle, kappa: f64) -> Result<Angle> {
        Ok(VonMises::new(mu, kappa)?.sample(self))
    }
}

/// Von Mises sampler using the Best–Fisher wrapped-Cauchy envelope.
#[derive(Debug, Clone, Copy)]
pub struct VonMises {
    mu: f64,
    kappa: f64,
    r: f64,
}

impl VonMises {
    pub fn new(mu: Angle, kappa: f64) -> Result<Self> {
        let kappa = positive("kappa", kappa)?;
        let tau = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
        let rho = (tau - (2.0 * tau).sqrt()) / (2.0 * kappa);
        let r = (1.0 + rho * rho) / (2.0 * rho);
        Ok(Self { mu: mu.radians(), kappa, r })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn sample(&self, rng: &mut SeededRng) -> Angle {
        self.sample_counted(rng).0
    }

    /// Draw plus the number of envelope proposals it took.
    pub fn sample_counted(&self, rng: &mut SeededRng) -> (Angle, u32) {
        let mut trials = 0;
        loop {
            trials += 1;
            let u1 = rng.uniform01();
            let u2 = rng.open01();
            let u3 = rng.uniform01();
            let z = (PI * u1).cos();
            let f = (1.0 + self.r * z) / (self.r + z);
            let c = self.kappa * (self.r - f);
            if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
                let magnitude = f.clamp(-1.0, 1.0).acos();
                let theta = if u3 > 0.5 { magnitude } else { -magnitude };
                return (Angle::from_wrapped(wrap_unchecked(self.mu + theta)), trials);
            }
        }
    }
}
