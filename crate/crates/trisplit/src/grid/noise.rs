//! Seeded Gaussian noise synthesis and deterministic random fields.
//!
//! The generator is ChaCha8 with Box–Muller sampling; identical seeds give
//! bitwise-identical fields, which test fixtures and the CLI rely on.

use super::{GridSpec, Image2D};
use crate::error::Error;
use crate::Result;
use ndarray::Array2;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Additive Gaussian noise: standard deviation on the `[0,1]` intensity
/// scale plus the PRNG seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::param("sigma", format!("must be ≥ 0, got {sigma}")));
        }
        Ok(NoiseSpec { sigma, seed })
    }
}

/// Uniform f64 in [0, 1) from the top 53 bits of a u64 draw.
#[inline]
fn u01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// One standard normal pair via Box–Muller.
#[inline]
fn normal_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1 = 1.0 - u01(rng); // (0, 1], keeps ln finite
    let u2 = u01(rng);
    let r = (-2.0 * u1.ln()).sqrt();
    let t = 2.0 * std::f64::consts::PI * u2;
    (r * t.cos(), r * t.sin())
}

/// Add zero-mean Gaussian noise with the given spec. Deterministic in the
/// seed; `sigma = 0` returns the input unchanged.
pub fn add_gaussian_noise(img: &Image2D, noise: NoiseSpec) -> Result<Image2D> {
    if !(noise.sigma.is_finite() && noise.sigma >= 0.0) {
        return Err(Error::param("sigma", format!("must be ≥ 0, got {}", noise.sigma)));
    }
    if noise.sigma == 0.0 {
        return Ok(img.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let mut spare: Option<f64> = None;
    let mut draw = move || match spare.take() {
        Some(z) => z,
        None => {
            let (a, b) = normal_pair(&mut rng);
            spare = Some(b);
            a
        }
    };
    let values = img.values().mapv(|v| v + noise.sigma * draw());
    Ok(Image2D {
        spec: img.spec(),
        values,
    })
}

/// Deterministic uniform random field in `[lo, hi)`; handy for tests,
/// oracles, and benchmarks.
pub fn random_uniform(spec: GridSpec, seed: u64, lo: f64, hi: f64) -> Image2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = Array2::from_shape_simple_fn((spec.rows(), spec.cols()), || {
        lo + (hi - lo) * u01(&mut rng)
    });
    Image2D { spec, values }
}
