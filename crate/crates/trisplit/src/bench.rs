//! Empirical per-iteration timing across grid sizes.
//!
//! Each size is timed twice per repeat — a short run and a longer run with
//! the same setup — and the per-iteration cost is the difference divided by
//! the extra iterations, which cancels symbol construction and planning.
//! A least-squares line through `log(time)` vs `log(MN)` gives the scaling
//! exponent; the expected cost is `O(MN(log M + log N))`, so the fitted
//! exponent sits slightly above 1.

use crate::driver::{decompose, DecompParams};
use crate::error::Error;
use crate::synth::{generate, Scene};
use crate::Result;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SizeTiming {
    pub size: usize,
    /// Median per-iteration wall time in seconds.
    pub per_iter_seconds: f64,
    /// One per-iteration estimate per repeat.
    pub samples: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchReport {
    pub timings: Vec<SizeTiming>,
    /// Fitted exponent of per-iteration time against pixel count.
    pub fitted_exponent: f64,
    pub repeats: usize,
    pub iterations_measured: usize,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite timings"));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Time the decomposition across `sizes` and fit the scaling exponent.
pub fn run_bench(
    sizes: &[usize],
    base: &DecompParams,
    repeats: usize,
    iters: usize,
) -> Result<BenchReport> {
    if sizes.is_empty() {
        return Err(Error::param("sizes", "need at least one size"));
    }
    for &s in sizes {
        if s < 64 || !s.is_power_of_two() {
            return Err(Error::param(
                "sizes",
                format!("sizes must be powers of two ≥ 64, got {s}"),
            ));
        }
    }
    if repeats == 0 || iters == 0 {
        return Err(Error::param("repeats", "repeats and iters must be positive"));
    }

    let warm_iters = 2usize;
    let mut timings = Vec::new();
    for &size in sizes {
        let scene = generate(Scene::CrossLight, size)?;
        let short_params = DecompParams {
            iter_max: warm_iters,
            pad_width: 0,
            rho: 1e-14,
            record_energy: false,
            ..*base
        };
        let long_params = DecompParams {
            iter_max: warm_iters + iters,
            ..short_params
        };
        let mut samples = Vec::with_capacity(repeats);
        for _ in 0..repeats {
            let short = decompose(&scene, &short_params)?;
            let long = decompose(&scene, &long_params)?;
            debug_assert_eq!(short.iterations, warm_iters);
            debug_assert_eq!(long.iterations, warm_iters + iters);
            samples.push((long.elapsed - short.elapsed).max(0.0) / iters as f64);
        }
        timings.push(SizeTiming {
            size,
            per_iter_seconds: median(samples.clone()),
            samples,
        });
    }

    // least-squares slope of log(t) vs log(MN)
    let pts: Vec<(f64, f64)> = timings
        .iter()
        .map(|t| {
            (
                ((t.size * t.size) as f64).ln(),
                t.per_iter_seconds.max(1e-12).ln(),
            )
        })
        .collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    let fitted_exponent = if denom.abs() < 1e-12 {
        f64::NAN
    } else {
        (n * sxy - sx * sy) / denom
    };

    Ok(BenchReport {
        timings,
        fitted_exponent,
        repeats,
        iterations_measured: iters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        let p = DecompParams::default();
        assert!(run_bench(&[], &p, 1, 2).is_err());
        assert!(run_bench(&[100], &p, 1, 2).is_err());
        assert!(run_bench(&[32], &p, 1, 2).is_err());
    }

    #[test]
    fn single_repeat_emits_a_table() {
        let p = DecompParams::default();
        let report = run_bench(&[64], &p, 1, 2).unwrap();
        assert_eq!(report.timings.len(), 1);
        assert_eq!(report.timings[0].size, 64);
        assert!(report.timings[0].per_iter_seconds >= 0.0);
    }

    #[test]
    fn median_of_samples() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
