//! Gaussian smoothing by separable periodic convolution.

use super::Image2D;
use crate::error::Error;
use crate::Result;
use ndarray::Array2;

/// Normalized 1-D Gaussian taps truncated at 4σ.
fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (4.0 * sigma).ceil() as usize;
    let mut taps: Vec<f64> = (-(radius as i64)..=radius as i64)
        .map(|k| (-((k * k) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    taps
}

/// Convolve `img` with a normalized discrete Gaussian, wrapping periodically.
/// The kernel sums to one, so the image mean is preserved.
pub fn gaussian_smooth(img: &Image2D, sigma_kernel: f64) -> Result<Image2D> {
    if !(sigma_kernel.is_finite() && sigma_kernel > 0.0) {
        return Err(Error::param(
            "sigma_kernel",
            format!("must be positive, got {sigma_kernel}"),
        ));
    }
    let taps = gaussian_kernel(sigma_kernel);
    let radius = (taps.len() - 1) / 2;
    let spec = img.spec();
    let (m, n) = (spec.rows(), spec.cols());

    // rows pass (convolve along axis 1), then columns pass (axis 2)
    let f = img.values();
    let wrap = |idx: usize, k: usize, len: usize| {
        (idx as i64 + k as i64 - radius as i64).rem_euclid(len as i64) as usize
    };
    let mut tmp = Array2::zeros((m, n));
    for i in 0..m {
        for j in 0..n {
            let mut acc = 0.0;
            for (k, t) in taps.iter().enumerate() {
                acc += t * f[[wrap(i, k, m), j]];
            }
            tmp[[i, j]] = acc;
        }
    }
    let mut out = Array2::zeros((m, n));
    for i in 0..m {
        for j in 0..n {
            let mut acc = 0.0;
            for (k, t) in taps.iter().enumerate() {
                acc += t * tmp[[i, wrap(j, k, n)]];
            }
            out[[i, j]] = acc;
        }
    }
    Ok(Image2D { spec, values: out })
}
