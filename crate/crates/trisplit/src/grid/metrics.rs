//! Image quality metrics and display scaling.

use super::Image2D;
use crate::error::Error;
use crate::Result;

/// Peak signal-to-noise ratio in dB for intensities on the `[0,1]` scale:
/// `PSNR = 10·log₁₀(1 / MSE)`. Identical images give `+∞`.
pub fn psnr(reference: &Image2D, estimate: &Image2D) -> Result<f64> {
    if reference.spec() != estimate.spec() {
        return Err(Error::DimensionMismatch(
            "psnr requires images on the same grid".into(),
        ));
    }
    let mse = reference.sq_diff_sum(estimate) / reference.spec().len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (1.0 / mse).log10())
}

/// Population standard deviation over all pixels.
pub fn stddev(img: &Image2D) -> f64 {
    let mean = img.mean();
    let var = img
        .values()
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / img.spec().len() as f64;
    var.sqrt()
}

/// Affine map of the value range onto `[0,1]` for display. A constant image
/// maps to all 0.5 (display-only degenerate rule).
pub fn linear_scale01(img: &Image2D) -> Image2D {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for v in img.values() {
        min = min.min(*v);
        max = max.max(*v);
    }
    if max > min {
        let scale = 1.0 / (max - min);
        img.map(|v| (v - min) * scale)
    } else {
        img.map(|_| 0.5)
    }
}
