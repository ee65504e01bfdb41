//! Symmetric padding and its inverse crop.
//!
//! The border is edge-reflected *including* the border pixel
//! ("replicate-reflect"): a row `(a, b, c)` padded by one becomes
//! `(a, a, b, c, c)`. Folding repeats as needed, so the pad width may
//! exceed the image size.

use super::{GridSpec, Image2D};
use crate::error::Error;
use crate::Result;
use ndarray::Array2;

fn mirror(mut t: i64, m: i64) -> usize {
    loop {
        if t < 0 {
            t = -t - 1;
        } else if t >= m {
            t = 2 * m - 1 - t;
        } else {
            return t as usize;
        }
    }
}

/// Mirror-pad `img` by `width` pixels on each side.
pub fn pad_symmetric(img: &Image2D, width: usize) -> Image2D {
    if width == 0 {
        return img.clone();
    }
    let spec = img.spec();
    let (m, n) = (spec.rows(), spec.cols());
    let (mp, np) = (m + 2 * width, n + 2 * width);
    let w = width as i64;
    let f = img.values();
    let values = Array2::from_shape_fn((mp, np), |(i, j)| {
        let si = mirror(i as i64 - w, m as i64);
        let sj = mirror(j as i64 - w, n as i64);
        f[[si, sj]]
    });
    Image2D {
        spec: GridSpec::new(mp, np, spec.spacing()).expect("padded grid is larger"),
        values,
    }
}

/// Remove a border of `width` pixels from each side; inverse of
/// [`pad_symmetric`] on the padded region.
pub fn crop_pad(img: &Image2D, width: usize) -> Result<Image2D> {
    if width == 0 {
        return Ok(img.clone());
    }
    let spec = img.spec();
    let (m, n) = (spec.rows(), spec.cols());
    if m <= 2 * width || n <= 2 * width {
        return Err(Error::DimensionMismatch(format!(
            "cannot crop {width} pixels per side from a {m}×{n} image"
        )));
    }
    let values = img
        .values()
        .slice(ndarray::s![width..m - width, width..n - width])
        .to_owned();
    let (mc, nc) = values.dim();
    Ok(Image2D {
        spec: GridSpec::new(mc, nc, spec.spacing())?,
        values,
    })
}
