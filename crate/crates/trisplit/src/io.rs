//! Image file I/O, the decomposition run manifest, and the metrics report.
//!
//! Inputs are grayscale 8- or 16-bit PNG or binary PGM. Outputs are PNG,
//! 16-bit by default so file quantization stays below solver tolerances.
//! The smooth and oscillatory components can be negative: their unscaled
//! files store `x + 0.5` clamped to `[0,1]` (the offset is echoed in
//! `metrics.json`), while the `*_scaled` files carry the display view
//! mapped onto the full range.

use crate::driver::{decompose, DecompParams};
use crate::error::Error;
use crate::grid::{
    add_gaussian_noise, linear_scale01, psnr, stddev, GridSpec, Image2D, NoiseSpec,
};
use crate::Result;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Everything one decomposition run needs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub input: PathBuf,
    /// Clean reference for PSNR reporting, if available.
    pub clean_ref: Option<PathBuf>,
    pub params: DecompParams,
    /// Additive Gaussian noise applied to the input before decomposition,
    /// σ in 1/255 units (e.g. 20 means 20/255).
    pub noise_sigma: Option<f64>,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Write 8-bit PNGs instead of the 16-bit default.
    pub eight_bit: bool,
}

/// Quantities reported by a run; keys are schema-stable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsReport {
    pub psnr_noisy_input: Option<f64>,
    pub psnr_u: Option<f64>,
    pub std_n: f64,
    pub iterations: usize,
    pub elapsed_seconds: f64,
    /// Final relative-change residual; absent when no iteration ran.
    pub residual_final: Option<f64>,
    pub params: DecompParams,
    /// Offset added to the unscaled `w.png` / `n.png` files.
    pub component_offset: f64,
}

/// Read a grayscale image from an 8/16-bit PNG or binary PGM, scaled to
/// `[0,1]`.
pub fn read_gray(path: &Path) -> Result<Image2D> {
    let dynimg = image::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let (img, rows, cols) = match &dynimg {
        image::DynamicImage::ImageLuma8(buf) => {
            let (w, h) = (buf.width() as usize, buf.height() as usize);
            let vals: Vec<f64> = buf.pixels().map(|p| p.0[0] as f64 / 255.0).collect();
            (vals, h, w)
        }
        image::DynamicImage::ImageLuma16(buf) => {
            let (w, h) = (buf.width() as usize, buf.height() as usize);
            let vals: Vec<f64> = buf.pixels().map(|p| p.0[0] as f64 / 65535.0).collect();
            (vals, h, w)
        }
        other => {
            return Err(Error::Io(format!(
                "{}: expected grayscale 8/16-bit, got {:?}",
                path.display(),
                other.color()
            )));
        }
    };
    let spec = GridSpec::unit(rows, cols)?;
    let values = ndarray::Array2::from_shape_vec((rows, cols), img)
        .map_err(|e| Error::Io(e.to_string()))?;
    Image2D::from_array(spec, values)
}

/// Write an image as 16-bit grayscale PNG, clamping to `[0,1]`.
pub fn write_gray16(img: &Image2D, path: &Path) -> Result<()> {
    let (rows, cols) = (img.spec().rows(), img.spec().cols());
    let mut buf = image::ImageBuffer::<image::Luma<u16>, Vec<u16>>::new(cols as u32, rows as u32);
    for (j, i, px) in buf.enumerate_pixels_mut() {
        let v = img.get(i as usize, j as usize).clamp(0.0, 1.0);
        px.0[0] = (v * 65535.0).round() as u16;
    }
    buf.save(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Write an image as 8-bit grayscale PNG, clamping to `[0,1]`.
pub fn write_gray8(img: &Image2D, path: &Path) -> Result<()> {
    let (rows, cols) = (img.spec().rows(), img.spec().cols());
    let mut buf = image::ImageBuffer::<image::Luma<u8>, Vec<u8>>::new(cols as u32, rows as u32);
    for (j, i, px) in buf.enumerate_pixels_mut() {
        let v = img.get(i as usize, j as usize).clamp(0.0, 1.0);
        px.0[0] = (v * 255.0).round() as u8;
    }
    buf.save(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Run one decomposition per the manifest: read, optionally add noise,
/// decompose, and write the seven component images plus `metrics.json`.
/// Nothing is written until every computation has succeeded.
pub fn run_decompose(manifest: &RunManifest) -> Result<MetricsReport> {
    let clean_input = read_gray(&manifest.input)?;
    let clean_ref = manifest
        .clean_ref
        .as_ref()
        .map(|p| read_gray(p))
        .transpose()?;

    let noisy = match manifest.noise_sigma {
        Some(sigma) => add_gaussian_noise(
            &clean_input,
            NoiseSpec::new(sigma / 255.0, manifest.seed)?,
        )?,
        None => clean_input.clone(),
    };

    let result = decompose(&noisy, &manifest.params)?;

    let psnr_noisy_input = clean_ref.as_ref().map(|r| psnr(r, &noisy)).transpose()?;
    let psnr_u = clean_ref.as_ref().map(|r| psnr(r, &result.u)).transpose()?;
    let report = MetricsReport {
        psnr_noisy_input,
        psnr_u,
        std_n: stddev(&result.n),
        iterations: result.iterations,
        elapsed_seconds: result.elapsed,
        residual_final: result.residual_history.last().map(|(a, b)| a.max(*b)),
        params: manifest.params,
        component_offset: 0.5,
    };

    std::fs::create_dir_all(&manifest.out_dir)?;
    let write = |img: &Image2D, name: &str| -> Result<()> {
        let path = manifest.out_dir.join(name);
        if manifest.eight_bit {
            write_gray8(img, &path)
        } else {
            write_gray16(img, &path)
        }
    };
    write(&result.v, "v.png")?;
    write(&result.w.map(|x| x + 0.5), "w.png")?;
    write(&result.n.map(|x| x + 0.5), "n.png")?;
    write(&result.u, "u.png")?;
    write(&linear_scale01(&result.v), "v_scaled.png")?;
    write(&linear_scale01(&result.w), "w_scaled.png")?;
    write(&linear_scale01(&result.n), "n_scaled.png")?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(manifest.out_dir.join("metrics.json"), json)?;
    Ok(report)
}
