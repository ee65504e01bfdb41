//! Discrete periodic grids: scalar images, per-pixel 2-vectors, and the
//! finite-difference / padding / smoothing / metric operations everything
//! else builds on.
//!
//! Grids are `M×N` (rows × columns) with uniform spacing `h` in both
//! directions and periodic wrap in both axes. Axis 1 runs along rows
//! (index `i`), axis 2 along columns (index `j`).

mod filter;
mod metrics;
mod noise;
mod ops;
mod pad;

pub use filter::gaussian_smooth;
pub use metrics::{linear_scale01, psnr, stddev};
pub use noise::{add_gaussian_noise, random_uniform, NoiseSpec};
pub use ops::{diff, div_backward, grad_forward, inner, laplacian, Axis2, DiffDir};
pub use pad::{crop_pad, pad_symmetric};

use crate::error::Error;
use crate::Result;
use ndarray::Array2;

/// Shape and spacing of a periodic rectangular grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    rows: usize,
    cols: usize,
    spacing: f64,
}

impl GridSpec {
    /// Create a grid spec. Requires `rows ≥ 2`, `cols ≥ 2`, `spacing > 0`.
    pub fn new(rows: usize, cols: usize, spacing: f64) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::param(
                "grid",
                format!("need at least 2×2 pixels, got {rows}×{cols}"),
            ));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::param("spacing", format!("must be positive, got {spacing}")));
        }
        Ok(GridSpec { rows, cols, spacing })
    }

    /// Grid with unit spacing `h = 1` (pixel units).
    pub fn unit(rows: usize, cols: usize) -> Result<Self> {
        GridSpec::new(rows, cols, 1.0)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Total pixel count `M·N`.
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        false // rows, cols ≥ 2 by construction
    }

    /// Pixel area `h²`, the quadrature weight for discrete integrals.
    pub fn cell_area(&self) -> f64 {
        self.spacing * self.spacing
    }
}

/// A real-valued scalar field on a periodic grid.
///
/// Input images are scaled to `[0,1]`; intermediate fields are unbounded.
#[derive(Debug, Clone, PartialEq)]
pub struct Image2D {
    spec: GridSpec,
    values: Array2<f64>,
}

impl Image2D {
    pub fn zeros(spec: GridSpec) -> Self {
        Image2D {
            spec,
            values: Array2::zeros((spec.rows, spec.cols)),
        }
    }

    pub fn constant(spec: GridSpec, value: f64) -> Self {
        Image2D {
            spec,
            values: Array2::from_elem((spec.rows, spec.cols), value),
        }
    }

    /// Wrap an existing array. Fails if the shape disagrees with `spec` or
    /// any value is non-finite.
    pub fn from_array(spec: GridSpec, values: Array2<f64>) -> Result<Self> {
        if values.dim() != (spec.rows, spec.cols) {
            return Err(Error::DimensionMismatch(format!(
                "array is {:?}, spec is {}×{}",
                values.dim(),
                spec.rows,
                spec.cols
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::param("values", "non-finite entry"));
        }
        Ok(Image2D { spec, values })
    }

    /// Build from a function of the (row, col) index.
    pub fn from_fn(spec: GridSpec, f: impl Fn(usize, usize) -> f64) -> Self {
        Image2D {
            spec,
            values: Array2::from_shape_fn((spec.rows, spec.cols), |(i, j)| f(i, j)),
        }
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<f64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[[i, j]]
    }

    /// Elementwise map into a new image.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Image2D {
        Image2D {
            spec: self.spec,
            values: self.values.mapv(&f),
        }
    }

    pub fn mean(&self) -> f64 {
        self.values.sum() / self.spec.len() as f64
    }

    /// Euclidean (root-sum-square) norm over all pixels.
    pub fn norm_l2(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Sum of `(a - b)²` over pixels; the building block for norms and PSNR.
    pub fn sq_diff_sum(&self, other: &Image2D) -> f64 {
        debug_assert_eq!(self.spec, other.spec);
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

impl std::ops::Add for &Image2D {
    type Output = Image2D;
    fn add(self, rhs: &Image2D) -> Image2D {
        assert_eq!(self.spec, rhs.spec, "grid mismatch in image addition");
        Image2D {
            spec: self.spec,
            values: &self.values + &rhs.values,
        }
    }
}

impl std::ops::Sub for &Image2D {
    type Output = Image2D;
    fn sub(self, rhs: &Image2D) -> Image2D {
        assert_eq!(self.spec, rhs.spec, "grid mismatch in image subtraction");
        Image2D {
            spec: self.spec,
            values: &self.values - &rhs.values,
        }
    }
}

/// A 2-vector per pixel, stored as two scalar channels on a shared grid.
///
/// Houses the gradient surrogate `p`, the normal field `λ`, the oscillation
/// potential `s`/`g`, and right-hand-side pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField2D {
    c1: Image2D,
    c2: Image2D,
}

impl VectorField2D {
    pub fn zeros(spec: GridSpec) -> Self {
        VectorField2D {
            c1: Image2D::zeros(spec),
            c2: Image2D::zeros(spec),
        }
    }

    /// Pair two channels; they must share one `GridSpec`.
    pub fn from_channels(c1: Image2D, c2: Image2D) -> Result<Self> {
        if c1.spec() != c2.spec() {
            return Err(Error::DimensionMismatch(
                "vector field channels on different grids".into(),
            ));
        }
        Ok(VectorField2D { c1, c2 })
    }

    pub fn spec(&self) -> GridSpec {
        self.c1.spec
    }

    pub fn c1(&self) -> &Image2D {
        &self.c1
    }

    pub fn c2(&self) -> &Image2D {
        &self.c2
    }

    pub fn c1_mut(&mut self) -> &mut Image2D {
        &mut self.c1
    }

    pub fn c2_mut(&mut self) -> &mut Image2D {
        &mut self.c2
    }

    pub fn into_channels(self) -> (Image2D, Image2D) {
        (self.c1, self.c2)
    }

    /// Pointwise Euclidean magnitude `|v| = √(v₁² + v₂²)`.
    pub fn magnitude(&self) -> Image2D {
        Image2D {
            spec: self.c1.spec,
            values: ndarray::Zip::from(&self.c1.values)
                .and(&self.c2.values)
                .map_collect(|a, b| (a * a + b * b).sqrt()),
        }
    }

    pub fn is_all_finite(&self) -> bool {
        self.c1.is_all_finite() && self.c2.is_all_finite()
    }
}
