//! Per-frequency diagonalization of the scheme's two linear systems.
//!
//! Under periodic boundary conditions the shift operators satisfy
//! `F(S₁±f)(i,j) = e^{±2π√−1 (i−1)/M} F(f)(i,j)` (and likewise along axis 2),
//! so every constant-coefficient stencil becomes a pointwise multiplier in
//! frequency space. The 2×2 system for the normal field λ and the 4×4
//! system for `(v, r, s₁, s₂)` are solved frequency-by-frequency with
//! precomputed inverse blocks, at `O(MN(log M + log N))` per solve.
//!
//! Transform convention: unnormalized forward, `1/(MN)`-scaled inverse.
//! Symbols multiply spectra pointwise, so they are normalization-invariant.

mod lambda;
mod step_four;

pub use lambda::{build_lambda_symbols, solve_lambda_system, LambdaSymbols};
pub use step_four::{
    build_step_four_symbols, build_step_four_symbols_without_smooth, solve_step_four,
    solve_step_four_spectral, StepFourSymbols, StepFourWeights,
};

use crate::error::Error;
use crate::grid::{GridSpec, Image2D};
use crate::Result;
use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// A complex value per frequency index on an `M×N` grid.
#[derive(Debug, Clone)]
pub struct ComplexGrid {
    spec: GridSpec,
    values: Array2<Complex64>,
}

impl ComplexGrid {
    pub fn zeros(spec: GridSpec) -> Self {
        ComplexGrid {
            spec,
            values: Array2::zeros((spec.rows(), spec.cols())),
        }
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn values(&self) -> &Array2<Complex64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.values
    }

    pub fn get(&self, k1: usize, k2: usize) -> Complex64 {
        self.values[[k1, k2]]
    }
}

/// Planned 2-D complex DFT pair for one grid shape.
///
/// Plans are immutable after construction and safe to use from multiple
/// threads on distinct buffers.
pub struct Dft2 {
    spec: GridSpec,
    fwd_len_n: Arc<dyn Fft<f64>>,
    fwd_len_m: Arc<dyn Fft<f64>>,
    inv_len_n: Arc<dyn Fft<f64>>,
    inv_len_m: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Dft2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dft2").field("spec", &self.spec).finish()
    }
}

impl Dft2 {
    pub fn new(spec: GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        Dft2 {
            spec,
            fwd_len_n: planner.plan_fft_forward(spec.cols()),
            fwd_len_m: planner.plan_fft_forward(spec.rows()),
            inv_len_n: planner.plan_fft_inverse(spec.cols()),
            inv_len_m: planner.plan_fft_inverse(spec.rows()),
        }
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    /// Transform every row of `buf` in place with `fft`.
    fn rows_in_place(fft: &Arc<dyn Fft<f64>>, buf: &mut Array2<Complex64>) {
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        for mut row in buf.outer_iter_mut() {
            let slice = row.as_slice_mut().expect("standard layout");
            fft.process_with_scratch(slice, &mut scratch);
        }
    }

    fn transform(
        &self,
        mut buf: Array2<Complex64>,
        len_n: &Arc<dyn Fft<f64>>,
        len_m: &Arc<dyn Fft<f64>>,
    ) -> Array2<Complex64> {
        Self::rows_in_place(len_n, &mut buf);
        // transpose into standard layout so columns become contiguous rows
        let mut t = buf.t().as_standard_layout().into_owned();
        Self::rows_in_place(len_m, &mut t);
        t.t().as_standard_layout().into_owned()
    }

    /// Unnormalized forward 2-D DFT of a real image.
    pub fn forward(&self, img: &Image2D) -> ComplexGrid {
        debug_assert_eq!(img.spec(), self.spec);
        let buf = img.values().mapv(|v| Complex64::new(v, 0.0));
        ComplexGrid {
            spec: self.spec,
            values: self.transform(buf, &self.fwd_len_n, &self.fwd_len_m),
        }
    }

    /// Inverse 2-D DFT scaled by `1/(MN)`; the imaginary residue is bounded
    /// by a debug assertion and discarded.
    pub fn inverse_real(&self, cg: &ComplexGrid) -> Image2D {
        debug_assert_eq!(cg.spec, self.spec);
        let out = self.transform(cg.values.clone(), &self.inv_len_n, &self.inv_len_m);
        let scale = 1.0 / self.spec.len() as f64;
        #[cfg(debug_assertions)]
        {
            let max_mag = out.iter().fold(0.0f64, |m, z| m.max(z.norm()));
            let max_im = out.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
            debug_assert!(
                max_im * scale <= 1e-10 * (max_mag * scale).max(1.0),
                "imaginary residue {:.3e} too large",
                max_im * scale
            );
        }
        Image2D::from_array(self.spec, out.mapv(|z| z.re * scale))
            .expect("inverse transform produced the planned shape")
    }
}

/// Angular frequency `2πk/len` for a 0-based index `k`.
#[inline]
pub(crate) fn angular(k: usize, len: usize) -> f64 {
    2.0 * std::f64::consts::PI * k as f64 / len as f64
}

/// Symbol of the forward difference `∂⁺`: `(e^{iζ} − 1)/h`.
#[inline]
pub(crate) fn fwd_diff_symbol(zeta: f64, h: f64) -> Complex64 {
    (Complex64::from_polar(1.0, zeta) - Complex64::new(1.0, 0.0)) / h
}

/// Symbol of the backward difference `∂⁻`: `(1 − e^{−iζ})/h`.
#[inline]
pub(crate) fn bwd_diff_symbol(zeta: f64, h: f64) -> Complex64 {
    (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -zeta)) / h
}

/// Symbol of the second difference `∂⁻∂⁺`: `2(cos ζ − 1)/h²` (real).
#[inline]
pub(crate) fn second_diff_symbol(zeta: f64, h: f64) -> f64 {
    2.0 * (zeta.cos() - 1.0) / (h * h)
}

/// A singular per-frequency block is a parameter bug; report it precisely.
pub(crate) fn singular_check(det_mag: f64, k1: usize, k2: usize, floor: f64) -> Result<()> {
    if det_mag > floor {
        Ok(())
    } else {
        Err(Error::SingularSymbol {
            i: k1 + 1,
            j: k2 + 1,
            det_mag,
        })
    }
}
