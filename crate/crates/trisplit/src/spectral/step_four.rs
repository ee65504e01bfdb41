//! The 4×4 per-frequency system of the coupled fourth fractional step.
//!
//! The step couples the structure image `v`, the smooth part `r`, and the
//! oscillation potential `s = (s₁, s₂)` through
//!
//! ```text
//! (−Δ + τ) v            + τ r                           + τ div⁻s                  = b₁
//! τ v                   + [(γ₂+τ) + 2τα_w Δ²] r         + τ div⁻s                  = b₂
//! −τ ∂₁⁺v               − τ ∂₁⁺r     + [(γ₃+2τα_n) − τ∇div]s (row for s₁)          = b₃
//! −τ ∂₂⁺v               − τ ∂₂⁺r     + [(γ₃+2τα_n) − τ∇div]s (row for s₂)          = b₄
//! ```
//!
//! All blocks are periodic constant-coefficient stencils, so the discrete
//! Fourier transform turns the system into an independent 4×4 complex solve
//! per frequency. A small constant κ is added to the diagonal of each block
//! for stability, and the inverses are precomputed once by Cramer's rule and
//! reused every iteration.
//!
//! Dropping the smooth unknown (ablation variants without `w`) deletes row
//! and column 2, leaving a 3×3 system in `(v, s₁, s₂)`; `γ₂` then plays no
//! role.

use super::{angular, bwd_diff_symbol, fwd_diff_symbol, second_diff_symbol, singular_check, Dft2};
use crate::error::Error;
use crate::grid::{GridSpec, Image2D};
use crate::Result;
use num_complex::Complex64;

/// Weights entering the step-four system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepFourWeights {
    pub tau: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub alpha_w: f64,
    pub alpha_n: f64,
    pub kappa: f64,
}

impl StepFourWeights {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tau", self.tau),
            ("gamma2", self.gamma2),
            ("gamma3", self.gamma3),
            ("alpha_w", self.alpha_w),
            ("alpha_n", self.alpha_n),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("must be positive, got {v}")));
            }
        }
        if !(self.kappa.is_finite() && self.kappa >= 0.0) {
            return Err(Error::param("kappa", format!("must be ≥ 0, got {}", self.kappa)));
        }
        Ok(())
    }
}

/// Precomputed per-frequency inverse blocks for the step-four solve.
#[derive(Debug)]
pub struct StepFourSymbols {
    spec: GridSpec,
    weights: StepFourWeights,
    includes_smooth: bool,
    /// Row-major inverse blocks, 16 entries per frequency (full) or 9
    /// (reduced), frequency index `k1·N + k2`.
    inv: Vec<Complex64>,
    dft: Dft2,
}

impl StepFourSymbols {
    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn weights(&self) -> StepFourWeights {
        self.weights
    }

    /// Whether the smooth unknown is part of the system (full 4×4) or
    /// eliminated (reduced 3×3).
    pub fn includes_smooth(&self) -> bool {
        self.includes_smooth
    }

    /// The κ-shifted 4×4 block `D` at 0-based frequency `(k1, k2)`,
    /// recomputed from the trigonometric formulas.
    pub fn symbol_block(&self, k1: usize, k2: usize) -> [[Complex64; 4]; 4] {
        full_block(&self.weights, self.spec, k1, k2)
    }

    /// The transform pair planned for this grid.
    pub fn dft(&self) -> &Dft2 {
        &self.dft
    }
}

/// Entries of the κ-shifted 4×4 symbol matrix at one frequency.
fn full_block(w: &StepFourWeights, spec: GridSpec, k1: usize, k2: usize) -> [[Complex64; 4]; 4] {
    let h = spec.spacing();
    let zeta = angular(k1, spec.rows());
    let eta = angular(k2, spec.cols());
    let fwd1 = fwd_diff_symbol(zeta, h);
    let fwd2 = fwd_diff_symbol(eta, h);
    let bwd1 = bwd_diff_symbol(zeta, h);
    let bwd2 = bwd_diff_symbol(eta, h);
    let sec1 = second_diff_symbol(zeta, h);
    let sec2 = second_diff_symbol(eta, h);
    let lap = sec1 + sec2; // symbol of Δ (real, ≤ 0)
    let tau = w.tau;
    let re = |x: f64| Complex64::new(x, 0.0);

    let d11 = re(tau - lap + w.kappa);
    let d12 = re(tau);
    let d13 = bwd1 * tau; // τ ∂₁⁻
    let d14 = bwd2 * tau;
    let d21 = re(tau);
    let d22 = re(w.gamma2 + tau + 2.0 * tau * w.alpha_w * lap * lap + w.kappa);
    let d23 = d13;
    let d24 = d14;
    let d31 = -fwd1 * tau; // −τ ∂₁⁺
    let d32 = d31;
    let d33 = re(w.gamma3 + 2.0 * tau * w.alpha_n - tau * sec1 + w.kappa);
    let d34 = -(fwd1 * bwd2) * tau; // −τ ∂₁⁺∂₂⁻
    let d41 = -fwd2 * tau;
    let d42 = d41;
    let d43 = -(fwd2 * bwd1) * tau;
    let d44 = re(w.gamma3 + 2.0 * tau * w.alpha_n - tau * sec2 + w.kappa);

    [
        [d11, d12, d13, d14],
        [d21, d22, d23, d24],
        [d31, d32, d33, d34],
        [d41, d42, d43, d44],
    ]
}

/// 3×3 complex inverse by the adjugate; returns (det, inverse).
fn inv3(a: &[[Complex64; 3]; 3]) -> (Complex64, [Complex64; 9]) {
    let c00 = a[1][1] * a[2][2] - a[1][2] * a[2][1];
    let c01 = a[1][2] * a[2][0] - a[1][0] * a[2][2];
    let c02 = a[1][0] * a[2][1] - a[1][1] * a[2][0];
    let det = a[0][0] * c00 + a[0][1] * c01 + a[0][2] * c02;
    let inv_det = Complex64::new(1.0, 0.0) / det;
    let inv = [
        c00 * inv_det,
        (a[0][2] * a[2][1] - a[0][1] * a[2][2]) * inv_det,
        (a[0][1] * a[1][2] - a[0][2] * a[1][1]) * inv_det,
        c01 * inv_det,
        (a[0][0] * a[2][2] - a[0][2] * a[2][0]) * inv_det,
        (a[0][2] * a[1][0] - a[0][0] * a[1][2]) * inv_det,
        c02 * inv_det,
        (a[0][1] * a[2][0] - a[0][0] * a[2][1]) * inv_det,
        (a[0][0] * a[1][1] - a[0][1] * a[1][0]) * inv_det,
    ];
    (det, inv)
}

/// 4×4 complex inverse by cofactor expansion over 2×2 minors (Cramer).
fn inv4(a: &[[Complex64; 4]; 4]) -> (Complex64, [Complex64; 16]) {
    let s0 = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let s1 = a[0][0] * a[1][2] - a[0][2] * a[1][0];
    let s2 = a[0][0] * a[1][3] - a[0][3] * a[1][0];
    let s3 = a[0][1] * a[1][2] - a[0][2] * a[1][1];
    let s4 = a[0][1] * a[1][3] - a[0][3] * a[1][1];
    let s5 = a[0][2] * a[1][3] - a[0][3] * a[1][2];
    let c5 = a[2][2] * a[3][3] - a[2][3] * a[3][2];
    let c4 = a[2][1] * a[3][3] - a[2][3] * a[3][1];
    let c3 = a[2][1] * a[3][2] - a[2][2] * a[3][1];
    let c2 = a[2][0] * a[3][3] - a[2][3] * a[3][0];
    let c1 = a[2][0] * a[3][2] - a[2][2] * a[3][0];
    let c0 = a[2][0] * a[3][1] - a[2][1] * a[3][0];
    let det = s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
    let inv_det = Complex64::new(1.0, 0.0) / det;
    let inv = [
        (a[1][1] * c5 - a[1][2] * c4 + a[1][3] * c3) * inv_det,
        (-a[0][1] * c5 + a[0][2] * c4 - a[0][3] * c3) * inv_det,
        (a[3][1] * s5 - a[3][2] * s4 + a[3][3] * s3) * inv_det,
        (-a[2][1] * s5 + a[2][2] * s4 - a[2][3] * s3) * inv_det,
        (-a[1][0] * c5 + a[1][2] * c2 - a[1][3] * c1) * inv_det,
        (a[0][0] * c5 - a[0][2] * c2 + a[0][3] * c1) * inv_det,
        (-a[3][0] * s5 + a[3][2] * s2 - a[3][3] * s1) * inv_det,
        (a[2][0] * s5 - a[2][2] * s2 + a[2][3] * s1) * inv_det,
        (a[1][0] * c4 - a[1][1] * c2 + a[1][3] * c0) * inv_det,
        (-a[0][0] * c4 + a[0][1] * c2 - a[0][3] * c0) * inv_det,
        (a[3][0] * s4 - a[3][1] * s2 + a[3][3] * s0) * inv_det,
        (-a[2][0] * s4 + a[2][1] * s2 - a[2][3] * s0) * inv_det,
        (-a[1][0] * c3 + a[1][1] * c1 - a[1][2] * c0) * inv_det,
        (a[0][0] * c3 - a[0][1] * c1 + a[0][2] * c0) * inv_det,
        (-a[3][0] * s3 + a[3][1] * s1 - a[3][2] * s0) * inv_det,
        (a[2][0] * s3 - a[2][1] * s1 + a[2][2] * s0) * inv_det,
    ];
    (det, inv)
}

fn build(weights: StepFourWeights, spec: GridSpec, includes_smooth: bool) -> Result<StepFourSymbols> {
    weights.validate()?;
    let (m, n) = (spec.rows(), spec.cols());
    let block_len = if includes_smooth { 16 } else { 9 };
    let mut inv = Vec::with_capacity(m * n * block_len);
    for k1 in 0..m {
        for k2 in 0..n {
            let d = full_block(&weights, spec, k1, k2);
            if includes_smooth {
                let (det, block_inv) = inv4(&d);
                singular_check(det.norm(), k1, k2, 0.0)?;
                inv.extend_from_slice(&block_inv);
            } else {
                // delete row/column 2 (the smooth unknown)
                let keep = [0usize, 2, 3];
                let mut r = [[Complex64::default(); 3]; 3];
                for (a, &ia) in keep.iter().enumerate() {
                    for (b, &ib) in keep.iter().enumerate() {
                        r[a][b] = d[ia][ib];
                    }
                }
                let (det, block_inv) = inv3(&r);
                singular_check(det.norm(), k1, k2, 0.0)?;
                inv.extend_from_slice(&block_inv);
            }
        }
    }
    Ok(StepFourSymbols {
        spec,
        weights,
        includes_smooth,
        inv,
        dft: Dft2::new(spec),
    })
}

/// Build the full 4×4 symbols for `(v, r, s₁, s₂)`.
pub fn build_step_four_symbols(weights: StepFourWeights, spec: GridSpec) -> Result<StepFourSymbols> {
    build(weights, spec, true)
}

/// Build the reduced 3×3 symbols for `(v, s₁, s₂)` with the smooth unknown
/// eliminated.
pub fn build_step_four_symbols_without_smooth(
    weights: StepFourWeights,
    spec: GridSpec,
) -> Result<StepFourSymbols> {
    build(weights, spec, false)
}

fn spectrum_from_vec(spec: GridSpec, v: Vec<Complex64>) -> super::ComplexGrid {
    let values = ndarray::Array2::from_shape_vec((spec.rows(), spec.cols()), v)
        .expect("solver buffers match the grid");
    let mut cg = super::ComplexGrid::zeros(spec);
    *cg.values_mut() = values;
    cg
}

/// Apply the precomputed inverse blocks to already-transformed right-hand
/// sides. Reduced symbols ignore `b̂₂` and return an all-zero `r̂`.
pub fn solve_step_four_spectral(
    bh1: &super::ComplexGrid,
    bh2: &super::ComplexGrid,
    bh3: &super::ComplexGrid,
    bh4: &super::ComplexGrid,
    sym: &StepFourSymbols,
) -> (
    super::ComplexGrid,
    super::ComplexGrid,
    super::ComplexGrid,
    super::ComplexGrid,
) {
    let spec = sym.spec;
    let len = spec.len();
    if sym.includes_smooth {
        let b = [
            bh1.values().as_slice().unwrap(),
            bh2.values().as_slice().unwrap(),
            bh3.values().as_slice().unwrap(),
            bh4.values().as_slice().unwrap(),
        ];
        let mut x = vec![vec![Complex64::default(); len]; 4];
        for idx in 0..len {
            let block = &sym.inv[idx * 16..idx * 16 + 16];
            let rhs = [b[0][idx], b[1][idx], b[2][idx], b[3][idx]];
            for (l, out) in x.iter_mut().enumerate() {
                out[idx] = block[l * 4] * rhs[0]
                    + block[l * 4 + 1] * rhs[1]
                    + block[l * 4 + 2] * rhs[2]
                    + block[l * 4 + 3] * rhs[3];
            }
        }
        let mut it = x.into_iter();
        (
            spectrum_from_vec(spec, it.next().unwrap()),
            spectrum_from_vec(spec, it.next().unwrap()),
            spectrum_from_vec(spec, it.next().unwrap()),
            spectrum_from_vec(spec, it.next().unwrap()),
        )
    } else {
        let b = [
            bh1.values().as_slice().unwrap(),
            bh3.values().as_slice().unwrap(),
            bh4.values().as_slice().unwrap(),
        ];
        let mut x = vec![vec![Complex64::default(); len]; 3];
        for idx in 0..len {
            let block = &sym.inv[idx * 9..idx * 9 + 9];
            let rhs = [b[0][idx], b[1][idx], b[2][idx]];
            for (l, out) in x.iter_mut().enumerate() {
                out[idx] =
                    block[l * 3] * rhs[0] + block[l * 3 + 1] * rhs[1] + block[l * 3 + 2] * rhs[2];
            }
        }
        let mut it = x.into_iter();
        (
            spectrum_from_vec(spec, it.next().unwrap()),
            super::ComplexGrid::zeros(spec),
            spectrum_from_vec(spec, it.next().unwrap()),
            spectrum_from_vec(spec, it.next().unwrap()),
        )
    }
}

/// Solve the κ-shifted step-four system for the given right-hand sides.
/// Returns `(v, r, s₁, s₂)`; reduced symbols ignore `b₂` and return an
/// all-zero `r`.
pub fn solve_step_four(
    b1: &Image2D,
    b2: &Image2D,
    b3: &Image2D,
    b4: &Image2D,
    sym: &StepFourSymbols,
) -> (Image2D, Image2D, Image2D, Image2D) {
    let spec = sym.spec;
    debug_assert!(b1.spec() == spec && b2.spec() == spec && b3.spec() == spec && b4.spec() == spec);
    let bh1 = sym.dft.forward(b1);
    let bh3 = sym.dft.forward(b3);
    let bh4 = sym.dft.forward(b4);
    if sym.includes_smooth {
        let bh2 = sym.dft.forward(b2);
        let (x1, x2, x3, x4) = solve_step_four_spectral(&bh1, &bh2, &bh3, &bh4, sym);
        (
            sym.dft.inverse_real(&x1),
            sym.dft.inverse_real(&x2),
            sym.dft.inverse_real(&x3),
            sym.dft.inverse_real(&x4),
        )
    } else {
        let bh2 = super::ComplexGrid::zeros(spec);
        let (x1, _, x3, x4) = solve_step_four_spectral(&bh1, &bh2, &bh3, &bh4, sym);
        (
            sym.dft.inverse_real(&x1),
            Image2D::zeros(spec),
            sym.dft.inverse_real(&x3),
            sym.dft.inverse_real(&x4),
        )
    }
}
