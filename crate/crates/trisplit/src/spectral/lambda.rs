//! The 2×2 per-frequency system for the normal field λ.
//!
//! The frozen-coefficient update solves `(γ₁ − c ∇⁺div⁻) λ = b` for a
//! vector field λ. In frequency space the operator is the 2×2 block
//!
//! ```text
//! a₁₁(i,j) = γ₁ − 2c(cos ζᵢ − 1)/h²          a₁₂(i,j) = c(e^{iζᵢ} − 1)(e^{−iηⱼ} − 1)/h²
//! a₂₁(i,j) = c(e^{iηⱼ} − 1)(e^{−iζᵢ} − 1)/h²  a₂₂(i,j) = γ₁ − 2c(cos ηⱼ − 1)/h²
//! ```
//!
//! with `ζᵢ = 2π(i−1)/M`, `ηⱼ = 2π(j−1)/N`. The determinant
//! `a₁₁a₂₂ − a₁₂a₂₁ = γ₁² + 2cγ₁[(1−cos ζᵢ) + (1−cos ηⱼ)]/h²` is real and
//! bounded below by `γ₁² > 0`, so the block is always invertible.

use super::{angular, bwd_diff_symbol, fwd_diff_symbol, second_diff_symbol, singular_check, Dft2};
use crate::error::Error;
use crate::grid::{GridSpec, VectorField2D};
use crate::Result;
use ndarray::Array2;
use num_complex::Complex64;

/// Precomputed per-frequency coefficients of `γ₁ − c ∇⁺div⁻`.
#[derive(Debug)]
pub struct LambdaSymbols {
    spec: GridSpec,
    gamma1: f64,
    c: f64,
    a11: Array2<f64>,
    a22: Array2<f64>,
    a12: Array2<Complex64>,
    a21: Array2<Complex64>,
    det: Array2<f64>,
    dft: Dft2,
}

impl LambdaSymbols {
    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Entries of the 2×2 block at 0-based frequency `(k1, k2)` in row-major
    /// order `(a₁₁, a₁₂, a₂₁, a₂₂)`.
    pub fn block(&self, k1: usize, k2: usize) -> [Complex64; 4] {
        [
            Complex64::new(self.a11[[k1, k2]], 0.0),
            self.a12[[k1, k2]],
            self.a21[[k1, k2]],
            Complex64::new(self.a22[[k1, k2]], 0.0),
        ]
    }

    pub fn det(&self, k1: usize, k2: usize) -> f64 {
        self.det[[k1, k2]]
    }
}

/// Build the λ-system symbols. Requires `γ₁ > 0` and `c ≥ 0`; the
/// determinant is checked to be nonzero at every frequency.
pub fn build_lambda_symbols(gamma1: f64, c: f64, spec: GridSpec) -> Result<LambdaSymbols> {
    if !(gamma1.is_finite() && gamma1 > 0.0) {
        return Err(Error::param("gamma1", format!("must be positive, got {gamma1}")));
    }
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::param("c", format!("must be ≥ 0, got {c}")));
    }
    let (m, n) = (spec.rows(), spec.cols());
    let h = spec.spacing();
    let mut a11 = Array2::zeros((m, n));
    let mut a22 = Array2::zeros((m, n));
    let mut a12 = Array2::default((m, n));
    let mut a21 = Array2::default((m, n));
    let mut det = Array2::zeros((m, n));
    for k1 in 0..m {
        let zeta = angular(k1, m);
        let fwd1 = fwd_diff_symbol(zeta, h);
        let bwd1 = bwd_diff_symbol(zeta, h);
        let sec1 = second_diff_symbol(zeta, h);
        for k2 in 0..n {
            let eta = angular(k2, n);
            let fwd2 = fwd_diff_symbol(eta, h);
            let bwd2 = bwd_diff_symbol(eta, h);
            let sec2 = second_diff_symbol(eta, h);
            a11[[k1, k2]] = gamma1 - c * sec1;
            a22[[k1, k2]] = gamma1 - c * sec2;
            // off-diagonal blocks of −c∇⁺div⁻: −c ∂ᵃ⁺ ∂ᵇ⁻
            a12[[k1, k2]] = -c * fwd1 * bwd2;
            a21[[k1, k2]] = -c * fwd2 * bwd1;
            let d = a11[[k1, k2]] * a22[[k1, k2]] - (a12[[k1, k2]] * a21[[k1, k2]]).re;
            det[[k1, k2]] = d;
            singular_check(d.abs(), k1, k2, 0.0)?;
        }
    }
    Ok(LambdaSymbols {
        spec,
        gamma1,
        c,
        a11,
        a22,
        a12,
        a21,
        det,
        dft: Dft2::new(spec),
    })
}

/// Solve `(γ₁ − c ∇⁺div⁻) λ = b` by forward transform, per-frequency 2×2
/// inversion, and inverse transform.
pub fn solve_lambda_system(b: &VectorField2D, sym: &LambdaSymbols) -> VectorField2D {
    debug_assert_eq!(b.spec(), sym.spec);
    let bh1 = sym.dft.forward(b.c1());
    let bh2 = sym.dft.forward(b.c2());
    let mut x1 = super::ComplexGrid::zeros(sym.spec);
    let mut x2 = super::ComplexGrid::zeros(sym.spec);
    {
        let (v1, v2) = (x1.values_mut(), x2.values_mut());
        for k1 in 0..sym.spec.rows() {
            for k2 in 0..sym.spec.cols() {
                let rhs1 = bh1.get(k1, k2);
                let rhs2 = bh2.get(k1, k2);
                let inv_det = 1.0 / sym.det[[k1, k2]];
                v1[[k1, k2]] = (rhs1 * sym.a22[[k1, k2]] - sym.a12[[k1, k2]] * rhs2) * inv_det;
                v2[[k1, k2]] = (rhs2 * sym.a11[[k1, k2]] - sym.a21[[k1, k2]] * rhs1) * inv_det;
            }
        }
    }
    VectorField2D::from_channels(sym.dft.inverse_real(&x1), sym.dft.inverse_real(&x2))
        .expect("solver outputs share the input grid")
}
