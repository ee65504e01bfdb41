//! Periodic finite-difference stencils.
//!
//! Four first-difference operators with periodic wrap:
//!
//! ```text
//! ∂₁⁻f(i,j) = (f(i,j) − f(i−1,j))/h      ∂₁⁺f(i,j) = (f(i+1,j) − f(i,j))/h
//! ∂₂⁻f(i,j) = (f(i,j) − f(i,j−1))/h      ∂₂⁺f(i,j) = (f(i,j+1) − f(i,j))/h
//! ```
//!
//! with indices wrapping modulo M (axis 1) and N (axis 2). The forward
//! gradient pairs with the backward divergence throughout; the Laplacian is
//! their composition `Δ = div⁻ ∇⁺`, which recovers the 5-point central
//! scheme.

use super::{Image2D, VectorField2D};
use ndarray::Array2;

/// Spatial axis: `One` runs along rows (index i), `Two` along columns (index j).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis2 {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffDir {
    Forward,
    Backward,
}

/// First difference of `img` along `axis` in direction `dir`, with periodic
/// wrap, divided by the grid spacing.
pub fn diff(img: &Image2D, axis: Axis2, dir: DiffDir) -> Image2D {
    let spec = img.spec();
    let (m, n) = (spec.rows(), spec.cols());
    let inv_h = 1.0 / spec.spacing();
    let f = img.values();
    let mut out = Array2::zeros((m, n));
    match (axis, dir) {
        (Axis2::One, DiffDir::Forward) => {
            for i in 0..m {
                let inext = if i + 1 == m { 0 } else { i + 1 };
                for j in 0..n {
                    out[[i, j]] = (f[[inext, j]] - f[[i, j]]) * inv_h;
                }
            }
        }
        (Axis2::One, DiffDir::Backward) => {
            for i in 0..m {
                let iprev = if i == 0 { m - 1 } else { i - 1 };
                for j in 0..n {
                    out[[i, j]] = (f[[i, j]] - f[[iprev, j]]) * inv_h;
                }
            }
        }
        (Axis2::Two, DiffDir::Forward) => {
            for i in 0..m {
                for j in 0..n {
                    let jnext = if j + 1 == n { 0 } else { j + 1 };
                    out[[i, j]] = (f[[i, jnext]] - f[[i, j]]) * inv_h;
                }
            }
        }
        (Axis2::Two, DiffDir::Backward) => {
            for i in 0..m {
                for j in 0..n {
                    let jprev = if j == 0 { n - 1 } else { j - 1 };
                    out[[i, j]] = (f[[i, j]] - f[[i, jprev]]) * inv_h;
                }
            }
        }
    }
    Image2D {
        spec,
        values: out,
    }
}

/// Forward gradient `∇⁺f = (∂₁⁺f, ∂₂⁺f)`.
pub fn grad_forward(img: &Image2D) -> VectorField2D {
    VectorField2D {
        c1: diff(img, Axis2::One, DiffDir::Forward),
        c2: diff(img, Axis2::Two, DiffDir::Forward),
    }
}

/// Backward divergence `div⁻p = ∂₁⁻p₁ + ∂₂⁻p₂`.
pub fn div_backward(vf: &VectorField2D) -> Image2D {
    let d1 = diff(vf.c1(), Axis2::One, DiffDir::Backward);
    let d2 = diff(vf.c2(), Axis2::Two, DiffDir::Backward);
    &d1 + &d2
}

/// Discrete Laplacian `Δf = div⁻(∇⁺f)`, exactly the composition.
pub fn laplacian(img: &Image2D) -> Image2D {
    div_backward(&grad_forward(img))
}

/// Discrete inner product `Σᵢⱼ a(i,j)·b(i,j)` (no cell-area weight).
pub fn inner(a: &Image2D, b: &Image2D) -> f64 {
    debug_assert_eq!(a.spec(), b.spec());
    a.values()
        .iter()
        .zip(b.values().iter())
        .map(|(x, y)| x * y)
        .sum()
}
