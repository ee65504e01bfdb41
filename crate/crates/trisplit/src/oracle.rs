//! Independent brute-force references used by tests.
//!
//! The two linear solves materialize the periodic stencil operators as
//! explicit dense matrices (column by column, by applying the operator to
//! the standard basis) and solve them with pivoted Gaussian elimination —
//! no FFT anywhere on this path. Grids are capped to keep tests fast.
//!
//! The projection oracle samples the feasible set `{θ=0, |μ|≤1} ∪
//! {θ>0, |μ|=1, q=θμ}` at random and reports the best objective seen.

use crate::error::Error;
use crate::grid::{
    diff, div_backward, grad_forward, inner, laplacian, Axis2, DiffDir, GridSpec, Image2D,
    VectorField2D,
};
use crate::spectral::StepFourWeights;
use crate::Result;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Solve `A x = b` in place by Gaussian elimination with partial pivoting.
/// `a` is row-major `n×n`.
fn lu_solve(a: &mut [f64], b: &mut [f64], n: usize) -> Result<()> {
    debug_assert_eq!(a.len(), n * n);
    for col in 0..n {
        // pivot
        let mut pivot_row = col;
        let mut pivot_mag = a[col * n + col].abs();
        for row in col + 1..n {
            let mag = a[row * n + col].abs();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = row;
            }
        }
        if pivot_mag < 1e-14 {
            return Err(Error::OracleFailure(format!(
                "singular dense matrix (pivot {pivot_mag:.3e} at column {col})"
            )));
        }
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            b.swap(col, pivot_row);
        }
        let inv_pivot = 1.0 / a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] * inv_pivot;
            if factor == 0.0 {
                continue;
            }
            a[row * n + col] = 0.0;
            for k in col + 1..n {
                a[row * n + k] -= factor * a[col * n + k];
            }
            b[row] -= factor * b[col];
        }
    }
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row * n + k] * b[k];
        }
        b[row] = acc / a[row * n + row];
    }
    Ok(())
}

/// Apply `(γ₁ − c ∇⁺div⁻)` with the spatial stencils.
pub fn apply_lambda_operator(v: &VectorField2D, gamma1: f64, c: f64) -> VectorField2D {
    let grad_div = grad_forward(&div_backward(v));
    VectorField2D::from_channels(
        &v.c1().map(|x| gamma1 * x) - &grad_div.c1().map(|x| c * x),
        &v.c2().map(|x| gamma1 * x) - &grad_div.c2().map(|x| c * x),
    )
    .expect("channels share the input grid")
}

/// Apply the κ-shifted step-four operator with the spatial stencils,
/// returning the four equation rows.
pub fn apply_step_four_operator(
    v: &Image2D,
    r: &Image2D,
    s1: &Image2D,
    s2: &Image2D,
    w: &StepFourWeights,
) -> (Image2D, Image2D, Image2D, Image2D) {
    let s = VectorField2D::from_channels(s1.clone(), s2.clone()).expect("shared grid");
    let div_s = div_backward(&s);
    let lap_v = laplacian(v);
    let bilap_r = laplacian(&laplacian(r));
    let tau = w.tau;

    let row1 = Image2D::from_fn(v.spec(), |i, j| {
        -lap_v.get(i, j) + (tau + w.kappa) * v.get(i, j) + tau * r.get(i, j) + tau * div_s.get(i, j)
    });
    let row2 = Image2D::from_fn(v.spec(), |i, j| {
        tau * v.get(i, j)
            + (w.gamma2 + tau + w.kappa) * r.get(i, j)
            + 2.0 * tau * w.alpha_w * bilap_r.get(i, j)
            + tau * div_s.get(i, j)
    });
    let dv1 = diff(v, Axis2::One, DiffDir::Forward);
    let dv2 = diff(v, Axis2::Two, DiffDir::Forward);
    let dr1 = diff(r, Axis2::One, DiffDir::Forward);
    let dr2 = diff(r, Axis2::Two, DiffDir::Forward);
    let dd1 = diff(&div_s, Axis2::One, DiffDir::Forward);
    let dd2 = diff(&div_s, Axis2::Two, DiffDir::Forward);
    let coeff = w.gamma3 + 2.0 * tau * w.alpha_n + w.kappa;
    let row3 = Image2D::from_fn(v.spec(), |i, j| {
        -tau * dv1.get(i, j) - tau * dr1.get(i, j) + coeff * s1.get(i, j) - tau * dd1.get(i, j)
    });
    let row4 = Image2D::from_fn(v.spec(), |i, j| {
        -tau * dv2.get(i, j) - tau * dr2.get(i, j) + coeff * s2.get(i, j) - tau * dd2.get(i, j)
    });
    (row1, row2, row3, row4)
}

fn guard_grid(spec: GridSpec, max_side: usize, what: &str) -> Result<()> {
    if spec.rows() > max_side || spec.cols() > max_side {
        return Err(Error::param(
            "grid",
            format!(
                "{what} oracle capped at {max_side}×{max_side}, got {}×{}",
                spec.rows(),
                spec.cols()
            ),
        ));
    }
    Ok(())
}

/// Dense direct solve of `(γ₁ − c ∇⁺div⁻) λ = b` on a small grid.
pub fn dense_lambda_solve(b: &VectorField2D, gamma1: f64, c: f64) -> Result<VectorField2D> {
    let spec = b.spec();
    guard_grid(spec, 16, "lambda")?;
    let (m, n) = (spec.rows(), spec.cols());
    let mn = m * n;
    let dim = 2 * mn;

    // materialize the operator column by column
    let mut a = vec![0.0; dim * dim];
    for block in 0..2 {
        for pix in 0..mn {
            let mut e = VectorField2D::zeros(spec);
            let channel = if block == 0 { e.c1_mut() } else { e.c2_mut() };
            channel.values_mut()[[pix / n, pix % n]] = 1.0;
            let out = apply_lambda_operator(&e, gamma1, c);
            let col = block * mn + pix;
            for row_pix in 0..mn {
                let (i, j) = (row_pix / n, row_pix % n);
                a[row_pix * dim + col] = out.c1().get(i, j);
                a[(mn + row_pix) * dim + col] = out.c2().get(i, j);
            }
        }
    }
    let mut rhs = Vec::with_capacity(dim);
    rhs.extend(b.c1().values().iter());
    rhs.extend(b.c2().values().iter());
    lu_solve(&mut a, &mut rhs, dim)?;

    let c1 = Image2D::from_fn(spec, |i, j| rhs[i * n + j]);
    let c2 = Image2D::from_fn(spec, |i, j| rhs[mn + i * n + j]);
    VectorField2D::from_channels(c1, c2)
}

/// Dense direct solve of the κ-shifted step-four system on a small grid.
pub fn dense_step_four_solve(
    b1: &Image2D,
    b2: &Image2D,
    b3: &Image2D,
    b4: &Image2D,
    w: &StepFourWeights,
) -> Result<(Image2D, Image2D, Image2D, Image2D)> {
    let spec = b1.spec();
    guard_grid(spec, 12, "step-four")?;
    let (m, n) = (spec.rows(), spec.cols());
    let mn = m * n;
    let dim = 4 * mn;

    let mut a = vec![0.0; dim * dim];
    for block in 0..4 {
        for pix in 0..mn {
            let mut fields = [
                Image2D::zeros(spec),
                Image2D::zeros(spec),
                Image2D::zeros(spec),
                Image2D::zeros(spec),
            ];
            fields[block].values_mut()[[pix / n, pix % n]] = 1.0;
            let [v, r, s1, s2] = fields;
            let (r1, r2, r3, r4) = apply_step_four_operator(&v, &r, &s1, &s2, w);
            let col = block * mn + pix;
            for row_pix in 0..mn {
                let (i, j) = (row_pix / n, row_pix % n);
                a[row_pix * dim + col] = r1.get(i, j);
                a[(mn + row_pix) * dim + col] = r2.get(i, j);
                a[(2 * mn + row_pix) * dim + col] = r3.get(i, j);
                a[(3 * mn + row_pix) * dim + col] = r4.get(i, j);
            }
        }
    }
    let mut rhs = Vec::with_capacity(dim);
    for b in [b1, b2, b3, b4] {
        rhs.extend(b.values().iter());
    }
    lu_solve(&mut a, &mut rhs, dim)?;

    let pick = |block: usize| Image2D::from_fn(spec, |i, j| rhs[block * mn + i * n + j]);
    Ok((pick(0), pick(1), pick(2), pick(3)))
}

#[inline]
fn u01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Objective of the pointwise projection problem:
/// `G(q, μ) = |q − p|² + γ₁ |μ − λ|²`.
fn g_value(q: (f64, f64), mu: (f64, f64), p: (f64, f64), lambda: (f64, f64), gamma1: f64) -> f64 {
    let dq = (q.0 - p.0, q.1 - p.1);
    let dm = (mu.0 - lambda.0, mu.1 - lambda.1);
    dq.0 * dq.0 + dq.1 * dq.1 + gamma1 * (dm.0 * dm.0 + dm.1 * dm.1)
}

/// Best objective value over random feasible samples for the per-pixel
/// projection at one point. The input pair itself is included as a
/// candidate when it is already feasible.
pub fn brute_force_project_s(
    p: (f64, f64),
    lambda: (f64, f64),
    gamma1: f64,
    samples: usize,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let p_mag = (p.0 * p.0 + p.1 * p.1).sqrt();
    let lam_mag = (lambda.0 * lambda.0 + lambda.1 * lambda.1).sqrt();
    let mut best = f64::INFINITY;

    // the input point, when it already lies in the feasible set
    let dot = p.0 * lambda.0 + p.1 * lambda.1;
    if (dot - p_mag).abs() <= 1e-12 * (1.0 + p_mag) && lam_mag <= 1.0 + 1e-12 {
        best = 0.0;
    }

    let theta_max = 3.0 * p_mag;
    for k in 0..samples {
        let angle = 2.0 * std::f64::consts::PI * u01(&mut rng);
        let (mu1, mu2) = (angle.cos(), angle.sin());
        let g = if k % 2 == 0 {
            // χ₁: q = 0, μ anywhere in the unit disc (area-uniform)
            let rad = u01(&mut rng).sqrt();
            g_value((0.0, 0.0), (rad * mu1, rad * mu2), p, lambda, gamma1)
        } else {
            // χ₂: unit μ, q = θμ
            let theta = theta_max * u01(&mut rng);
            g_value((theta * mu1, theta * mu2), (mu1, mu2), p, lambda, gamma1)
        };
        best = best.min(g);
    }
    best
}

/// Discrete Hessian energy `½ Σ [(∂₁⁻∂₁⁺w)² + 2(∂₁⁺∂₂⁺w)² + (∂₂⁻∂₂⁺w)²]`.
pub fn hessian_energy(w: &Image2D) -> f64 {
    let wxx = diff(&diff(w, Axis2::One, DiffDir::Forward), Axis2::One, DiffDir::Backward);
    let wyy = diff(&diff(w, Axis2::Two, DiffDir::Forward), Axis2::Two, DiffDir::Backward);
    let wxy = diff(&diff(w, Axis2::One, DiffDir::Forward), Axis2::Two, DiffDir::Forward);
    0.5 * (inner(&wxx, &wxx) + 2.0 * inner(&wxy, &wxy) + inner(&wyy, &wyy))
}

/// Discrete Laplacian energy `½ Σ (Δw)²`.
pub fn laplacian_energy(w: &Image2D) -> f64 {
    let lap = laplacian(w);
    0.5 * inner(&lap, &lap)
}

/// Central finite-difference gradients of the Hessian and Laplacian
/// energies, with an explicit probe step.
pub fn energy_gradient_check_with_step(w: &Image2D, step: f64) -> Result<(Image2D, Image2D)> {
    guard_grid(w.spec(), 16, "energy-gradient")?;
    let grad_of = |energy: &dyn Fn(&Image2D) -> f64| {
        Image2D::from_fn(w.spec(), |i, j| {
            let mut plus = w.clone();
            plus.values_mut()[[i, j]] += step;
            let mut minus = w.clone();
            minus.values_mut()[[i, j]] -= step;
            (energy(&plus) - energy(&minus)) / (2.0 * step)
        })
    };
    Ok((grad_of(&hessian_energy), grad_of(&laplacian_energy)))
}

/// Finite-difference gradients with the default probe step `1e−5`.
pub fn energy_gradient_check(w: &Image2D) -> Result<(Image2D, Image2D)> {
    energy_gradient_check_with_step(w, 1e-5)
}
