//! The four fractional steps of the operator-splitting scheme.
//!
//! One outer iteration advances the state `(p, λ, r, s)` through
//!
//! 1. a hard threshold on `p` from the gradient-sparsity term,
//! 2. a curvature shrink on `p` followed by a frozen-coefficient linear
//!    solve for the normal field `λ`,
//! 3. a pointwise projection of `(p, λ)` onto the constraint set
//!    `S = {(q, μ) : q·μ = |q|, |μ| ≤ 1}`,
//! 4. a coupled linear solve for `(v, r, s)`, after which `p = ∇⁺v`.
//!
//! Every step leaves the variables its subproblem freezes untouched.

use crate::error::Error;
use crate::grid::{
    diff, div_backward, grad_forward, Axis2, DiffDir, GridSpec, Image2D, VectorField2D,
};
use crate::spectral::{solve_lambda_system, solve_step_four, LambdaSymbols, StepFourSymbols};
use crate::Result;
use ndarray::Zip;

/// Full iterate of the splitting scheme.
///
/// `p` is the gradient surrogate, `lambda` the level-line normal surrogate,
/// `r` the smooth-part surrogate, `s` the oscillation potential, and `v`
/// the current structure image (`p = ∇⁺v` after each full iteration).
#[derive(Debug, Clone)]
pub struct SplitState {
    pub p: VectorField2D,
    pub lambda: VectorField2D,
    pub r: Image2D,
    pub s: VectorField2D,
    pub v: Image2D,
}

impl SplitState {
    pub fn spec(&self) -> GridSpec {
        self.v.spec()
    }

    pub fn is_all_finite(&self) -> bool {
        self.p.is_all_finite()
            && self.lambda.is_all_finite()
            && self.r.is_all_finite()
            && self.s.is_all_finite()
            && self.v.is_all_finite()
    }
}

/// Controls the fixed-point iteration inside the projection step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionConfig {
    /// Stop when successive θ iterates differ by less than this.
    pub epsilon: f64,
    /// Hard cap on fixed-point iterations per pixel.
    pub max_fixed_point_iters: usize,
    pub gamma1: f64,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        ProjectionConfig {
            epsilon: 1e-6,
            max_fixed_point_iters: 50,
            gamma1: 1.0,
        }
    }
}

impl ProjectionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::param("epsilon", "must be positive"));
        }
        if self.max_fixed_point_iters == 0 {
            return Err(Error::param("max_fixed_point_iters", "must be positive"));
        }
        if !(self.gamma1.is_finite() && self.gamma1 > 0.0) {
            return Err(Error::param("gamma1", "must be positive"));
        }
        Ok(())
    }
}

fn field_from_channels(c1: Image2D, c2: Image2D) -> VectorField2D {
    VectorField2D::from_channels(c1, c2).expect("channels share one grid")
}

/// Hard threshold from the gradient-sparsity subproblem: zero the pixel
/// vector wherever `|p|² ≤ τα₀/2`, keep it unchanged otherwise.
pub fn threshold_l0(p: &VectorField2D, tau: f64, alpha0: f64) -> VectorField2D {
    let threshold = tau * alpha0 / 2.0;
    let mut c1 = p.c1().clone();
    let mut c2 = p.c2().clone();
    Zip::from(c1.values_mut())
        .and(c2.values_mut())
        .for_each(|a, b| {
            if *a * *a + *b * *b <= threshold {
                *a = 0.0;
                *b = 0.0;
            }
        });
    field_from_channels(c1, c2)
}

/// Soft shrink of `|p|` by `τ·α_curv·|div⁻λ|²` per pixel, preserving
/// direction and clamping at zero. Zero vectors stay zero.
pub fn curvature_shrink(
    p: &VectorField2D,
    lambda: &VectorField2D,
    tau: f64,
    alpha_curv: f64,
) -> VectorField2D {
    let div_lambda = div_backward(lambda);
    let mut c1 = p.c1().clone();
    let mut c2 = p.c2().clone();
    Zip::from(c1.values_mut())
        .and(c2.values_mut())
        .and(div_lambda.values())
        .for_each(|a, b, d| {
            let mag = (*a * *a + *b * *b).sqrt();
            if mag == 0.0 {
                return;
            }
            let factor = (1.0 - tau * alpha_curv * d * d / mag).max(0.0);
            *a *= factor;
            *b *= factor;
        });
    field_from_channels(c1, c2)
}

/// Frozen-coefficient update of the normal field: solve
/// `(γ₁ − c∇⁺div⁻)λ = γ₁λₒ − c∇⁺(div⁻λₒ) + 2τα_curv ∇⁺(|p|·div⁻λₒ)`
/// through the per-frequency 2×2 system.
pub fn lambda_update(
    p: &VectorField2D,
    lambda: &VectorField2D,
    tau: f64,
    alpha_curv: f64,
    sym: &LambdaSymbols,
) -> VectorField2D {
    debug_assert_eq!(p.spec(), sym.spec());
    let gamma1 = sym.gamma1();
    let c = sym.c();
    let div_lambda = div_backward(lambda);
    let p_mag = p.magnitude();
    let weighted = Image2D::from_fn(p.spec(), |i, j| p_mag.get(i, j) * div_lambda.get(i, j));
    let grad_div = grad_forward(&div_lambda);
    let grad_weighted = grad_forward(&weighted);
    let scale = 2.0 * tau * alpha_curv;
    let b1 = Image2D::from_fn(p.spec(), |i, j| {
        gamma1 * lambda.c1().get(i, j) - c * grad_div.c1().get(i, j)
            + scale * grad_weighted.c1().get(i, j)
    });
    let b2 = Image2D::from_fn(p.spec(), |i, j| {
        gamma1 * lambda.c2().get(i, j) - c * grad_div.c2().get(i, j)
            + scale * grad_weighted.c2().get(i, j)
    });
    solve_lambda_system(&field_from_channels(b1, b2), sym)
}

/// Objective of the pointwise projection problem, used to compare the two
/// candidate branches: `G(q,μ) = |q−p|² + γ₁|μ−λ|²`.
pub fn projection_g(
    q: (f64, f64),
    mu: (f64, f64),
    p: (f64, f64),
    lambda: (f64, f64),
    gamma1: f64,
) -> f64 {
    let dq0 = q.0 - p.0;
    let dq1 = q.1 - p.1;
    let dm0 = mu.0 - lambda.0;
    let dm1 = mu.1 - lambda.1;
    dq0 * dq0 + dq1 * dq1 + gamma1 * (dm0 * dm0 + dm1 * dm1)
}

/// Project one pixel pair onto `S`; returns `(p̂, λ̂)`.
///
/// Branch χ₁ zeroes `p` and clips `λ` into the unit disc. Branch χ₂ keeps a
/// positive magnitude θ with unit `λ`, found by the fixed-point iteration
/// `θ ↦ max{0, y·(θy + γ₁w)/|θy + γ₁w|}` started at `θ⁰ = |y|`. Whichever
/// candidate has the smaller `G` wins; ties go to χ₁. If the fixed-point
/// denominator degenerates the χ₂ branch is abandoned (χ₁ is always
/// feasible).
pub fn project_pixel(
    y: (f64, f64),
    w: (f64, f64),
    cfg: &ProjectionConfig,
) -> ((f64, f64), (f64, f64)) {
    let gamma1 = cfg.gamma1;

    let w_mag = (w.0 * w.0 + w.1 * w.1).sqrt();
    let clip = w_mag.max(1.0);
    let cand1 = ((0.0, 0.0), (w.0 / clip, w.1 / clip));
    let g1 = projection_g(cand1.0, cand1.1, y, w, gamma1);

    let mut theta = (y.0 * y.0 + y.1 * y.1).sqrt();
    for _ in 0..cfg.max_fixed_point_iters {
        let u = (theta * y.0 + gamma1 * w.0, theta * y.1 + gamma1 * w.1);
        let u_mag = (u.0 * u.0 + u.1 * u.1).sqrt();
        if u_mag < 1e-12 {
            return cand1;
        }
        let next = ((y.0 * u.0 + y.1 * u.1) / u_mag).max(0.0);
        let delta = (next - theta).abs();
        theta = next;
        if delta < cfg.epsilon {
            break;
        }
    }
    let u = (theta * y.0 + gamma1 * w.0, theta * y.1 + gamma1 * w.1);
    let u_mag = (u.0 * u.0 + u.1 * u.1).sqrt();
    if u_mag < 1e-12 {
        return cand1;
    }
    let mu = (u.0 / u_mag, u.1 / u_mag);
    let q = (theta * mu.0, theta * mu.1);
    let g2 = projection_g(q, mu, y, w, gamma1);
    if g1 <= g2 {
        cand1
    } else {
        (q, mu)
    }
}

/// Pointwise projection of `(p, λ)` onto the constraint set `S`.
pub fn project_s(
    p: &VectorField2D,
    lambda: &VectorField2D,
    cfg: &ProjectionConfig,
) -> (VectorField2D, VectorField2D) {
    debug_assert_eq!(p.spec(), lambda.spec());
    let mut p1 = p.c1().clone();
    let mut p2 = p.c2().clone();
    let mut l1 = lambda.c1().clone();
    let mut l2 = lambda.c2().clone();
    Zip::from(p1.values_mut())
        .and(p2.values_mut())
        .and(l1.values_mut())
        .and(l2.values_mut())
        .for_each(|a, b, la, lb| {
            let (q, mu) = project_pixel((*a, *b), (*la, *lb), cfg);
            *a = q.0;
            *b = q.1;
            *la = mu.0;
            *lb = mu.1;
        });
    (field_from_channels(p1, p2), field_from_channels(l1, l2))
}

/// The coupled fourth step: assemble the right-hand sides
/// `b₁ = −div⁻p + τf`, `b₂ = γ₂r + τf`, `b₃ = γ₃s₁ − τ∂₁⁺f`,
/// `b₄ = γ₃s₂ − τ∂₂⁺f`, solve for `(v, r, s)`, and set `p = ∇⁺v` with λ
/// carried over.
pub fn step_four(state: &SplitState, f: &Image2D, sym: &StepFourSymbols) -> SplitState {
    debug_assert_eq!(state.spec(), f.spec());
    let w = sym.weights();
    let div_p = div_backward(&state.p);
    let df1 = diff(f, Axis2::One, DiffDir::Forward);
    let df2 = diff(f, Axis2::Two, DiffDir::Forward);
    let b1 = Image2D::from_fn(f.spec(), |i, j| -div_p.get(i, j) + w.tau * f.get(i, j));
    let b2 = Image2D::from_fn(f.spec(), |i, j| {
        w.gamma2 * state.r.get(i, j) + w.tau * f.get(i, j)
    });
    let b3 = Image2D::from_fn(f.spec(), |i, j| {
        w.gamma3 * state.s.c1().get(i, j) - w.tau * df1.get(i, j)
    });
    let b4 = Image2D::from_fn(f.spec(), |i, j| {
        w.gamma3 * state.s.c2().get(i, j) - w.tau * df2.get(i, j)
    });
    let (v, r, s1, s2) = solve_step_four(&b1, &b2, &b3, &b4, sym);
    SplitState {
        p: grad_forward(&v),
        lambda: state.lambda.clone(),
        r,
        s: field_from_channels(s1, s2),
        v,
    }
}
