//! Drive the two per-frequency linear solvers directly and verify their
//! residuals against the dense reference on a small grid.
//!
//! ```bash
//! cargo run --example spectral_solves
//! ```

use trisplit::grid::{random_uniform, GridSpec, VectorField2D};
use trisplit::oracle;
use trisplit::spectral::{
    build_lambda_symbols, build_step_four_symbols, solve_lambda_system, solve_step_four,
    StepFourWeights,
};

fn main() -> trisplit::Result<()> {
    let spec = GridSpec::unit(8, 8)?;

    // normal-field system (γ₁ − c ∇⁺div⁻) λ = b
    let sym = build_lambda_symbols(1.0, 0.25, spec)?;
    let b = VectorField2D::from_channels(
        random_uniform(spec, 1, -1.0, 1.0),
        random_uniform(spec, 2, -1.0, 1.0),
    )?;
    let lambda = solve_lambda_system(&b, &sym);
    let back = oracle::apply_lambda_operator(&lambda, 1.0, 0.25);
    let residual = (back.c1().sq_diff_sum(b.c1()) + back.c2().sq_diff_sum(b.c2())).sqrt();
    println!("lambda solve residual ‖Aλ − b‖₂ = {residual:.3e}");
    let dense = oracle::dense_lambda_solve(&b, 1.0, 0.25)?;
    let gap = (lambda.c1().sq_diff_sum(dense.c1()) + lambda.c2().sq_diff_sum(dense.c2())).sqrt();
    println!("lambda solve vs dense reference = {gap:.3e}");

    // coupled step-four system for (v, r, s₁, s₂)
    let weights = StepFourWeights {
        tau: 0.1,
        gamma2: 0.01,
        gamma3: 20.0,
        alpha_w: 80.0,
        alpha_n: 1e-5,
        kappa: 1e-9,
    };
    let sym4 = build_step_four_symbols(weights, spec)?;
    let rhs: Vec<_> = (0..4).map(|k| random_uniform(spec, 10 + k, -1.0, 1.0)).collect();
    let (v, r, s1, s2) = solve_step_four(&rhs[0], &rhs[1], &rhs[2], &rhs[3], &sym4);
    let (r1, r2, r3, r4) = oracle::apply_step_four_operator(&v, &r, &s1, &s2, &weights);
    let residual = (r1.sq_diff_sum(&rhs[0])
        + r2.sq_diff_sum(&rhs[1])
        + r3.sq_diff_sum(&rhs[2])
        + r4.sq_diff_sum(&rhs[3]))
    .sqrt();
    println!("step-four solve residual         = {residual:.3e}");
    let (dv, dr, ds1, ds2) =
        oracle::dense_step_four_solve(&rhs[0], &rhs[1], &rhs[2], &rhs[3], &weights)?;
    let gap = (v.sq_diff_sum(&dv) + r.sq_diff_sum(&dr) + s1.sq_diff_sum(&ds1)
        + s2.sq_diff_sum(&ds2))
    .sqrt();
    println!("step-four solve vs dense         = {gap:.3e}");
    Ok(())
}
