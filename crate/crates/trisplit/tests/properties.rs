//! Property-based checks of the grid and splitting invariants.

use ndarray::Array2;
use proptest::prelude::*;
use trisplit::grid::{
    crop_pad, diff, div_backward, grad_forward, inner, laplacian, pad_symmetric, Axis2, DiffDir,
    GridSpec, Image2D, VectorField2D,
};
use trisplit::splitting::{curvature_shrink, project_pixel, threshold_l0, ProjectionConfig};

fn image_on(m: usize, n: usize, vals: Vec<f64>) -> Image2D {
    let spec = GridSpec::unit(m, n).unwrap();
    Image2D::from_array(spec, Array2::from_shape_vec((m, n), vals).unwrap()).unwrap()
}

fn image_strategy(max_side: usize) -> impl Strategy<Value = Image2D> {
    (2..=max_side, 2..=max_side).prop_flat_map(|(m, n)| {
        prop::collection::vec(-2.0f64..2.0, m * n).prop_map(move |vals| image_on(m, n, vals))
    })
}

fn field_strategy(max_side: usize) -> impl Strategy<Value = VectorField2D> {
    (2..=max_side, 2..=max_side).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(-2.0f64..2.0, m * n),
            prop::collection::vec(-2.0f64..2.0, m * n),
        )
            .prop_map(move |(a, b)| {
                VectorField2D::from_channels(image_on(m, n, a), image_on(m, n, b)).unwrap()
            })
    })
}

/// A scalar field and a vector field sharing one grid.
fn image_and_field(max_side: usize) -> impl Strategy<Value = (Image2D, VectorField2D)> {
    (2..=max_side, 2..=max_side).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(-2.0f64..2.0, m * n),
            prop::collection::vec(-2.0f64..2.0, m * n),
            prop::collection::vec(-2.0f64..2.0, m * n),
        )
            .prop_map(move |(u, a, b)| {
                (
                    image_on(m, n, u),
                    VectorField2D::from_channels(image_on(m, n, a), image_on(m, n, b)).unwrap(),
                )
            })
    })
}

/// Two scalar fields sharing one grid.
fn image_pair(max_side: usize) -> impl Strategy<Value = (Image2D, Image2D)> {
    (2..=max_side, 2..=max_side).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(-2.0f64..2.0, m * n),
            prop::collection::vec(-2.0f64..2.0, m * n),
        )
            .prop_map(move |(a, b)| (image_on(m, n, a), image_on(m, n, b)))
    })
}

/// Two vector fields sharing one grid.
fn field_pair(max_side: usize) -> impl Strategy<Value = (VectorField2D, VectorField2D)> {
    (2..=max_side, 2..=max_side).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(-2.0f64..2.0, m * n),
            prop::collection::vec(-2.0f64..2.0, m * n),
            prop::collection::vec(-2.0f64..2.0, m * n),
            prop::collection::vec(-2.0f64..2.0, m * n),
        )
            .prop_map(move |(a, b, c, d)| {
                (
                    VectorField2D::from_channels(image_on(m, n, a), image_on(m, n, b)).unwrap(),
                    VectorField2D::from_channels(image_on(m, n, c), image_on(m, n, d)).unwrap(),
                )
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// ⟨∇⁺u, q⟩ = −⟨u, div⁻q⟩ under periodic wrap.
    #[test]
    fn gradient_divergence_adjointness((u, q) in image_and_field(10)) {
        let grad = grad_forward(&u);
        let lhs = inner(grad.c1(), q.c1()) + inner(grad.c2(), q.c2());
        let rhs = -inner(&u, &div_backward(&q));
        let scale = 1.0 + lhs.abs().max(rhs.abs());
        prop_assert!((lhs - rhs).abs() < 1e-10 * scale);
    }

    /// The divergence of any periodic field telescopes to zero.
    #[test]
    fn divergence_has_zero_sum(q in field_strategy(12)) {
        let total = div_backward(&q).values().sum();
        prop_assert!(total.abs() < 1e-10);
    }

    /// ⟨Δu, v⟩ = ⟨u, Δv⟩ on matching grids.
    #[test]
    fn laplacian_symmetry((a, b) in image_pair(9)) {
        let lhs = inner(&laplacian(&a), &b);
        let rhs = inner(&a, &laplacian(&b));
        let scale = 1.0 + lhs.abs().max(rhs.abs());
        prop_assert!((lhs - rhs).abs() < 1e-10 * scale);
    }

    /// cropPad ∘ padSymmetric is the identity for any width.
    #[test]
    fn pad_crop_round_trip(img in image_strategy(10), width in 0usize..40) {
        let padded = pad_symmetric(&img, width);
        let back = crop_pad(&padded, width).unwrap();
        prop_assert_eq!(back.values(), img.values());
    }

    /// Forward-then-backward differencing equals the circulant second
    /// difference: symmetric in the two orderings.
    #[test]
    fn second_difference_commutes(img in image_strategy(10)) {
        let a = diff(&diff(&img, Axis2::One, DiffDir::Forward), Axis2::One, DiffDir::Backward);
        let b = diff(&diff(&img, Axis2::One, DiffDir::Backward), Axis2::One, DiffDir::Forward);
        let sup = a.values().iter().zip(b.values().iter())
            .map(|(x, y)| (x - y).abs()).fold(0.0f64, f64::max);
        prop_assert!(sup < 1e-12);
    }

    /// Thresholding is idempotent and per-pixel all-or-nothing.
    #[test]
    fn threshold_idempotent(p in field_strategy(8), tau in 1e-3f64..1.0, alpha0 in 1e-4f64..1.0) {
        let once = threshold_l0(&p, tau, alpha0);
        let twice = threshold_l0(&once, tau, alpha0);
        prop_assert_eq!(once.c1().values(), twice.c1().values());
        prop_assert_eq!(once.c2().values(), twice.c2().values());
        for i in 0..p.spec().rows() {
            for j in 0..p.spec().cols() {
                let kept = once.c1().get(i, j) != 0.0 || once.c2().get(i, j) != 0.0;
                if kept {
                    prop_assert_eq!(once.c1().get(i, j), p.c1().get(i, j));
                    prop_assert_eq!(once.c2().get(i, j), p.c2().get(i, j));
                }
            }
        }
    }

    /// The curvature shrink never increases magnitude and keeps direction.
    #[test]
    fn shrink_contracts((p, lambda) in field_pair(8),
                        tau in 1e-3f64..0.5, alpha in 1e-3f64..5.0) {
        let out = curvature_shrink(&p, &lambda, tau, alpha);
        for i in 0..p.spec().rows() {
            for j in 0..p.spec().cols() {
                let before = (p.c1().get(i, j), p.c2().get(i, j));
                let after = (out.c1().get(i, j), out.c2().get(i, j));
                let mag_before = (before.0 * before.0 + before.1 * before.1).sqrt();
                let mag_after = (after.0 * after.0 + after.1 * after.1).sqrt();
                prop_assert!(mag_after <= mag_before + 1e-15);
                prop_assert!((before.0 * after.1 - before.1 * after.0).abs() <= 1e-12);
            }
        }
    }

    /// Projection outputs always satisfy the constraint set.
    #[test]
    fn projection_feasibility(y0 in -3.0f64..3.0, y1 in -3.0f64..3.0,
                              w0 in -3.0f64..3.0, w1 in -3.0f64..3.0,
                              gamma1 in 0.05f64..5.0) {
        let cfg = ProjectionConfig { gamma1, ..ProjectionConfig::default() };
        let (q, mu) = project_pixel((y0, y1), (w0, w1), &cfg);
        let mu_mag = (mu.0 * mu.0 + mu.1 * mu.1).sqrt();
        prop_assert!(mu_mag <= 1.0 + 1e-8);
        let q_mag = (q.0 * q.0 + q.1 * q.1).sqrt();
        let dot = q.0 * mu.0 + q.1 * mu.1;
        prop_assert!((dot - q_mag).abs() <= 1e-8 * (1.0 + q_mag));
    }
}
