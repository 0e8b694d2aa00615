//! Property tests for the structural invariants of the analysis routines.

use proptest::prelude::*;

use pde_struct_core::baire_lambda::lambda_1d;
use pde_struct_core::differencing::{diff_quotient, directional_quotient};
use pde_struct_core::function_model::{from_grid, sample_grid, Function2D, GridSample};
use pde_struct_core::geometry::{GridSpec, Point2, Rect};
use pde_struct_core::regularity::oscillation;

fn cubic(a: f64, b: f64, c: f64, d: f64) -> impl Fn(f64) -> f64 + Copy {
    move |t| a + b * t + c * t * t + d * t * t * t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// r(x, z) * (z - x) = (y - x) r(x, y) + (z - y) r(y, z): the convexity
    /// identity of secant slopes, for arbitrary evaluators.
    #[test]
    fn quotient_convexity_identity(
        a in -5.0..5.0f64, b in -5.0..5.0f64, c in -5.0..5.0f64, d in -5.0..5.0f64,
        x in -3.0..3.0f64, gap1 in 1e-3..2.0f64, gap2 in 1e-3..2.0f64,
    ) {
        let g = cubic(a, b, c, d);
        let (y, z) = (x + gap1, x + gap1 + gap2);
        let rxy = diff_quotient(g, x, y).unwrap();
        let ryz = diff_quotient(g, y, z).unwrap();
        let rxz = diff_quotient(g, x, z).unwrap();
        let combined = ((y - x) * rxy + (z - y) * ryz) / (z - x);
        let tol = 1e-12 * (1.0 + rxy.abs() + ryz.abs() + rxz.abs());
        prop_assert!((rxz - combined).abs() <= tol, "{rxz} vs {combined}");
    }

    /// The window function grows with the tolerance window.
    #[test]
    fn lambda_monotone_in_epsilon(
        a in -2.0..2.0f64, b in -2.0..2.0f64, c in -2.0..2.0f64,
        x in -1.0..1.0f64,
        eps_lo in 1e-3..0.5f64, factor in 1.0..20.0f64,
    ) {
        let g = cubic(a, b, c, 0.0);
        let lo = lambda_1d(g, x, eps_lo, 16).unwrap();
        let hi = lambda_1d(g, x, eps_lo * factor, 16).unwrap();
        prop_assert!(lo <= hi);
    }

    /// Sampling and re-wrapping a field reproduces it exactly at every node.
    #[test]
    fn grid_round_trip_is_exact_at_nodes(
        a in -3.0..3.0f64, b in -3.0..3.0f64, c in -3.0..3.0f64, d in -3.0..3.0f64,
        nx in 2usize..12, ny in 2usize..12,
    ) {
        let f = Function2D::from_fn("poly", Rect::centered(2.0).unwrap(), move |x, y| {
            a + b * x + c * y + d * x * y
        });
        let spec = GridSpec::new(Rect::new(-1.5, 1.0, -0.5, 1.5).unwrap(), nx, ny).unwrap();
        let sample = sample_grid(&f, &spec).unwrap();
        let g = from_grid(sample.clone()).unwrap();
        for (i, j) in spec.indices() {
            let p = spec.node(i, j);
            prop_assert_eq!(g.eval(p).unwrap(), sample.value(i, j));
        }
    }

    /// Direction cosines of a directional quotient are on the unit circle.
    #[test]
    fn direction_cosines_normalized(
        px in -1.0..1.0f64, py in -1.0..1.0f64,
        qx in -1.0..1.0f64, qy in -1.0..1.0f64,
    ) {
        prop_assume!((px - qx).abs() > 1e-9 || (py - qy).abs() > 1e-9);
        let f = Function2D::from_fn("xy", Rect::centered(2.0).unwrap(), |x, y| x * y);
        let s = directional_quotient(&f, Point2::new(px, py), Point2::new(qx, qy)).unwrap();
        let norm = s.cos_alpha * s.cos_alpha + s.sin_alpha * s.sin_alpha;
        prop_assert!((norm - 1.0).abs() <= 1e-12);
    }

    /// Oscillation estimates scale linearly with the field.
    #[test]
    fn oscillation_scales_with_the_field(scale in -4.0..4.0f64) {
        prop_assume!(scale.abs() > 1e-6);
        let base = Function2D::from_fn("osc", Rect::centered(2.0).unwrap(), |x, y: f64| {
            (3.0 * x).sin() + (2.0 * y).cos()
        });
        let scaled = Function2D::from_fn("osc*c", Rect::centered(2.0).unwrap(), move |x, y: f64| {
            scale * ((3.0 * x).sin() + (2.0 * y).cos())
        });
        let radii = [0.5, 0.25];
        let p = Point2::new(0.2, -0.3);
        let a = oscillation(&base, p, &radii, 36).unwrap();
        let b = oscillation(&scaled, p, &radii, 36).unwrap();
        prop_assert!((b - scale.abs() * a).abs() <= 1e-12 * (1.0 + b.abs()));
    }

    /// Grid JSON serialization round-trips values exactly.
    #[test]
    fn grid_json_round_trip(values in proptest::collection::vec(-1e6..1e6f64, 4..24)) {
        let n = values.len();
        let (nx, ny) = (2, n / 2);
        prop_assume!(ny >= 2);
        let sample = GridSample {
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
            nx,
            ny,
            values: values[..nx * ny].to_vec(),
        };
        let mut buf = Vec::new();
        sample.to_json_writer(&mut buf).unwrap();
        let back = GridSample::<f64>::from_json_reader(buf.as_slice()).unwrap();
        prop_assert_eq!(back, sample);
    }
}
