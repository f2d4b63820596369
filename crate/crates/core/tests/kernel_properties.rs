use approx::assert_abs_diff_eq;
use causal_product::kernel::{
    bessel_b, g_function, isometry_residual, ker_w_minus_i, kernel_f, kernel_g, lommel_check,
    sonine_gegenbauer_check, GaussLegendre, KernelField, DEFAULT_TOL,
};
use causal_product::{ComplexParam, Interval};
use proptest::prelude::*;

fn b(j: i32, x: f64, y: f64) -> f64 {
    bessel_b(j, x, y, DEFAULT_TOL).unwrap()
}

/// Errors of the centred differences in `x` and `y` at step `h`.
fn fd_errors(j: i32, x: f64, y: f64, h: f64) -> (f64, f64) {
    let dx = (b(j, x + h, y) - b(j, x - h, y)) / (2.0 * h);
    let dy = (b(j, x, y + h) - b(j, x, y - h)) / (2.0 * h);
    ((dx + b(j - 1, x, y)).abs(), (dy - b(j + 1, x, y)).abs())
}

#[test]
fn derivative_identities_second_order() {
    for j in 0..=5 {
        for &(x, y) in &[(0.5, 0.5), (1.0, 2.0), (2.0, 0.7), (1.5, 1.5)] {
            let (ex1, ey1) = fd_errors(j, x, y, 1e-3);
            let (ex2, ey2) = fd_errors(j, x, y, 5e-4);
            for (e1, e2) in [(ex1, ex2), (ey1, ey2)] {
                if e1 < 1e-12 {
                    continue;
                }
                let order = (e1 / e2).log2();
                assert!(order >= 1.9, "j={j} ({x},{y}) order {order}");
            }
        }
    }
}

#[test]
fn b_matches_integral_representation() {
    // B_0(x, y) = J_0(2 sqrt(xy)) = (1/pi) int_0^pi cos(2 sqrt(xy) sin t) dt.
    let rule = GaussLegendre::new(64);
    for &(x, y) in &[(0.3f64, 0.4f64), (1.0, 1.0), (2.0, 1.5)] {
        let z = 2.0 * (x * y).sqrt();
        let j0: f64 = rule.integrate(0.0, std::f64::consts::PI, |t| (z * t.sin()).cos())
            / std::f64::consts::PI;
        assert_abs_diff_eq!(b(0, x, y), j0, epsilon = 1e-14);
    }
}

#[test]
fn g_function_values() {
    assert_eq!(g_function(0, 0.0, 1e-15).unwrap(), 1.0);
    assert_abs_diff_eq!(g_function(2, 0.0, 1e-15).unwrap(), 0.5, epsilon = 1e-16);
    assert!(g_function(0, 1.0, -1.0).is_err());
}

#[test]
fn g_part_is_phase_independent_in_form() {
    let iv = Interval::unit();
    let nu = ComplexParam::new(1.0, 0.0).unwrap();
    let g = kernel_g(0.7, 0.3, &iv, &nu, DEFAULT_TOL).unwrap();
    assert_abs_diff_eq!(g.re, b(0, 0.3, 0.3), epsilon = 1e-15);
    assert_eq!(g.im, 0.0);
    // Rotating the phase rotates g by the same phase.
    let rotated = ComplexParam::from_polar(1.0, 0.8);
    let gr = kernel_g(0.7, 0.3, &iv, &rotated, DEFAULT_TOL).unwrap();
    assert_abs_diff_eq!((gr - rotated.nu() * g.re).norm(), 0.0, epsilon = 1e-15);
}

#[test]
fn isometry_at_standard_points() {
    let iv = Interval::unit();
    let r1 = isometry_residual(0.25, 0.75, &iv, &ComplexParam::new(1.0, 0.0).unwrap(), 64).unwrap();
    let r2 = isometry_residual(0.4, 0.6, &iv, &ComplexParam::new(0.5, 0.5).unwrap(), 64).unwrap();
    assert!(r1.norm() < 1e-8 && r2.norm() < 1e-8);
}

#[test]
fn kernel_field_grid_is_ordered() {
    let iv = Interval::new(-1.0, 1.0).unwrap();
    let field = KernelField::new(iv, ComplexParam::new(0.3, 0.2).unwrap(), 1e-14).unwrap();
    let grid = field.interior_grid(5).unwrap();
    assert_eq!(grid.len(), 25);
    assert!(grid.windows(2).all(|w| (w[0].x, w[0].y) < (w[1].x, w[1].y)));
    for s in grid {
        assert_eq!(
            s.value,
            ker_w_minus_i(s.x, s.y, &iv, &field.nu, 1e-14).unwrap()
        );
    }
}

proptest! {
    #[test]
    fn b0_symmetric(x in 0.0f64..3.0, y in 0.0f64..3.0) {
        prop_assert_eq!(b(0, x, y), b(0, y, x));
    }

    #[test]
    fn first_order_matches_derivative(x in 0.1f64..2.0, y in 0.1f64..2.0, j in 0i32..5) {
        let (ex, ey) = fd_errors(j, x, y, 1e-4);
        prop_assert!(ex < 1e-7 && ey < 1e-7);
    }

    #[test]
    fn isometry_holds_at_random_points(
        x in 0.05f64..0.95,
        gap in 0.02f64..0.9,
        r in 0.1f64..2.0,
        phase in -3.1f64..3.1,
    ) {
        let y = x + gap;
        prop_assume!(y < 0.98);
        let iv = Interval::unit();
        let nu = ComplexParam::from_polar(r, phase);
        prop_assert!(isometry_residual(x, y, &iv, &nu, 48).unwrap().norm() < 1e-10);
    }

    #[test]
    fn conjugation_symmetry(x in 0.05f64..0.45, y in 0.55f64..0.95, lambda in -1.5f64..1.5, mu in -1.5f64..1.5) {
        prop_assume!(lambda.hypot(mu) > 1e-3);
        let iv = Interval::unit();
        let nu = ComplexParam::new(lambda, mu).unwrap();
        let f = kernel_f(x, y, &iv, &nu, DEFAULT_TOL).unwrap();
        let fc = kernel_f(x, y, &iv, &nu.conjugated(), DEFAULT_TOL).unwrap();
        prop_assert!((f.conj() - fc).norm() < 1e-13);
    }

    #[test]
    fn integral_identities_hold(alpha in 0.1f64..3.0, beta in 0.1f64..3.0, x in 0.0f64..2.0) {
        prop_assume!((alpha - beta).abs() > 1e-2);
        prop_assert!(lommel_check(alpha, beta, x, 64).unwrap() < 1e-9);
        prop_assert!(sonine_gegenbauer_check(beta, x, 64).unwrap() < 1e-9);
    }
}
