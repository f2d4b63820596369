//! Closed-form kernel of `W - I` and the integral identities it satisfies.
//!
//! With `r = |nu|`, the kernel is `f(x, y)` on `x < y` and `g(x, y)` on
//! `y < x`, where
//!
//! ```text
//! f(x, y) = nu B_0((y-a) r, (b-x) r) + r B_1((b-a) r, (y-x) r)
//!           - (nu + conj nu) sum_q B_q((y-x) r, (b-a) r) (conj nu / r)^q
//! g(x, y) = nu B_0((y-a) r, (b-x) r)
//! ```

pub mod bessel;
pub mod quadrature;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use bessel::{bessel_b, g_function};
pub use quadrature::GaussLegendre;

use crate::params::{ComplexParam, Interval};
use bessel::{bessel_b_unchecked, g_function_unchecked};

/// Series tolerance used when callers do not pick one.
pub const DEFAULT_TOL: f64 = 1e-16;

/// Number of consecutive negligible `B_q` after which the `q`-sum stops.
const Q_SUM_PATIENCE: u32 = 3;
const Q_SUM_MAX: u32 = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("tolerance must be positive and finite (got {0})")]
    Tolerance(f64),
    #[error("B_j is defined for j >= -1 (got {0})")]
    Order(i32),
    #[error("({x}, {y}) is outside the region {region}")]
    Region {
        x: f64,
        y: f64,
        region: &'static str,
    },
    #[error("quadrature needs at least 2 nodes per panel (got {0})")]
    Nodes(usize),
    #[error("parameters must be distinct (both equal {0})")]
    EqualParameters(f64),
    #[error("parameter must be positive (got {0})")]
    NonPositive(f64),
}

fn check_tol(tol: f64) -> Result<(), KernelError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(KernelError::Tolerance(tol))
    }
}

fn region_error(x: f64, y: f64, region: &'static str) -> KernelError {
    KernelError::Region { x, y, region }
}

pub(crate) fn f_unchecked(x: f64, y: f64, iv: &Interval, nu: &ComplexParam, tol: f64) -> Complex64 {
    if nu.is_zero() {
        return Complex64::zero();
    }
    let r = nu.modulus();
    let (a, b) = (iv.a(), iv.b());
    let v = nu.nu();
    let mut value = v * bessel_b_unchecked(0, (y - a) * r, (b - x) * r, tol)
        + r * bessel_b_unchecked(1, (b - a) * r, (y - x) * r, tol);
    let two_lambda = 2.0 * nu.lambda;
    if two_lambda != 0.0 {
        let (u, w) = ((y - x) * r, (b - a) * r);
        // B_q(u, w) ~ (u/w)^(q/2) J_q(2 sqrt(uw)) only decays once q exceeds 2 sqrt(uw).
        let onset = (2.0 * (u * w).sqrt()).ceil() as u32;
        let phase = nu.nu_bar() / r;
        let mut weight = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::zero();
        let mut quiet = 0;
        for q in 0..Q_SUM_MAX {
            let bq = bessel_b_unchecked(q, u, w, tol);
            sum += weight * bq;
            weight *= phase;
            if bq.abs() < tol {
                quiet += 1;
                if quiet >= Q_SUM_PATIENCE && q >= onset {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        value -= two_lambda * sum;
    }
    value
}

pub(crate) fn g_unchecked(x: f64, y: f64, iv: &Interval, nu: &ComplexParam, tol: f64) -> Complex64 {
    if nu.is_zero() {
        return Complex64::zero();
    }
    let r = nu.modulus();
    nu.nu() * bessel_b_unchecked(0, (y - iv.a()) * r, (iv.b() - x) * r, tol)
}

/// `f(x, y)` on `a <= x < y < b`.
pub fn kernel_f(
    x: f64,
    y: f64,
    iv: &Interval,
    nu: &ComplexParam,
    tol: f64,
) -> Result<Complex64, KernelError> {
    check_tol(tol)?;
    if !(iv.a() <= x && x < y && y < iv.b()) {
        return Err(region_error(x, y, "a <= x < y < b"));
    }
    Ok(f_unchecked(x, y, iv, nu, tol))
}

/// `g(x, y)` on `a <= y < x < b`.
pub fn kernel_g(
    x: f64,
    y: f64,
    iv: &Interval,
    nu: &ComplexParam,
    tol: f64,
) -> Result<Complex64, KernelError> {
    check_tol(tol)?;
    if !(iv.a() <= y && y < x && x < iv.b()) {
        return Err(region_error(x, y, "a <= y < x < b"));
    }
    Ok(g_unchecked(x, y, iv, nu, tol))
}

/// Kernel of `W - I` on `[a, b)^2`: `f` above the diagonal, `g` below, 0 on it.
pub fn ker_w_minus_i(
    x: f64,
    y: f64,
    iv: &Interval,
    nu: &ComplexParam,
    tol: f64,
) -> Result<Complex64, KernelError> {
    check_tol(tol)?;
    if !(iv.contains(x) && iv.contains(y)) {
        return Err(region_error(x, y, "[a, b)^2"));
    }
    Ok(ker_unchecked(x, y, iv, nu, tol))
}

fn ker_unchecked(x: f64, y: f64, iv: &Interval, nu: &ComplexParam, tol: f64) -> Complex64 {
    match x.partial_cmp(&y) {
        Some(std::cmp::Ordering::Less) => f_unchecked(x, y, iv, nu, tol),
        Some(std::cmp::Ordering::Greater) => g_unchecked(x, y, iv, nu, tol),
        _ => Complex64::zero(),
    }
}

/// The kernel of `W - I` for a fixed interval and parameter.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct KernelField {
    pub interval: Interval,
    pub nu: ComplexParam,
    pub tol: f64,
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelSample {
    pub x: f64,
    pub y: f64,
    pub value: Complex64,
}

impl KernelField {
    pub fn new(interval: Interval, nu: ComplexParam, tol: f64) -> Result<Self, KernelError> {
        check_tol(tol)?;
        Ok(Self { interval, nu, tol })
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<Complex64, KernelError> {
        ker_w_minus_i(x, y, &self.interval, &self.nu, self.tol)
    }

    pub fn f(&self, x: f64, y: f64) -> Result<Complex64, KernelError> {
        kernel_f(x, y, &self.interval, &self.nu, self.tol)
    }

    pub fn g(&self, x: f64, y: f64) -> Result<Complex64, KernelError> {
        kernel_g(x, y, &self.interval, &self.nu, self.tol)
    }

    /// Evaluates at each point in parallel, preserving order.
    pub fn sample(&self, points: &[(f64, f64)]) -> Result<Vec<KernelSample>, KernelError> {
        points
            .par_iter()
            .map(|&(x, y)| self.eval(x, y).map(|value| KernelSample { x, y, value }))
            .collect()
    }

    /// `n x n` interior grid `x_i = a + (i+1)(b-a)/(n+1)`, row-major in `x`.
    pub fn interior_grid(&self, n: usize) -> Result<Vec<KernelSample>, KernelError> {
        let pts = interior_points(&self.interval, n);
        let pairs: Vec<(f64, f64)> = pts
            .iter()
            .flat_map(|&x| pts.iter().map(move |&y| (x, y)))
            .collect();
        self.sample(&pairs)
    }
}

/// `a + (i+1)(b-a)/(n+1)` for `i = 0..n`.
pub fn interior_points(iv: &Interval, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| iv.a() + (i + 1) as f64 * iv.length() / (n + 1) as f64)
        .collect()
}

fn check_nodes(quad_n: usize) -> Result<(), KernelError> {
    if quad_n < 2 {
        Err(KernelError::Nodes(quad_n))
    } else {
        Ok(())
    }
}

/// Quadrature value of the isometry condition at `a < x < y < b`:
///
/// ```text
/// f(x,y) + conj g(y,x) + int_a^x g(x,z) conj g(y,z) dz
///   + int_x^y f(x,z) conj g(y,z) dz + int_y^b f(x,z) conj f(y,z) dz
/// ```
///
/// Each of the three panels uses its own `quad_n`-point Gauss–Legendre rule.
pub fn isometry_residual(
    x: f64,
    y: f64,
    iv: &Interval,
    nu: &ComplexParam,
    quad_n: usize,
) -> Result<Complex64, KernelError> {
    check_nodes(quad_n)?;
    if !(iv.a() < x && x < y && y < iv.b()) {
        return Err(region_error(x, y, "a < x < y < b"));
    }
    if nu.is_zero() {
        return Ok(Complex64::zero());
    }
    let tol = DEFAULT_TOL;
    let rule = GaussLegendre::new(quad_n);
    let f = |u: f64, v: f64| f_unchecked(u, v, iv, nu, tol);
    let g = |u: f64, v: f64| g_unchecked(u, v, iv, nu, tol);
    let mut total = f(x, y) + g(y, x).conj();
    total += rule.integrate(iv.a(), x, |z| g(x, z) * g(y, z).conj());
    total += rule.integrate(x, y, |z| f(x, z) * g(y, z).conj());
    total += rule.integrate(y, iv.b(), |z| f(x, z) * f(y, z).conj());
    Ok(total)
}

fn check_positive(v: f64) -> Result<(), KernelError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(KernelError::NonPositive(v))
    }
}

fn check_non_negative(v: f64) -> Result<(), KernelError> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(KernelError::NonPositive(v))
    }
}

/// Residual of `int_0^x G_0(az) G_0(bz) dz = (a x G_1(ax) G_0(bx) - b x G_1(bx) G_0(ax)) / (a - b)`.
pub fn lommel_check(alpha: f64, beta: f64, x: f64, quad_n: usize) -> Result<f64, KernelError> {
    check_nodes(quad_n)?;
    check_positive(alpha)?;
    check_positive(beta)?;
    check_non_negative(x)?;
    if alpha == beta {
        return Err(KernelError::EqualParameters(alpha));
    }
    let tol = DEFAULT_TOL;
    let g = |j: u32, t: f64| g_function_unchecked(j, t, tol);
    let rule = GaussLegendre::new(quad_n);
    let lhs: f64 = rule.integrate(0.0, x, |z| g(0, alpha * z) * g(0, beta * z));
    let rhs = (alpha * x * g(1, alpha * x) * g(0, beta * x)
        - beta * x * g(1, beta * x) * g(0, alpha * x))
        / (alpha - beta);
    Ok((lhs - rhs).abs())
}

/// Residual of `int_0^z G_1(w) G_1(w+c) dw = (z G_1(z) G_0(z+c) - (z+c) G_1(z+c) G_0(z)) / c + G_1(c)`
/// with shift `c = beta`.
pub fn sonine_gegenbauer_check(beta: f64, z: f64, quad_n: usize) -> Result<f64, KernelError> {
    check_nodes(quad_n)?;
    check_positive(beta)?;
    check_non_negative(z)?;
    let tol = DEFAULT_TOL;
    let g = |j: u32, t: f64| g_function_unchecked(j, t, tol);
    let rule = GaussLegendre::new(quad_n);
    let lhs: f64 = rule.integrate(0.0, z, |w| g(1, w) * g(1, w + beta));
    let rhs =
        (z * g(1, z) * g(0, z + beta) - (z + beta) * g(1, z + beta) * g(0, z)) / beta + g(1, beta);
    Ok((lhs - rhs).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::TruncatedKernel;

    fn unit() -> Interval {
        Interval::unit()
    }

    #[test]
    fn region_checks() {
        let nu = ComplexParam::new(1.0, 0.5).unwrap();
        assert!(kernel_f(0.5, 0.5, &unit(), &nu, 1e-12).is_err());
        assert!(kernel_f(0.6, 0.5, &unit(), &nu, 1e-12).is_err());
        assert!(kernel_g(0.4, 0.5, &unit(), &nu, 1e-12).is_err());
        assert!(kernel_f(0.1, 0.5, &unit(), &nu, 0.0).is_err());
        assert!(ker_w_minus_i(0.1, 1.0, &unit(), &nu, 1e-12).is_err());
        assert_eq!(
            ker_w_minus_i(0.3, 0.3, &unit(), &nu, 1e-12).unwrap(),
            Complex64::zero()
        );
        assert!(isometry_residual(0.5, 0.4, &unit(), &nu, 16).is_err());
        assert!(isometry_residual(0.2, 0.4, &unit(), &nu, 1).is_err());
    }

    #[test]
    fn zero_parameter_gives_zero_kernel() {
        let nu = ComplexParam::new(0.0, 0.0).unwrap();
        assert_eq!(
            kernel_f(0.2, 0.7, &unit(), &nu, 1e-12).unwrap(),
            Complex64::zero()
        );
        assert_eq!(
            kernel_g(0.7, 0.2, &unit(), &nu, 1e-12).unwrap(),
            Complex64::zero()
        );
        assert_eq!(
            isometry_residual(0.2, 0.7, &unit(), &nu, 8).unwrap(),
            Complex64::zero()
        );
    }

    #[test]
    fn small_interval_leading_order() {
        let iv = Interval::new(0.0, 1e-6).unwrap();
        let nu = ComplexParam::new(0.8, -0.3).unwrap();
        let f = kernel_f(2e-7, 6e-7, &iv, &nu, DEFAULT_TOL).unwrap();
        assert!((f + nu.nu_bar()).norm() < 1e-5);
        let g = kernel_g(6e-7, 2e-7, &iv, &nu, DEFAULT_TOL).unwrap();
        assert!((g - nu.nu()).norm() < 1e-5);
    }

    #[test]
    fn real_parameter_specialization() {
        // For real nu = lambda > 0 every argument is scaled by lambda and the
        // q-sum carries 2 lambda with unit weights.
        let lambda = 1.3;
        let nu = ComplexParam::new(lambda, 0.0).unwrap();
        let (a, b) = (0.0, 1.0);
        for (x, y) in [(0.1, 0.9), (0.3, 0.7), (0.45, 0.5)] {
            let bj = |j: i32, u: f64, v: f64| bessel_b(j, u, v, DEFAULT_TOL).unwrap();
            let q_sum: f64 = (0..60)
                .map(|q| bj(q, (y - x) * lambda, (b - a) * lambda))
                .sum();
            let expected = lambda * bj(0, (y - a) * lambda, (b - x) * lambda)
                + lambda * bj(1, (b - a) * lambda, (y - x) * lambda)
                - 2.0 * lambda * q_sum;
            let got = kernel_f(x, y, &unit(), &nu, DEFAULT_TOL).unwrap();
            assert!((got.re - expected).abs() < 1e-14 && got.im == 0.0);
        }
    }

    #[test]
    fn closed_form_matches_series() {
        let series = TruncatedKernel::new(30);
        for nu in [
            ComplexParam::new(1.0, 0.0).unwrap(),
            ComplexParam::new(0.6, -1.1).unwrap(),
        ] {
            for (x, y) in [(0.3, 0.7), (0.7, 0.3), (0.05, 0.95), (0.9, 0.2)] {
                let closed = ker_w_minus_i(x, y, &unit(), &nu, DEFAULT_TOL).unwrap();
                let approx = series.eval(x, y, &unit(), &nu);
                assert!(
                    (closed - approx).norm() < 1e-12,
                    "{x} {y}: {closed} vs {approx}"
                );
            }
        }
    }

    #[test]
    fn isometry_quadrature_converges() {
        let nu = ComplexParam::new(0.5, 0.5).unwrap();
        let mut prev = f64::INFINITY;
        for n in [8, 16, 32, 64, 128] {
            let r = isometry_residual(0.4, 0.6, &unit(), &nu, n).unwrap().norm();
            assert!(r <= prev.max(1e-12), "quad_n = {n}: {r} vs {prev}");
            prev = r;
        }
        assert!(prev < 1e-12);
        let nu = ComplexParam::new(1.0, 0.0).unwrap();
        assert!(
            isometry_residual(0.25, 0.75, &unit(), &nu, 64)
                .unwrap()
                .norm()
                < 1e-8
        );
    }

    #[test]
    fn integral_identities() {
        assert!(lommel_check(1.0, 2.0, 1.0, 64).unwrap() < 1e-9);
        assert!(lommel_check(3.0, 1.0, 0.5, 64).unwrap() < 1e-9);
        assert!(lommel_check(1.0, 2.0, 0.0, 64).unwrap() < 1e-15);
        assert!(lommel_check(1.0, 1.0, 1.0, 64).is_err());
        assert!(sonine_gegenbauer_check(1.0, 1.0, 64).unwrap() < 1e-9);
        assert!(sonine_gegenbauer_check(2.0, 0.5, 64).unwrap() < 1e-9);
        assert!(sonine_gegenbauer_check(2.0, 0.0, 64).unwrap() < 1e-15);
        assert!(sonine_gegenbauer_check(0.0, 1.0, 64).is_err());
    }

    #[test]
    fn grid_has_zero_diagonal() {
        let field = KernelField::new(unit(), ComplexParam::new(1.0, 0.0).unwrap(), 1e-14).unwrap();
        let grid = field.interior_grid(11).unwrap();
        assert_eq!(grid.len(), 121);
        for s in &grid {
            assert!(s.value.re.is_finite() && s.value.im.is_finite());
            if s.x == s.y {
                assert_eq!(s.value, Complex64::zero());
            }
        }
    }
}
