//! The two-variable series `B_j(x, y)` and the one-variable `G_j(x)`.
//!
//! `B_j(x, y) = sum_n (-1)^(n+j) x^(n+j) y^n / ((n+j)! n!)`, which equals
//! `(-1)^j (x/y)^(j/2) J_j(2 sqrt(xy))` for positive arguments, and
//! `G_j(x) = sum_k (-1)^k x^k / (k! (k+j)!)`.

use super::KernelError;

const MAX_TERMS: u32 = 100_000;

/// Sums `t_0 + t_1 + ...` with `t_{n+1} = -t_n c / ((n+j+1)(n+1))`.
///
/// Stops once the ratio of consecutive terms is below one half and the
/// next term is below `tol * max(1, |partial sum|)`; the remaining tail is
/// then at most twice the first omitted term.
fn alternating_series(t0: f64, c: f64, j: u32, tol: f64) -> f64 {
    let mut term = t0;
    let mut sum = t0;
    for n in 0..MAX_TERMS {
        let ratio = -c / ((n + j + 1) as f64 * (n + 1) as f64);
        let next = term * ratio;
        if ratio.abs() < 0.5 && next.abs() < tol * sum.abs().max(1.0) {
            break;
        }
        sum += next;
        term = next;
    }
    sum
}

fn check_tol(tol: f64) -> Result<(), KernelError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(KernelError::Tolerance(tol))
    }
}

/// `B_j(x, y)` for `j >= -1`, with `B_{-1}(x, y) = -B_1(y, x)`.
pub fn bessel_b(j: i32, x: f64, y: f64, tol: f64) -> Result<f64, KernelError> {
    check_tol(tol)?;
    match j {
        -1 => Ok(-bessel_b_unchecked(1, y, x, tol)),
        j if j >= 0 => Ok(bessel_b_unchecked(j as u32, x, y, tol)),
        j => Err(KernelError::Order(j)),
    }
}

pub(crate) fn bessel_b_unchecked(j: u32, x: f64, y: f64, tol: f64) -> f64 {
    let t0 = (1..=j).fold(1.0, |t, i| t * -x / i as f64);
    alternating_series(t0, x * y, j, tol)
}

/// `G_j(x)` for `j >= 0`.
pub fn g_function(j: u32, x: f64, tol: f64) -> Result<f64, KernelError> {
    check_tol(tol)?;
    Ok(g_function_unchecked(j, x, tol))
}

pub(crate) fn g_function_unchecked(j: u32, x: f64, tol: f64) -> f64 {
    let t0 = (1..=j).fold(1.0, |t, i| t / i as f64);
    alternating_series(t0, x, j, tol)
}
