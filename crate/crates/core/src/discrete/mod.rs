//! Finite products of planar rotations over pairs of cells and the
//! associated counting matrices.
//!
//! `[a, b)` is cut into `N` cells of width `Delta = (b-a)/N`. For each pair
//! `j < k` the factor `R_{j,k}` rotates the `(j, k)` plane by the angle
//! `Delta |nu|` with phase `nu / |nu|`; `W_N` is their product in an allowed
//! ordering.

pub mod convergence;
pub mod matrix;
pub mod ordering;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub use convergence::{
    convergence_study, ConvergenceRow, ConvergenceStudy, SampleRegion, TestPolynomial,
};
pub use matrix::{ComplexMatrix, Matrix, RealMatrix};
pub use ordering::PairOrdering;

use crate::combinatorics::binomial;
use crate::params::{ComplexParam, Interval};

/// Tolerance used for the unitarity check of dimension up to 64.
pub const UNITARITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscreteError {
    #[error("pair ({j}, {k}) is not of the form 1 <= j < k <= {n}")]
    InvalidPair { j: usize, k: usize, n: usize },
    #[error("pair ({j}, {k}) occurs more than once")]
    RepeatedPair { j: usize, k: usize },
    #[error("ordering has {found} pairs, expected {expected}")]
    IncompleteOrdering { found: usize, expected: usize },
    #[error("pair {after:?} must precede {before:?}")]
    DisallowedOrdering {
        before: (usize, usize),
        after: (usize, usize),
    },
    #[error("ordering is for dimension {ordering}, product requested for {requested}")]
    DimensionMismatch { ordering: usize, requested: usize },
    #[error("rotation factors need a nonzero parameter")]
    ZeroParameter,
    #[error("counting matrix undefined for r + r' = s (r = {r}, r' = {r_prime}, s = {s})")]
    BalancedRank { s: usize, r: usize, r_prime: usize },
    #[error("degree {s} must satisfy 1 <= s <= N - 1 = {max}")]
    Degree { s: usize, max: usize },
    #[error("sample sizes must be increasing and at least 2")]
    SampleSizes,
    #[error("dimension {requested} exceeds the cap {cap}")]
    SizeLimit { requested: usize, cap: usize },
}

/// An `N x N` matrix tied to the interval and parameter it was built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenseUnitary {
    pub matrix: ComplexMatrix,
    pub interval: Interval,
    pub nu: ComplexParam,
}

impl DenseUnitary {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.matrix.unitarity_defect()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() < tol
    }
}

fn check_pair(n: usize, j: usize, k: usize) -> Result<(), DiscreteError> {
    if 1 <= j && j < k && k <= n {
        Ok(())
    } else {
        Err(DiscreteError::InvalidPair { j, k, n })
    }
}

/// `[[R_jj, R_jk], [R_kj, R_kk]]` of the rotation factor, or the identity
/// block when `nu = 0`.
fn rotation_block(n: usize, iv: &Interval, nu: &ComplexParam) -> [[Complex64; 2]; 2] {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let Some(unit) = nu.unit() else {
        return [[one, zero], [zero, one]];
    };
    let angle = iv.length() * nu.modulus() / n as f64;
    let (s, c) = angle.sin_cos();
    [
        [Complex64::new(c, 0.0), -unit.conj() * s],
        [unit * s, Complex64::new(c, 0.0)],
    ]
}

fn linear_block(n: usize, iv: &Interval, nu: &ComplexParam) -> [[Complex64; 2]; 2] {
    let delta = iv.length() / n as f64;
    let one = Complex64::new(1.0, 0.0);
    [[one, -nu.nu_bar() * delta], [nu.nu() * delta, one]]
}

/// The single factor `R_{j,k}` (1-based `j < k`).
pub fn rotation_factor(
    n: usize,
    j: usize,
    k: usize,
    iv: &Interval,
    nu: &ComplexParam,
) -> Result<DenseUnitary, DiscreteError> {
    check_pair(n, j, k)?;
    if nu.is_zero() {
        return Err(DiscreteError::ZeroParameter);
    }
    let mut matrix = ComplexMatrix::identity(n);
    matrix.right_apply_block(j - 1, k - 1, rotation_block(n, iv, nu));
    Ok(DenseUnitary {
        matrix,
        interval: *iv,
        nu: *nu,
    })
}

fn ordered_product(
    n: usize,
    ordering: &PairOrdering,
    block: [[Complex64; 2]; 2],
) -> Result<ComplexMatrix, DiscreteError> {
    if ordering.dim() != n {
        return Err(DiscreteError::DimensionMismatch {
            ordering: ordering.dim(),
            requested: n,
        });
    }
    ordering.validate()?;
    let mut w = ComplexMatrix::identity(n);
    for &(j, k) in ordering.pairs() {
        w.right_apply_block(j - 1, k - 1, block);
    }
    Ok(w)
}

/// `W_N`: the product of all `R_{j,k}` from left to right in `ordering`.
pub fn double_product(
    n: usize,
    iv: &Interval,
    nu: &ComplexParam,
    ordering: &PairOrdering,
) -> Result<DenseUnitary, DiscreteError> {
    let matrix = ordered_product(n, ordering, rotation_block(n, iv, nu))?;
    Ok(DenseUnitary {
        matrix,
        interval: *iv,
        nu: *nu,
    })
}

/// Product of the first-order factors `I + Delta (-conj nu |j><k| + nu |k><j|)`.
pub fn linearized_product(
    n: usize,
    iv: &Interval,
    nu: &ComplexParam,
    ordering: &PairOrdering,
) -> Result<ComplexMatrix, DiscreteError> {
    ordered_product(n, ordering, linear_block(n, iv, nu))
}

/// Counting matrix of degree `s` with rank `(r, r')`.
///
/// For `r + r' < s` the entry at `j < k` is
/// `Delta^s C(j-1, r) C(k-j-1, s-1-r-r') C(N-k, r')`; for `r + r' > s` the
/// entry at `k < j` is `Delta^s C(k-1, s-r') C(j-k-1, r+r'-s-1) C(N-j, s-r)`.
/// Indices are 1-based in these formulas.
pub fn h_discrete(
    n: usize,
    s: usize,
    r: usize,
    r_prime: usize,
    iv: &Interval,
) -> Result<RealMatrix, DiscreteError> {
    if r + r_prime == s {
        return Err(DiscreteError::BalancedRank { s, r, r_prime });
    }
    if s == 0 || s + 1 > n {
        return Err(DiscreteError::Degree {
            s,
            max: n.saturating_sub(1),
        });
    }
    let scale = (iv.length() / n as f64).powi(s as i32);
    // c(t, u) = C(t, u) for 0 <= t < n, with negative u giving zero.
    let c = |t: usize, u: i64| -> f64 { to_f64(binomial(t as u64, u)) };
    let (s_i, r_i, rp_i) = (s as i64, r as i64, r_prime as i64);
    let forward = r + r_prime < s;
    Ok(RealMatrix::from_fn(n, |row, col| {
        let (j, k) = (row + 1, col + 1);
        if forward && j < k {
            scale * c(j - 1, r_i) * c(k - j - 1, s_i - 1 - r_i - rp_i) * c(n - k, rp_i)
        } else if !forward && k < j {
            scale * c(k - 1, s_i - rp_i) * c(j - k - 1, r_i + rp_i - s_i - 1) * c(n - j, s_i - r_i)
        } else {
            0.0
        }
    }))
}

fn to_f64(v: num_bigint::BigUint) -> f64 {
    num_traits::ToPrimitive::to_f64(&v).unwrap_or(f64::INFINITY)
}

/// Midpoint of the 1-based cell `j`.
pub fn midpoint(iv: &Interval, n: usize, j: usize) -> f64 {
    iv.a() + (j as f64 - 0.5) * iv.length() / n as f64
}

/// `(W - I) N / (b - a)`, to be read at cell midpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelEstimate {
    pub interval: Interval,
    pub values: ComplexMatrix,
}

impl KernelEstimate {
    pub fn dim(&self) -> usize {
        self.values.dim()
    }

    /// `(x_j, x_k, estimate)` for 1-based `(j, k)`.
    pub fn at(&self, j: usize, k: usize) -> (f64, f64, Complex64) {
        let n = self.dim();
        (
            midpoint(&self.interval, n, j),
            midpoint(&self.interval, n, k),
            self.values.get(j - 1, k - 1),
        )
    }
}

pub fn kernel_estimate(w: &DenseUnitary) -> KernelEstimate {
    let n = w.dim();
    let scale = n as f64 / w.interval.length();
    let values = ComplexMatrix::from_fn(n, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        (w.matrix.get(i, j) - delta) * scale
    });
    KernelEstimate {
        interval: w.interval,
        values,
    }
}
