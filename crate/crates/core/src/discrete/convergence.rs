//! Pointwise and weak comparison of `W_N - I` with the continuum kernel.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{double_product, kernel_estimate, midpoint, DiscreteError, PairOrdering};
use crate::kernel::{f_unchecked, g_unchecked, GaussLegendre, DEFAULT_TOL};
use crate::params::{ComplexParam, Interval};

/// Largest dimension a study will build.
pub const MAX_STUDY_DIM: usize = 512;

/// Midpoint pairs `(x, y)` kept for the pointwise error: both coordinates at
/// least `margin (b-a)` away from the ends and `|x - y| >= diagonal_gap (b-a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleRegion {
    pub margin: f64,
    pub diagonal_gap: f64,
}

impl Default for SampleRegion {
    fn default() -> Self {
        Self {
            margin: 0.1,
            diagonal_gap: 0.1,
        }
    }
}

impl SampleRegion {
    pub fn contains(&self, iv: &Interval, x: f64, y: f64) -> bool {
        let l = iv.length();
        let slack = 1e-12 * l;
        let (lo, hi) = (
            iv.a() + self.margin * l - slack,
            iv.b() - self.margin * l + slack,
        );
        (lo..=hi).contains(&x)
            && (lo..=hi).contains(&y)
            && (x - y).abs() >= self.diagonal_gap * l - slack
    }
}

/// Polynomial in the rescaled variable `t = (x - a) / (b - a)`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestPolynomial(pub Vec<f64>);

impl TestPolynomial {
    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    fn antiderivative(&self, t: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (i, &c)| acc * t + c / (i + 1) as f64)
            * t
    }

    /// Exact `int` over the 1-based cell `j` of `N` in `x`.
    pub fn cell_integral(&self, iv: &Interval, n: usize, j: usize) -> f64 {
        let (t0, t1) = ((j - 1) as f64 / n as f64, j as f64 / n as f64);
        iv.length() * (self.antiderivative(t1) - self.antiderivative(t0))
    }
}

fn default_test_pairs() -> Vec<(TestPolynomial, TestPolynomial)> {
    vec![
        (TestPolynomial(vec![1.0]), TestPolynomial(vec![1.0])),
        (
            TestPolynomial(vec![0.0, 1.0]),
            TestPolynomial(vec![1.0, -1.0]),
        ),
        (
            TestPolynomial(vec![1.0, -2.0, 3.0]),
            TestPolynomial(vec![0.5, 0.0, -1.0]),
        ),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    /// Largest `|estimate - kernel|` over sampled midpoint pairs.
    pub max_error: f64,
    /// `max_error * N`, which stays bounded under first-order convergence.
    pub scaled_error: f64,
    /// Largest `|<phi, (W_N - I) psi> - <phi, K psi>|` over the test pairs.
    pub weak_error: f64,
    /// Local exponent against the previous row.
    pub fitted_rate: Option<f64>,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub interval: Interval,
    pub nu: ComplexParam,
    pub region: SampleRegion,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares decay exponent of `max_error` in `N`.
    pub fitted_exponent: Option<f64>,
    pub weak_exponent: Option<f64>,
}

impl ConvergenceStudy {
    /// Ratios `error(N_i) / error(N_{i+1})`.
    pub fn ratios(&self) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|w| w[0].max_error / w[1].max_error)
            .collect()
    }
}

fn kernel_value(x: f64, y: f64, iv: &Interval, nu: &ComplexParam) -> Complex64 {
    if x < y {
        f_unchecked(x, y, iv, nu, DEFAULT_TOL)
    } else if y < x {
        g_unchecked(x, y, iv, nu, DEFAULT_TOL)
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// `int int phi(x) K(x, y) psi(y) dx dy`, split along the diagonal.
fn continuum_form(
    phi: &TestPolynomial,
    psi: &TestPolynomial,
    iv: &Interval,
    nu: &ComplexParam,
) -> Complex64 {
    let rule = GaussLegendre::new(40);
    let (a, b, l) = (iv.a(), iv.b(), iv.length());
    let panels = 4;
    let width = l / panels as f64;
    (0..panels)
        .into_par_iter()
        .map(|p| {
            let (lo, hi) = (a + width * p as f64, a + width * (p + 1) as f64);
            rule.integrate(lo, hi, |x| {
                let w = |y: f64| psi.eval((y - a) / l);
                let upper = rule.integrate(x, b, |y| f_unchecked(x, y, iv, nu, DEFAULT_TOL) * w(y));
                let lower = rule.integrate(a, x, |y| g_unchecked(x, y, iv, nu, DEFAULT_TOL) * w(y));
                (upper + lower) * phi.eval((x - a) / l)
            })
        })
        .sum()
}

/// `sum_{j,k} phi_j (W - I)_{jk} psi_k N / (b-a)` with `phi_j` the exact cell integrals.
fn discrete_form(
    phi: &TestPolynomial,
    psi: &TestPolynomial,
    est: &super::KernelEstimate,
) -> Complex64 {
    let n = est.dim();
    let iv = est.interval;
    let phis: Vec<f64> = (1..=n).map(|j| phi.cell_integral(&iv, n, j)).collect();
    let psis: Vec<f64> = (1..=n).map(|k| psi.cell_integral(&iv, n, k)).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            total += est.values.get(j, k) * (phis[j] * psis[k]);
        }
    }
    total
}

fn fit_exponent(points: impl Iterator<Item = (usize, f64)>) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points.map(|(n, e)| ((n as f64).ln(), e)).collect();
    if pts.len() < 2 || pts.iter().any(|&(_, e)| !(e > 0.0 && e.is_finite())) {
        return None;
    }
    let pts: Vec<(f64, f64)> = pts.into_iter().map(|(x, e)| (x, e.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(-sxy / sxx)
}

pub fn convergence_study(
    ns: &[usize],
    region: &SampleRegion,
    iv: &Interval,
    nu: &ComplexParam,
) -> Result<ConvergenceStudy, DiscreteError> {
    convergence_study_with(ns, region, &default_test_pairs(), iv, nu)
}

/// Builds `W_N` for every `N` (in parallel) and compares it with the kernel.
pub fn convergence_study_with(
    ns: &[usize],
    region: &SampleRegion,
    tests: &[(TestPolynomial, TestPolynomial)],
    iv: &Interval,
    nu: &ComplexParam,
) -> Result<ConvergenceStudy, DiscreteError> {
    if ns.is_empty() || ns[0] < 2 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DiscreteError::SampleSizes);
    }
    let largest = *ns.last().expect("non-empty");
    if largest > MAX_STUDY_DIM {
        return Err(DiscreteError::SizeLimit {
            requested: largest,
            cap: MAX_STUDY_DIM,
        });
    }
    let continuum: Vec<Complex64> = tests
        .iter()
        .map(|(phi, psi)| continuum_form(phi, psi, iv, nu))
        .collect();

    let measured: Vec<(f64, f64, usize)> = ns
        .par_iter()
        .map(|&n| {
            let w = double_product(n, iv, nu, &PairOrdering::row_major(n))?;
            let est = kernel_estimate(&w);
            let points: Vec<(usize, usize)> = (1..=n)
                .flat_map(|j| (1..=n).map(move |k| (j, k)))
                .filter(|&(j, k)| region.contains(iv, midpoint(iv, n, j), midpoint(iv, n, k)))
                .collect();
            let max_error = points
                .par_iter()
                .map(|&(j, k)| {
                    let (x, y, v) = est.at(j, k);
                    (v - kernel_value(x, y, iv, nu)).norm()
                })
                .reduce(|| 0.0, f64::max);
            let weak_error = tests
                .iter()
                .zip(&continuum)
                .map(|((phi, psi), c)| (discrete_form(phi, psi, &est) - c).norm())
                .fold(0.0, f64::max);
            Ok((max_error, weak_error, points.len()))
        })
        .collect::<Result<_, DiscreteError>>()?;

    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(ns.len());
    for (i, (&n, &(max_error, weak_error, samples))) in ns.iter().zip(&measured).enumerate() {
        let fitted_rate = (i > 0)
            .then(|| fit_exponent([(ns[i - 1], measured[i - 1].0), (n, max_error)].into_iter()))
            .flatten();
        rows.push(ConvergenceRow {
            n,
            max_error,
            scaled_error: max_error * n as f64,
            weak_error,
            fitted_rate,
            samples,
        });
    }
    let fitted_exponent = fit_exponent(rows.iter().map(|r| (r.n, r.max_error)));
    let weak_exponent = fit_exponent(rows.iter().map(|r| (r.n, r.weak_error)));
    Ok(ConvergenceStudy {
        interval: *iv,
        nu: *nu,
        region: *region,
        rows,
        fitted_exponent,
        weak_exponent,
    })
}
