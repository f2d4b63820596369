//! Gauss–Legendre quadrature.

use std::ops::{Add, Mul};

use num_traits::Zero;

#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// `n`-point rule on `[-1, 1]`; nodes found by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `int_lo^hi f`.
    pub fn integrate<T, F>(&self, lo: f64, hi: f64, mut f: F) -> T
    where
        T: Zero + Add<Output = T> + Mul<f64, Output = T>,
        F: FnMut(f64) -> T,
    {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = T::zero();
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * t) * w;
        }
        acc * half
    }

    /// The rule applied on `panels` equal subintervals of `[lo, hi]`.
    pub fn integrate_composite<T, F>(&self, lo: f64, hi: f64, panels: usize, mut f: F) -> T
    where
        T: Zero + Add<Output = T> + Mul<f64, Output = T>,
        F: FnMut(f64) -> T,
    {
        let width = (hi - lo) / panels as f64;
        (0..panels).fold(T::zero(), |acc, i| {
            let a = lo + width * i as f64;
            let b = if i + 1 == panels { hi } else { a + width };
            acc + self.integrate(a, b, &mut f)
        })
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_polynomials() {
        for n in 1..12 {
            let rule = GaussLegendre::new(n);
            let sum_w: f64 = rule.weights().iter().sum();
            assert!((sum_w - 2.0).abs() < 1e-14, "n = {n}");
            for deg in 0..2 * n {
                let v: f64 = rule.integrate(0.0, 1.0, |x| x.powi(deg as i32));
                assert!(
                    (v - 1.0 / (deg as f64 + 1.0)).abs() < 1e-14,
                    "n = {n} deg = {deg}"
                );
            }
        }
    }

    #[test]
    fn nodes_sorted_and_symmetric() {
        let rule = GaussLegendre::new(9);
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(rule.nodes()[4], 0.0);
        for i in 0..9 {
            assert_eq!(rule.nodes()[i], -rule.nodes()[8 - i]);
        }
    }

    #[test]
    fn composite_smooth_integrand() {
        let rule = GaussLegendre::new(8);
        let v: f64 = rule.integrate_composite(0.0, 10.0, 5, f64::sin);
        assert!((v - (1.0 - 10f64.cos())).abs() < 1e-13);
    }
}
