//! Minimal dense square matrices, row-major.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matrix<T> {
    n: usize,
    data: Vec<T>,
}

pub type ComplexMatrix = Matrix<Complex64>;
pub type RealMatrix = Matrix<f64>;

impl<T: Copy + Zero> Matrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: T) {
        self.data[row * self.n + col] = v;
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Copy + Zero>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl<T: Copy + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { T::one() } else { T::zero() })
    }
}

impl<T> Matrix<T>
where
    T: Copy + Zero + Add<Output = T> + Mul<Output = T>,
{
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self.get(i, l);
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + a * other.data[l * n + j];
                }
            }
        }
        out
    }

    /// In-place `M <- M R` where `R` differs from the identity only in the
    /// `2 x 2` block on indices `j, k`, given as `[[r_jj, r_jk], [r_kj, r_kk]]`.
    pub fn right_apply_block(&mut self, j: usize, k: usize, block: [[T; 2]; 2]) {
        let n = self.n;
        for i in 0..n {
            let mj = self.data[i * n + j];
            let mk = self.data[i * n + k];
            self.data[i * n + j] = mj * block[0][0] + mk * block[1][0];
            self.data[i * n + k] = mj * block[0][1] + mk * block[1][1];
        }
    }
}

impl<T: Copy + Zero + Sub<Output = T>> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        Matrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl ComplexMatrix {
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs()
    }

    /// `max |(M^* M - I)_{ij}|`.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&Self::identity(self.n))
    }
}

impl RealMatrix {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_update_matches_dense_product() {
        let n = 4;
        let m = ComplexMatrix::from_fn(n, |i, j| Complex64::new(i as f64 + 0.5, j as f64 - 1.5));
        let block = [
            [Complex64::new(0.3, 0.0), Complex64::new(-0.1, 0.2)],
            [Complex64::new(0.4, -0.7), Complex64::new(0.9, 0.0)],
        ];
        let mut r = ComplexMatrix::identity(n);
        r.set(1, 1, block[0][0]);
        r.set(1, 3, block[0][1]);
        r.set(3, 1, block[1][0]);
        r.set(3, 3, block[1][1]);
        let dense = m.matmul(&r);
        let mut fast = m.clone();
        fast.right_apply_block(1, 3, block);
        assert!(dense.max_abs_diff(&fast) < 1e-15);
    }

    #[test]
    fn identity_is_unitary() {
        assert_eq!(ComplexMatrix::identity(5).unitarity_defect(), 0.0);
    }
}
