//! Exact integer combinatorics: binomials with the zero convention, doubly
//! generalized Catalan numbers, Fibonacci numbers and Dyck-path enumeration.

use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error(
        "hypothesis unmet for ({m}, {n}, {p}): requires n >= 0, m >= p and m + n + p + 1 >= 0"
    )]
    HypothesisUnmet { m: i64, n: i64, p: i64 },
}

/// Rows of Pascal's triangle, extended on demand.
///
/// Rows above [`PascalTriangle::HARD_LIMIT`] are never stored; those
/// binomials are computed with the multiplicative formula instead.
#[derive(Debug)]
pub struct PascalTriangle {
    rows: RwLock<Vec<Vec<BigUint>>>,
}

impl PascalTriangle {
    pub const HARD_LIMIT: u64 = 1024;

    pub fn with_rows(max_row: u64) -> Self {
        let triangle = Self {
            rows: RwLock::new(vec![vec![BigUint::one()]]),
        };
        triangle.extend_to(max_row.min(Self::HARD_LIMIT));
        triangle
    }

    fn extend_to(&self, max_row: u64) {
        let mut rows = self.rows.write().expect("pascal cache poisoned");
        while (rows.len() as u64) <= max_row {
            let prev = rows.last().expect("row 0 always present");
            let mut next = Vec::with_capacity(prev.len() + 1);
            next.push(BigUint::one());
            for w in prev.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(BigUint::one());
            rows.push(next);
        }
    }

    /// `m choose n`, zero unless `0 <= n <= m`.
    pub fn get(&self, m: u64, n: i64) -> BigUint {
        if n < 0 || n as u64 > m {
            return BigUint::zero();
        }
        let n = n as u64;
        if m > Self::HARD_LIMIT {
            return multiplicative_binomial(m, n);
        }
        {
            let rows = self.rows.read().expect("pascal cache poisoned");
            if let Some(row) = rows.get(m as usize) {
                return row[n as usize].clone();
            }
        }
        self.extend_to(m);
        self.rows.read().expect("pascal cache poisoned")[m as usize][n as usize].clone()
    }

    pub fn cached_rows(&self) -> usize {
        self.rows.read().expect("pascal cache poisoned").len()
    }
}

fn multiplicative_binomial(m: u64, n: u64) -> BigUint {
    let n = n.min(m - n);
    let mut acc = BigUint::one();
    for i in 1..=n {
        acc = acc * BigUint::from(m - n + i) / BigUint::from(i);
    }
    acc
}

static PASCAL: OnceLock<PascalTriangle> = OnceLock::new();

fn pascal() -> &'static PascalTriangle {
    PASCAL.get_or_init(|| PascalTriangle::with_rows(64))
}

/// `m! / (n! (m - n)!)` when `0 <= n <= m`, otherwise 0.
pub fn binomial(m: u64, n: i64) -> BigUint {
    pascal().get(m, n)
}

/// Binomial over arbitrary integer arguments: zero whenever `m < 0`.
pub fn binomial_z(m: i64, n: i64) -> BigInt {
    if m < 0 {
        BigInt::zero()
    } else {
        BigInt::from(binomial(m as u64, n))
    }
}

/// Index triple of the doubly generalized Catalan number `C_{m,n,p}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CatalanTriple {
    pub m: i64,
    pub n: i64,
    pub p: i64,
}

impl CatalanTriple {
    pub fn new(m: i64, n: i64, p: i64) -> Self {
        Self { m, n, p }
    }

    /// Catalan triangle entry `C_{m,n} = C_{m,n,0}`.
    pub fn triangle(m: i64, n: i64) -> Self {
        Self { m, n, p: 0 }
    }
}

/// `C_{m,n,p} = binom(m+n, m) - binom(m+n, m+p+1)`.
pub fn catalan_general(t: CatalanTriple) -> BigInt {
    let top = t.m + t.n;
    binomial_z(top, t.m) - binomial_z(top, t.m + t.p + 1)
}

/// Classical Catalan number `C_n = C_{n,n,0}`.
pub fn catalan(n: i64) -> BigInt {
    catalan_general(CatalanTriple::triangle(n, n))
}

/// Fibonacci numbers with `Fib_1 = Fib_2 = 1` (and `Fib_0 = 0`).
pub fn fibonacci(n: u32) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// Lattice paths with `m` up-steps and `n` down-steps starting at height
/// `alpha` and never dropping below `-p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyckQuery {
    pub alpha: u32,
    pub m: u32,
    pub n: u32,
    pub p: u32,
}

impl DyckQuery {
    pub fn new(alpha: u32, m: u32, n: u32, p: u32) -> Self {
        Self { alpha, m, n, p }
    }
}

/// Heights `rho_0, ..., rho_{m+n}` of a ±1 lattice path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyckPath(pub Vec<i64>);

impl DyckPath {
    pub fn heights(&self) -> &[i64] {
        &self.0
    }

    /// `+1` for an up-step, `-1` for a down-step.
    pub fn steps(&self) -> Vec<i8> {
        self.0.windows(2).map(|w| (w[1] - w[0]) as i8).collect()
    }
}

/// Depth-first enumeration of `T_{alpha,m,n,p}`; paths come out in
/// lexicographic order of their step sequences (down before up).
pub fn enumerate_dyck(q: DyckQuery) -> Vec<DyckPath> {
    let floor = -(q.p as i64);
    let start = q.alpha as i64;
    let mut out = Vec::new();
    // Any prefix above the floor can be completed by taking the remaining
    // up-steps first, so the final height is the only global obstruction.
    if start + q.m as i64 - (q.n as i64) < floor {
        return out;
    }
    let mut heights = Vec::with_capacity((q.m + q.n + 1) as usize);
    heights.push(start);
    dyck_rec(&mut heights, q.m, q.n, floor, &mut out);
    out
}

fn dyck_rec(heights: &mut Vec<i64>, ups: u32, downs: u32, floor: i64, out: &mut Vec<DyckPath>) {
    if ups == 0 && downs == 0 {
        out.push(DyckPath(heights.clone()));
        return;
    }
    let h = *heights.last().expect("non-empty");
    // Remaining path must still be able to end at or above the floor.
    if downs > 0 && h > floor && h - 1 + ups as i64 - (downs as i64 - 1) >= floor {
        heights.push(h - 1);
        dyck_rec(heights, ups, downs - 1, floor, out);
        heights.pop();
    }
    if ups > 0 {
        heights.push(h + 1);
        dyck_rec(heights, ups - 1, downs, floor, out);
        heights.pop();
    }
}

/// Checks `sum_{k=0}^{floor((m+p)/2)} C_{k+n,k} C_{m-k,p-k} = C_{m+n+1,p}`
/// exactly. Inputs outside `n >= 0, m >= p, m + n + p + 1 >= 0` are
/// rejected rather than evaluated.
pub fn check_catalan_recurrence(m: i64, n: i64, p: i64) -> Result<bool, CombinatoricsError> {
    if n < 0 || m < p || m + n + p + 1 < 0 {
        return Err(CombinatoricsError::HypothesisUnmet { m, n, p });
    }
    let upper = (m + p).div_euclid(2);
    let lhs: BigInt = (0..=upper)
        .map(|k| {
            catalan_general(CatalanTriple::triangle(k + n, k))
                * catalan_general(CatalanTriple::triangle(m - k, p - k))
        })
        .sum();
    let rhs = catalan_general(CatalanTriple::triangle(m + n + 1, p));
    Ok(lhs == rhs)
}
