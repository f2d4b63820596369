//! The integer arrays `D_{m,n,p;q}` and `E_{m,n,p;q}` that weight the
//! series expansion of the limit kernel.
//!
//! Two independent routes are provided: the brute-force count of linear
//! extensions over the lattice-path model, and the binomial closed form.
//! They share nothing beyond the path enumeration on one side and the
//! binomial on the other.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::combinatorics::binomial_z;
use crate::lattice::{self, enumerate_linear_extensions, essential_order, Orientation};
use crate::params::{ComplexParam, Interval};

/// Largest `m + n + p` the brute-force route will enumerate.
pub const DEFAULT_BRUTE_CAP: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("q = {q} outside 0..={max} for (m, n, p) = ({m}, {n}, {p})")]
    InvalidKey {
        m: u32,
        n: u32,
        p: u32,
        q: u32,
        max: u32,
    },
    #[error("m + n + p = {requested} exceeds the brute-force cap {cap}")]
    SizeLimit { requested: u32, cap: u32 },
}

impl From<lattice::LatticeError> for CoeffError {
    fn from(e: lattice::LatticeError) -> Self {
        match e {
            lattice::LatticeError::SizeLimit { requested, cap } => CoeffError::SizeLimit {
                requested: requested as u32 - 1,
                cap: cap as u32 - 1,
            },
            other => unreachable!("path enumeration failed: {other}"),
        }
    }
}

/// Index `(m, n, p; q)` with `0 <= q <= m + n + p + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CoeffKey {
    pub m: u32,
    pub n: u32,
    pub p: u32,
    pub q: u32,
}

impl CoeffKey {
    pub fn new(m: u32, n: u32, p: u32, q: u32) -> Result<Self, CoeffError> {
        let max = m + n + p + 1;
        if q > max {
            return Err(CoeffError::InvalidKey { m, n, p, q, max });
        }
        Ok(Self { m, n, p, q })
    }

    /// Series degree `s = m + n + p + 1`.
    pub fn degree(&self) -> u32 {
        self.m + self.n + self.p + 1
    }

    /// All keys of degree `s`, ordered by `(m, n, p, q)`.
    pub fn all_of_degree(s: u32) -> Vec<CoeffKey> {
        let mut keys = Vec::new();
        for m in 0..s {
            for n in 0..s - m {
                let p = s - 1 - m - n;
                for q in 0..=s {
                    keys.push(CoeffKey { m, n, p, q });
                }
            }
        }
        keys
    }
}

/// Closed form of `D` over all integers; zero outside the index domain.
pub fn d_closed_z(m: i64, n: i64, p: i64, q: i64) -> BigInt {
    if m < 0 || n < 0 || p < 0 {
        return BigInt::zero();
    }
    let total = m + n + p;
    match (2 * q).cmp(&total) {
        std::cmp::Ordering::Greater => binomial_z(n, q - 1) - binomial_z(n, q),
        std::cmp::Ordering::Equal => binomial_z(n, q - m) - binomial_z(n, q),
        std::cmp::Ordering::Less => BigInt::zero(),
    }
}

/// `E_{m,n,p;q} = [m = p = q, n = 0]`.
pub fn e_closed_z(m: i64, n: i64, p: i64, q: i64) -> BigInt {
    BigInt::from((m >= 0 && m == p && p == q && n == 0) as u8)
}

pub fn d_closed(key: CoeffKey) -> BigInt {
    d_closed_z(key.m.into(), key.n.into(), key.p.into(), key.q.into())
}

pub fn e_closed(key: CoeffKey) -> BigInt {
    e_closed_z(key.m.into(), key.n.into(), key.p.into(), key.q.into())
}

/// Linear-extension counts for every key of one degree, obtained by
/// enumerating all paths with `s` vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BruteTally {
    pub d: BTreeMap<CoeffKey, u64>,
    pub e: BTreeMap<CoeffKey, u64>,
}

impl BruteTally {
    fn merge(mut self, other: BruteTally) -> BruteTally {
        for (k, v) in other.d {
            *self.d.entry(k).or_default() += v;
        }
        for (k, v) in other.e {
            *self.e.entry(k).or_default() += v;
        }
        self
    }

    pub fn d_count(&self, key: &CoeffKey) -> u64 {
        self.d.get(key).copied().unwrap_or(0)
    }

    pub fn e_count(&self, key: &CoeffKey) -> u64 {
        self.e.get(key).copied().unwrap_or(0)
    }
}

/// Tally of forward extensions by rank `(m, p)` (into `D`) and reversed
/// extensions by rank `(m + n + 1, n + p + 1)` (into `E`), keyed by the
/// number of upper vertices `q`.
pub fn brute_tally(s: u32, cap: u32) -> Result<BruteTally, CoeffError> {
    let paths = lattice::enumerate_paths_capped(s as usize, cap as usize + 1)?;
    let tally = paths
        .par_iter()
        .map(|path| {
            let mut local = BruteTally::default();
            let q = path.upper_vertex_count() as u32;
            let order = essential_order(path);
            for ext in enumerate_linear_extensions(&order) {
                let (r, rp) = ext.rank();
                let (r, rp) = (r as u32, rp as u32);
                let n = ext.between() as u32;
                let key = match ext.orientation() {
                    Orientation::Forward => (CoeffKey { m: r, n, p: rp, q }, true),
                    Orientation::Reversed => (
                        CoeffKey {
                            m: s - rp,
                            n,
                            p: s - r,
                            q,
                        },
                        false,
                    ),
                };
                let table = if key.1 { &mut local.d } else { &mut local.e };
                *table.entry(key.0).or_default() += 1;
            }
            local
        })
        .reduce(BruteTally::default, BruteTally::merge);
    Ok(tally)
}

pub fn d_brute(key: CoeffKey) -> Result<BigInt, CoeffError> {
    d_brute_capped(key, DEFAULT_BRUTE_CAP)
}

pub fn d_brute_capped(key: CoeffKey, cap: u32) -> Result<BigInt, CoeffError> {
    check_cap(key, cap)?;
    Ok(BigInt::from(brute_tally(key.degree(), cap)?.d_count(&key)))
}

pub fn e_brute(key: CoeffKey) -> Result<BigInt, CoeffError> {
    e_brute_capped(key, DEFAULT_BRUTE_CAP)
}

pub fn e_brute_capped(key: CoeffKey, cap: u32) -> Result<BigInt, CoeffError> {
    check_cap(key, cap)?;
    Ok(BigInt::from(brute_tally(key.degree(), cap)?.e_count(&key)))
}

fn check_cap(key: CoeffKey, cap: u32) -> Result<(), CoeffError> {
    let requested = key.m + key.n + key.p;
    if requested > cap {
        return Err(CoeffError::SizeLimit { requested, cap });
    }
    Ok(())
}

/// One row of a coefficient table, carrying both provenances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientRow {
    pub key: CoeffKey,
    pub d_closed: BigInt,
    pub d_brute: BigInt,
    pub e_closed: BigInt,
    pub e_brute: BigInt,
}

impl CoefficientRow {
    pub fn matches(&self) -> bool {
        self.d_closed == self.d_brute && self.e_closed == self.e_brute
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientTable {
    pub rows: Vec<CoefficientRow>,
}

impl CoefficientTable {
    /// Every key of degree `1..=s_max`, ordered by degree then `(m, n, p, q)`.
    pub fn build(s_max: u32) -> Result<Self, CoeffError> {
        Self::build_capped(s_max, DEFAULT_BRUTE_CAP)
    }

    pub fn build_capped(s_max: u32, cap: u32) -> Result<Self, CoeffError> {
        if s_max > cap + 1 {
            return Err(CoeffError::SizeLimit {
                requested: s_max - 1,
                cap,
            });
        }
        let tallies: Vec<BruteTally> = (1..=s_max)
            .into_par_iter()
            .map(|s| brute_tally(s, cap))
            .collect::<Result<_, _>>()?;
        let mut rows = Vec::new();
        for (s, tally) in (1..=s_max).zip(&tallies) {
            for key in CoeffKey::all_of_degree(s) {
                rows.push(CoefficientRow {
                    key,
                    d_closed: d_closed(key),
                    d_brute: BigInt::from(tally.d_count(&key)),
                    e_closed: e_closed(key),
                    e_brute: BigInt::from(tally.e_count(&key)),
                });
            }
        }
        Ok(Self { rows })
    }

    pub fn all_match(&self) -> bool {
        self.rows.iter().all(CoefficientRow::matches)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &CoefficientRow> {
        self.rows.iter().filter(|r| !r.matches())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeriesKind {
    /// `f_s`, supported on `x < y` with monomials `[m,n,p]`.
    F,
    /// `g_s`, supported on `y < x` with monomials `[m,n,p]^†`.
    G,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesTerm {
    pub m: u32,
    pub n: u32,
    pub p: u32,
    pub q: u32,
    pub coefficient: BigInt,
}

/// Homogeneous degree-`s` piece of the kernel series,
/// `sum coefficient * (-conj nu)^q nu^(s-q) * [m,n,p]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesPolynomial {
    pub kind: SeriesKind,
    pub degree: u32,
    pub terms: Vec<SeriesTerm>,
}

pub fn f_series(s: u32) -> SeriesPolynomial {
    series(SeriesKind::F, s, d_closed)
}

pub fn g_series(s: u32) -> SeriesPolynomial {
    series(SeriesKind::G, s, e_closed)
}

fn series(kind: SeriesKind, s: u32, coeff: fn(CoeffKey) -> BigInt) -> SeriesPolynomial {
    let terms = CoeffKey::all_of_degree(s)
        .into_iter()
        .filter_map(|key| {
            let c = coeff(key);
            (!c.is_zero()).then_some(SeriesTerm {
                m: key.m,
                n: key.n,
                p: key.p,
                q: key.q,
                coefficient: c,
            })
        })
        .collect();
    SeriesPolynomial {
        kind,
        degree: s,
        terms,
    }
}

/// `[m,n,p](x,y) = (x-a)^m/m! (y-x)^n/n! (b-y)^p/p!`.
pub fn monomial(m: u32, n: u32, p: u32, x: f64, y: f64, iv: &Interval) -> f64 {
    power_over_factorial(x - iv.a(), m)
        * power_over_factorial(y - x, n)
        * power_over_factorial(iv.b() - y, p)
}

fn power_over_factorial(base: f64, k: u32) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * base / i as f64)
}

impl SeriesPolynomial {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at `(x, y)`, ignoring the support indicator.
    pub fn eval(&self, x: f64, y: f64, iv: &Interval, nu: &ComplexParam) -> Complex64 {
        let (v, vbar) = (nu.nu(), -nu.nu_bar());
        self.terms
            .iter()
            .map(|t| {
                let prefactor = vbar.powu(t.q) * v.powu(self.degree - t.q);
                let shape = match self.kind {
                    SeriesKind::F => monomial(t.m, t.n, t.p, x, y, iv),
                    SeriesKind::G => monomial(t.m, t.n, t.p, y, x, iv),
                };
                let c = t.coefficient.to_f64().expect("finite coefficient");
                prefactor * (c * shape)
            })
            .sum()
    }

    /// Coefficients grouped by monomial: `(m, n, p) -> [(q, coefficient)]`.
    pub fn by_monomial(&self) -> BTreeMap<(u32, u32, u32), Vec<(u32, BigInt)>> {
        let mut out: BTreeMap<(u32, u32, u32), Vec<(u32, BigInt)>> = BTreeMap::new();
        for t in &self.terms {
            out.entry((t.m, t.n, t.p))
                .or_default()
                .push((t.q, t.coefficient.clone()));
        }
        out
    }
}

/// Partial sums `sum_{s <= max_degree} (f_s <_a^b + g_s >_a^b)`.
#[derive(Debug, Clone)]
pub struct TruncatedKernel {
    f: Vec<SeriesPolynomial>,
    g: Vec<SeriesPolynomial>,
}

impl TruncatedKernel {
    pub fn new(max_degree: u32) -> Self {
        Self {
            f: (1..=max_degree).map(f_series).collect(),
            g: (1..=max_degree).map(g_series).collect(),
        }
    }

    pub fn eval(&self, x: f64, y: f64, iv: &Interval, nu: &ComplexParam) -> Complex64 {
        let parts = match x.partial_cmp(&y) {
            Some(std::cmp::Ordering::Less) => &self.f,
            Some(std::cmp::Ordering::Greater) => &self.g,
            _ => return Complex64::zero(),
        };
        parts.iter().map(|poly| poly.eval(x, y, iv, nu)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseLemma {
    /// `D(0, 2k, 0; k+1) = C_k`.
    A,
    /// `D(0, n, 2k-n+1; k+1) = C_{k, n-k}`.
    B,
    /// `D(2k-n+1, n, 0; k+1) = C_{k, n-k}`.
    C,
    /// `D(r, 2k-r-r', r'; k) = C_{k-r, k-r', r-1} = C_{k-r', k-r, r'-1}`.
    D,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseCheck {
    pub case: CaseLemma,
    pub k: u32,
    pub key: CoeffKey,
    pub coefficient: BigInt,
    pub catalan: Vec<BigInt>,
}

impl CaseCheck {
    pub fn holds(&self) -> bool {
        self.catalan.iter().all(|c| *c == self.coefficient)
    }
}

/// Every instance of the four extreme-case evaluations of `D` with `k <= k_max`.
pub fn case_lemma_checks(k_max: u32) -> Vec<CaseCheck> {
    use crate::combinatorics::{catalan, catalan_general, CatalanTriple};
    let mut out = Vec::new();
    let mut push = |case, k: u32, key: CoeffKey, catalan: Vec<BigInt>| {
        out.push(CaseCheck {
            case,
            k,
            key,
            coefficient: d_closed(key),
            catalan,
        });
    };
    for k in 0..=k_max {
        let ki = k as i64;
        push(
            CaseLemma::A,
            k,
            CoeffKey {
                m: 0,
                n: 2 * k,
                p: 0,
                q: k + 1,
            },
            vec![catalan(ki)],
        );
        for n in 0..=2 * k + 1 {
            let c = catalan_general(CatalanTriple::triangle(ki, n as i64 - ki));
            push(
                CaseLemma::B,
                k,
                CoeffKey {
                    m: 0,
                    n,
                    p: 2 * k + 1 - n,
                    q: k + 1,
                },
                vec![c.clone()],
            );
            push(
                CaseLemma::C,
                k,
                CoeffKey {
                    m: 2 * k + 1 - n,
                    n,
                    p: 0,
                    q: k + 1,
                },
                vec![c],
            );
        }
        for r in 0..=2 * k {
            for rp in 0..=2 * k - r {
                let (ri, rpi) = (r as i64, rp as i64);
                let forms = vec![
                    catalan_general(CatalanTriple::new(ki - ri, ki - rpi, ri - 1)),
                    catalan_general(CatalanTriple::new(ki - rpi, ki - ri, rpi - 1)),
                ];
                push(
                    CaseLemma::D,
                    k,
                    CoeffKey {
                        m: r,
                        n: 2 * k - r - rp,
                        p: rp,
                        q: k,
                    },
                    forms,
                );
            }
        }
    }
    out
}

/// The integer identity obtained by expanding the unitarity equation in
/// monomials; it should vanish for every index.
pub fn combinatorial_identity_residual(alpha: u32, beta: u32, gamma: u32, xi: u32) -> BigInt {
    combinatorial_identity_residual_with(alpha, beta, gamma, xi, d_closed_z)
}

/// Same identity with an arbitrary `D` array (used for negative controls).
pub fn combinatorial_identity_residual_with<F>(
    alpha: u32,
    beta: u32,
    gamma: u32,
    xi: u32,
    d: F,
) -> BigInt
where
    F: Fn(i64, i64, i64, i64) -> BigInt,
{
    let (a, b, g, xi) = (alpha as i64, beta as i64, gamma as i64, xi as i64);
    let indicator = |c: bool| BigInt::from(c as u8);

    let mut total = d(a, b, g, xi)
        - indicator(a == g && g == xi - 1 && b == 0)
        - binomial_z(a + g - 1, g) * indicator(b + g + 1 == a && a == xi);

    for m in 0..=a {
        for p in 0..=(g - a + m) {
            for n in 0..=(a + b - g - m + p - 1) {
                let coeff = d(m, n, a + b - g - m - n + 2 * p - 1, xi - g + p - 1);
                if coeff.is_zero() {
                    continue;
                }
                total -=
                    coeff * binomial_z(a, m) * binomial_z(g - a + m + n - p, n) * binomial_z(g, p);
            }
        }
    }

    for m1 in 0..=a {
        for m2 in 0..=b {
            for n1 in 0..g {
                for n2 in 0..=(g - 1 - n1) {
                    for p1 in 0..=(g - 1 - n1 - n2) {
                        let weight = binomial_z(a, m1)
                            * binomial_z(b, m2)
                            * binomial_z(n1 + n2, n1)
                            * binomial_z(g - 1 - n1 - n2, p1);
                        let sign_odd = (a + g - m1 - n1 - p1 + m2).rem_euclid(2) == 1;
                        for t1 in 0..=xi {
                            let first = d(m1, n1 + b - m2, p1, t1);
                            if first.is_zero() {
                                continue;
                            }
                            let second = d(
                                m2 + a - m1,
                                n2,
                                g - 1 - n1 - n2 - p1,
                                a + g - xi - m1 - n1 - p1 + m2 + t1,
                            );
                            let term = first * second * &weight;
                            if sign_odd {
                                total -= term;
                            } else {
                                total += term;
                            }
                        }
                    }
                }
            }
        }
    }
    total
}
