//! Sequencings of the pairs `1 <= j < k <= N` compatible with the
//! componentwise order on pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::DiscreteError;

/// A sequence of all pairs `(j, k)`, `1 <= j < k <= N`, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairOrdering {
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl PairOrdering {
    /// Validates that every pair occurs once and that `(j, k)` comes after
    /// `(j', k')` whenever `j' <= j` and `k' <= k`.
    pub fn new(n: usize, pairs: Vec<(usize, usize)>) -> Result<Self, DiscreteError> {
        let ordering = Self { n, pairs };
        ordering.validate()?;
        Ok(ordering)
    }

    pub fn row_major(n: usize) -> Self {
        let pairs = (1..n)
            .flat_map(|j| (j + 1..=n).map(move |k| (j, k)))
            .collect();
        Self { n, pairs }
    }

    pub fn column_major(n: usize) -> Self {
        let pairs = (2..=n).flat_map(|k| (1..k).map(move |j| (j, k))).collect();
        Self { n, pairs }
    }

    /// Repeatedly removes a uniformly chosen minimal pair among those left.
    pub fn random_allowed(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut done = vec![false; (n + 1) * (n + 1)];
        let idx = |j: usize, k: usize| j * (n + 1) + k;
        let mut available: Vec<(usize, usize)> = if n >= 2 { vec![(1, 2)] } else { Vec::new() };
        let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        while !available.is_empty() {
            let pick = rng.random_range(0..available.len());
            let (j, k) = available.swap_remove(pick);
            done[idx(j, k)] = true;
            pairs.push((j, k));
            // (j+1, k) waits on (j, k) and (j+1, k-1).
            if j + 1 < k && (j + 1 == k - 1 || done[idx(j + 1, k - 1)]) {
                available.push((j + 1, k));
            }
            // (j, k+1) waits on (j, k) and (j-1, k+1).
            if k < n && (j == 1 || done[idx(j - 1, k + 1)]) {
                available.push((j, k + 1));
            }
        }
        Self { n, pairs }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// It suffices to compare each pair with its immediate predecessors
    /// `(j-1, k)` and `(j, k-1)`.
    pub fn validate(&self) -> Result<(), DiscreteError> {
        let n = self.n;
        let expected = n * n.saturating_sub(1) / 2;
        let mut position = vec![usize::MAX; (n + 1) * (n + 1)];
        let idx = |j: usize, k: usize| j * (n + 1) + k;
        for (pos, &(j, k)) in self.pairs.iter().enumerate() {
            if !(1 <= j && j < k && k <= n) {
                return Err(DiscreteError::InvalidPair { j, k, n });
            }
            if position[idx(j, k)] != usize::MAX {
                return Err(DiscreteError::RepeatedPair { j, k });
            }
            position[idx(j, k)] = pos;
        }
        if self.pairs.len() != expected {
            return Err(DiscreteError::IncompleteOrdering {
                found: self.pairs.len(),
                expected,
            });
        }
        for &(j, k) in &self.pairs {
            let here = position[idx(j, k)];
            let mut preds = Vec::with_capacity(2);
            if j > 1 {
                preds.push((j - 1, k));
            }
            if k - 1 > j {
                preds.push((j, k - 1));
            }
            for (pj, pk) in preds {
                if position[idx(pj, pk)] > here {
                    return Err(DiscreteError::DisallowedOrdering {
                        before: (j, k),
                        after: (pj, pk),
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_orderings_are_allowed() {
        for n in 1..8 {
            PairOrdering::row_major(n).validate().unwrap();
            PairOrdering::column_major(n).validate().unwrap();
            for seed in 0..5 {
                PairOrdering::random_allowed(n, seed).validate().unwrap();
            }
        }
    }

    #[test]
    fn rejects_bad_orderings() {
        assert!(PairOrdering::new(3, vec![(1, 3), (1, 2), (2, 3)]).is_err());
        assert!(PairOrdering::new(3, vec![(1, 2), (2, 3), (1, 3)]).is_err());
        assert!(PairOrdering::new(3, vec![(1, 2), (1, 3)]).is_err());
        assert!(PairOrdering::new(3, vec![(1, 2), (1, 2), (1, 3)]).is_err());
        assert!(PairOrdering::new(3, vec![(1, 2), (1, 3), (3, 2)]).is_err());
        assert!(PairOrdering::new(3, vec![(1, 2), (1, 3), (2, 3)]).is_ok());
    }

    #[test]
    fn random_orderings_vary_with_seed() {
        let a = PairOrdering::random_allowed(6, 1);
        let b = PairOrdering::random_allowed(6, 2);
        assert_ne!(a, b);
        assert_eq!(a, PairOrdering::random_allowed(6, 1));
    }
}
