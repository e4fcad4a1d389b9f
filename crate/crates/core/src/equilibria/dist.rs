//! Probability objects: mixed strategies over actions and correlated
//! distributions over action pairs.
//!
//! Correlated distributions keep a sparse row/column representation until the
//! support exceeds a quarter of the full table, then switch to a dense `N x N`
//! array. Queries are identical either way and all iteration orders are
//! fixed, so downstream output is deterministic.

use thiserror::Error;

/// Tolerance for "total mass equals one" checks.
pub const MASS_TOLERANCE: f64 = 1e-9;
/// Entries at or below this are treated as outside the support.
pub const SUPPORT_EPSILON: f64 = 1e-12;
/// Maximum disagreement allowed between two evaluation routes of the same
/// quantity (fast vs. oracle, witness replay vs. reported value).
pub const EVAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistError {
    #[error("entry at index {index} is negative ({value})")]
    NegativeEntry { index: usize, value: f64 },
    #[error("total mass {total} is not 1 within {MASS_TOLERANCE:e}")]
    MassNotOne { total: f64 },
    #[error("index {index} out of range for {n} actions")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("expected {expected} actions, got {got}")]
    WrongActionCount { expected: usize, got: usize },
    #[error("expected {expected} per-type strategy pairs, got {got}")]
    WrongProfileCount { expected: usize, got: usize },
}

/// A probability distribution over the `n` actions of one player.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy {
    probs: Vec<f64>,
}

impl MixedStrategy {
    pub fn new(probs: Vec<f64>) -> Result<Self, DistError> {
        for (index, &value) in probs.iter().enumerate() {
            if value < 0.0 {
                return Err(DistError::NegativeEntry { index, value });
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(DistError::MassNotOne { total });
        }
        Ok(Self { probs })
    }

    /// Builder for distributions that are valid by construction.
    pub(crate) fn new_unchecked(probs: Vec<f64>) -> Self {
        Self { probs }
    }

    pub fn point_mass(n: usize, action: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[action] = 1.0;
        Self { probs }
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn n(&self) -> usize {
        self.probs.len()
    }

    pub fn prob(&self, action: usize) -> f64 {
        self.probs[action]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Actions with probability above [`SUPPORT_EPSILON`], ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&u| self.probs[u] > SUPPORT_EPSILON)
            .collect()
    }

    /// Total mass on a set of actions.
    pub fn mass_over(&self, set: &[usize]) -> f64 {
        set.iter().map(|&u| self.probs[u]).sum()
    }
}

#[derive(Debug, Clone)]
enum Storage {
    /// Per row `u`, ascending `(v, p)` with `p > 0`.
    Sparse {
        rows: Vec<Vec<(usize, f64)>>,
    },
    Dense(Vec<f64>),
}

/// A distribution over pairs `(u, v)` of actions; `u` belongs to player A,
/// `v` to player B.
#[derive(Debug, Clone)]
pub struct CorrelatedDistribution {
    n: usize,
    storage: Storage,
    marginal_a: Vec<f64>,
    marginal_b: Vec<f64>,
    support: usize,
    total: f64,
}

impl CorrelatedDistribution {
    /// Builds from `((u, v), p)` entries, accumulating duplicates, and
    /// validates non-negativity and unit mass.
    pub fn from_entries(
        n: usize,
        entries: impl IntoIterator<Item = ((usize, usize), f64)>,
    ) -> Result<Self, DistError> {
        let mut cells: Vec<((usize, usize), f64)> = Vec::new();
        for ((u, v), p) in entries {
            if u >= n {
                return Err(DistError::IndexOutOfRange { index: u, n });
            }
            if v >= n {
                return Err(DistError::IndexOutOfRange { index: v, n });
            }
            if p < 0.0 {
                return Err(DistError::NegativeEntry {
                    index: u * n + v,
                    value: p,
                });
            }
            cells.push(((u, v), p));
        }
        let dist = Self::assemble(n, cells);
        if (dist.total - 1.0).abs() > MASS_TOLERANCE {
            return Err(DistError::MassNotOne { total: dist.total });
        }
        Ok(dist)
    }

    /// Internal builder for constructions whose mass is correct by design
    /// (point masses, uniform, products). Entries must be in range and
    /// non-negative.
    pub(crate) fn from_entries_unchecked(
        n: usize,
        entries: impl IntoIterator<Item = ((usize, usize), f64)>,
    ) -> Self {
        Self::assemble(n, entries.into_iter().collect())
    }

    fn assemble(n: usize, mut cells: Vec<((usize, usize), f64)>) -> Self {
        cells.sort_by_key(|&((u, v), _)| (u, v));
        // accumulate duplicates
        let mut merged: Vec<((usize, usize), f64)> = Vec::with_capacity(cells.len());
        for (key, p) in cells {
            match merged.last_mut() {
                Some((last_key, last_p)) if *last_key == key => *last_p += p,
                _ => merged.push((key, p)),
            }
        }
        merged.retain(|&(_, p)| p > 0.0);
        let support = merged.len();
        let mut marginal_a = vec![0.0; n];
        let mut marginal_b = vec![0.0; n];
        let mut total = 0.0;
        for &((u, v), p) in &merged {
            marginal_a[u] += p;
            marginal_b[v] += p;
            total += p;
        }
        let storage = if support > n * n / 4 {
            let mut dense = vec![0.0; n * n];
            for ((u, v), p) in merged {
                dense[u * n + v] = p;
            }
            Storage::Dense(dense)
        } else {
            let mut rows = vec![Vec::new(); n];
            for ((u, v), p) in merged {
                rows[u].push((v, p));
            }
            Storage::Sparse { rows }
        };
        Self {
            n,
            storage,
            marginal_a,
            marginal_b,
            support,
            total,
        }
    }

    pub fn uniform(n: usize) -> Self {
        let p = 1.0 / (n * n) as f64;
        Self {
            n,
            storage: Storage::Dense(vec![p; n * n]),
            marginal_a: vec![1.0 / n as f64; n],
            marginal_b: vec![1.0 / n as f64; n],
            support: n * n,
            total: 1.0,
        }
    }

    pub fn point_mass(n: usize, u: usize, v: usize) -> Self {
        Self::from_entries_unchecked(n, [((u, v), 1.0)])
    }

    /// The product distribution `mu(u, v) = a(u) * b(v)`.
    pub fn product(a: &MixedStrategy, b: &MixedStrategy) -> Result<Self, DistError> {
        if a.n() != b.n() {
            return Err(DistError::WrongActionCount {
                expected: a.n(),
                got: b.n(),
            });
        }
        let sa = a.support();
        let sb = b.support();
        let entries = sa
            .iter()
            .flat_map(|&u| sb.iter().map(move |&v| ((u, v), a.prob(u) * b.prob(v))));
        Ok(Self::from_entries_unchecked(a.n(), entries))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mass(&self, u: usize, v: usize) -> f64 {
        match &self.storage {
            Storage::Dense(d) => d[u * self.n + v],
            Storage::Sparse { rows, .. } => rows[u]
                .binary_search_by_key(&v, |&(c, _)| c)
                .map(|pos| rows[u][pos].1)
                .unwrap_or(0.0),
        }
    }

    /// Nonzero cells of row `u` as `(v, p)`, ascending in `v`.
    pub fn row(&self, u: usize) -> Vec<(usize, f64)> {
        match &self.storage {
            Storage::Dense(d) => (0..self.n)
                .filter_map(|v| {
                    let p = d[u * self.n + v];
                    (p > 0.0).then_some((v, p))
                })
                .collect(),
            Storage::Sparse { rows, .. } => rows[u].clone(),
        }
    }

    /// `mu(u, S)`: mass of row `u` restricted to the column set `S`.
    pub fn row_mass_over(&self, u: usize, set: &[usize]) -> f64 {
        set.iter().map(|&v| self.mass(u, v)).sum()
    }

    /// `mu(S, v)`: mass of column `v` restricted to the row set `S`.
    pub fn col_mass_over(&self, set: &[usize], v: usize) -> f64 {
        set.iter().map(|&u| self.mass(u, v)).sum()
    }

    pub fn marginal_a(&self) -> &[f64] {
        &self.marginal_a
    }

    pub fn marginal_b(&self) -> &[f64] {
        &self.marginal_b
    }

    pub fn support_size(&self) -> usize {
        self.support
    }

    pub fn total_mass(&self) -> f64 {
        self.total
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    /// All nonzero cells `(u, v, p)` ascending by `(u, v)`.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        match &self.storage {
            Storage::Dense(d) => (0..self.n)
                .flat_map(|u| {
                    (0..self.n).filter_map(move |v| {
                        let p = d[u * self.n + v];
                        (p > 0.0).then_some((u, v, p))
                    })
                })
                .collect(),
            Storage::Sparse { rows, .. } => rows
                .iter()
                .enumerate()
                .flat_map(|(u, row)| row.iter().map(move |&(v, p)| (u, v, p)))
                .collect(),
        }
    }

    /// Nonzero cells of column `v` as `(u, p)`, ascending in `u`.
    pub fn col(&self, v: usize) -> Vec<(usize, f64)> {
        (0..self.n)
            .filter_map(|u| {
                let p = self.mass(u, v);
                (p > 0.0).then_some((u, p))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_rejects_negative_and_bad_mass() {
        assert!(matches!(
            MixedStrategy::new(vec![0.5, -0.1, 0.6]),
            Err(DistError::NegativeEntry { index: 1, .. })
        ));
        assert!(matches!(
            MixedStrategy::new(vec![0.5, 0.4]),
            Err(DistError::MassNotOne { .. })
        ));
    }

    #[test]
    fn zero_mass_rejected() {
        assert!(matches!(
            CorrelatedDistribution::from_entries(4, std::iter::empty()),
            Err(DistError::MassNotOne { .. })
        ));
    }

    #[test]
    fn out_of_range_cells_rejected() {
        assert!(matches!(
            CorrelatedDistribution::from_entries(3, [((0, 3), 1.0)]),
            Err(DistError::IndexOutOfRange { index: 3, n: 3 })
        ));
        assert!(matches!(
            CorrelatedDistribution::from_entries(3, [((5, 0), 1.0)]),
            Err(DistError::IndexOutOfRange { index: 5, n: 3 })
        ));
    }

    #[test]
    fn sparse_dense_switch() {
        let point = CorrelatedDistribution::point_mass(8, 1, 2);
        assert!(!point.is_dense());
        let unif = CorrelatedDistribution::uniform(8);
        assert!(unif.is_dense());
        assert_eq!(unif.support_size(), 64);
    }

    #[test]
    fn duplicates_accumulate() {
        let d = CorrelatedDistribution::from_entries(3, [((0, 1), 0.5), ((0, 1), 0.5)]).unwrap();
        assert_eq!(d.mass(0, 1), 1.0);
        assert_eq!(d.support_size(), 1);
    }

    #[test]
    fn marginals_and_slices() {
        let d = CorrelatedDistribution::from_entries(3, [((0, 1), 0.25), ((2, 1), 0.75)]).unwrap();
        assert_eq!(d.marginal_a()[0], 0.25);
        assert_eq!(d.marginal_b()[1], 1.0);
        assert_eq!(d.row_mass_over(2, &[0, 1]), 0.75);
        assert_eq!(d.col_mass_over(&[0, 2], 1), 1.0);
        assert_eq!(d.col(1), vec![(0, 0.25), (2, 0.75)]);
    }

    #[test]
    fn product_of_points_is_point() {
        let a = MixedStrategy::point_mass(4, 1);
        let b = MixedStrategy::point_mass(4, 2);
        let d = CorrelatedDistribution::product(&a, &b).unwrap();
        assert_eq!(d.entries(), vec![(1, 2, 1.0)]);
    }

    #[test]
    fn product_of_uniforms_is_uniform() {
        let a = MixedStrategy::uniform(4);
        let d = CorrelatedDistribution::product(&a, &a).unwrap();
        let u = CorrelatedDistribution::uniform(4);
        for x in 0..4 {
            for y in 0..4 {
                assert!((d.mass(x, y) - u.mass(x, y)).abs() < 1e-15);
            }
        }
    }
}
