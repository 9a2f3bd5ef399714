//! Incremental first/second-moment accumulators shared across the engine.
//!
//! All running means and variances in the engine go through [`RunningStat`]
//! so that incremental results match a batch recomputation to floating-point
//! accuracy. Sparse feature spaces are handled by *implicit zeros*: a store
//! knows how much total weight it has seen, and a per-feature accumulator
//! that absorbed less weight is topped up with zero-valued observations
//! before use (Chan's parallel combination, which is exact).

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Weighted running mean/variance (population semantics: variance = M2/W).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RunningStat {
    pub weight: f64,
    pub mean: f64,
    m2: f64,
}

impl RunningStat {
    pub fn new() -> Self {
        Self::default()
    }

    /// Folds one observation of weight `w` into the accumulator.
    pub fn observe(&mut self, x: f64, w: f64) {
        if w <= 0.0 {
            return;
        }
        self.weight += w;
        let delta = x - self.mean;
        self.mean += delta * (w / self.weight);
        self.m2 += w * delta * (x - self.mean);
    }

    /// Absorbs `w` weight of zero-valued observations in one step.
    pub fn absorb_zeros(&mut self, w: f64) {
        if w <= 0.0 {
            return;
        }
        let n = self.weight;
        let total = n + w;
        // Merging a batch with mean 0 and no spread shifts the mean towards 0
        // and adds the between-batch term.
        self.m2 += self.mean * self.mean * n * w / total;
        self.mean = self.mean * n / total;
        self.weight = total;
    }

    /// Copy of this accumulator as if `w` additional zero observations had
    /// been folded in. Used on read paths that must not mutate.
    pub fn with_virtual_zeros(&self, w: f64) -> Self {
        let mut s = *self;
        s.absorb_zeros(w);
        s
    }

    /// Population variance (M2/W); 0 until any weight is seen.
    pub fn variance(&self) -> f64 {
        if self.weight > 0.0 {
            (self.m2 / self.weight).max(0.0)
        } else {
            0.0
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    pub fn is_empty(&self) -> bool {
        self.weight <= 0.0
    }
}

/// Per-key running statistics over a sparse feature space with implicit
/// zeros: keys absent from an update are treated as having value 0.
///
/// Writes materialize the zero backfill; reads return a virtually
/// backfilled copy, so the store never has to touch every key per update.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SparseStats<K: Ord> {
    total_weight: f64,
    entries: BTreeMap<K, RunningStat>,
}

impl<K: Ord> Default for SparseStats<K> {
    fn default() -> Self {
        Self {
            total_weight: 0.0,
            entries: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> SparseStats<K> {
    pub fn new() -> Self {
        Self {
            total_weight: 0.0,
            entries: BTreeMap::new(),
        }
    }

    /// Total weight of updates seen by the store.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// Folds one sparse observation (key/value pairs; missing keys read 0).
    pub fn update<'a, I>(&mut self, values: I, w: f64)
    where
        I: IntoIterator<Item = (&'a K, f64)>,
        K: 'a,
    {
        let before = self.total_weight;
        for (k, v) in values {
            let entry = self.entries.entry(k.clone()).or_default();
            entry.absorb_zeros(before - entry.weight);
            entry.observe(v, w);
        }
        self.total_weight += w;
    }

    /// Statistics for `key`, including the implicit zeros it has not yet
    /// materialized. Keys never observed report all-zero stats over the
    /// store's full weight.
    pub fn stat(&self, key: &K) -> RunningStat {
        match self.entries.get(key) {
            Some(s) => s.with_virtual_zeros(self.total_weight - s.weight),
            None => {
                let mut s = RunningStat::new();
                s.absorb_zeros(self.total_weight);
                s
            }
        }
    }

    /// Whether `key` has ever carried an explicit (non-implicit) value.
    pub fn contains(&self, key: &K) -> bool {
        self.entries.contains_key(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
