//! Online variance-based feature selection and z-scoring.
//!
//! Both components track running statistics over every vector seen so far
//! (absent keys count as zero) and act on the statistics of strictly earlier
//! events: selection and standardization of event n never see event n.

use super::{FeatureKey, FeatureVector};
use crate::stats::SparseStats;
use serde::{Deserialize, Serialize};

/// Drops numeric features whose running variance is at or below the
/// threshold. The textual block (n-grams, lexicon hits) passes through
/// untouched. With no prior observations everything is kept.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VarianceSelector {
    threshold: f64,
    stats: SparseStats<FeatureKey>,
}

impl VarianceSelector {
    pub fn new(threshold: f64) -> Self {
        Self {
            threshold,
            stats: SparseStats::new(),
        }
    }

    pub fn select(&self, vector: &FeatureVector) -> FeatureVector {
        if self.stats.total_weight() == 0.0 {
            return vector.clone();
        }
        let mut out = FeatureVector::new(vector.set);
        for (key, value) in vector.iter() {
            if key.is_textual() || self.stats.stat(key).variance() > self.threshold {
                out.insert(key.clone(), value);
            }
        }
        out
    }

    /// Folds the full (pre-selection) vector into the running statistics.
    pub fn update(&mut self, vector: &FeatureVector) {
        self.stats.update(vector.iter(), 1.0);
    }

    pub fn observed_events(&self) -> f64 {
        self.stats.total_weight()
    }

    /// Variance of one feature over everything seen so far.
    pub fn variance(&self, key: &FeatureKey) -> f64 {
        self.stats.stat(key).variance()
    }
}

/// Z-scores vectors against running per-feature mean/deviation, for the
/// clustering distance space. Features with zero deviation map to 0; before
/// any observation the vector passes through unchanged.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Standardizer {
    stats: SparseStats<FeatureKey>,
}

impl Standardizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn standardize(&self, vector: &FeatureVector) -> FeatureVector {
        if self.stats.total_weight() == 0.0 {
            return vector.clone();
        }
        let mut out = FeatureVector::new(vector.set);
        for (key, value) in vector.iter() {
            let stat = self.stats.stat(key);
            let std = stat.std_dev();
            let z = if std > 0.0 { (value - stat.mean) / std } else { 0.0 };
            out.insert(key.clone(), z);
        }
        out
    }

    pub fn update(&mut self, vector: &FeatureVector) {
        self.stats.update(vector.iter(), 1.0);
    }

    /// Global running statistics, shared with the cluster-profile ranking.
    pub fn stats(&self) -> &SparseStats<FeatureKey> {
        &self.stats
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::FeatureSet;

    fn vec_of(pairs: &[(&FeatureKey, f64)]) -> FeatureVector {
        let mut v = FeatureVector::new(FeatureSet::A);
        for (k, val) in pairs {
            v.insert((*k).clone(), *val);
        }
        v
    }

    #[test]
    fn constant_feature_is_dropped() {
        let key = FeatureKey::base("word_count");
        let mut sel = VarianceSelector::new(0.0);
        for _ in 0..100 {
            sel.update(&vec_of(&[(&key, 5.0)]));
        }
        let out = sel.select(&vec_of(&[(&key, 5.0)]));
        assert!(!out.contains(&key));
    }

    #[test]
    fn alternating_feature_survives_threshold_zero() {
        let key = FeatureKey::base("word_count");
        let mut sel = VarianceSelector::new(0.0);
        for i in 0..100 {
            sel.update(&vec_of(&[(&key, (i % 2) as f64)]));
        }
        assert!((sel.variance(&key) - 0.25).abs() < 1e-12);
        let out = sel.select(&vec_of(&[(&key, 1.0)]));
        assert!(out.contains(&key));
    }

    #[test]
    fn first_event_keeps_everything() {
        let key = FeatureKey::base("word_count");
        let sel = VarianceSelector::new(0.0);
        let out = sel.select(&vec_of(&[(&key, 5.0)]));
        assert!(out.contains(&key));
    }

    #[test]
    fn textual_block_always_passes() {
        let gram = FeatureKey::Ngram("breaking news".into());
        let mut sel = VarianceSelector::new(0.0);
        for _ in 0..50 {
            sel.update(&vec_of(&[(&gram, 1.0)]));
        }
        let out = sel.select(&vec_of(&[(&gram, 1.0)]));
        assert!(out.contains(&gram));
    }

    #[test]
    fn z_score_of_known_history() {
        let key = FeatureKey::base("char_count");
        let mut st = Standardizer::new();
        st.update(&vec_of(&[(&key, 2.0)]));
        st.update(&vec_of(&[(&key, 4.0)]));
        // mean 3, population std 1 -> z(4) = 1.
        let out = st.standardize(&vec_of(&[(&key, 4.0)]));
        assert!((out.get(&key) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_feature_standardizes_to_zero() {
        let key = FeatureKey::base("char_count");
        let mut st = Standardizer::new();
        for _ in 0..10 {
            st.update(&vec_of(&[(&key, 7.0)]));
        }
        let out = st.standardize(&vec_of(&[(&key, 7.0)]));
        assert_eq!(out.get(&key), 0.0);
    }

    #[test]
    fn first_event_passes_through() {
        let key = FeatureKey::base("char_count");
        let st = Standardizer::new();
        let out = st.standardize(&vec_of(&[(&key, 9.0)]));
        assert_eq!(out.get(&key), 9.0);
    }
}
