//! Incremental Gaussian naive Bayes.
//!
//! Per class and feature the model keeps running mean/variance sufficient
//! statistics (absent sparse dimensions count as zero). Posteriors multiply
//! the class prior by one Gaussian density per feature, accumulated in the
//! log domain with a variance floor.

use crate::features::{FeatureKey, FeatureVector};
use crate::ingest::Label;
use crate::stats::SparseStats;
use serde::{Deserialize, Serialize};

const VARIANCE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianNb {
    class_counts: [f64; 2],
    stats: [SparseStats<FeatureKey>; 2],
}

impl Default for GaussianNb {
    fn default() -> Self {
        Self::new()
    }
}

impl GaussianNb {
    pub fn new() -> Self {
        Self {
            class_counts: [0.0; 2],
            stats: [SparseStats::new(), SparseStats::new()],
        }
    }

    pub fn samples(&self) -> f64 {
        self.class_counts[0] + self.class_counts[1]
    }

    pub fn learn(&mut self, x: &FeatureVector, y: Label) {
        self.class_counts[y.index()] += 1.0;
        self.stats[y.index()].update(x.iter(), 1.0);
    }

    /// Class posterior. Uniform until both classes have been observed.
    pub fn predict_proba(&self, x: &FeatureVector) -> [f64; 2] {
        if self.class_counts[0] == 0.0 || self.class_counts[1] == 0.0 {
            return [0.5, 0.5];
        }
        let total = self.samples();
        let mut log_p = [0.0f64; 2];
        for c in 0..2 {
            log_p[c] = (self.class_counts[c] / total).ln();
        }

        // Union of every feature either class has explicit statistics for.
        let keys: std::collections::BTreeSet<&FeatureKey> =
            self.stats[0].keys().chain(self.stats[1].keys()).collect();
        for key in keys {
            let value = x.get(key);
            for c in 0..2 {
                let stat = self.stats[c].stat(key);
                let var = stat.variance().max(VARIANCE_FLOOR);
                let diff = value - stat.mean;
                log_p[c] += -0.5 * ((2.0 * std::f64::consts::PI * var).ln() + diff * diff / var);
            }
        }

        // Log-sum-exp normalization.
        let m = log_p[0].max(log_p[1]);
        let e = [(log_p[0] - m).exp(), (log_p[1] - m).exp()];
        let z = e[0] + e[1];
        [e[0] / z, e[1] / z]
    }

    /// Statistics of one feature under one class, including implicit zeros.
    pub fn feature_stat(&self, key: &FeatureKey, label: Label) -> crate::stats::RunningStat {
        self.stats[label.index()].stat(key)
    }
}
