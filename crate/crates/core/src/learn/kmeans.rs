//! Online k-means over sparse feature vectors.
//!
//! The first k distinct inputs seed the centroids; afterwards every vector
//! is assigned to the nearest centroid by squared Euclidean distance (ties
//! to the lowest cluster id) and the winning centroid moves towards it with
//! learning rate 1/count, so each centroid is the running mean of the
//! vectors assigned to it.

use crate::features::{FeatureKey, FeatureVector};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub type Centroid = BTreeMap<FeatureKey, f64>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KMeansState {
    k: usize,
    centroids: Vec<Centroid>,
    counts: Vec<u64>,
}

/// Squared Euclidean distance over the union of present dimensions;
/// dimensions absent on one side read 0.
pub fn squared_distance(a: &Centroid, x: &FeatureVector) -> f64 {
    let mut d = 0.0;
    for (key, va) in a {
        let diff = va - x.get(key);
        d += diff * diff;
    }
    for (key, vx) in x.iter() {
        if !a.contains_key(key) {
            d += vx * vx;
        }
    }
    d
}

fn to_centroid(x: &FeatureVector) -> Centroid {
    x.iter().map(|(k, v)| (k.clone(), v)).collect()
}

impl KMeansState {
    pub fn new(k: usize) -> Self {
        Self {
            k: k.max(1),
            centroids: Vec::new(),
            counts: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn centroid(&self, cluster: usize) -> Option<&Centroid> {
        self.centroids.get(cluster)
    }

    pub fn count(&self, cluster: usize) -> u64 {
        self.counts.get(cluster).copied().unwrap_or(0)
    }

    pub fn initialized_clusters(&self) -> usize {
        self.centroids.len()
    }

    /// Cluster id for `x`. While fewer than k distinct vectors have been
    /// seen, a previously unseen vector seeds a new centroid.
    pub fn assign(&mut self, x: &FeatureVector) -> usize {
        if self.centroids.len() < self.k {
            if let Some(existing) = self
                .centroids
                .iter()
                .position(|c| squared_distance(c, x) == 0.0)
            {
                return existing;
            }
            self.centroids.push(to_centroid(x));
            self.counts.push(0);
            return self.centroids.len() - 1;
        }

        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, c) in self.centroids.iter().enumerate() {
            let d = squared_distance(c, x);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    /// Moves the assigned centroid towards `x` by 1/count.
    pub fn update(&mut self, cluster: usize, x: &FeatureVector) {
        let count = &mut self.counts[cluster];
        *count += 1;
        let rate = 1.0 / *count as f64;
        let centroid = &mut self.centroids[cluster];
        for (key, vx) in x.iter() {
            let c = centroid.entry(key.clone()).or_insert(0.0);
            *c += (vx - *c) * rate;
        }
        let x_keys: std::collections::BTreeSet<&FeatureKey> = x.keys().collect();
        for (key, c) in centroid.iter_mut() {
            if !x_keys.contains(key) {
                *c += (0.0 - *c) * rate;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::FeatureSet;

    fn fv(values: &[(&str, f64)]) -> FeatureVector {
        let mut v = FeatureVector::new(FeatureSet::A);
        for (name, x) in values {
            v.insert(FeatureKey::base(name), *x);
        }
        v
    }

    #[test]
    fn nearest_centroid_wins() {
        let mut km = KMeansState::new(2);
        let a = fv(&[("x", 0.0), ("y", 0.0)]);
        let b = fv(&[("x", 10.0), ("y", 10.0)]);
        assert_eq!(km.assign(&a), 0);
        assert_eq!(km.assign(&b), 1);
        let q = fv(&[("x", 1.0), ("y", 1.0)]);
        assert_eq!(km.assign(&q), 0);
    }

    #[test]
    fn equidistant_tie_goes_to_lower_id() {
        let mut km = KMeansState::new(2);
        km.assign(&fv(&[("x", 0.0)]));
        km.assign(&fv(&[("x", 2.0)]));
        assert_eq!(km.assign(&fv(&[("x", 1.0)])), 0);
    }

    #[test]
    fn centroid_update_moves_by_inverse_count() {
        let mut km = KMeansState::new(1);
        let a = fv(&[("x", 0.0), ("y", 0.0)]);
        let id = km.assign(&a);
        km.update(id, &a);
        let b = fv(&[("x", 2.0), ("y", 2.0)]);
        let id = km.assign(&b);
        km.update(id, &b);
        let c = km.centroid(0).unwrap();
        assert!((c[&FeatureKey::base("x")] - 1.0).abs() < 1e-12);
        assert!((c[&FeatureKey::base("y")] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_cluster_centroid_equals_batch_mean() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut km = KMeansState::new(1);
        let mut sum = [0.0f64; 3];
        let n = 500;
        for _ in 0..n {
            let vals = [
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            ];
            for (s, v) in sum.iter_mut().zip(vals) {
                *s += v;
            }
            let x = fv(&[("a", vals[0]), ("b", vals[1]), ("c", vals[2])]);
            let id = km.assign(&x);
            assert_eq!(id, 0);
            km.update(id, &x);
        }
        let c = km.centroid(0).unwrap();
        for (name, s) in [("a", sum[0]), ("b", sum[1]), ("c", sum[2])] {
            assert!((c[&FeatureKey::base(name)] - s / n as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn repeated_identical_input_converges_exactly() {
        let mut km = KMeansState::new(1);
        let x = fv(&[("x", 3.5)]);
        for _ in 0..10 {
            let id = km.assign(&x);
            km.update(id, &x);
        }
        assert!((km.centroid(0).unwrap()[&FeatureKey::base("x")] - 3.5).abs() < 1e-12);
    }

    #[test]
    fn sparse_dimensions_decay_toward_zero() {
        let mut km = KMeansState::new(1);
        let with_dim = fv(&[("x", 4.0)]);
        let without = fv(&[("y", 1.0)]);
        let id = km.assign(&with_dim);
        km.update(id, &with_dim);
        km.update(id, &without);
        let c = km.centroid(0).unwrap();
        assert!((c[&FeatureKey::base("x")] - 2.0).abs() < 1e-12);
    }
}
