//! Online k-means routing plus the per-cluster incremental classifier bank.
//!
//! Every sample is routed to exactly one cluster by proximity in the
//! standardized feature space, predicted by that cluster's classifier, and
//! then used to train the same classifier and move the centroid
//! (test-then-train contract: assign, predict, learn, update).

pub mod adaptive;
pub mod adwin;
pub mod forest;
pub mod hoeffding;
pub mod kmeans;
pub mod naive_bayes;

pub use adaptive::AdaptiveTree;
pub use adwin::{Adwin, DriftStatus};
pub use forest::{AdaptiveForest, ForestParams};
pub use hoeffding::{
    argmax2, entropy, hoeffding_bound, information_gain, DecisionStep, HoeffdingTree, SplitRecord,
    TreeParams,
};
pub use kmeans::{squared_distance, KMeansState};
pub use naive_bayes::GaussianNb;

use crate::config::{ClassifierFamily, RunConfig};
use crate::features::{FeatureKey, FeatureVector};
use crate::ingest::Label;
use crate::stats::SparseStats;
use serde::{Deserialize, Serialize};

/// One classifier instance of the configured family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ClusterModel {
    Gnb(GaussianNb),
    Htc(HoeffdingTree),
    Hatc(AdaptiveTree),
    Arfc(AdaptiveForest),
}

impl ClusterModel {
    pub fn predict_proba(&self, x: &FeatureVector) -> [f64; 2] {
        match self {
            ClusterModel::Gnb(m) => m.predict_proba(x),
            ClusterModel::Htc(m) => m.predict_proba(x),
            ClusterModel::Hatc(m) => m.predict_proba(x),
            ClusterModel::Arfc(m) => m.predict_proba(x),
        }
    }

    pub fn learn(&mut self, x: &FeatureVector, y: Label) {
        match self {
            ClusterModel::Gnb(m) => m.learn(x, y),
            ClusterModel::Htc(m) => m.learn(x, y, 1.0),
            ClusterModel::Hatc(m) => m.learn(x, y, 1.0),
            ClusterModel::Arfc(m) => m.learn(x, y),
        }
    }

    /// Split features of the underlying tree(s) in commit order, when the
    /// family is tree-based.
    pub fn split_features(&self) -> Vec<FeatureKey> {
        match self {
            ClusterModel::Gnb(_) => Vec::new(),
            ClusterModel::Htc(m) => m.split_features(),
            ClusterModel::Hatc(m) => m.split_features(),
            ClusterModel::Arfc(m) => {
                let mut f = Vec::new();
                for t in m.member_trees() {
                    f.extend(t.split_features());
                }
                f
            }
        }
    }

    /// Decision path explaining a prediction of `target`. For the forest
    /// the path comes from the member that agrees with the ensemble label
    /// with the highest confidence.
    pub fn decision_path(
        &self,
        x: &FeatureVector,
        target: Label,
    ) -> Option<(Vec<DecisionStep>, [f64; 2])> {
        match self {
            ClusterModel::Gnb(_) => None,
            ClusterModel::Htc(m) => Some(m.decision_path(x)),
            ClusterModel::Hatc(m) => Some(m.decision_path(x)),
            ClusterModel::Arfc(m) => {
                let mut best: Option<(f64, &HoeffdingTree)> = None;
                for tree in m.member_trees() {
                    let p = tree.predict_proba(x);
                    if argmax2(&p) != target.index() {
                        continue;
                    }
                    let conf = p[target.index()];
                    match best {
                        Some((c, _)) if c >= conf => {}
                        _ => best = Some((conf, tree)),
                    }
                }
                best.map(|(_, tree)| tree.decision_path(x))
            }
        }
    }
}

/// Outcome of one routed prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: Label,
    pub distribution: [f64; 2],
    pub cluster: usize,
    /// Set when the routed classifier had no training samples yet.
    pub cold: bool,
}

impl Prediction {
    pub fn confidence(&self) -> f64 {
        self.distribution[self.label.index()]
    }

    /// Confidence as a whole percentage, e.g. 0.81 -> 81.
    pub fn confidence_percent(&self) -> u8 {
        (self.confidence() * 100.0).round().clamp(0.0, 100.0) as u8
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelBank {
    family: ClassifierFamily,
    kmeans: KMeansState,
    models: Vec<ClusterModel>,
    samples_per_model: Vec<u64>,
    /// Global stats over the standardized routing space, used to rank the
    /// dimensions that characterize a cluster.
    z_stats: SparseStats<FeatureKey>,
}

fn build_model(cfg: &RunConfig, cluster: u64) -> ClusterModel {
    let seed = crate::derive_seed(cfg.seed, "cluster", cluster);
    match cfg.classifier {
        ClassifierFamily::Gnb => ClusterModel::Gnb(GaussianNb::new()),
        ClassifierFamily::Htc => ClusterModel::Htc(HoeffdingTree::new(TreeParams::from_config(
            cfg,
            cfg.htc_max_size,
            seed,
        ))),
        ClassifierFamily::Hatc => ClusterModel::Hatc(AdaptiveTree::new(
            TreeParams::from_config(cfg, cfg.hatc_max_size, seed),
            cfg.drift_confidence,
            cfg.warning_confidence,
        )),
        ClassifierFamily::Arfc => ClusterModel::Arfc(AdaptiveForest::new(
            ForestParams {
                n_trees: cfg.forest_size,
                feature_subset: cfg.forest_feature_subset,
                lambda: cfg.poisson_lambda,
                tree: TreeParams::from_config(cfg, cfg.htc_max_size, seed),
                drift_confidence: cfg.drift_confidence,
                warning_confidence: cfg.warning_confidence,
                resampling: true,
            },
            seed,
        )),
    }
}

impl ModelBank {
    /// Builds the bank with exactly k classifier instances.
    pub fn new(cfg: &RunConfig) -> Self {
        let models = (0..cfg.clusters)
            .map(|i| build_model(cfg, i as u64))
            .collect();
        Self {
            family: cfg.classifier,
            kmeans: KMeansState::new(cfg.clusters),
            models,
            samples_per_model: vec![0; cfg.clusters],
            z_stats: SparseStats::new(),
        }
    }

    pub fn family(&self) -> ClassifierFamily {
        self.family
    }

    pub fn kmeans(&self) -> &KMeansState {
        &self.kmeans
    }

    pub fn z_stats(&self) -> &SparseStats<FeatureKey> {
        &self.z_stats
    }

    pub fn models(&self) -> &[ClusterModel] {
        &self.models
    }

    pub fn model_samples(&self, cluster: usize) -> u64 {
        self.samples_per_model.get(cluster).copied().unwrap_or(0)
    }

    /// Routes and predicts. May seed a centroid while fewer than k distinct
    /// vectors have been seen, hence `&mut`.
    pub fn predict(&mut self, features: &FeatureVector, z: &FeatureVector) -> Prediction {
        let cluster = self.kmeans.assign(z);
        let cold = self.samples_per_model[cluster] == 0;
        let distribution = if cold {
            [0.5, 0.5]
        } else {
            self.models[cluster].predict_proba(features)
        };
        Prediction {
            label: Label::from_index(argmax2(&distribution)),
            distribution,
            cluster,
            cold,
        }
    }

    /// Trains the routed classifier, then moves the centroid.
    pub fn learn(&mut self, features: &FeatureVector, z: &FeatureVector, y: Label) {
        let cluster = self.kmeans.assign(z);
        self.models[cluster].learn(features, y);
        self.samples_per_model[cluster] += 1;
        self.kmeans.update(cluster, z);
        self.z_stats.update(z.iter(), 1.0);
    }

    pub fn model(&self, cluster: usize) -> Option<&ClusterModel> {
        self.models.get(cluster)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::FeatureSet;

    fn fv(v: f64) -> FeatureVector {
        let mut x = FeatureVector::new(FeatureSet::A);
        x.insert(FeatureKey::base("f"), v);
        x
    }

    fn cfg(family: ClassifierFamily, clusters: usize) -> RunConfig {
        let mut c = RunConfig::default();
        c.classifier = family;
        c.clusters = clusters;
        c.forest_size = 3;
        c
    }

    #[test]
    fn bank_holds_exactly_k_classifiers() {
        let bank = ModelBank::new(&cfg(ClassifierFamily::Gnb, 10));
        assert_eq!(bank.models().len(), 10);
    }

    #[test]
    fn first_sample_is_cold_and_uniform() {
        let mut bank = ModelBank::new(&cfg(ClassifierFamily::Htc, 2));
        let p = bank.predict(&fv(0.3), &fv(0.3));
        assert!(p.cold);
        assert_eq!(p.distribution, [0.5, 0.5]);
    }

    #[test]
    fn confidence_renders_as_percent() {
        let p = Prediction {
            label: Label::Fake,
            distribution: [0.81, 0.19],
            cluster: 0,
            cold: false,
        };
        assert_eq!(p.confidence_percent(), 81);
    }

    #[test]
    fn prediction_improves_with_training() {
        let mut bank = ModelBank::new(&cfg(ClassifierFamily::Gnb, 1));
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let mut correct = 0;
        let n = 600;
        for i in 0..n {
            let v: f64 = rng.gen_range(0.0..1.0);
            let y = if v > 0.5 { Label::NonFake } else { Label::Fake };
            let x = fv(v);
            let p = bank.predict(&x, &x);
            if i >= n - 200 && p.label == y {
                correct += 1;
            }
            bank.learn(&x, &x, y);
        }
        assert!(correct as f64 / 200.0 > 0.8);
    }

    #[test]
    fn forest_path_agrees_with_ensemble_label() {
        let mut bank = ModelBank::new(&cfg(ClassifierFamily::Arfc, 1));
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        for _ in 0..1500 {
            let v: f64 = rng.gen_range(0.0..1.0);
            let y = if v > 0.5 { Label::NonFake } else { Label::Fake };
            let x = fv(v);
            bank.predict(&x, &x);
            bank.learn(&x, &x, y);
        }
        let x = fv(0.2);
        let p = bank.predict(&x, &x);
        if let Some((steps, leaf)) = bank.model(0).unwrap().decision_path(&x, p.label) {
            assert_eq!(argmax2(&[leaf[0], leaf[1]]), p.label.index());
            for s in &steps {
                assert_eq!(x.get(&s.feature) <= s.threshold, s.went_left);
            }
        } else {
            panic!("forest should expose a path once grown");
        }
    }
}
