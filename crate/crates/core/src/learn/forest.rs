//! Adaptive random forest of Hoeffding trees.
//!
//! Diversity comes from Poisson resampling weights, per-leaf random feature
//! subsets for node splits, and one drift detector per member. A warning
//! starts a background tree that trains alongside the member; a confirmed
//! drift replaces the member with its background tree (or a fresh one).
//! Predictions average the members' probability outputs.

use super::adwin::{Adwin, DriftStatus};
use super::hoeffding::{argmax2, HoeffdingTree, TreeParams};
use crate::features::FeatureVector;
use crate::ingest::Label;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub feature_subset: usize,
    pub lambda: f64,
    pub tree: TreeParams,
    pub drift_confidence: f64,
    pub warning_confidence: f64,
    /// Poisson resampling toggle; with it off every weight is 1.
    pub resampling: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Member {
    tree: HoeffdingTree,
    detector: Adwin,
    background: Option<HoeffdingTree>,
    rng: ChaCha8Rng,
    generation: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdaptiveForest {
    params: ForestParams,
    members: Vec<Member>,
    seed: u64,
}

impl AdaptiveForest {
    pub fn new(params: ForestParams, seed: u64) -> Self {
        let members = (0..params.n_trees)
            .map(|i| {
                let mut tree_params = params.tree;
                tree_params.feature_subset = Some(params.feature_subset);
                tree_params.seed = crate::derive_seed(seed, "forest-tree", i as u64);
                Member {
                    tree: HoeffdingTree::new(tree_params),
                    detector: Adwin::new(params.drift_confidence, params.warning_confidence),
                    background: None,
                    rng: ChaCha8Rng::seed_from_u64(crate::derive_seed(seed, "forest-rng", i as u64)),
                    generation: 0,
                }
            })
            .collect();
        Self {
            params,
            members,
            seed,
        }
    }

    pub fn n_trees(&self) -> usize {
        self.members.len()
    }

    pub fn member_trees(&self) -> impl Iterator<Item = &HoeffdingTree> {
        self.members.iter().map(|m| &m.tree)
    }

    /// Mean of member probability outputs, renormalized.
    pub fn predict_proba(&self, x: &FeatureVector) -> [f64; 2] {
        let mut acc = [0.0f64; 2];
        for m in &self.members {
            let p = m.tree.predict_proba(x);
            acc[0] += p[0];
            acc[1] += p[1];
        }
        let z = acc[0] + acc[1];
        if z > 0.0 {
            [acc[0] / z, acc[1] / z]
        } else {
            [0.5, 0.5]
        }
    }

    pub fn learn(&mut self, x: &FeatureVector, y: Label) {
        let lambda = self.params.lambda;
        let resampling = self.params.resampling;
        let base_seed = self.seed;
        let drift_confidence = self.params.drift_confidence;
        let warning_confidence = self.params.warning_confidence;
        let feature_subset = self.params.feature_subset;
        let tree_template = self.params.tree;

        for (i, member) in self.members.iter_mut().enumerate() {
            let pred = argmax2(&member.tree.predict_proba(x));
            let err = if pred == y.index() { 0.0 } else { 1.0 };

            match member.detector.update(err) {
                DriftStatus::Warning => {
                    if member.background.is_none() {
                        member.generation += 1;
                        let mut p = tree_template;
                        p.feature_subset = Some(feature_subset);
                        p.seed = crate::derive_seed(
                            crate::derive_seed(base_seed, "forest-bg", i as u64),
                            "gen",
                            member.generation,
                        );
                        member.background = Some(HoeffdingTree::new(p));
                    }
                }
                DriftStatus::Drift => {
                    member.generation += 1;
                    let replacement = member.background.take().unwrap_or_else(|| {
                        let mut p = tree_template;
                        p.feature_subset = Some(feature_subset);
                        p.seed = crate::derive_seed(
                            crate::derive_seed(base_seed, "forest-bg", i as u64),
                            "gen",
                            member.generation,
                        );
                        HoeffdingTree::new(p)
                    });
                    member.tree = replacement;
                    member.detector = Adwin::new(drift_confidence, warning_confidence);
                }
                DriftStatus::Stable => {}
            }

            let weight = if resampling {
                Poisson::new(lambda)
                    .expect("positive lambda")
                    .sample(&mut member.rng)
            } else {
                1.0
            };
            if weight > 0.0 {
                member.tree.learn(x, y, weight);
                if let Some(bg) = member.background.as_mut() {
                    bg.learn(x, y, weight);
                }
            }
        }
    }
}
