//! Incremental Hoeffding-bound decision tree for binary classes.
//!
//! Leaves keep per-feature, per-class Gaussian statistics (absent sparse
//! dimensions count as zero). Every grace period a leaf ranks candidate
//! binary splits by information gain and commits when the gap between the
//! two best options exceeds the Hoeffding radius, or when that radius has
//! shrunk below the tie threshold. Leaves predict with whichever of
//! majority-class or naive Bayes has been more accurate at that leaf.
//! Every committed split is logged with the statistics that justified it.

use crate::features::{FeatureKey, FeatureVector};
use crate::ingest::Label;
use crate::stats::RunningStat;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

const VARIANCE_FLOOR: f64 = 1e-9;
const SPLIT_POINTS: usize = 10;

/// Hoeffding radius: the confidence interval of an estimated merit after
/// observing weight `n`, for merits ranging over `[0, range]`.
pub fn hoeffding_bound(range: f64, confidence: f64, n: f64) -> f64 {
    ((range * range * (1.0 / confidence).ln()) / (2.0 * n)).sqrt()
}

/// Binary entropy of a class-weight pair, in bits.
pub fn entropy(dist: &[f64; 2]) -> f64 {
    let total = dist[0] + dist[1];
    if total <= 0.0 {
        return 0.0;
    }
    let mut h = 0.0;
    for &w in dist {
        if w > 0.0 {
            let p = w / total;
            h -= p * p.log2();
        }
    }
    h
}

/// Information gain of splitting `pre` into the given parts.
pub fn information_gain(pre: &[f64; 2], posts: &[[f64; 2]; 2]) -> f64 {
    let total = pre[0] + pre[1];
    if total <= 0.0 {
        return 0.0;
    }
    let mut remainder = 0.0;
    for part in posts {
        let w = part[0] + part[1];
        remainder += w / total * entropy(part);
    }
    entropy(pre) - remainder
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + statrs::function::erf::erf(z / std::f64::consts::SQRT_2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub grace_period: u64,
    pub split_confidence: f64,
    pub tie_threshold: f64,
    pub max_depth: usize,
    /// Node budget; growth freezes when reached.
    pub max_nodes: usize,
    /// Number of features considered per split attempt (None = all).
    pub feature_subset: Option<usize>,
    pub seed: u64,
}

impl TreeParams {
    pub fn from_config(cfg: &crate::RunConfig, max_nodes: usize, seed: u64) -> Self {
        Self {
            grace_period: cfg.grace_period,
            split_confidence: cfg.split_confidence,
            tie_threshold: cfg.tie_threshold,
            max_depth: cfg.tree_depth,
            max_nodes,
            feature_subset: None,
            seed,
        }
    }
}

/// Per-feature class-conditional statistics at one leaf.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FeatureObserver {
    per_class: [RunningStat; 2],
    min: f64,
    max: f64,
    seen: bool,
}

impl FeatureObserver {
    fn observe(&mut self, value: f64, weight: f64, class: usize, class_weights_pre: &[f64; 2]) {
        for c in 0..2 {
            let stat = &mut self.per_class[c];
            stat.absorb_zeros(class_weights_pre[c] - stat.weight);
        }
        self.per_class[class].observe(value, weight);
        if self.seen {
            self.min = self.min.min(value);
            self.max = self.max.max(value);
        } else {
            self.min = value;
            self.max = value;
            self.seen = true;
        }
    }

    /// Statistics including the implicit zeros of events that lacked this
    /// feature.
    fn effective(&self, class: usize, class_weights: &[f64; 2]) -> RunningStat {
        let stat = &self.per_class[class];
        stat.with_virtual_zeros(class_weights[class] - stat.weight)
    }

    fn range(&self, class_weights: &[f64; 2]) -> (f64, f64) {
        let implicit =
            self.per_class[0].weight + self.per_class[1].weight < class_weights[0] + class_weights[1];
        if implicit {
            (self.min.min(0.0), self.max.max(0.0))
        } else {
            (self.min, self.max)
        }
    }
}

/// Everything recorded at the moment a split commits, sufficient to recheck
/// the split condition afterwards.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitRecord {
    pub feature: FeatureKey,
    pub threshold: f64,
    pub pre_split_dist: [f64; 2],
    pub post_split_dists: [[f64; 2]; 2],
    pub best_gain: f64,
    pub second_gain: f64,
    pub epsilon: f64,
    pub tie_threshold: f64,
    pub split_confidence: f64,
    pub weight: f64,
}

/// One root-to-leaf test with the branch taken.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionStep {
    pub feature: FeatureKey,
    pub threshold: f64,
    pub went_left: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeafNode {
    pub depth: usize,
    /// Seeded estimate plus everything learned here; drives majority votes.
    pub class_weights: [f64; 2],
    /// Only the mass actually observed at this leaf; drives the Gaussian
    /// statistics, so seeded estimates never fabricate densities.
    observed_class_weights: [f64; 2],
    instances: u64,
    instances_at_last_eval: u64,
    frozen: bool,
    mc_correct: f64,
    nb_correct: f64,
    subset_seed: u64,
    observers: BTreeMap<FeatureKey, FeatureObserver>,
}

impl LeafNode {
    pub fn new(depth: usize, class_weights: [f64; 2], subset_seed: u64) -> Self {
        Self {
            depth,
            class_weights,
            observed_class_weights: [0.0; 2],
            instances: 0,
            instances_at_last_eval: 0,
            frozen: false,
            mc_correct: 0.0,
            nb_correct: 0.0,
            subset_seed,
            observers: BTreeMap::new(),
        }
    }

    pub fn total_weight(&self) -> f64 {
        self.class_weights[0] + self.class_weights[1]
    }

    pub fn observed_weight(&self) -> f64 {
        self.observed_class_weights[0] + self.observed_class_weights[1]
    }

    fn majority_proba(&self) -> [f64; 2] {
        let total = self.total_weight();
        if total <= 0.0 {
            [0.5, 0.5]
        } else {
            [self.class_weights[0] / total, self.class_weights[1] / total]
        }
    }

    fn nb_proba(&self, x: &FeatureVector) -> [f64; 2] {
        let total = self.total_weight();
        if self.observed_class_weights[0] <= 0.0 || self.observed_class_weights[1] <= 0.0 {
            return self.majority_proba();
        }
        let mut log_p = [
            (self.class_weights[0] / total).ln(),
            (self.class_weights[1] / total).ln(),
        ];
        for (key, obs) in &self.observers {
            let value = x.get(key);
            for c in 0..2 {
                let stat = obs.effective(c, &self.observed_class_weights);
                let var = stat.variance().max(VARIANCE_FLOOR);
                let diff = value - stat.mean;
                log_p[c] += -0.5 * ((2.0 * std::f64::consts::PI * var).ln() + diff * diff / var);
            }
        }
        let m = log_p[0].max(log_p[1]);
        let e = [(log_p[0] - m).exp(), (log_p[1] - m).exp()];
        let z = e[0] + e[1];
        [e[0] / z, e[1] / z]
    }

    /// Adaptive leaf prediction: whichever of majority class and naive
    /// Bayes has answered more training instances correctly here.
    pub fn predict_proba(&self, x: &FeatureVector) -> [f64; 2] {
        if self.nb_correct > self.mc_correct {
            self.nb_proba(x)
        } else {
            self.majority_proba()
        }
    }

    pub(crate) fn mark_evaluated(&mut self) {
        self.instances_at_last_eval = self.instances;
    }

    pub(crate) fn freeze(&mut self) {
        self.frozen = true;
    }

    pub(crate) fn set_class_weights(&mut self, weights: [f64; 2]) {
        self.class_weights = weights;
    }

    pub(crate) fn learn(&mut self, x: &FeatureVector, y: Label, weight: f64) {
        // Score both predictors on the instance before learning from it.
        if self.total_weight() > 0.0 {
            if argmax2(&self.majority_proba()) == y.index() {
                self.mc_correct += weight;
            }
            if argmax2(&self.nb_proba(x)) == y.index() {
                self.nb_correct += weight;
            }
        }

        let pre = self.observed_class_weights;
        self.class_weights[y.index()] += weight;
        self.observed_class_weights[y.index()] += weight;
        for (key, value) in x.iter() {
            self.observers
                .entry(key.clone())
                .or_default()
                .observe(value, weight, y.index(), &pre);
        }
        self.instances += 1;
    }

    pub(crate) fn due_for_evaluation(&self, grace: u64) -> bool {
        !self.frozen && self.instances - self.instances_at_last_eval >= grace
    }

    /// Features eligible for this split attempt: all observed features, or
    /// the m of them ranking lowest under the leaf's seeded hash.
    fn candidate_features(&self, subset: Option<usize>) -> Vec<&FeatureKey> {
        let keys: Vec<&FeatureKey> = self.observers.keys().collect();
        match subset {
            Some(m) if keys.len() > m => {
                let mut ranked: Vec<(u64, &FeatureKey)> = keys
                    .into_iter()
                    .map(|k| {
                        let mut buf = self.subset_seed.to_le_bytes().to_vec();
                        buf.extend_from_slice(k.to_string().as_bytes());
                        (crate::fnv1a64(&buf), k)
                    })
                    .collect();
                ranked.sort();
                ranked.into_iter().take(m).map(|(_, k)| k).collect()
            }
            _ => keys,
        }
    }

    /// Best (gain, threshold, post-split distributions) for one feature,
    /// estimated from the class-conditional Gaussians at SPLIT_POINTS
    /// equally spaced thresholds.
    #[allow(clippy::type_complexity)]
    fn best_split_for(&self, key: &FeatureKey) -> Option<(f64, f64, [[f64; 2]; 2])> {
        let obs = self.observers.get(key)?;
        let (min, max) = obs.range(&self.observed_class_weights);
        if !matches!(max.partial_cmp(&min), Some(std::cmp::Ordering::Greater)) {
            return None;
        }
        let stats = [
            obs.effective(0, &self.observed_class_weights),
            obs.effective(1, &self.observed_class_weights),
        ];
        let mut best: Option<(f64, f64, [[f64; 2]; 2])> = None;
        for j in 1..=SPLIT_POINTS {
            let t = min + (max - min) * j as f64 / (SPLIT_POINTS + 1) as f64;
            let mut left = [0.0; 2];
            let mut right = [0.0; 2];
            for c in 0..2 {
                let w = self.observed_class_weights[c];
                if w <= 0.0 {
                    continue;
                }
                let stat = &stats[c];
                let var = stat.variance();
                let frac_left = if var <= VARIANCE_FLOOR {
                    if stat.mean <= t {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    normal_cdf((t - stat.mean) / var.sqrt())
                };
                left[c] = w * frac_left;
                right[c] = w - left[c];
            }
            let gain = information_gain(&self.observed_class_weights, &[left, right]);
            let better = match &best {
                None => true,
                Some((g, bt, _)) => gain > *g + 1e-12 || (gain > *g - 1e-12 && t < *bt),
            };
            if better {
                best = Some((gain, t, [left, right]));
            }
        }
        best
    }

    fn is_pure(&self) -> bool {
        self.observed_class_weights[0] <= 0.0 || self.observed_class_weights[1] <= 0.0
    }
}

pub fn argmax2(p: &[f64; 2]) -> usize {
    if p[1] > p[0] {
        1
    } else {
        0
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Node {
    Split(SplitNode),
    Leaf(LeafNode),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitNode {
    pub feature: FeatureKey,
    pub threshold: f64,
    pub left: Box<Node>,
    pub right: Box<Node>,
}

impl Node {
    pub fn count_nodes(&self) -> usize {
        match self {
            Node::Leaf(_) => 1,
            Node::Split(s) => 1 + s.left.count_nodes() + s.right.count_nodes(),
        }
    }
}

/// Outcome of a split evaluation at one leaf.
pub(crate) enum SplitDecision {
    Split(SplitRecord),
    None,
}

/// Candidate considered at a split attempt: gain plus, for feature splits,
/// the feature, threshold and estimated child distributions.
type Suggestion = (f64, Option<(FeatureKey, f64, [[f64; 2]; 2])>);

/// Evaluates the split condition at a leaf. Shared by the plain and the
/// adaptive tree.
pub(crate) fn evaluate_split(leaf: &LeafNode, params: &TreeParams) -> SplitDecision {
    if leaf.is_pure() {
        return SplitDecision::None;
    }
    let mut suggestions: Vec<Suggestion> = vec![(0.0, None)];
    for key in leaf.candidate_features(params.feature_subset) {
        if let Some((gain, threshold, posts)) = leaf.best_split_for(key) {
            suggestions.push((gain, Some((key.clone(), threshold, posts))));
        }
    }
    // Highest gain first; deterministic tie-break on the feature key.
    suggestions.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| {
                let ka = a.1.as_ref().map(|(k, _, _)| k.to_string());
                let kb = b.1.as_ref().map(|(k, _, _)| k.to_string());
                ka.cmp(&kb)
            })
    });

    let (best_gain, best_split) = &suggestions[0];
    let Some((feature, threshold, posts)) = best_split else {
        return SplitDecision::None;
    };
    if *best_gain <= 0.0 {
        return SplitDecision::None;
    }
    let second_gain = suggestions.get(1).map(|(g, _)| *g).unwrap_or(0.0);

    let n = leaf.observed_weight();
    let epsilon = hoeffding_bound(1.0, params.split_confidence, n);
    if best_gain - second_gain > epsilon || epsilon < params.tie_threshold {
        SplitDecision::Split(SplitRecord {
            feature: feature.clone(),
            threshold: *threshold,
            pre_split_dist: leaf.observed_class_weights,
            post_split_dists: *posts,
            best_gain: *best_gain,
            second_gain,
            epsilon,
            tie_threshold: params.tie_threshold,
            split_confidence: params.split_confidence,
            weight: n,
        })
    } else {
        SplitDecision::None
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HoeffdingTree {
    params: TreeParams,
    root: Node,
    node_count: usize,
    leaf_seq: u64,
    weight_seen: f64,
    split_log: Vec<SplitRecord>,
}

impl HoeffdingTree {
    pub fn new(params: TreeParams) -> Self {
        let seed = crate::derive_seed(params.seed, "leaf", 0);
        Self {
            params,
            root: Node::Leaf(LeafNode::new(0, [0.0; 2], seed)),
            node_count: 1,
            leaf_seq: 1,
            weight_seen: 0.0,
            split_log: Vec::new(),
        }
    }

    pub fn params(&self) -> &TreeParams {
        &self.params
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn weight_seen(&self) -> f64 {
        self.weight_seen
    }

    pub fn split_log(&self) -> &[SplitRecord] {
        &self.split_log
    }

    /// Split features in commit order, most recent last.
    pub fn split_features(&self) -> Vec<FeatureKey> {
        self.split_log.iter().map(|r| r.feature.clone()).collect()
    }

    fn next_leaf_seed(params_seed: u64, leaf_seq: &mut u64) -> u64 {
        let s = crate::derive_seed(params_seed, "leaf", *leaf_seq);
        *leaf_seq += 1;
        s
    }

    pub fn predict_proba(&self, x: &FeatureVector) -> [f64; 2] {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf(leaf) => return leaf.predict_proba(x),
                Node::Split(s) => {
                    node = if x.get(&s.feature) <= s.threshold {
                        &s.left
                    } else {
                        &s.right
                    };
                }
            }
        }
    }

    /// Root-to-leaf tests for `x` plus the reached leaf's predicted class
    /// distribution for `x`; its argmax is the tree's prediction.
    pub fn decision_path(&self, x: &FeatureVector) -> (Vec<DecisionStep>, [f64; 2]) {
        let mut steps = Vec::new();
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf(leaf) => return (steps, leaf.predict_proba(x)),
                Node::Split(s) => {
                    let went_left = x.get(&s.feature) <= s.threshold;
                    steps.push(DecisionStep {
                        feature: s.feature.clone(),
                        threshold: s.threshold,
                        went_left,
                    });
                    node = if went_left { &s.left } else { &s.right };
                }
            }
        }
    }

    pub fn learn(&mut self, x: &FeatureVector, y: Label, weight: f64) {
        if weight <= 0.0 {
            return;
        }
        self.weight_seen += weight;

        // Route to the leaf, learn, and possibly split in place.
        let params = self.params;
        let mut node = &mut self.root;
        while let Node::Split(s) = node {
            node = if x.get(&s.feature) <= s.threshold {
                &mut s.left
            } else {
                &mut s.right
            };
        }
        if let Node::Leaf(leaf) = node {
            leaf.learn(x, y, weight);
            let budget_ok =
                self.node_count + 2 <= params.max_nodes && leaf.depth < params.max_depth;
            if leaf.due_for_evaluation(params.grace_period) {
                leaf.instances_at_last_eval = leaf.instances;
                if !budget_ok {
                    leaf.frozen = true;
                } else if let SplitDecision::Split(record) = evaluate_split(leaf, &params) {
                    let depth = leaf.depth;
                    let left_seed = Self::next_leaf_seed(params.seed, &mut self.leaf_seq);
                    let right_seed = Self::next_leaf_seed(params.seed, &mut self.leaf_seq);
                    let split = SplitNode {
                        feature: record.feature.clone(),
                        threshold: record.threshold,
                        left: Box::new(Node::Leaf(LeafNode::new(
                            depth + 1,
                            record.post_split_dists[0],
                            left_seed,
                        ))),
                        right: Box::new(Node::Leaf(LeafNode::new(
                            depth + 1,
                            record.post_split_dists[1],
                            right_seed,
                        ))),
                    };
                    self.split_log.push(record);
                    self.node_count += 2;
                    *node = Node::Split(split);
                }
            }
        }
    }
}
