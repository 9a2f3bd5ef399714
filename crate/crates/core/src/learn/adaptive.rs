//! Hoeffding tree with per-branch drift management.
//!
//! Every node carries a change detector fed with the subtree's 0/1
//! prediction error. A warning (or an unanswered drift signal) at an
//! internal node starts an alternate subtree that trains in parallel on the
//! same samples; the alternate replaces the branch once its monitored error
//! is significantly lower than the branch's own. Leaves restart their
//! statistics when their detector confirms drift.

use super::adwin::{Adwin, DriftStatus};
use super::hoeffding::{
    argmax2, evaluate_split, DecisionStep, LeafNode, SplitDecision, SplitRecord, TreeParams,
};
use crate::features::{FeatureKey, FeatureVector};
use crate::ingest::Label;
use serde::{Deserialize, Serialize};

/// Confidence of the alternate-promotion comparison.
const PROMOTION_CONFIDENCE: f64 = 0.05;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ANode {
    Split(ASplit),
    Leaf(ALeaf),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ASplit {
    pub feature: FeatureKey,
    pub threshold: f64,
    pub left: Box<ANode>,
    pub right: Box<ANode>,
    detector: Adwin,
    alternate: Option<Box<ANode>>,
    alt_detector: Option<Adwin>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ALeaf {
    pub leaf: LeafNode,
    detector: Adwin,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdaptiveTree {
    params: TreeParams,
    drift_confidence: f64,
    warning_confidence: f64,
    root: ANode,
    leaf_seq: u64,
    node_count: usize,
    split_log: Vec<SplitRecord>,
    weight_seen: f64,
}

impl ANode {
    fn predict_proba(&self, x: &FeatureVector) -> [f64; 2] {
        match self {
            ANode::Leaf(l) => l.leaf.predict_proba(x),
            ANode::Split(s) => {
                if x.get(&s.feature) <= s.threshold {
                    s.left.predict_proba(x)
                } else {
                    s.right.predict_proba(x)
                }
            }
        }
    }

    fn count_nodes(&self) -> usize {
        match self {
            ANode::Leaf(_) => 1,
            ANode::Split(s) => {
                1 + s.left.count_nodes()
                    + s.right.count_nodes()
                    + s.alternate.as_ref().map_or(0, |a| a.count_nodes())
            }
        }
    }
}

/// Hoeffding-style bound on the difference of two error means.
fn comparison_radius(n_main: f64, n_alt: f64) -> f64 {
    ((1.0 / PROMOTION_CONFIDENCE).ln() * (1.0 / n_main + 1.0 / n_alt) / 2.0).sqrt()
}

struct Ctx<'a> {
    params: &'a TreeParams,
    drift_confidence: f64,
    warning_confidence: f64,
    leaf_seq: &'a mut u64,
    node_count: &'a mut usize,
    split_log: &'a mut Vec<SplitRecord>,
}

impl Ctx<'_> {
    fn fresh_leaf(&mut self, depth: usize) -> ALeaf {
        let seed = crate::derive_seed(self.params.seed, "ada-leaf", *self.leaf_seq);
        *self.leaf_seq += 1;
        ALeaf {
            leaf: LeafNode::new(depth, [0.0; 2], seed),
            detector: Adwin::new(self.drift_confidence, self.warning_confidence),
        }
    }
}

/// Trains one subtree on the sample. `err` is the 0/1 error of the
/// prediction this subtree's root made for `x` before learning.
fn learn_rec(node: &mut ANode, x: &FeatureVector, y: Label, weight: f64, err: f64, ctx: &mut Ctx) {
    match node {
        ANode::Leaf(al) => {
            if al.detector.update(err) == DriftStatus::Drift {
                // The leaf's concept moved: restart its statistics.
                let depth = al.leaf.depth;
                *al = ctx.fresh_leaf(depth);
            }
            al.leaf.learn(x, y, weight);
            let grace = ctx.params.grace_period;
            if al.leaf.due_for_evaluation(grace) {
                al.leaf.mark_evaluated();
                let budget_ok = *ctx.node_count + 2 <= ctx.params.max_nodes
                    && al.leaf.depth < ctx.params.max_depth;
                if !budget_ok {
                    al.leaf.freeze();
                } else if let SplitDecision::Split(record) = evaluate_split(&al.leaf, ctx.params) {
                    let depth = al.leaf.depth;
                    let mut left = ctx.fresh_leaf(depth + 1);
                    left.leaf.set_class_weights(record.post_split_dists[0]);
                    let mut right = ctx.fresh_leaf(depth + 1);
                    right.leaf.set_class_weights(record.post_split_dists[1]);
                    *ctx.node_count += 2;
                    let split = ASplit {
                        feature: record.feature.clone(),
                        threshold: record.threshold,
                        left: Box::new(ANode::Leaf(left)),
                        right: Box::new(ANode::Leaf(right)),
                        detector: al.detector.clone(),
                        alternate: None,
                        alt_detector: None,
                    };
                    ctx.split_log.push(record);
                    *node = ANode::Split(split);
                }
            }
        }
        ANode::Split(s) => {
            let status = s.detector.update(err);
            if s.alternate.is_none()
                && matches!(status, DriftStatus::Warning | DriftStatus::Drift)
            {
                let depth_here = subtree_min_depth(&s.left);
                s.alternate = Some(Box::new(ANode::Leaf(
                    ctx.fresh_leaf(depth_here.saturating_sub(1)),
                )));
                s.alt_detector = Some(Adwin::new(ctx.drift_confidence, ctx.warning_confidence));
                *ctx.node_count += 1;
            }

            // The alternate trains in parallel on the same samples, scored
            // by its own error.
            let mut promote = false;
            let mut discard = false;
            if let (Some(alt), Some(alt_det)) = (s.alternate.as_mut(), s.alt_detector.as_mut()) {
                let alt_pred = argmax2(&alt.predict_proba(x));
                let alt_err = if alt_pred == y.index() { 0.0 } else { 1.0 };
                alt_det.update(alt_err);
                learn_rec(alt, x, y, weight, alt_err, ctx);

                let (n_main, n_alt) = (s.detector.len() as f64, alt_det.len() as f64);
                if n_main >= 1.0 && n_alt >= 1.0 {
                    let radius = comparison_radius(n_main, n_alt);
                    let (main_mean, alt_mean) = (s.detector.mean(), alt_det.mean());
                    if alt_mean + radius < main_mean {
                        promote = true;
                    } else if main_mean + radius < alt_mean {
                        discard = true;
                    }
                }
            }

            if promote {
                let alt = s.alternate.take().expect("alternate present");
                *node = *alt;
                // The replacement subtree handles the sample on its own
                // next time; for this event it already trained above.
                return;
            }
            if discard {
                s.alternate = None;
                s.alt_detector = None;
            }

            let child = if x.get(&s.feature) <= s.threshold {
                &mut s.left
            } else {
                &mut s.right
            };
            learn_rec(child, x, y, weight, err, ctx);
        }
    }
}

fn subtree_min_depth(node: &ANode) -> usize {
    match node {
        ANode::Leaf(l) => l.leaf.depth,
        ANode::Split(s) => subtree_min_depth(&s.left).min(subtree_min_depth(&s.right)),
    }
}

impl AdaptiveTree {
    pub fn new(params: TreeParams, drift_confidence: f64, warning_confidence: f64) -> Self {
        let mut leaf_seq = 0;
        let seed = crate::derive_seed(params.seed, "ada-leaf", leaf_seq);
        leaf_seq += 1;
        Self {
            params,
            drift_confidence,
            warning_confidence,
            root: ANode::Leaf(ALeaf {
                leaf: LeafNode::new(0, [0.0; 2], seed),
                detector: Adwin::new(drift_confidence, warning_confidence),
            }),
            leaf_seq,
            node_count: 1,
            split_log: Vec::new(),
            weight_seen: 0.0,
        }
    }

    pub fn predict_proba(&self, x: &FeatureVector) -> [f64; 2] {
        self.root.predict_proba(x)
    }

    pub fn learn(&mut self, x: &FeatureVector, y: Label, weight: f64) {
        if weight <= 0.0 {
            return;
        }
        self.weight_seen += weight;
        let pred = argmax2(&self.predict_proba(x));
        let err = if pred == y.index() { 0.0 } else { 1.0 };
        let mut ctx = Ctx {
            params: &self.params,
            drift_confidence: self.drift_confidence,
            warning_confidence: self.warning_confidence,
            leaf_seq: &mut self.leaf_seq,
            node_count: &mut self.node_count,
            split_log: &mut self.split_log,
        };
        learn_rec(&mut self.root, x, y, weight, err, &mut ctx);
        self.node_count = self.root.count_nodes();
    }

    /// Path through the live (non-alternate) tree.
    pub fn decision_path(&self, x: &FeatureVector) -> (Vec<DecisionStep>, [f64; 2]) {
        let mut steps = Vec::new();
        let mut node = &self.root;
        loop {
            match node {
                ANode::Leaf(l) => return (steps, l.leaf.predict_proba(x)),
                ANode::Split(s) => {
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

    pub fn split_log(&self) -> &[SplitRecord] {
        &self.split_log
    }

    pub fn split_features(&self) -> Vec<FeatureKey> {
        self.split_log.iter().map(|r| r.feature.clone()).collect()
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn weight_seen(&self) -> f64 {
        self.weight_seen
    }
}
