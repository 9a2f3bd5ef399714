//! Property tests over the pure operations and learner invariants.

use proptest::prelude::*;
use veristream_core::config::FeatureSet;
use veristream_core::features::{FeatureKey, FeatureVector};
use veristream_core::ingest::{ContextMeta, Label};
use veristream_core::learn::{squared_distance, GaussianNb, HoeffdingTree, KMeansState, TreeParams};
use veristream_core::textproc::{
    normalize_and_tokenize, split_hashtag, style_counts, FleschBand, TextResources,
};

fn fv(values: &[(String, f64)]) -> FeatureVector {
    let mut v = FeatureVector::new(FeatureSet::A);
    for (name, x) in values {
        v.insert(FeatureKey::base(name), *x);
    }
    v
}

proptest! {
    /// Char/word/punctuation counters are additive over concatenation with
    /// a whitespace separator.
    #[test]
    fn style_counters_additive(a in "[a-zA-Z0-9 .,!?#]{0,40}", b in "[a-zA-Z0-9 .,!?#]{0,40}") {
        let r = TextResources::embedded();
        let ctx = ContextMeta::default();
        let count = |text: &str| {
            let p = normalize_and_tokenize(text, &r.stopwords, &r.lemmas);
            style_counts(text, &p, &ctx, &r)
        };
        let joined = format!("{a} {b}");
        let (ca, cb, cj) = (count(&a), count(&b), count(&joined));
        prop_assert_eq!(cj.char, ca.char + cb.char);
        prop_assert_eq!(cj.word, ca.word + cb.word);
        prop_assert_eq!(cj.punctuation, ca.punctuation + cb.punctuation);
        prop_assert!(cj.word >= cj.uppercase_word);
    }

    /// The Flesch band is total over all of f64 and monotone in the score.
    #[test]
    fn flesch_band_total_and_monotone(a in -1e6f64..1e6, b in -1e6f64..1e6) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(FleschBand::from_score(lo) <= FleschBand::from_score(hi));
    }

    /// A resolved hashtag split concatenates back to the tag and uses only
    /// corpus words.
    #[test]
    fn hashtag_split_is_sound(indices in proptest::collection::vec(0usize..8, 1..4)) {
        let words = ["hate", "cannot", "drive", "out", "news", "fire", "police", "truth"];
        let r = TextResources::embedded();
        let tag: String = indices.iter().map(|&i| words[i]).collect();
        let split = split_hashtag(&tag, &r.corpus);
        prop_assert!(split.resolved);
        prop_assert_eq!(split.words.concat(), tag);
        for w in &split.words {
            prop_assert!(r.corpus.contains(w), "{} not in corpus", w);
        }
        // Minimality: never more pieces than the generating sequence.
        prop_assert!(split.words.len() <= indices.len());
    }

    /// Classifier outputs stay on the probability simplex under arbitrary
    /// training histories.
    #[test]
    fn predictions_are_probability_vectors(
        samples in proptest::collection::vec((0.0f64..1.0, proptest::bool::ANY), 1..120)
    ) {
        let mut nb = GaussianNb::new();
        let mut tree = HoeffdingTree::new(TreeParams {
            grace_period: 20,
            split_confidence: 1e-7,
            tie_threshold: 0.5,
            max_depth: 50,
            max_nodes: 50,
            feature_subset: None,
            seed: 1,
        });
        for (v, fake) in &samples {
            let x = fv(&[("f".to_string(), *v)]);
            let y = if *fake { Label::Fake } else { Label::NonFake };
            for p in [nb.predict_proba(&x), tree.predict_proba(&x)] {
                prop_assert!(p[0] >= 0.0 && p[1] >= 0.0);
                prop_assert!((p[0] + p[1] - 1.0).abs() < 1e-9);
            }
            nb.learn(&x, y);
            tree.learn(&x, y, 1.0);
        }
    }

    /// Normalization output is stopword-free, casefolded and aligned.
    #[test]
    fn normalization_invariants(text in "[a-zA-Z0-9 .,!?#:/]{0,80}") {
        let r = TextResources::embedded();
        let p = normalize_and_tokenize(&text, &r.stopwords, &r.lemmas);
        prop_assert_eq!(p.tokens.len(), p.lemmas.len());
        for t in &p.tokens {
            prop_assert!(!r.stopwords.contains(t));
            prop_assert_eq!(t.to_lowercase(), t.clone());
            prop_assert!(t.chars().all(|c| c.is_alphanumeric()));
        }
    }
}

/// The update rule keeps every centroid at the running mean of the points
/// assigned to it during training.
#[test]
fn centroids_equal_training_assignment_means() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    let mut km = KMeansState::new(3);
    let mut sums: Vec<(f64, f64, u64)> = vec![(0.0, 0.0, 0); 3];
    for _ in 0..600 {
        let blob = rng.gen_range(0..3) as f64;
        let x = fv(&[
            ("x".to_string(), blob * 8.0 + rng.gen_range(-0.5..0.5)),
            ("y".to_string(), rng.gen_range(-0.5..0.5)),
        ]);
        let id = km.assign(&x);
        km.update(id, &x);
        let e = &mut sums[id];
        e.0 += x.get(&FeatureKey::base("x"));
        e.1 += x.get(&FeatureKey::base("y"));
        e.2 += 1;
    }
    for (i, (sx, sy, n)) in sums.iter().enumerate() {
        if *n == 0 {
            continue;
        }
        let c = km.centroid(i).unwrap();
        assert!((c[&FeatureKey::base("x")] - sx / *n as f64).abs() < 1e-6);
        assert!((c[&FeatureKey::base("y")] - sy / *n as f64).abs() < 1e-6);
    }
}

/// Sanity bound on the clustering objective: replaying a frozen stream,
/// nearest-centroid assignment costs no more than putting every point on
/// the single best centroid (the global mean).
#[test]
fn kmeans_objective_beats_single_centroid() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(78);
    let points: Vec<FeatureVector> = (0..400)
        .map(|i| {
            let blob = (i % 2) as f64;
            fv(&[
                ("x".to_string(), blob * 6.0 + rng.gen_range(-1.0..1.0)),
                ("y".to_string(), rng.gen_range(-1.0..1.0)),
            ])
        })
        .collect();

    let mut km = KMeansState::new(2);
    for x in &points {
        let id = km.assign(x);
        km.update(id, x);
    }

    let mut global = std::collections::BTreeMap::new();
    for name in ["x", "y"] {
        let key = FeatureKey::base(name);
        let mean = points.iter().map(|p| p.get(&key)).sum::<f64>() / points.len() as f64;
        global.insert(key, mean);
    }

    let mut clustered = 0.0;
    let mut single = 0.0;
    for x in &points {
        let mut best = f64::INFINITY;
        for c in 0..2 {
            best = best.min(squared_distance(km.centroid(c).unwrap(), x));
        }
        clustered += best;
        single += squared_distance(&global, x);
    }
    assert!(
        clustered <= single,
        "clustered {clustered:.2} must not exceed single-centroid {single:.2}"
    );
}
