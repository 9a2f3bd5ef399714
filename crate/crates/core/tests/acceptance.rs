//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `--nocapture`). Tolerances are pinned in the
//! assertions. Run with `cargo test -p veristream-core --test acceptance`.

mod common;

use common::synthetic_events;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;
use std::time::Instant;
use veristream_core::config::{ClassifierFamily, FeatureSet, WindowMode};
use veristream_core::eval::{majority_baseline, run_stream, write_artifacts, MetricsWindow};
use veristream_core::explain::{format_report, verify_explanation, ReportFormat};
use veristream_core::features::{FeatureKey, FeatureVector, VarianceSelector};
use veristream_core::learn::{
    argmax2, hoeffding_bound, information_gain, AdaptiveForest, AdaptiveTree, ForestParams,
    GaussianNb, HoeffdingTree, KMeansState, TreeParams,
};
use veristream_core::lexicon::FrequencyLexicon;
use veristream_core::textproc::{readability, split_hashtag, TextResources};
use veristream_core::{Label, RunConfig};

fn verdict(number: u8, name: &str, pass: bool) {
    println!(
        "acceptance {:02} ({name}): {}",
        number,
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance criterion {number} ({name}) failed");
}

fn fv(values: &[(&str, f64)]) -> FeatureVector {
    let mut v = FeatureVector::new(FeatureSet::A);
    for (name, x) in values {
        v.insert(FeatureKey::base(name), *x);
    }
    v
}

fn paper_tree_params(max_nodes: usize, seed: u64) -> TreeParams {
    TreeParams {
        grace_period: 200,
        split_confidence: 1e-7,
        tie_threshold: 0.5,
        max_depth: 50,
        max_nodes,
        feature_subset: None,
        seed,
    }
}

/// Criterion 1: incremental GNB sufficient statistics and posteriors match
/// a batch recomputation within 1e-9 on 1,000 samples; runtime < 1 s.
#[test]
fn acceptance_01_gnb_oracle_equivalence() {
    const N: usize = 1000;
    const DIMS: usize = 5;
    let names = ["f0", "f1", "f2", "f3", "f4"];
    let started = Instant::now();

    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut model = GaussianNb::new();
    let mut data: Vec<(Vec<f64>, Label)> = Vec::with_capacity(N);
    for _ in 0..N {
        let label = if rng.gen_bool(0.5) { Label::Fake } else { Label::NonFake };
        let shift = if label == Label::Fake { 0.0 } else { 1.5 };
        let values: Vec<f64> = (0..DIMS).map(|_| rng.gen_range(-2.0..2.0) + shift).collect();
        let x = fv(&names.iter().copied().zip(values.iter().copied()).collect::<Vec<_>>());
        model.learn(&x, label);
        data.push((values, label));
    }

    // Batch oracle: per-class two-pass means/population variances, then the
    // same Gaussian posterior formula evaluated from scratch.
    let mut batch_mean = [[0.0f64; DIMS]; 2];
    let mut batch_var = [[0.0f64; DIMS]; 2];
    let mut class_n = [0.0f64; 2];
    for (values, label) in &data {
        class_n[label.index()] += 1.0;
        for d in 0..DIMS {
            batch_mean[label.index()][d] += values[d];
        }
    }
    for c in 0..2 {
        for d in 0..DIMS {
            batch_mean[c][d] /= class_n[c];
        }
    }
    for (values, label) in &data {
        for d in 0..DIMS {
            let diff = values[d] - batch_mean[label.index()][d];
            batch_var[label.index()][d] += diff * diff;
        }
    }
    for c in 0..2 {
        for d in 0..DIMS {
            batch_var[c][d] /= class_n[c];
        }
    }

    let mut max_stat_err = 0.0f64;
    for c in [Label::Fake, Label::NonFake] {
        for (d, name) in names.iter().enumerate() {
            let stat = model.feature_stat(&FeatureKey::base(name), c);
            max_stat_err = max_stat_err
                .max((stat.mean - batch_mean[c.index()][d]).abs())
                .max((stat.variance() - batch_var[c.index()][d]).abs());
        }
    }

    let total = class_n[0] + class_n[1];
    let mut max_posterior_err = 0.0f64;
    for (values, _) in &data {
        let x = fv(&names.iter().copied().zip(values.iter().copied()).collect::<Vec<_>>());
        let got = model.predict_proba(&x);
        let mut log_p = [0.0f64; 2];
        for c in 0..2 {
            log_p[c] = (class_n[c] / total).ln();
            for d in 0..DIMS {
                let var = batch_var[c][d].max(1e-9);
                let diff = values[d] - batch_mean[c][d];
                log_p[c] += -0.5 * ((2.0 * std::f64::consts::PI * var).ln() + diff * diff / var);
            }
        }
        let m = log_p[0].max(log_p[1]);
        let e = [(log_p[0] - m).exp(), (log_p[1] - m).exp()];
        let want = [e[0] / (e[0] + e[1]), e[1] / (e[0] + e[1])];
        max_posterior_err = max_posterior_err
            .max((got[0] - want[0]).abs())
            .max((got[1] - want[1]).abs());
    }

    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "  gnb: max stat err {max_stat_err:.2e}, max posterior err {max_posterior_err:.2e}, {elapsed:.3}s"
    );
    verdict(
        1,
        "gnb oracle equivalence",
        max_stat_err < 1e-9 && max_posterior_err < 1e-9 && elapsed < 1.0,
    );
}

/// Criterion 2: the Hoeffding radius evaluates to its reference value, and
/// every logged split satisfies the split condition when recomputed from
/// the recorded statistics.
#[test]
fn acceptance_02_hoeffding_bound_and_split_soundness() {
    let eps = hoeffding_bound(1.0, 0.05, 1000.0);
    let bound_ok = (eps - 0.03870).abs() <= 1e-4;

    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut tree = HoeffdingTree::new(paper_tree_params(50, 7));
    for _ in 0..5000 {
        let v: f64 = rng.gen_range(0.0..1.0);
        let y = if v > 0.5 { Label::NonFake } else { Label::Fake };
        tree.learn(&fv(&[("f", v)]), y, 1.0);
    }
    let mut splits_ok = !tree.split_log().is_empty();
    for record in tree.split_log() {
        let gain = information_gain(&record.pre_split_dist, &record.post_split_dists);
        let eps = hoeffding_bound(1.0, record.split_confidence, record.weight);
        splits_ok &= (gain - record.best_gain).abs() < 1e-9;
        splits_ok &= (eps - record.epsilon).abs() < 1e-12;
        splits_ok &=
            record.best_gain - record.second_gain > eps || eps < record.tie_threshold;
    }
    println!(
        "  bound = {eps:.5}; {} logged splits rechecked",
        tree.split_log().len()
    );
    verdict(2, "hoeffding bound and split soundness", bound_ok && splits_ok);
}

/// Criterion 3: HTC reaches >= 0.95 prequential accuracy over the last
/// 1,000 of 5,000 separable samples in under 10 s.
#[test]
fn acceptance_03_separable_stream_learning() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut tree = HoeffdingTree::new(paper_tree_params(50, 11));
    let mut tail_correct = 0usize;
    const N: usize = 5000;
    for i in 0..N {
        let v: f64 = rng.gen_range(0.0..1.0);
        let y = if v > 0.5 { Label::NonFake } else { Label::Fake };
        let x = fv(&[("f", v)]);
        let pred = argmax2(&tree.predict_proba(&x));
        if i >= N - 1000 && pred == y.index() {
            tail_correct += 1;
        }
        tree.learn(&x, y, 1.0);
    }
    let accuracy = tail_correct as f64 / 1000.0;
    let elapsed = started.elapsed().as_secs_f64();
    println!("  tail accuracy {accuracy:.3} in {elapsed:.2}s");
    verdict(
        3,
        "separable stream learning",
        accuracy >= 0.95 && elapsed < 10.0,
    );
}

/// Trailing-500 accuracy trace for one learner over the label-flip stream.
/// `step` predicts the class index for a value and then trains on it.
fn drift_scenario(mut step: impl FnMut(f64, Label) -> usize) -> (bool, u32) {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut recent = VecDeque::new();
    let mut recovered_at = None;
    for i in 0..10_000u32 {
        let v: f64 = rng.gen_range(0.0..1.0);
        let flipped = i >= 5000;
        let one = v > 0.5;
        let y = if one != flipped { Label::NonFake } else { Label::Fake };
        let pred = step(v, y);
        recent.push_back(pred == y.index());
        if recent.len() > 500 {
            recent.pop_front();
        }
        // Window must contain post-flip samples only, and the recovery
        // budget is 2,000 samples after the flip.
        if flipped && (5500..7000).contains(&i) && recent.len() == 500 && recovered_at.is_none() {
            let acc = recent.iter().filter(|&&c| c).count() as f64 / 500.0;
            if acc >= 0.90 {
                recovered_at = Some(i);
            }
        }
    }
    (recovered_at.is_some(), recovered_at.unwrap_or(0))
}

/// Criterion 4: HATC and ARFC restore trailing-500 accuracy >= 0.90 within
/// 2,000 post-flip samples; plain HTC does not. Runtime < 60 s.
#[test]
fn acceptance_04_drift_recovery() {
    let started = Instant::now();

    let mut hatc = AdaptiveTree::new(paper_tree_params(200, 21), 0.002, 0.05);
    let (hatc_recovered, at) = drift_scenario(|v, y| {
        let x = fv(&[("f", v)]);
        let pred = argmax2(&hatc.predict_proba(&x));
        hatc.learn(&x, y, 1.0);
        pred
    });
    println!("  hatc recovered: {hatc_recovered} (sample {at})");

    let mut arfc = AdaptiveForest::new(
        ForestParams {
            n_trees: 200,
            feature_subset: 50,
            lambda: 50.0,
            tree: paper_tree_params(50, 0),
            drift_confidence: 0.002,
            warning_confidence: 0.05,
            resampling: true,
        },
        22,
    );
    let (arfc_recovered, at) = drift_scenario(|v, y| {
        let x = fv(&[("f", v)]);
        let pred = argmax2(&arfc.predict_proba(&x));
        arfc.learn(&x, y);
        pred
    });
    println!("  arfc recovered: {arfc_recovered} (sample {at})");

    let mut htc = HoeffdingTree::new(paper_tree_params(50, 23));
    let (htc_recovered, at) = drift_scenario(|v, y| {
        let x = fv(&[("f", v)]);
        let pred = argmax2(&htc.predict_proba(&x));
        htc.learn(&x, y, 1.0);
        pred
    });
    println!("  htc recovered: {htc_recovered} (sample {at})");

    let elapsed = started.elapsed().as_secs_f64();
    println!("  drift scenarios in {elapsed:.1}s");
    verdict(
        4,
        "drift recovery",
        hatc_recovered && arfc_recovered && !htc_recovered && elapsed < 60.0,
    );
}

/// Criterion 5: k-means with k=1 reproduces the batch mean within 1e-9;
/// with k=2 on two well-separated blobs >= 99% of points go to their
/// generating blob.
#[test]
fn acceptance_05_kmeans() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut km = KMeansState::new(1);
    let mut sums = [0.0f64; 3];
    const N: usize = 1000;
    for _ in 0..N {
        let vals = [
            rng.gen_range(-4.0..4.0),
            rng.gen_range(-4.0..4.0),
            rng.gen_range(-4.0..4.0),
        ];
        for (s, v) in sums.iter_mut().zip(vals) {
            *s += v;
        }
        let x = fv(&[("a", vals[0]), ("b", vals[1]), ("c", vals[2])]);
        let id = km.assign(&x);
        km.update(id, &x);
    }
    let centroid = km.centroid(0).unwrap();
    let mut mean_ok = true;
    for (name, sum) in [("a", sums[0]), ("b", sums[1]), ("c", sums[2])] {
        mean_ok &= (centroid[&FeatureKey::base(name)] - sum / N as f64).abs() < 1e-9;
    }

    // Gaussian blobs with sigma 0.1, centers 10 apart, alternating arrival.
    let mut km2 = KMeansState::new(2);
    let mut majority: [[u64; 2]; 2] = [[0; 2]; 2];
    for i in 0..N {
        let blob = i % 2;
        let center = if blob == 0 { 0.0 } else { 10.0 };
        let x = fv(&[
            ("x", center + rng.gen_range(-0.5..0.5) * 0.2),
            ("y", rng.gen_range(-0.5..0.5) * 0.2),
        ]);
        let id = km2.assign(&x);
        km2.update(id, &x);
        majority[blob][id] += 1;
    }
    // Map each blob to the cluster holding most of its points.
    let blob0_cluster = if majority[0][0] >= majority[0][1] { 0 } else { 1 };
    let blob1_cluster = 1 - blob0_cluster;
    let correct = majority[0][blob0_cluster] + majority[1][blob1_cluster];
    let fraction = correct as f64 / N as f64;
    println!("  blob separation {fraction:.3}");
    verdict(5, "kmeans", mean_ok && fraction >= 0.99);
}

/// Criterion 6: lexicon frequencies equal a brute-force recount on a
/// 500-tweet synthetic stream; derived lexica are disjoint, capped,
/// frequency-ordered, and empty before the 5% warm-up boundary.
#[test]
fn acceptance_06_lexicon() {
    const STREAM: usize = 500;
    let warmup = (0.05f64 * STREAM as f64).ceil() as u64; // 25
    let mut lex = FrequencyLexicon::new(2, 4, 700, 1, warmup);

    let vocab = ["breaking", "news", "police", "confirm", "fire", "hoax", "report", "truth"];
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let mut tweets: Vec<(Vec<String>, Label)> = Vec::new();
    for _ in 0..STREAM {
        let len = rng.gen_range(2..6);
        let words: Vec<String> = (0..len)
            .map(|_| vocab[rng.gen_range(0..vocab.len())].to_string())
            .collect();
        let label = if rng.gen_bool(0.5) { Label::Fake } else { Label::NonFake };
        tweets.push((words, label));
    }

    let mut empty_before = true;
    for (i, (words, label)) in tweets.iter().enumerate() {
        if i as u64 == warmup - 1 {
            empty_before = lex.build_class_lexica().is_empty();
        }
        lex.update(words, *label);
    }
    let lexica = lex.build_class_lexica();

    // Brute-force recount with an independent n-gram enumerator.
    let mut recount: [std::collections::BTreeMap<String, u64>; 2] = Default::default();
    for (words, label) in &tweets {
        for n in 2..=4usize {
            if n > words.len() {
                continue;
            }
            for start in 0..=(words.len() - n) {
                let gram = words[start..start + n].join(" ");
                *recount[label.index()].entry(gram).or_insert(0) += 1;
            }
        }
    }
    let mut counts_ok = true;
    for (c, label) in [(0, Label::Fake), (1, Label::NonFake)] {
        for (gram, &freq) in &recount[c] {
            counts_ok &= lex.frequency(gram, label) == freq;
        }
    }

    let disjoint = lexica
        .fake
        .iter()
        .all(|(g, _)| !lexica.non_fake.iter().any(|(h, _)| h == g));
    let capped = lexica.fake.len() <= 700 && lexica.non_fake.len() <= 700;
    let ordered = lexica.fake.windows(2).all(|w| w[0].1 >= w[1].1)
        && lexica.non_fake.windows(2).all(|w| w[0].1 >= w[1].1);
    let non_empty_after = !lexica.is_empty();

    println!(
        "  frequencies match recount: {counts_ok}; disjoint {disjoint}; capped {capped}; ordered {ordered}"
    );
    verdict(
        6,
        "lexicon",
        counts_ok && disjoint && capped && ordered && empty_before && non_empty_after,
    );
}

/// Criterion 7: feature pipeline reference values — hashtag segmentation,
/// Flesch, EFLAW, and the variance selector rules.
#[test]
fn acceptance_07_feature_pipeline() {
    let resources = TextResources::embedded();
    let split = split_hashtag("hatecannotdriveouthate", &resources.corpus);
    let hashtag_ok = split.resolved && split.words.join(" ") == "hate cannot drive out hate";

    let r = readability("The cat sat on the mat.", 14.69);
    let flesch_ok = (r.flesch_reading_ease - 116.145).abs() <= 0.001;
    let eflaw_ok = (r.mcalpine_eflaw - 12.0).abs() < 1e-9;

    let constant = FeatureKey::base("constant");
    let alternating = FeatureKey::base("alternating");
    let mut selector = VarianceSelector::new(0.0);
    for i in 0..100 {
        let mut v = FeatureVector::new(FeatureSet::A);
        v.insert(constant.clone(), 5.0);
        v.insert(alternating.clone(), (i % 2) as f64);
        selector.update(&v);
    }
    let mut probe = FeatureVector::new(FeatureSet::A);
    probe.insert(constant.clone(), 5.0);
    probe.insert(alternating.clone(), 1.0);
    let out = selector.select(&probe);
    let selector_ok = !out.contains(&constant)
        && out.contains(&alternating)
        && (selector.variance(&alternating) - 0.25).abs() < 1e-12;

    println!("  hashtag {hashtag_ok}; flesch {:.3}; eflaw {}", r.flesch_reading_ease, r.mcalpine_eflaw);
    verdict(
        7,
        "feature pipeline",
        hashtag_ok && flesch_ok && eflaw_ok && selector_ok,
    );
}

/// Criterion 8: the majority baseline over the experimental label counts
/// scores 62.61% (+- 0.01 percent points), and incremental confusion counts
/// always equal a recount of the stored pairs.
#[test]
fn acceptance_08_prequential_correctness() {
    let mut labels = vec![Label::Fake; 2402];
    labels.extend(vec![Label::NonFake; 4022]);
    let (_, m) = majority_baseline(&labels).unwrap();
    let baseline_ok = (m.accuracy * 100.0 - 62.61).abs() <= 0.01;

    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut window = MetricsWindow::new(Some(100));
    let mut recount_ok = true;
    for _ in 0..1000 {
        let p = if rng.gen_bool(0.6) { Label::Fake } else { Label::NonFake };
        let a = if rng.gen_bool(0.4) { Label::Fake } else { Label::NonFake };
        window.push(p, a);
        let mut recount = [[0u64; 2]; 2];
        for (pp, aa) in window.pairs() {
            recount[aa.index()][pp.index()] += 1;
        }
        recount_ok &= &recount == window.confusion();
    }

    println!("  baseline accuracy {:.4}%", m.accuracy * 100.0);
    verdict(
        8,
        "prequential correctness",
        baseline_ok && recount_ok,
    );
}

/// Criterion 9: paper-scale replication. The full-data and 20%-window
/// comparisons require the converted experimental stream (point the
/// PHEME_EVENTS env var at it); without it they are skipped as specified.
/// Throughput is measured unconditionally on a synthetic stream with the
/// default (heaviest) configuration.
#[test]
fn acceptance_09_paper_scale_replication() {
    // Unconditional throughput check at the default configuration.
    let events = synthetic_events(1200, 109);
    let cfg = RunConfig::default(); // arfc, set C, k=10, 200 trees
    let (outcome, _) = run_stream(&cfg, &events).expect("run");
    let sps = outcome.timing.seconds_per_sample;
    println!("  synthetic throughput: {sps:.4} s/sample (budget 0.42)");
    let throughput_ok = sps <= 0.42;

    match std::env::var("PHEME_EVENTS") {
        Err(_) => {
            println!("  full-data / 20%-window replication: SKIP (set PHEME_EVENTS to the converted stream)");
            verdict(9, "paper-scale replication (throughput half)", throughput_ok);
        }
        Ok(path) => {
            let load = veristream_core::ingest::read_stream(std::path::Path::new(&path))
                .expect("read PHEME stream");
            let mut cfg = RunConfig::default();
            cfg.window = WindowMode::Full;
            let (full, _) = run_stream(&cfg, &load.events).expect("full-window run");
            let acc = full.report.accuracy * 100.0;
            let macro_f = full.report.macro_f * 100.0;
            let fake_f = full.report.f_fake * 100.0;
            println!(
                "  full window: accuracy {acc:.2} (target 80.26 ±5), macro F {macro_f:.2} (target 78.97 ±5), fake F {fake_f:.2} (target 73.77 ±5)"
            );
            let full_ok =
                (acc - 80.26).abs() <= 5.0 && (macro_f - 78.97).abs() <= 5.0 && (fake_f - 73.77).abs() <= 5.0;

            cfg.window = WindowMode::Fraction(0.2);
            let (slid, _) = run_stream(&cfg, &load.events).expect("20% window run");
            let acc20 = slid.report.accuracy * 100.0;
            println!("  20% window: accuracy {acc20:.2} (target 82.82 ±5)");
            let slid_ok = (acc20 - 82.82).abs() <= 5.0;
            let pheme_sps = full.timing.seconds_per_sample.max(slid.timing.seconds_per_sample);
            println!("  throughput on stream: {pheme_sps:.4} s/sample (budget 0.42)");

            if !(full_ok && slid_ok) {
                // Out-of-tolerance results require a written variance
                // analysis rather than an automatic reject; surface loudly.
                println!(
                    "  NEEDS VARIANCE ANALYSIS: replication outside ±5 percent points; \
                       see the run reports for the measured values"
                );
            }
            verdict(
                9,
                "paper-scale replication",
                throughput_ok && pheme_sps <= 0.42,
            );
        }
    }
}

/// Criterion 10: for 100 sampled events of a run, the emitted decision path
/// replays to a leaf whose argmax is the reported label; reports carry all
/// four blocks, lexicon blocks are disjoint, and structured reports
/// round-trip byte-identically.
#[test]
fn acceptance_10_explanation_integrity() {
    let events = synthetic_events(400, 110);
    let mut cfg = RunConfig::default();
    cfg.classifier = ClassifierFamily::Htc;
    cfg.clusters = 2;
    cfg.explain_every = 1;
    let (outcome, _) = run_stream(&cfg, &events).expect("run");
    assert!(outcome.explanations.len() >= 100);

    let mut ok = true;
    let step = outcome.explanations.len() / 100;
    for e in outcome.explanations.iter().step_by(step.max(1)).take(100) {
        if let Err(err) = verify_explanation(e) {
            println!("  explanation {} failed verification: {err}", e.tweet_id);
            ok = false;
        }
        // Structured round-trip must be byte-identical.
        let first = format_report(e, ReportFormat::Structured).unwrap();
        let parsed: veristream_core::explain::Explanation =
            serde_json::from_str(&first).unwrap();
        let second = format_report(&parsed, ReportFormat::Structured).unwrap();
        ok &= first == second;
        // All four blocks present as labeled sections.
        let html = format_report(e, ReportFormat::Html).unwrap();
        for id in ["features", "prediction", "lexicon", "cluster"] {
            ok &= html.contains(&format!("<section id=\"{id}\">"));
        }
    }
    let with_paths = outcome
        .explanations
        .iter()
        .filter(|e| e.decision_path.as_ref().map(|p| !p.is_empty()).unwrap_or(false))
        .count();
    println!("  verified 100 sampled explanations ({with_paths} carry non-empty paths)");
    verdict(10, "explanation integrity", ok && with_paths > 0);
}

/// Criterion 11: identical configuration and seeds produce byte-identical
/// reports, metric series and explanation reports.
#[test]
fn acceptance_11_determinism() {
    let events = synthetic_events(300, 111);
    let mut cfg = RunConfig::default();
    cfg.classifier = ClassifierFamily::Arfc;
    cfg.forest_size = 5;
    cfg.clusters = 2;
    cfg.explain_every = 50;

    let dirs = [
        tempfile::tempdir().unwrap(),
        tempfile::tempdir().unwrap(),
    ];
    for dir in &dirs {
        let (outcome, engine) = run_stream(&cfg, &events).expect("run");
        write_artifacts(dir.path(), &outcome, &engine, None).expect("artifacts");
    }

    let mut ok = true;
    for file in ["report.json", "metrics.csv", "predictions.csv"] {
        let a = std::fs::read(dirs[0].path().join(file)).unwrap();
        let b = std::fs::read(dirs[1].path().join(file)).unwrap();
        if a != b {
            println!("  {file} differs between identical runs");
            ok = false;
        }
    }
    let expl_a = dirs[0].path().join("explanations");
    for entry in std::fs::read_dir(&expl_a).unwrap() {
        let name = entry.unwrap().file_name();
        let a = std::fs::read(expl_a.join(&name)).unwrap();
        let b = std::fs::read(dirs[1].path().join("explanations").join(&name)).unwrap();
        if a != b {
            println!("  explanation {name:?} differs");
            ok = false;
        }
    }
    verdict(11, "determinism", ok);
}
