//! Prequential (test-then-train) driver, metric computation and run
//! artifacts.
//!
//! Each labeled event is first predicted using only state trained on
//! strictly earlier events, then used to train the lexicon, profiles,
//! vectorizer, selector, k-means and the routed classifier. Metrics
//! accumulate in a sliding window (full stream, fraction, or fixed count).
//! Wall-clock timing is kept out of the deterministic artifacts and written
//! separately.

use crate::config::{RunConfig, WindowMode};
use crate::error::CoreError;
use crate::explain::{build_explanation, Explanation, ReportFormat, ReportIndex};
use crate::features::{
    assemble, creator_features, tracked_values, AssembleParts, DuplicateStore, NgramVectorizer,
    ProfileStore, Standardizer, TimezoneEncoder, VarianceSelector,
};
use crate::ingest::{Label, LoadReport, TweetEvent};
use crate::learn::{ModelBank, Prediction};
use crate::lexicon::{lexicon_features, ClassLexica, FrequencyLexicon};
use crate::textproc::{affect_scores, readability, style_counts, TextProcessor};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

/// Sliding window of (predicted, actual) pairs with incremental confusion
/// counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricsWindow {
    capacity: Option<usize>,
    pairs: VecDeque<(Label, Label)>,
    /// confusion[actual][predicted]
    confusion: [[u64; 2]; 2],
}

/// Metrics over the current window contents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsSnapshot {
    pub window_len: usize,
    pub accuracy: f64,
    pub macro_f: f64,
    pub f_fake: f64,
    pub f_non_fake: f64,
}

impl MetricsWindow {
    pub fn new(capacity: Option<usize>) -> Self {
        Self {
            capacity,
            pairs: VecDeque::new(),
            confusion: [[0; 2]; 2],
        }
    }

    /// Window sized per the configured mode against a known stream length.
    pub fn for_mode(mode: WindowMode, stream_len: usize) -> Self {
        let capacity = match mode {
            WindowMode::Full => None,
            WindowMode::Fraction(f) => Some(((f * stream_len as f64).round() as usize).max(1)),
            WindowMode::Count(n) => Some(n.max(1)),
        };
        Self::new(capacity)
    }

    pub fn push(&mut self, predicted: Label, actual: Label) {
        self.pairs.push_back((predicted, actual));
        self.confusion[actual.index()][predicted.index()] += 1;
        if let Some(cap) = self.capacity {
            while self.pairs.len() > cap {
                let (p, a) = self.pairs.pop_front().expect("non-empty");
                self.confusion[a.index()][p.index()] -= 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(Label, Label)> {
        self.pairs.iter()
    }

    pub fn confusion(&self) -> &[[u64; 2]; 2] {
        &self.confusion
    }

    /// Accuracy, per-class F and macro F over the window; absent when the
    /// window is empty.
    pub fn compute(&self) -> Option<MetricsSnapshot> {
        let total: u64 = self.confusion.iter().flatten().sum();
        if total == 0 {
            return None;
        }
        let correct = self.confusion[0][0] + self.confusion[1][1];
        let f_for = |class: usize| -> f64 {
            let tp = self.confusion[class][class] as f64;
            let fp = self.confusion[1 - class][class] as f64;
            let fn_ = self.confusion[class][1 - class] as f64;
            let denom = 2.0 * tp + fp + fn_;
            if denom > 0.0 {
                2.0 * tp / denom
            } else {
                0.0
            }
        };
        let f_fake = f_for(Label::Fake.index());
        let f_non_fake = f_for(Label::NonFake.index());
        Some(MetricsSnapshot {
            window_len: self.pairs.len(),
            accuracy: correct as f64 / total as f64,
            macro_f: (f_fake + f_non_fake) / 2.0,
            f_fake,
            f_non_fake,
        })
    }
}

/// Fixed-majority baseline: predicts the stream's majority class for every
/// sample, so its accuracy equals the majority prevalence exactly.
pub fn majority_baseline(labels: &[Label]) -> Option<(Label, MetricsSnapshot)> {
    if labels.is_empty() {
        return None;
    }
    let fake = labels.iter().filter(|l| **l == Label::Fake).count();
    let majority = if fake * 2 > labels.len() {
        Label::Fake
    } else {
        Label::NonFake
    };
    let mut window = MetricsWindow::new(None);
    for &actual in labels {
        window.push(majority, actual);
    }
    window.compute().map(|m| (majority, m))
}

/// One checkpoint row of the metric series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub samples: u64,
    pub accuracy: f64,
    pub macro_f: f64,
    pub f_fake: f64,
    pub f_non_fake: f64,
}

/// Summary of one full prequential pass. Wall-clock timing is carried in
/// memory but excluded from the serialized report so identical runs produce
/// identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub classifier: String,
    pub feature_set: String,
    pub window: String,
    pub samples: u64,
    pub accuracy: f64,
    pub macro_f: f64,
    pub f_fake: f64,
    pub f_non_fake: f64,
    pub cold_predictions: u64,
    #[serde(skip)]
    pub seconds_per_sample: f64,
}

/// Wall-clock measurements, written beside the deterministic artifacts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub samples: u64,
    pub total_seconds: f64,
    pub seconds_per_sample: f64,
}

/// All state the prequential pass mutates, serializable as one snapshot.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EngineState {
    pub config: RunConfig,
    pub events_processed: u64,
    profiles: ProfileStore,
    duplicates: DuplicateStore,
    timezone: TimezoneEncoder,
    vectorizer: NgramVectorizer,
    lexicon: FrequencyLexicon,
    lexica: ClassLexica,
    lexica_built_at: u64,
    selector: VarianceSelector,
    standardizer: Standardizer,
    bank: ModelBank,
}

/// The streaming pipeline: featurization, selection, routing,
/// classification and training for one event at a time.
pub struct Engine {
    state: EngineState,
    text: TextProcessor,
}

/// Outcome of one prequential step.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub prediction: Prediction,
    pub explanation: Option<Explanation>,
}

impl Engine {
    /// Builds a fresh engine. `expected_stream_size` feeds the lexicon
    /// warm-up rule; when unknown the configured absolute count applies.
    pub fn new(cfg: RunConfig, expected_stream_size: Option<usize>) -> Result<Self, CoreError> {
        cfg.validate()?;
        let resources = cfg.text_resources()?;
        let warmup = match expected_stream_size.or(cfg.expected_stream_size) {
            Some(n) => (cfg.lexicon_warmup_fraction * n as f64).ceil() as u64,
            None => cfg.lexicon_warmup_absolute as u64,
        };
        let state = EngineState {
            profiles: ProfileStore::default(),
            duplicates: DuplicateStore::default(),
            timezone: TimezoneEncoder::default(),
            vectorizer: NgramVectorizer::new(cfg.ngram_min, cfg.ngram_max, cfg.min_df, cfg.max_df),
            lexicon: FrequencyLexicon::new(
                cfg.lexicon_ngram_min,
                cfg.lexicon_ngram_max,
                cfg.lexicon_num_elements,
                cfg.lexicon_min_freq,
                warmup,
            ),
            lexica: ClassLexica::default(),
            lexica_built_at: 0,
            selector: VarianceSelector::new(cfg.variance_threshold),
            standardizer: Standardizer::new(),
            bank: ModelBank::new(&cfg),
            events_processed: 0,
            config: cfg,
        };
        Ok(Self {
            state,
            text: TextProcessor::new(resources),
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.state.config
    }

    pub fn bank(&self) -> &ModelBank {
        &self.state.bank
    }

    pub fn lexica(&self) -> &ClassLexica {
        &self.state.lexica
    }

    pub fn events_processed(&self) -> u64 {
        self.state.events_processed
    }

    /// Predict-then-train on one labeled event.
    pub fn step(
        &mut self,
        event: &TweetEvent,
        want_explanation: bool,
    ) -> Result<StepRecord, CoreError> {
        let label = event
            .label
            .ok_or_else(|| CoreError::UnlabeledEvent(event.tweet_id.clone()))?;
        let s = &mut self.state;
        let cfg = &s.config;

        // Featurization against strictly-prior state.
        let processed = self.text.process(&event.text);
        let style = style_counts(&event.text, &processed, &event.context, self.text.resources());
        let read = readability(&event.text, cfg.chars_per_second);
        let affect = affect_scores(&processed, self.text.resources());
        let duplicated = s.duplicates.check_and_insert(&processed.normalized_joined());
        let profile_prior = s.profiles.get_or_create(&event.user_id).clone();
        let creator = creator_features(&event.creator, &profile_prior, event.timestamp);
        let tz_slot = s.timezone.encode(&event.creator.timezone);
        let tz_slots = s.timezone.slot_count();

        let lexicon_grams = s.lexicon.tweet_ngrams(&processed.lemmas);
        let lexicon_hits = if cfg.feature_set.includes_lexicon() {
            Some(lexicon_features(&lexicon_grams, &s.lexica))
        } else {
            None
        };
        let ngram_counts = if cfg.feature_set.includes_ngrams() {
            Some(s.vectorizer.transform(&processed.lemmas))
        } else {
            None
        };

        let parts = AssembleParts {
            style: Some(&style),
            readability: Some(&read),
            affect: Some(&affect),
            creator: Some(&creator),
            context: Some(&event.context),
            duplicated: Some(duplicated),
            timezone: Some((tz_slot, tz_slots)),
            ngrams: ngram_counts.as_ref(),
            lexicon_hits,
        };
        let full = assemble(cfg.feature_set, &parts, &profile_prior)?;
        let selected = s.selector.select(&full);
        let z = s.standardizer.standardize(&selected);

        // Predict, explain against the predicting state, then train.
        let prediction = s.bank.predict(&selected, &z);
        let explanation = if want_explanation {
            Some(build_explanation(
                event,
                &selected,
                &prediction,
                &profile_prior,
                &s.lexica,
                &s.bank,
                &lexicon_grams,
                cfg.explain_k,
            ))
        } else {
            None
        };

        s.lexicon.update(&processed.lemmas, label);
        if s.lexicon.warmed_up() {
            let since = s.lexicon.samples_seen() - s.lexica_built_at;
            if s.lexica_built_at == 0 || since >= cfg.lexicon_rebuild_every as u64 {
                s.lexica = s.lexicon.build_class_lexica();
                s.lexica_built_at = s.lexicon.samples_seen();
            }
        }
        let tracked = tracked_values(&parts)?;
        s.profiles
            .get_or_create(&event.user_id)
            .update(&tracked, event.timestamp);
        s.vectorizer.learn(&processed.lemmas);
        s.selector.update(&full);
        s.standardizer.update(&full);
        s.bank.learn(&selected, &z, label);
        s.events_processed += 1;

        Ok(StepRecord {
            prediction,
            explanation,
        })
    }

    /// Serializes the full mutable state, seeds and counters included.
    pub fn save_snapshot(&self, path: &Path) -> Result<(), CoreError> {
        let mut body = serde_json::to_string(&VersionedSnapshot {
            version: SNAPSHOT_VERSION,
            state: &self.state,
        })?;
        body.push('\n');
        std::fs::write(path, body)?;
        Ok(())
    }

    /// Restores an engine that continues bit-exactly where the snapshot was
    /// taken.
    pub fn load_snapshot(path: &Path) -> Result<Self, CoreError> {
        let content = std::fs::read_to_string(path)?;
        let snap: OwnedSnapshot = serde_json::from_str(&content)?;
        if snap.version != SNAPSHOT_VERSION {
            return Err(CoreError::Config(format!(
                "snapshot version {} unsupported (expected {})",
                snap.version, SNAPSHOT_VERSION
            )));
        }
        let mut state = snap.state;
        state.lexica.reindex();
        let resources = state.config.text_resources()?;
        Ok(Self {
            state,
            text: TextProcessor::new(resources),
        })
    }
}

const SNAPSHOT_VERSION: u32 = 1;

#[derive(Serialize)]
struct VersionedSnapshot<'a> {
    version: u32,
    state: &'a EngineState,
}

#[derive(Deserialize)]
struct OwnedSnapshot {
    version: u32,
    state: EngineState,
}

/// Everything a full pass produces.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub series: Vec<SeriesRow>,
    pub explanations: Vec<Explanation>,
    pub predictions: Vec<(String, Prediction)>,
    pub timing: Timing,
}

/// Runs the full prequential pass over a labeled stream.
pub fn run_stream(cfg: &RunConfig, events: &[TweetEvent]) -> Result<(RunOutcome, Engine), CoreError> {
    cfg.validate()?;
    if let Some(e) = events.iter().find(|e| e.label.is_none()) {
        return Err(CoreError::UnlabeledEvent(e.tweet_id.clone()));
    }

    let mut engine = Engine::new(cfg.clone(), Some(events.len()))?;
    let mut window = MetricsWindow::for_mode(cfg.window, events.len());
    let mut series = Vec::new();
    let mut explanations = Vec::new();
    let mut predictions = Vec::with_capacity(events.len());
    let mut cold = 0u64;

    let started = Instant::now();
    for (i, event) in events.iter().enumerate() {
        let n = (i + 1) as u64;
        let want = (cfg.explain_every > 0 && n % cfg.explain_every as u64 == 0)
            || cfg.explain_ids.iter().any(|id| id == &event.tweet_id);
        let record = engine.step(event, want)?;
        let actual = event.label.expect("checked above");
        window.push(record.prediction.label, actual);
        if record.prediction.cold {
            cold += 1;
        }
        predictions.push((event.tweet_id.clone(), record.prediction));
        if let Some(e) = record.explanation {
            explanations.push(e);
        }
        if cfg.series_every > 0 && n % cfg.series_every as u64 == 0 {
            if let Some(m) = window.compute() {
                series.push(SeriesRow {
                    samples: n,
                    accuracy: m.accuracy,
                    macro_f: m.macro_f,
                    f_fake: m.f_fake,
                    f_non_fake: m.f_non_fake,
                });
            }
        }
    }
    let total_seconds = started.elapsed().as_secs_f64();

    let final_metrics = window.compute().unwrap_or(MetricsSnapshot {
        window_len: 0,
        accuracy: 0.0,
        macro_f: 0.0,
        f_fake: 0.0,
        f_non_fake: 0.0,
    });
    let samples = events.len() as u64;
    let report = RunReport {
        classifier: cfg.classifier.as_str().to_string(),
        feature_set: cfg.feature_set.as_str().to_string(),
        window: cfg.window.to_string(),
        samples,
        accuracy: final_metrics.accuracy,
        macro_f: final_metrics.macro_f,
        f_fake: final_metrics.f_fake,
        f_non_fake: final_metrics.f_non_fake,
        cold_predictions: cold,
        seconds_per_sample: if samples > 0 {
            total_seconds / samples as f64
        } else {
            0.0
        },
    };
    let timing = Timing {
        samples,
        total_seconds,
        seconds_per_sample: report.seconds_per_sample,
    };
    Ok((
        RunOutcome {
            report,
            series,
            explanations,
            predictions,
            timing,
        },
        engine,
    ))
}

fn format_float(v: f64) -> String {
    format!("{v:.6}")
}

/// Writes every artifact of a run into `dir`. The deterministic files
/// (report, series, predictions, explanations, config echo, dictionary,
/// lexica, snapshot) never contain wall-clock values; timing goes to its
/// own files.
pub fn write_artifacts(
    dir: &Path,
    outcome: &RunOutcome,
    engine: &Engine,
    load_report: Option<&LoadReport>,
) -> Result<(), CoreError> {
    std::fs::create_dir_all(dir)?;
    let cfg = engine.config();

    std::fs::write(
        dir.join("report.json"),
        serde_json::to_string_pretty(&outcome.report)? + "\n",
    )?;
    std::fs::write(
        dir.join("timing.json"),
        serde_json::to_string_pretty(&outcome.timing)? + "\n",
    )?;

    let mut metrics = String::from("samples,accuracy,macro_f,fake_f,non_fake_f\n");
    for row in &outcome.series {
        metrics.push_str(&format!(
            "{},{},{},{},{}\n",
            row.samples,
            format_float(row.accuracy),
            format_float(row.macro_f),
            format_float(row.f_fake),
            format_float(row.f_non_fake),
        ));
    }
    std::fs::write(dir.join("metrics.csv"), metrics)?;

    let mut preds = String::from("tweet_id,cluster,label,confidence,cold\n");
    for (id, p) in &outcome.predictions {
        preds.push_str(&format!(
            "{},{},{},{},{}\n",
            id,
            p.cluster,
            p.label.as_str(),
            format_float(p.confidence()),
            p.cold
        ));
    }
    std::fs::write(dir.join("predictions.csv"), preds)?;

    std::fs::write(dir.join("config.resolved.txt"), cfg.echo())?;
    std::fs::write(
        dir.join("feature_dictionary.json"),
        serde_json::to_string_pretty(&crate::features::feature_dictionary())? + "\n",
    )?;
    engine.lexica().export_json(&dir.join("lexica.json"))?;
    if let Some(lr) = load_report {
        lr.write_json(&dir.join("load_report.json"))?;
    }
    engine.save_snapshot(&dir.join("snapshot.json"))?;

    if !outcome.explanations.is_empty() {
        let expl_dir = dir.join("explanations");
        let mut index = ReportIndex::default();
        for e in &outcome.explanations {
            crate::explain::emit_report(&expl_dir, e, ReportFormat::Structured)?;
            index.reports.push(e.tweet_id.clone());
        }
        index.write(&expl_dir)?;
    }

    // Convenience timing series mirror (non-deterministic, separate file).
    let mut tf = std::fs::File::create(dir.join("timing.csv"))?;
    writeln!(tf, "samples,seconds_per_sample")?;
    writeln!(
        tf,
        "{},{}",
        outcome.timing.samples,
        format_float(outcome.timing.seconds_per_sample)
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_correct_scores_perfect() {
        let mut w = MetricsWindow::new(None);
        for _ in 0..10 {
            w.push(Label::Fake, Label::Fake);
            w.push(Label::NonFake, Label::NonFake);
        }
        let m = w.compute().unwrap();
        assert_eq!(m.accuracy, 1.0);
        assert_eq!(m.macro_f, 1.0);
    }

    #[test]
    fn all_positive_on_balanced_window() {
        // Predicting one class everywhere on a balanced stream:
        // F(predicted class) = 2/3, F(other) = 0, macro = 1/3.
        let mut w = MetricsWindow::new(None);
        for _ in 0..50 {
            w.push(Label::Fake, Label::Fake);
            w.push(Label::Fake, Label::NonFake);
        }
        let m = w.compute().unwrap();
        assert!((m.accuracy - 0.5).abs() < 1e-12);
        assert!((m.f_fake - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(m.f_non_fake, 0.0);
        assert!((m.macro_f - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn confusion_counts_match_pair_recount() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        let mut w = MetricsWindow::new(Some(37));
        for _ in 0..500 {
            let p = if rng.gen_bool(0.5) { Label::Fake } else { Label::NonFake };
            let a = if rng.gen_bool(0.5) { Label::Fake } else { Label::NonFake };
            w.push(p, a);
            let mut recount = [[0u64; 2]; 2];
            for (pp, aa) in w.pairs() {
                recount[aa.index()][pp.index()] += 1;
            }
            assert_eq!(&recount, w.confusion());
        }
        assert_eq!(w.len(), 37);
    }

    #[test]
    fn majority_baseline_equals_prevalence_exactly() {
        // Label counts mirroring the experimental stream: 2402 fake,
        // 4022 non-fake -> baseline accuracy 4022/6424 = 62.61%.
        let mut labels = vec![Label::Fake; 2402];
        labels.extend(vec![Label::NonFake; 4022]);
        let (majority, m) = majority_baseline(&labels).unwrap();
        assert_eq!(majority, Label::NonFake);
        assert!((m.accuracy - 4022.0 / 6424.0).abs() < 1e-12);
        assert!((m.accuracy * 100.0 - 62.61).abs() <= 0.01);
    }

    #[test]
    fn empty_window_reports_absent() {
        let w = MetricsWindow::new(None);
        assert!(w.compute().is_none());
    }

    #[test]
    fn fraction_window_capacity() {
        let w = MetricsWindow::for_mode(WindowMode::Fraction(0.2), 6424);
        let mut w2 = w.clone();
        for _ in 0..3000 {
            w2.push(Label::Fake, Label::Fake);
        }
        assert_eq!(w2.len(), 1285); // round(0.2 * 6424)
    }
}
