//! Per-prediction explanation records and report rendering.
//!
//! An explanation carries four blocks: the selected profile features with
//! user averages and warning flags, the predicted class with confidence,
//! the top lexicon entries per class, and the features characterizing the
//! assigned cluster — completed by the tree decision path rendered as
//! natural language. Records serialize deterministically and embed the
//! feature vector, so an emitted path can be replayed offline.

use crate::error::CoreError;
use crate::features::{feature_spec, FeatureKey, FeatureVector, ProfileClass, UserProfile};
use crate::ingest::{Label, TweetEvent};
use crate::learn::{argmax2, DecisionStep, KMeansState, ModelBank, Prediction};
use crate::lexicon::ClassLexica;
use crate::stats::SparseStats;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// One displayed profile feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureDisplay {
    pub feature: String,
    pub class: ProfileClass,
    pub value: f64,
    /// The user's running average over earlier posts, when tracked.
    pub user_average: Option<f64>,
    /// True when the value deviates (falls below) the user average.
    pub warning: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub ngram: String,
    pub frequency: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterFeature {
    pub feature: String,
    pub deviation: f64,
}

/// The full explanation record for one prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub tweet_id: String,
    pub predicted_label: Label,
    pub confidence_percent: u8,
    pub cluster: usize,
    pub cold: bool,
    pub selected_features: Vec<FeatureDisplay>,
    pub fake_lexicon_top: Vec<LexiconEntry>,
    pub non_fake_lexicon_top: Vec<LexiconEntry>,
    pub cluster_features: Vec<ClusterFeature>,
    pub cluster_marker: Option<String>,
    pub decision_path: Option<Vec<DecisionStep>>,
    pub leaf_distribution: Option<[f64; 2]>,
    pub path_marker: Option<String>,
    /// The feature vector the model saw, keyed by feature-id string.
    pub feature_vector: BTreeMap<String, f64>,
    pub transcript: Vec<String>,
}

/// Report output formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportFormat {
    Text,
    Structured,
    Html,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Result<Self, CoreError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" => Ok(Self::Text),
            "structured" | "json" => Ok(Self::Structured),
            "html" => Ok(Self::Html),
            other => Err(CoreError::UnknownFormat(other.to_string())),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Self::Text => "txt",
            Self::Structured => "json",
            Self::Html => "html",
        }
    }
}

fn label_display(label: Label) -> &'static str {
    match label {
        Label::Fake => "fake",
        Label::NonFake => "non-fake",
    }
}

/// The K dimensions whose centroid coordinates deviate most from the global
/// running mean, in units of the global deviation.
pub fn cluster_characteristic_features(
    kmeans: &KMeansState,
    cluster: usize,
    global: &SparseStats<FeatureKey>,
    k: usize,
) -> Vec<(FeatureKey, f64)> {
    let Some(centroid) = kmeans.centroid(cluster) else {
        return Vec::new();
    };
    if kmeans.count(cluster) == 0 {
        return Vec::new();
    }
    let mut ranked: Vec<(FeatureKey, f64)> = centroid
        .iter()
        .map(|(key, &coord)| {
            let stat = global.stat(key);
            let std = stat.std_dev();
            let z = if std > 0.0 { (coord - stat.mean) / std } else { 0.0 };
            (key.clone(), z)
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.1.abs()
            .partial_cmp(&a.1.abs())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.0.cmp(&b.0))
    });
    ranked.truncate(k);
    ranked
}

/// Chooses up to `cap` surviving base features for display: recently
/// split-upon features first, then dictionary order.
fn selected_feature_ids(
    selected: &FeatureVector,
    recent_splits: &[FeatureKey],
    cap: usize,
) -> Vec<String> {
    let surviving = |id: &str| selected.contains(&FeatureKey::base(id));
    let mut out: Vec<String> = Vec::new();
    for key in recent_splits.iter().rev() {
        let id = match key {
            FeatureKey::Base(id) | FeatureKey::UserAvg(id) | FeatureKey::Trend(id) => id.clone(),
            _ => continue,
        };
        if surviving(&id) && !out.contains(&id) {
            out.push(id);
            if out.len() == cap {
                return out;
            }
        }
    }
    for spec in crate::features::BASE_FEATURES {
        if out.len() == cap {
            break;
        }
        if spec.id != "timezone" && surviving(spec.id) && !out.iter().any(|x| x == spec.id) {
            out.push(spec.id.to_string());
        }
    }
    out
}

/// Assembles the explanation for one prediction, against the model state
/// that produced it.
#[allow(clippy::too_many_arguments)]
pub fn build_explanation(
    event: &TweetEvent,
    selected: &FeatureVector,
    prediction: &Prediction,
    profile: &UserProfile,
    lexica: &ClassLexica,
    bank: &ModelBank,
    tweet_ngrams: &[String],
    k: usize,
) -> Explanation {
    // Block 1: selected profile features with averages and warnings.
    let recent_splits = bank
        .model(prediction.cluster)
        .map(|m| m.split_features())
        .unwrap_or_default();
    let mut selected_features = Vec::new();
    for id in selected_feature_ids(selected, &recent_splits, 8) {
        let spec = feature_spec(&id).expect("dictionary id");
        let value = selected.get(&FeatureKey::base(&id));
        let (user_average, warning) = if spec.companions {
            let avg = profile.mean(&id);
            let trend = crate::features::trend_flag(value, avg);
            (Some(avg.unwrap_or(value)), Some(!trend))
        } else {
            (None, None)
        };
        selected_features.push(FeatureDisplay {
            feature: id,
            class: spec.class,
            value,
            user_average,
            warning,
        });
    }
    selected_features.sort_by(|a, b| {
        format!("{}", a.class)
            .cmp(&format!("{}", b.class))
            .then_with(|| a.feature.cmp(&b.feature))
    });

    // Block 3: top-K disjoint lexicon entries, restricted to this tweet's
    // matches when possible, falling back to the global top.
    let tweet_fake: Vec<LexiconEntry> = lexica
        .fake
        .iter()
        .filter(|(g, _)| tweet_ngrams.contains(g))
        .take(k)
        .map(|(g, f)| LexiconEntry {
            ngram: g.clone(),
            frequency: *f,
        })
        .collect();
    let (top_fake, top_non_fake) = lexica.top(k);
    let fake_lexicon_top = if tweet_fake.is_empty() {
        top_fake
            .into_iter()
            .map(|(g, f)| LexiconEntry {
                ngram: g,
                frequency: f,
            })
            .collect()
    } else {
        tweet_fake
    };
    let tweet_non_fake: Vec<LexiconEntry> = lexica
        .non_fake
        .iter()
        .filter(|(g, _)| tweet_ngrams.contains(g))
        .take(k)
        .map(|(g, f)| LexiconEntry {
            ngram: g.clone(),
            frequency: *f,
        })
        .collect();
    let non_fake_lexicon_top = if tweet_non_fake.is_empty() {
        top_non_fake
            .into_iter()
            .map(|(g, f)| LexiconEntry {
                ngram: g,
                frequency: f,
            })
            .collect()
    } else {
        tweet_non_fake
    };

    // Block 4: cluster-characteristic dimensions.
    let ranked = cluster_characteristic_features(
        bank.kmeans(),
        prediction.cluster,
        bank.z_stats(),
        k,
    );
    let cluster_marker = if ranked.is_empty() {
        Some("cluster has no assigned samples yet".to_string())
    } else {
        None
    };
    let cluster_features = ranked
        .into_iter()
        .map(|(key, z)| ClusterFeature {
            feature: key.to_string(),
            deviation: z,
        })
        .collect();

    // Decision path from the model that made the prediction.
    let (decision_path, leaf_distribution, path_marker) = if prediction.cold {
        (
            None,
            None,
            Some("insufficient history: the routed model has no training samples".to_string()),
        )
    } else {
        match bank
            .model(prediction.cluster)
            .and_then(|m| m.decision_path(selected, prediction.label))
        {
            Some((steps, leaf)) => (Some(steps), Some(leaf), None),
            None => (
                None,
                None,
                Some("the routed model does not expose tree paths".to_string()),
            ),
        }
    };

    let mut explanation = Explanation {
        tweet_id: event.tweet_id.clone(),
        predicted_label: prediction.label,
        confidence_percent: prediction.confidence_percent(),
        cluster: prediction.cluster,
        cold: prediction.cold,
        selected_features,
        fake_lexicon_top,
        non_fake_lexicon_top,
        cluster_features,
        cluster_marker,
        decision_path,
        leaf_distribution,
        path_marker,
        feature_vector: selected
            .iter()
            .map(|(key, value)| (key.to_string(), value))
            .collect(),
        transcript: Vec::new(),
    };
    explanation.transcript = render_text(&explanation);
    explanation
}

/// Natural-language description: one sentence per path node plus a final
/// sentence with label and confidence.
pub fn render_text(e: &Explanation) -> Vec<String> {
    let mut out = Vec::new();
    match &e.decision_path {
        Some(steps) if steps.is_empty() => {
            out.push("The model predicted from overall class frequencies (no splits yet).".into());
        }
        Some(steps) => {
            for step in steps {
                let value = e.feature_vector.get(&step.feature.to_string()).copied().unwrap_or(0.0);
                let (cmp, branch) = if step.went_left {
                    ("\u{2264}", "left")
                } else {
                    (">", "right")
                };
                out.push(format!(
                    "Because {} was {:.2}, which is {} {:.2}, the model followed the {} branch.",
                    step.feature.display_name(),
                    value,
                    cmp,
                    step.threshold,
                    branch
                ));
            }
            out.push(format!(
                "The model predicted {} with {}% confidence.",
                label_display(e.predicted_label),
                e.confidence_percent
            ));
        }
        None => {
            out.push(
                e.path_marker
                    .clone()
                    .unwrap_or_else(|| "No decision path is available.".to_string()),
            );
            out.push(format!(
                "The model predicted {} with {}% confidence.",
                label_display(e.predicted_label),
                e.confidence_percent
            ));
        }
    }
    out
}

/// Replays the stored path against the stored vector and re-checks the
/// record's internal consistency.
pub fn verify_explanation(e: &Explanation) -> Result<(), String> {
    if let Some(steps) = &e.decision_path {
        for (i, step) in steps.iter().enumerate() {
            let value = e
                .feature_vector
                .get(&step.feature.to_string())
                .copied()
                .unwrap_or(0.0);
            if (value <= step.threshold) != step.went_left {
                return Err(format!("step {i} direction contradicts the stored vector"));
            }
        }
        let leaf = e
            .leaf_distribution
            .ok_or("path present without a leaf distribution")?;
        if argmax2(&leaf) != e.predicted_label.index() {
            return Err("leaf argmax disagrees with the reported label".to_string());
        }
    }
    if e.confidence_percent > 100 {
        return Err("confidence out of range".to_string());
    }
    for f in &e.fake_lexicon_top {
        if e.non_fake_lexicon_top.iter().any(|n| n.ngram == f.ngram) {
            return Err(format!("lexicon blocks overlap on {:?}", f.ngram));
        }
    }
    Ok(())
}

const MAX_COLUMNS: usize = 100;

fn clip(line: String) -> String {
    if line.chars().count() <= MAX_COLUMNS {
        line
    } else {
        let mut s: String = line.chars().take(MAX_COLUMNS - 1).collect();
        s.push('\u{2026}');
        s
    }
}

/// Renders the report in the requested format.
pub fn format_report(e: &Explanation, format: ReportFormat) -> Result<String, CoreError> {
    match format {
        ReportFormat::Structured => Ok(serde_json::to_string_pretty(e)? + "\n"),
        ReportFormat::Text => Ok(format_text(e)),
        ReportFormat::Html => Ok(format_html(e)),
    }
}

fn format_text(e: &Explanation) -> String {
    let mut lines: Vec<String> = Vec::new();
    lines.push(format!("tweet {}", e.tweet_id));
    lines.push(format!(
        "prediction: {} ({}% confidence, cluster {})",
        label_display(e.predicted_label),
        e.confidence_percent,
        e.cluster
    ));
    lines.push(String::new());
    lines.push("selected features".to_string());
    for class in ["creator", "content", "context"] {
        for f in e
            .selected_features
            .iter()
            .filter(|f| format!("{}", f.class) == class)
        {
            let avg = match f.user_average {
                Some(a) => format!(" (user avg {:.2})", a),
                None => String::new(),
            };
            let mark = match f.warning {
                Some(true) => " [warning]",
                Some(false) => " [ok]",
                None => "",
            };
            lines.push(format!(
                "  {:8} {} = {:.2}{}{}",
                class, f.feature, f.value, avg, mark
            ));
        }
    }
    lines.push(String::new());
    lines.push("lexicon highlights".to_string());
    for l in &e.fake_lexicon_top {
        lines.push(format!("  fake     {} ({})", l.ngram, l.frequency));
    }
    for l in &e.non_fake_lexicon_top {
        lines.push(format!("  non-fake {} ({})", l.ngram, l.frequency));
    }
    lines.push(String::new());
    lines.push(format!("cluster profile (cluster {})", e.cluster));
    if let Some(marker) = &e.cluster_marker {
        lines.push(format!("  {marker}"));
    }
    for c in &e.cluster_features {
        lines.push(format!("  {} (deviation {:+.2})", c.feature, c.deviation));
    }
    lines.push(String::new());
    lines.push("decision path".to_string());
    for sentence in &e.transcript {
        lines.push(format!("  {sentence}"));
    }
    let mut out = String::new();
    for line in lines {
        out.push_str(&clip(line));
        out.push('\n');
    }
    out
}

fn escape_html(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn format_html(e: &Explanation) -> String {
    let mut h = String::new();
    h.push_str("<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>");
    h.push_str(&escape_html(&e.tweet_id));
    h.push_str("</title></head>\n<body>\n");
    h.push_str(&format!(
        "<h1>Tweet {}</h1>\n",
        escape_html(&e.tweet_id)
    ));

    h.push_str("<section id=\"features\">\n<h2>Selected features</h2>\n<ul>\n");
    for f in &e.selected_features {
        let avg = f
            .user_average
            .map(|a| format!(" — user average {a:.2}"))
            .unwrap_or_default();
        let mark = match f.warning {
            Some(true) => " ⚠",
            Some(false) => " ✓",
            None => "",
        };
        h.push_str(&format!(
            "<li>[{}] {} = {:.2}{}{}</li>\n",
            f.class,
            escape_html(&f.feature),
            f.value,
            avg,
            mark
        ));
    }
    h.push_str("</ul>\n</section>\n");

    h.push_str("<section id=\"prediction\">\n<h2>Prediction</h2>\n");
    h.push_str(&format!(
        "<p>{} with {}% confidence (cluster {})</p>\n</section>\n",
        label_display(e.predicted_label),
        e.confidence_percent,
        e.cluster
    ));

    h.push_str("<section id=\"lexicon\">\n<h2>Lexicon highlights</h2>\n<ul>\n");
    for l in &e.fake_lexicon_top {
        h.push_str(&format!(
            "<li>fake: {} ({})</li>\n",
            escape_html(&l.ngram),
            l.frequency
        ));
    }
    for l in &e.non_fake_lexicon_top {
        h.push_str(&format!(
            "<li>non-fake: {} ({})</li>\n",
            escape_html(&l.ngram),
            l.frequency
        ));
    }
    h.push_str("</ul>\n</section>\n");

    h.push_str("<section id=\"cluster\">\n<h2>Cluster profile</h2>\n<ul>\n");
    if let Some(marker) = &e.cluster_marker {
        h.push_str(&format!("<li>{}</li>\n", escape_html(marker)));
    }
    for c in &e.cluster_features {
        h.push_str(&format!(
            "<li>{} (deviation {:+.2})</li>\n",
            escape_html(&c.feature),
            c.deviation
        ));
    }
    h.push_str("</ul>\n</section>\n");

    h.push_str("<section id=\"path\">\n<h2>Decision path</h2>\n<ol>\n");
    for sentence in &e.transcript {
        h.push_str(&format!("<li>{}</li>\n", escape_html(sentence)));
    }
    h.push_str("</ol>\n</section>\n</body></html>\n");
    h
}

/// Writes one report named by tweet id; returns the file path.
pub fn emit_report(
    dir: &Path,
    e: &Explanation,
    format: ReportFormat,
) -> Result<PathBuf, CoreError> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.{}", e.tweet_id, format.extension()));
    std::fs::write(&path, format_report(e, format)?)?;
    Ok(path)
}

/// Index of all reports emitted during a run.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ReportIndex {
    pub reports: Vec<String>,
}

impl ReportIndex {
    pub fn write(&self, dir: &Path) -> Result<(), CoreError> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(
            dir.join("index.json"),
            serde_json::to_string_pretty(self)? + "\n",
        )?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self, CoreError> {
        let content = std::fs::read_to_string(dir.join("index.json"))?;
        Ok(serde_json::from_str(&content)?)
    }
}
