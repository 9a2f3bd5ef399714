//! Run configuration.
//!
//! Defaults are the tuned values the engine ships with. A run can load a
//! flat `key = value` text file and override single keys from the command
//! line; unknown keys are rejected. Every run echoes its fully resolved
//! configuration beside the outputs.

use crate::error::CoreError;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

/// Classifier family of the per-cluster model bank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierFamily {
    Gnb,
    Htc,
    Hatc,
    Arfc,
}

impl ClassifierFamily {
    pub fn parse(s: &str) -> Result<Self, CoreError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gnb" => Ok(Self::Gnb),
            "htc" => Ok(Self::Htc),
            "hatc" => Ok(Self::Hatc),
            "arfc" => Ok(Self::Arfc),
            other => Err(CoreError::Config(format!(
                "unknown classifier family: {other} (expected gnb|htc|hatc|arfc)"
            ))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Gnb => "gnb",
            Self::Htc => "htc",
            Self::Hatc => "hatc",
            Self::Arfc => "arfc",
        }
    }
}

/// Which block of features the classifiers consume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FeatureSet {
    /// Profile features only (no word n-grams).
    A,
    /// A plus word n-gram counts.
    B,
    /// B plus the frequency-lexicon hit counts.
    C,
}

impl FeatureSet {
    pub fn parse(s: &str) -> Result<Self, CoreError> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Self::A),
            "B" => Ok(Self::B),
            "C" => Ok(Self::C),
            other => Err(CoreError::Config(format!(
                "unknown feature set: {other} (expected A|B|C)"
            ))),
        }
    }

    pub fn includes_ngrams(self) -> bool {
        matches!(self, Self::B | Self::C)
    }

    pub fn includes_lexicon(self) -> bool {
        matches!(self, Self::C)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::A => "A",
            Self::B => "B",
            Self::C => "C",
        }
    }
}

/// Sliding-window mode for metric accumulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WindowMode {
    /// The window holds the whole stream (cumulative metrics).
    Full,
    /// The window holds this fraction of the stream length.
    Fraction(f64),
    /// The window holds a fixed number of samples.
    Count(usize),
}

impl WindowMode {
    pub fn parse(s: &str) -> Result<Self, CoreError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("full") {
            return Ok(Self::Full);
        }
        if let Some(v) = s.strip_prefix("fraction:") {
            let f: f64 = v
                .parse()
                .map_err(|_| CoreError::Config(format!("bad window fraction: {v}")))?;
            return Ok(Self::Fraction(f));
        }
        if let Some(v) = s.strip_prefix("count:") {
            let n: usize = v
                .parse()
                .map_err(|_| CoreError::Config(format!("bad window count: {v}")))?;
            return Ok(Self::Count(n));
        }
        Err(CoreError::Config(format!(
            "unknown window mode: {s} (expected full | fraction:F | count:N)"
        )))
    }
}

impl fmt::Display for WindowMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Full => write!(f, "full"),
            Self::Fraction(x) => write!(f, "fraction:{x}"),
            Self::Count(n) => write!(f, "count:{n}"),
        }
    }
}

/// Full configuration of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub classifier: ClassifierFamily,
    pub feature_set: FeatureSet,
    pub window: WindowMode,
    pub clusters: usize,
    pub seed: u64,

    // Explanations.
    pub explain_every: usize,
    pub explain_ids: Vec<String>,
    pub explain_k: usize,
    pub series_every: usize,

    // Word n-gram vectorizer.
    pub ngram_min: usize,
    pub ngram_max: usize,
    pub max_df: f64,
    pub min_df: f64,

    // Frequency lexicon.
    pub lexicon_ngram_min: usize,
    pub lexicon_ngram_max: usize,
    pub lexicon_num_elements: usize,
    pub lexicon_min_freq: u64,
    pub lexicon_warmup_fraction: f64,
    pub lexicon_warmup_absolute: usize,
    pub lexicon_rebuild_every: usize,

    // Hoeffding trees.
    pub tree_depth: usize,
    pub tie_threshold: f64,
    pub htc_max_size: usize,
    pub hatc_max_size: usize,
    pub grace_period: u64,
    pub split_confidence: f64,

    // Adaptive random forest.
    pub forest_size: usize,
    pub forest_feature_subset: usize,
    pub poisson_lambda: f64,

    // Drift detection.
    pub drift_confidence: f64,
    pub warning_confidence: f64,

    // Feature selection / readability.
    pub variance_threshold: f64,
    pub chars_per_second: f64,

    // Lexicon resource overrides (embedded defaults when unset).
    pub stopwords_path: Option<PathBuf>,
    pub lemma_path: Option<PathBuf>,
    pub bad_words_path: Option<PathBuf>,
    pub easy_words_path: Option<PathBuf>,
    pub pos_path: Option<PathBuf>,
    pub polarity_path: Option<PathBuf>,
    pub emotion_path: Option<PathBuf>,
    pub corpus_path: Option<PathBuf>,

    /// Expected stream length for the lexicon warm-up rule; resolved from
    /// the input file when unset.
    pub expected_stream_size: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            output_dir: PathBuf::from("veristream-out"),
            classifier: ClassifierFamily::Arfc,
            feature_set: FeatureSet::C,
            window: WindowMode::Full,
            clusters: 10,
            seed: 42,
            explain_every: 0,
            explain_ids: Vec::new(),
            explain_k: 5,
            series_every: 100,
            ngram_min: 1,
            ngram_max: 3,
            max_df: 0.7,
            min_df: 0.01,
            lexicon_ngram_min: 2,
            lexicon_ngram_max: 4,
            lexicon_num_elements: 700,
            lexicon_min_freq: 1,
            lexicon_warmup_fraction: 0.05,
            lexicon_warmup_absolute: 300,
            lexicon_rebuild_every: 100,
            tree_depth: 50,
            tie_threshold: 0.5,
            htc_max_size: 50,
            hatc_max_size: 200,
            grace_period: 200,
            split_confidence: 1e-7,
            forest_size: 200,
            forest_feature_subset: 50,
            poisson_lambda: 50.0,
            drift_confidence: 0.002,
            warning_confidence: 0.05,
            variance_threshold: 0.0,
            chars_per_second: crate::textproc::DEFAULT_CHARS_PER_SECOND,
            stopwords_path: None,
            lemma_path: None,
            bad_words_path: None,
            easy_words_path: None,
            pos_path: None,
            polarity_path: None,
            emotion_path: None,
            corpus_path: None,
            expected_stream_size: None,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CoreError> {
    value
        .trim()
        .parse()
        .map_err(|_| CoreError::Config(format!("bad value for {key}: {value}")))
}

fn opt_path(value: &str) -> Option<PathBuf> {
    let v = value.trim();
    if v.is_empty() || v == "embedded" {
        None
    } else {
        Some(PathBuf::from(v))
    }
}

impl RunConfig {
    /// Applies one `key = value` pair. Unknown keys are an error.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CoreError> {
        let v = value.trim();
        match key.trim() {
            "input" => self.input = opt_path(v),
            "output_dir" => self.output_dir = PathBuf::from(v),
            "classifier" => self.classifier = ClassifierFamily::parse(v)?,
            "feature_set" => self.feature_set = FeatureSet::parse(v)?,
            "window" => self.window = WindowMode::parse(v)?,
            "clusters" => self.clusters = parse_num(key, v)?,
            "seed" => self.seed = parse_num(key, v)?,
            "explain_every" => self.explain_every = parse_num(key, v)?,
            "explain_ids" => {
                self.explain_ids = v
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect()
            }
            "explain_k" => self.explain_k = parse_num(key, v)?,
            "series_every" => self.series_every = parse_num(key, v)?,
            "ngram_min" => self.ngram_min = parse_num(key, v)?,
            "ngram_max" => self.ngram_max = parse_num(key, v)?,
            "max_df" => self.max_df = parse_num(key, v)?,
            "min_df" => self.min_df = parse_num(key, v)?,
            "lexicon_ngram_min" => self.lexicon_ngram_min = parse_num(key, v)?,
            "lexicon_ngram_max" => self.lexicon_ngram_max = parse_num(key, v)?,
            "lexicon_num_elements" => self.lexicon_num_elements = parse_num(key, v)?,
            "lexicon_min_freq" => self.lexicon_min_freq = parse_num(key, v)?,
            "lexicon_warmup_fraction" => self.lexicon_warmup_fraction = parse_num(key, v)?,
            "lexicon_warmup_absolute" => self.lexicon_warmup_absolute = parse_num(key, v)?,
            "lexicon_rebuild_every" => self.lexicon_rebuild_every = parse_num(key, v)?,
            "tree_depth" => self.tree_depth = parse_num(key, v)?,
            "tie_threshold" => self.tie_threshold = parse_num(key, v)?,
            "htc_max_size" => self.htc_max_size = parse_num(key, v)?,
            "hatc_max_size" => self.hatc_max_size = parse_num(key, v)?,
            "grace_period" => self.grace_period = parse_num(key, v)?,
            "split_confidence" => self.split_confidence = parse_num(key, v)?,
            "forest_size" => self.forest_size = parse_num(key, v)?,
            "forest_feature_subset" => self.forest_feature_subset = parse_num(key, v)?,
            "poisson_lambda" => self.poisson_lambda = parse_num(key, v)?,
            "drift_confidence" => self.drift_confidence = parse_num(key, v)?,
            "warning_confidence" => self.warning_confidence = parse_num(key, v)?,
            "variance_threshold" => self.variance_threshold = parse_num(key, v)?,
            "chars_per_second" => self.chars_per_second = parse_num(key, v)?,
            "stopwords_path" => self.stopwords_path = opt_path(v),
            "lemma_path" => self.lemma_path = opt_path(v),
            "bad_words_path" => self.bad_words_path = opt_path(v),
            "easy_words_path" => self.easy_words_path = opt_path(v),
            "pos_path" => self.pos_path = opt_path(v),
            "polarity_path" => self.polarity_path = opt_path(v),
            "emotion_path" => self.emotion_path = opt_path(v),
            "corpus_path" => self.corpus_path = opt_path(v),
            "expected_stream_size" => {
                self.expected_stream_size = if v.is_empty() {
                    None
                } else {
                    Some(parse_num(key, v)?)
                }
            }
            other => {
                return Err(CoreError::Config(format!("unknown configuration key: {other}")))
            }
        }
        Ok(())
    }

    /// Loads overrides from a flat `key = value` file (`#` starts a comment).
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CoreError> {
        let content = std::fs::read_to_string(path)?;
        for (idx, raw_line) in content.lines().enumerate() {
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CoreError::Config(format!("line {} is not `key = value`: {line}", idx + 1))
            })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        if self.clusters == 0 {
            return Err(CoreError::Config("clusters must be >= 1".into()));
        }
        if let WindowMode::Fraction(f) = self.window {
            if !(f > 0.0 && f <= 1.0) {
                return Err(CoreError::Config(format!(
                    "window fraction must be in (0, 1]: {f}"
                )));
            }
        }
        if let WindowMode::Count(0) = self.window {
            return Err(CoreError::Config("window count must be >= 1".into()));
        }
        if self.ngram_min == 0 || self.ngram_min > self.ngram_max {
            return Err(CoreError::Config("bad ngram range".into()));
        }
        if self.lexicon_ngram_min == 0 || self.lexicon_ngram_min > self.lexicon_ngram_max {
            return Err(CoreError::Config("bad lexicon ngram range".into()));
        }
        if !(0.0..=1.0).contains(&self.min_df)
            || !(0.0..=1.0).contains(&self.max_df)
            || self.min_df > self.max_df
        {
            return Err(CoreError::Config("bad document-frequency bounds".into()));
        }
        if self.forest_size == 0 {
            return Err(CoreError::Config("forest_size must be >= 1".into()));
        }
        if !(self.split_confidence > 0.0 && self.split_confidence < 1.0) {
            return Err(CoreError::Config("split_confidence must be in (0, 1)".into()));
        }
        Ok(())
    }

    /// The fully resolved configuration in the flat file syntax; written
    /// beside every run's outputs.
    pub fn echo(&self) -> String {
        let p = |o: &Option<PathBuf>| {
            o.as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| "embedded".to_string())
        };
        let mut s = String::new();
        let mut push = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        push(
            "input",
            self.input
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
        );
        push("output_dir", self.output_dir.display().to_string());
        push("classifier", self.classifier.as_str().to_string());
        push("feature_set", self.feature_set.as_str().to_string());
        push("window", self.window.to_string());
        push("clusters", self.clusters.to_string());
        push("seed", self.seed.to_string());
        push("explain_every", self.explain_every.to_string());
        push("explain_ids", self.explain_ids.join(","));
        push("explain_k", self.explain_k.to_string());
        push("series_every", self.series_every.to_string());
        push("ngram_min", self.ngram_min.to_string());
        push("ngram_max", self.ngram_max.to_string());
        push("max_df", self.max_df.to_string());
        push("min_df", self.min_df.to_string());
        push("lexicon_ngram_min", self.lexicon_ngram_min.to_string());
        push("lexicon_ngram_max", self.lexicon_ngram_max.to_string());
        push("lexicon_num_elements", self.lexicon_num_elements.to_string());
        push("lexicon_min_freq", self.lexicon_min_freq.to_string());
        push(
            "lexicon_warmup_fraction",
            self.lexicon_warmup_fraction.to_string(),
        );
        push(
            "lexicon_warmup_absolute",
            self.lexicon_warmup_absolute.to_string(),
        );
        push(
            "lexicon_rebuild_every",
            self.lexicon_rebuild_every.to_string(),
        );
        push("tree_depth", self.tree_depth.to_string());
        push("tie_threshold", self.tie_threshold.to_string());
        push("htc_max_size", self.htc_max_size.to_string());
        push("hatc_max_size", self.hatc_max_size.to_string());
        push("grace_period", self.grace_period.to_string());
        push("split_confidence", self.split_confidence.to_string());
        push("forest_size", self.forest_size.to_string());
        push(
            "forest_feature_subset",
            self.forest_feature_subset.to_string(),
        );
        push("poisson_lambda", self.poisson_lambda.to_string());
        push("drift_confidence", self.drift_confidence.to_string());
        push("warning_confidence", self.warning_confidence.to_string());
        push("variance_threshold", self.variance_threshold.to_string());
        push("chars_per_second", self.chars_per_second.to_string());
        push("stopwords_path", p(&self.stopwords_path));
        push("lemma_path", p(&self.lemma_path));
        push("bad_words_path", p(&self.bad_words_path));
        push("easy_words_path", p(&self.easy_words_path));
        push("pos_path", p(&self.pos_path));
        push("polarity_path", p(&self.polarity_path));
        push("emotion_path", p(&self.emotion_path));
        push("corpus_path", p(&self.corpus_path));
        push(
            "expected_stream_size",
            self.expected_stream_size
                .map(|n| n.to_string())
                .unwrap_or_default(),
        );
        s
    }

    /// Loads the text resources this configuration points at.
    pub fn text_resources(&self) -> Result<crate::textproc::TextResources, CoreError> {
        crate::textproc::TextResources::embedded().with_overrides(
            self.stopwords_path.as_deref(),
            self.lemma_path.as_deref(),
            self.bad_words_path.as_deref(),
            self.easy_words_path.as_deref(),
            self.pos_path.as_deref(),
            self.polarity_path.as_deref(),
            self.emotion_path.as_deref(),
            self.corpus_path.as_deref(),
        )
    }
}
