//! Lexicon resource files backing the text-analysis operations.
//!
//! All resources are plain text, one entry per line, tab-separated where a
//! value accompanies the word. The engine ships an embedded default for each
//! so it runs self-contained; any of them can be overridden with a file path
//! in the run configuration.

use crate::error::CoreError;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;

/// The five emotions scored per tweet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Emotion {
    Anger,
    Fear,
    Happiness,
    Sadness,
    Surprise,
}

impl Emotion {
    pub const ALL: [Emotion; 5] = [
        Emotion::Anger,
        Emotion::Fear,
        Emotion::Happiness,
        Emotion::Sadness,
        Emotion::Surprise,
    ];

    /// Parses an emotion label. `joy` maps onto happiness so NRC-style
    /// lexica can be dropped in unchanged.
    pub fn parse(s: &str) -> Option<Emotion> {
        match s.trim().to_ascii_lowercase().as_str() {
            "anger" => Some(Emotion::Anger),
            "fear" => Some(Emotion::Fear),
            "happiness" | "joy" => Some(Emotion::Happiness),
            "sadness" => Some(Emotion::Sadness),
            "surprise" => Some(Emotion::Surprise),
            _ => None,
        }
    }
}

impl fmt::Display for Emotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Emotion::Anger => "anger",
            Emotion::Fear => "fear",
            Emotion::Happiness => "happiness",
            Emotion::Sadness => "sadness",
            Emotion::Surprise => "surprise",
        };
        f.write_str(s)
    }
}

/// Immutable bundle of every word list the text operations consume.
#[derive(Debug, Clone)]
pub struct TextResources {
    pub stopwords: HashSet<String>,
    pub lemmas: BTreeMap<String, String>,
    pub bad_words: HashSet<String>,
    pub easy_words: HashSet<String>,
    pub pos_tags: BTreeMap<String, String>,
    pub polarity: BTreeMap<String, f64>,
    pub emotion: BTreeMap<String, Emotion>,
    pub corpus: WordCorpus,
}

/// English word list used by the hashtag splitter.
#[derive(Debug, Clone, Default)]
pub struct WordCorpus {
    words: HashSet<String>,
    max_len: usize,
}

impl WordCorpus {
    pub fn from_words<I: IntoIterator<Item = String>>(words: I) -> Self {
        let mut set = HashSet::new();
        let mut max_len = 0;
        for w in words {
            let w = w.trim().to_lowercase();
            if w.is_empty() {
                continue;
            }
            max_len = max_len.max(w.chars().count());
            set.insert(w);
        }
        Self {
            words: set,
            max_len,
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    /// Length in characters of the longest word; bounds the splitter search.
    pub fn max_word_len(&self) -> usize {
        self.max_len
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

fn parse_word_set(content: &str) -> HashSet<String> {
    content
        .lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty())
        .collect()
}

fn parse_word_map(content: &str) -> BTreeMap<String, String> {
    content
        .lines()
        .filter_map(|l| {
            let mut parts = l.splitn(2, '\t');
            let word = parts.next()?.trim().to_lowercase();
            let value = parts.next()?.trim().to_string();
            if word.is_empty() || value.is_empty() {
                None
            } else {
                Some((word, value))
            }
        })
        .collect()
}

fn parse_value_map(content: &str) -> BTreeMap<String, f64> {
    parse_word_map(content)
        .into_iter()
        .filter_map(|(w, v)| v.parse::<f64>().ok().map(|v| (w, v)))
        .collect()
}

fn parse_emotion_map(content: &str) -> BTreeMap<String, Emotion> {
    parse_word_map(content)
        .into_iter()
        .filter_map(|(w, v)| Emotion::parse(&v).map(|e| (w, e)))
        .collect()
}

impl TextResources {
    /// Resources embedded in the binary; the defaults every run starts from.
    pub fn embedded() -> Self {
        Self {
            stopwords: parse_word_set(include_str!("../../data/stopwords.txt")),
            lemmas: parse_word_map(include_str!("../../data/lemma_table.tsv")),
            bad_words: parse_word_set(include_str!("../../data/bad_words.txt")),
            easy_words: parse_word_set(include_str!("../../data/easy_words.txt")),
            pos_tags: parse_word_map(include_str!("../../data/pos_tags.tsv")),
            polarity: parse_value_map(include_str!("../../data/polarity.tsv")),
            emotion: parse_emotion_map(include_str!("../../data/emotion.tsv")),
            corpus: WordCorpus::from_words(
                include_str!("../../data/english_words.txt")
                    .lines()
                    .map(str::to_string),
            ),
        }
    }

    /// Replaces individual lists from files; `None` keeps the embedded one.
    #[allow(clippy::too_many_arguments)]
    pub fn with_overrides(
        mut self,
        stopwords: Option<&Path>,
        lemmas: Option<&Path>,
        bad_words: Option<&Path>,
        easy_words: Option<&Path>,
        pos_tags: Option<&Path>,
        polarity: Option<&Path>,
        emotion: Option<&Path>,
        corpus: Option<&Path>,
    ) -> Result<Self, CoreError> {
        if let Some(p) = stopwords {
            self.stopwords = parse_word_set(&std::fs::read_to_string(p)?);
        }
        if let Some(p) = lemmas {
            self.lemmas = parse_word_map(&std::fs::read_to_string(p)?);
        }
        if let Some(p) = bad_words {
            self.bad_words = parse_word_set(&std::fs::read_to_string(p)?);
        }
        if let Some(p) = easy_words {
            self.easy_words = parse_word_set(&std::fs::read_to_string(p)?);
        }
        if let Some(p) = pos_tags {
            self.pos_tags = parse_word_map(&std::fs::read_to_string(p)?);
        }
        if let Some(p) = polarity {
            self.polarity = parse_value_map(&std::fs::read_to_string(p)?);
        }
        if let Some(p) = emotion {
            self.emotion = parse_emotion_map(&std::fs::read_to_string(p)?);
        }
        if let Some(p) = corpus {
            self.corpus = WordCorpus::from_words(
                std::fs::read_to_string(p)?.lines().map(str::to_string),
            );
        }
        Ok(self)
    }
}
