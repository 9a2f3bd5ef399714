//! Pure text-analysis primitives.
//!
//! Everything here is a deterministic function over immutable lexica, safe
//! to call from any number of threads.

mod affect;
mod hashtag;
mod readability;
mod resources;
mod style;

pub use affect::{affect_scores, AffectScores};
pub use hashtag::{split_hashtag, HashtagSplit};
pub use readability::{
    count_syllables, readability, sentence_count, word_tokens, FleschBand, ReadabilityScores,
    DEFAULT_CHARS_PER_SECOND,
};
pub use resources::{Emotion, TextResources, WordCorpus};
pub use style::{is_url_token, style_counts, StyleCounts};

use readability::{alpha_only, alnum_only};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};

/// Normalized view of one post's text.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessedText {
    /// Normalized tokens, in order. Same length as `lemmas`.
    pub tokens: Vec<String>,
    /// Lemma of each token (table lookup, identity fallback).
    pub lemmas: Vec<String>,
    /// Word sequences recovered from the post's hashtags.
    pub hashtags_expanded: Vec<Vec<String>>,
    pub sentence_count: usize,
    pub syllable_total: usize,
}

impl ProcessedText {
    /// Tokens joined into the canonical normalized string, used for
    /// duplicate detection.
    pub fn normalized_joined(&self) -> String {
        self.lemmas.join(" ")
    }
}

/// Strips URLs and special characters, casefolds, drops stopwords, and
/// lemmatizes what remains.
pub fn normalize_and_tokenize(
    text: &str,
    stopwords: &HashSet<String>,
    lemma_table: &BTreeMap<String, String>,
) -> ProcessedText {
    let mut tokens = Vec::new();
    let mut lemmas = Vec::new();
    for raw in text.split_whitespace() {
        if is_url_token(raw) {
            continue;
        }
        let cleaned = alnum_only(raw).to_lowercase();
        if cleaned.is_empty() || stopwords.contains(&cleaned) {
            continue;
        }
        let lemma = lemma_table.get(&cleaned).cloned().unwrap_or_else(|| cleaned.clone());
        tokens.push(cleaned);
        lemmas.push(lemma);
    }

    let syllable_total = word_tokens(text)
        .map(|w| count_syllables(&alpha_only(w)))
        .sum();

    ProcessedText {
        tokens,
        lemmas,
        hashtags_expanded: Vec::new(),
        sentence_count: sentence_count(text),
        syllable_total,
    }
}

/// Bundles the lexica and applies the full text step for one event:
/// hashtags are decomposed first so their words join the token stream, then
/// the expanded text is normalized.
#[derive(Debug, Clone)]
pub struct TextProcessor {
    resources: TextResources,
}

impl TextProcessor {
    pub fn new(resources: TextResources) -> Self {
        Self { resources }
    }

    pub fn resources(&self) -> &TextResources {
        &self.resources
    }

    pub fn process(&self, text: &str) -> ProcessedText {
        let mut expanded_tags = Vec::new();
        let rewritten = self.expand_hashtags(text, &mut expanded_tags);
        let mut processed =
            normalize_and_tokenize(&rewritten, &self.resources.stopwords, &self.resources.lemmas);
        // Sentence and syllable structure describe the original post.
        processed.sentence_count = sentence_count(text);
        processed.syllable_total = word_tokens(text)
            .map(|w| count_syllables(&alpha_only(w)))
            .sum();
        processed.hashtags_expanded = expanded_tags;
        processed
    }

    /// Replaces every `#tag` with its decomposed words.
    fn expand_hashtags(&self, text: &str, splits: &mut Vec<Vec<String>>) -> String {
        if !text.contains('#') {
            return text.to_string();
        }
        let chars: Vec<char> = text.chars().collect();
        let mut out = String::with_capacity(text.len());
        let mut i = 0;
        while i < chars.len() {
            if chars[i] == '#' {
                let start = i + 1;
                let mut end = start;
                while end < chars.len() && (chars[end].is_alphanumeric() || chars[end] == '_') {
                    end += 1;
                }
                if end > start {
                    let tag: String = chars[start..end].iter().collect();
                    let split = split_hashtag(&tag, &self.resources.corpus);
                    out.push_str(&split.words.join(" "));
                    splits.push(split.words);
                    i = end;
                    continue;
                }
            }
            out.push(chars[i]);
            i += 1;
        }
        out
    }
}
