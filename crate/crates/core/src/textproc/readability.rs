//! Non-physical style metrics: Flesch reading ease (with difficulty band),
//! McAlpine EFLAW, and estimated reading time.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Default reading speed used to turn character counts into seconds.
pub const DEFAULT_CHARS_PER_SECOND: f64 = 14.69;

/// Flesch reading-ease difficulty buckets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FleschBand {
    VeryConfusing,
    Difficult,
    FairlyDifficult,
    Standard,
    FairlyEasy,
    Easy,
    VeryEasy,
}

impl FleschBand {
    /// Bucket for a score. Total over all of `f64`: inputs are clamped to
    /// [0, 100] before banding.
    pub fn from_score(score: f64) -> FleschBand {
        let s = if score.is_nan() {
            0.0
        } else {
            score.clamp(0.0, 100.0)
        };
        if s >= 90.0 {
            FleschBand::VeryEasy
        } else if s >= 80.0 {
            FleschBand::Easy
        } else if s >= 70.0 {
            FleschBand::FairlyEasy
        } else if s >= 60.0 {
            FleschBand::Standard
        } else if s >= 50.0 {
            FleschBand::FairlyDifficult
        } else if s >= 30.0 {
            FleschBand::Difficult
        } else {
            FleschBand::VeryConfusing
        }
    }
}

impl fmt::Display for FleschBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FleschBand::VeryEasy => "Very Easy",
            FleschBand::Easy => "Easy",
            FleschBand::FairlyEasy => "Fairly Easy",
            FleschBand::Standard => "Standard",
            FleschBand::FairlyDifficult => "Fairly Difficult",
            FleschBand::Difficult => "Difficult",
            FleschBand::VeryConfusing => "Very Confusing",
        };
        f.write_str(s)
    }
}

/// Readability measurements for one text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadabilityScores {
    pub flesch_reading_ease: f64,
    pub flesch_band: FleschBand,
    pub mcalpine_eflaw: f64,
    pub reading_time_s: f64,
    /// Set when the text had no words or no sentences; all scores are 0.
    pub degenerate: bool,
}

/// Computes readability over the raw text.
pub fn readability(text: &str, chars_per_second: f64) -> ReadabilityScores {
    let words: Vec<&str> = word_tokens(text).collect();
    let sentences = sentence_count(text);

    if words.is_empty() || sentences == 0 {
        return ReadabilityScores {
            flesch_reading_ease: 0.0,
            flesch_band: FleschBand::from_score(0.0),
            mcalpine_eflaw: 0.0,
            reading_time_s: 0.0,
            degenerate: true,
        };
    }

    let w = words.len() as f64;
    let s = sentences as f64;
    let syllables: usize = words.iter().map(|t| count_syllables(&alpha_only(t))).sum();
    let mini = words
        .iter()
        .filter(|t| alnum_only(t).chars().count() <= 3)
        .count() as f64;

    let flesch = 206.835 - 1.015 * (w / s) - 84.6 * (syllables as f64 / w);
    let eflaw = (w + mini) / s;
    let chars = text.chars().count() as f64;

    ReadabilityScores {
        flesch_reading_ease: flesch,
        flesch_band: FleschBand::from_score(flesch),
        mcalpine_eflaw: eflaw,
        reading_time_s: chars / chars_per_second,
        degenerate: false,
    }
}

/// Heuristic syllable count: vowel groups, minus a silent trailing `e`
/// (kept when the word ends in consonant + `le`), minimum 1 for any word
/// with letters. Non-letters are ignored; an empty word counts 0.
pub fn count_syllables(word: &str) -> usize {
    let letters: Vec<char> = word
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(|c| c.to_lowercase())
        .collect();
    if letters.is_empty() {
        return 0;
    }

    let is_vowel = |c: char| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
    let mut groups = 0;
    let mut in_group = false;
    for &c in &letters {
        if is_vowel(c) {
            if !in_group {
                groups += 1;
            }
            in_group = true;
        } else {
            in_group = false;
        }
    }

    let n = letters.len();
    let silent_e = n >= 2
        && letters[n - 1] == 'e'
        && !is_vowel(letters[n - 2])
        && !(n >= 3 && letters[n - 1] == 'e' && letters[n - 2] == 'l' && !is_vowel(letters[n - 3]));
    if silent_e && groups > 1 {
        groups -= 1;
    }
    groups.max(1)
}

/// Whitespace tokens carrying at least one alphanumeric character.
pub fn word_tokens(text: &str) -> impl Iterator<Item = &str> {
    text.split_whitespace()
        .filter(|t| t.chars().any(|c| c.is_alphanumeric()))
}

/// Sentences: segments separated by `.`, `!` or `?` that contain at least
/// one alphanumeric character; any non-blank text counts as at least one.
/// URL tokens are dropped first so their dots do not split sentences.
pub fn sentence_count(text: &str) -> usize {
    if text.trim().is_empty() {
        return 0;
    }
    let without_urls: Vec<&str> = text
        .split_whitespace()
        .filter(|t| !crate::textproc::is_url_token(t))
        .collect();
    let joined = without_urls.join(" ");
    if joined.is_empty() {
        return 1;
    }
    let n = joined
        .split(['.', '!', '?'])
        .filter(|seg| seg.chars().any(|c| c.is_alphanumeric()))
        .count();
    n.max(1)
}

pub(crate) fn alpha_only(token: &str) -> String {
    token.chars().filter(|c| c.is_alphabetic()).collect()
}

pub(crate) fn alnum_only(token: &str) -> String {
    token.chars().filter(|c| c.is_alphanumeric()).collect()
}
