//! Sentiment polarity and emotion scoring via word-lexicon lookup.

use super::resources::{Emotion, TextResources};
use super::ProcessedText;
use serde::{Deserialize, Serialize};

/// Polarity in [-1, 1] and the five emotion intensities in [0, 1].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AffectScores {
    pub polarity: f64,
    pub anger: f64,
    pub fear: f64,
    pub happiness: f64,
    pub sadness: f64,
    pub surprise: f64,
}

impl AffectScores {
    pub fn emotion(&self, e: Emotion) -> f64 {
        match e {
            Emotion::Anger => self.anger,
            Emotion::Fear => self.fear,
            Emotion::Happiness => self.happiness,
            Emotion::Sadness => self.sadness,
            Emotion::Surprise => self.surprise,
        }
    }
}

/// Scores the normalized token stream.
///
/// Polarity is the mean lexicon value over matched tokens (0 when nothing
/// matches). Each emotion is the fraction of tokens tagged with it. Lookups
/// try the surface token first and fall back to its lemma.
pub fn affect_scores(processed: &ProcessedText, resources: &TextResources) -> AffectScores {
    let mut scores = AffectScores::default();
    if processed.tokens.is_empty() {
        return scores;
    }

    let mut polarity_sum = 0.0;
    let mut polarity_hits = 0usize;
    let mut emotion_hits = [0usize; 5];

    for (token, lemma) in processed.tokens.iter().zip(&processed.lemmas) {
        let polarity = resources
            .polarity
            .get(token)
            .or_else(|| resources.polarity.get(lemma));
        if let Some(v) = polarity {
            polarity_sum += v;
            polarity_hits += 1;
        }
        let emotion = resources
            .emotion
            .get(token)
            .or_else(|| resources.emotion.get(lemma));
        if let Some(e) = emotion {
            let idx = Emotion::ALL.iter().position(|x| x == e).unwrap();
            emotion_hits[idx] += 1;
        }
    }

    if polarity_hits > 0 {
        scores.polarity = (polarity_sum / polarity_hits as f64).clamp(-1.0, 1.0);
    }
    let total = processed.tokens.len() as f64;
    scores.anger = (emotion_hits[0] as f64 / total).clamp(0.0, 1.0);
    scores.fear = (emotion_hits[1] as f64 / total).clamp(0.0, 1.0);
    scores.happiness = (emotion_hits[2] as f64 / total).clamp(0.0, 1.0);
    scores.sadness = (emotion_hits[3] as f64 / total).clamp(0.0, 1.0);
    scores.surprise = (emotion_hits[4] as f64 / total).clamp(0.0, 1.0);
    scores
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::TextResources;
    use std::collections::BTreeMap;

    fn resources_with(polarity: &[(&str, f64)], emotion: &[(&str, Emotion)]) -> TextResources {
        let mut r = TextResources::embedded();
        r.polarity = polarity
            .iter()
            .map(|(w, v)| (w.to_string(), *v))
            .collect::<BTreeMap<_, _>>();
        r.emotion = emotion
            .iter()
            .map(|(w, e)| (w.to_string(), *e))
            .collect::<BTreeMap<_, _>>();
        r
    }

    fn processed(tokens: &[&str]) -> ProcessedText {
        ProcessedText {
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
            lemmas: tokens.iter().map(|t| t.to_string()).collect(),
            hashtags_expanded: Vec::new(),
            sentence_count: 1,
            syllable_total: tokens.len(),
        }
    }

    #[test]
    fn no_matches_score_zero() {
        let r = resources_with(&[], &[]);
        let s = affect_scores(&processed(&["quiet", "words"]), &r);
        assert_eq!(s, AffectScores::default());
    }

    #[test]
    fn opposite_polarities_cancel() {
        let r = resources_with(&[("good", 0.7), ("bad", -0.7)], &[]);
        let s = affect_scores(&processed(&["good", "bad"]), &r);
        assert!(s.polarity.abs() < 1e-12);
    }

    #[test]
    fn emotion_is_matched_token_fraction() {
        let r = resources_with(&[], &[("glad", Emotion::Happiness)]);
        let s = affect_scores(&processed(&["glad", "day"]), &r);
        assert!((s.happiness - 0.5).abs() < 1e-12);
        assert_eq!(s.anger, 0.0);
        assert_eq!(s.fear, 0.0);
        assert_eq!(s.sadness, 0.0);
        assert_eq!(s.surprise, 0.0);
    }

    #[test]
    fn empty_tokens_score_zero() {
        let r = TextResources::embedded();
        let s = affect_scores(&processed(&[]), &r);
        assert_eq!(s, AffectScores::default());
    }
}
