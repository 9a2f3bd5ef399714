//! Per-class n-gram frequency store and the derived disjoint fake/non-fake
//! lexica.
//!
//! Training increments the frequency of every n-gram of a labeled tweet
//! under its class. The derived lexica take, per class, the n-grams whose
//! frequency strictly exceeds the threshold, ordered by frequency; an n-gram
//! qualifying for both classes goes only to the class where it is more
//! frequent, and exact ties are excluded from both, which keeps the two
//! lists disjoint. Nothing is derived before the warm-up boundary.

use crate::features::generate_ngrams;
use crate::ingest::Label;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

/// Accumulating per-class n-gram frequencies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrequencyLexicon {
    ngram_min: usize,
    ngram_max: usize,
    num_elements: usize,
    /// Insert condition: class frequency must be strictly greater.
    threshold: u64,
    /// Number of labeled samples before lexica may be derived.
    warmup_samples: u64,
    samples_seen: u64,
    counts: [BTreeMap<String, u64>; 2],
}

/// One derived lexicon: (n-gram, frequency) rows, frequency-ordered.
pub type LexiconEntries = Vec<(String, u64)>;

/// Immutable snapshot of the two derived lexica, frequency-ordered.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ClassLexica {
    pub fake: LexiconEntries,
    pub non_fake: LexiconEntries,
    #[serde(skip)]
    fake_set: BTreeSet<String>,
    #[serde(skip)]
    non_fake_set: BTreeSet<String>,
}

impl ClassLexica {
    fn from_lists(fake: LexiconEntries, non_fake: LexiconEntries) -> Self {
        let fake_set = fake.iter().map(|(g, _)| g.clone()).collect();
        let non_fake_set = non_fake.iter().map(|(g, _)| g.clone()).collect();
        Self {
            fake,
            non_fake,
            fake_set,
            non_fake_set,
        }
    }

    /// Rebuilds the lookup sets after deserialization.
    pub fn reindex(&mut self) {
        self.fake_set = self.fake.iter().map(|(g, _)| g.clone()).collect();
        self.non_fake_set = self.non_fake.iter().map(|(g, _)| g.clone()).collect();
    }

    pub fn contains_fake(&self, gram: &str) -> bool {
        self.fake_set.contains(gram)
    }

    pub fn contains_non_fake(&self, gram: &str) -> bool {
        self.non_fake_set.contains(gram)
    }

    pub fn is_empty(&self) -> bool {
        self.fake.is_empty() && self.non_fake.is_empty()
    }

    /// Top-k entries of each class for display.
    pub fn top(&self, k: usize) -> (LexiconEntries, LexiconEntries) {
        (
            self.fake.iter().take(k).cloned().collect(),
            self.non_fake.iter().take(k).cloned().collect(),
        )
    }

    /// Writes the ranked lists as a structured audit file.
    pub fn export_json(&self, path: &Path) -> Result<(), crate::CoreError> {
        #[derive(Serialize)]
        struct Row<'a> {
            ngram: &'a str,
            class: &'static str,
            frequency: u64,
        }
        let rows: Vec<Row> = self
            .fake
            .iter()
            .map(|(g, f)| Row {
                ngram: g,
                class: "fake",
                frequency: *f,
            })
            .chain(self.non_fake.iter().map(|(g, f)| Row {
                ngram: g,
                class: "non_fake",
                frequency: *f,
            }))
            .collect();
        std::fs::write(path, serde_json::to_string_pretty(&rows)?)?;
        Ok(())
    }
}

impl FrequencyLexicon {
    pub fn new(
        ngram_min: usize,
        ngram_max: usize,
        num_elements: usize,
        threshold: u64,
        warmup_samples: u64,
    ) -> Self {
        Self {
            ngram_min,
            ngram_max,
            num_elements,
            threshold,
            warmup_samples,
            samples_seen: 0,
            counts: [BTreeMap::new(), BTreeMap::new()],
        }
    }

    pub fn samples_seen(&self) -> u64 {
        self.samples_seen
    }

    pub fn warmed_up(&self) -> bool {
        self.samples_seen >= self.warmup_samples
    }

    /// N-grams of one tweet's normalized tokens, with multiplicity.
    pub fn tweet_ngrams(&self, lemmas: &[String]) -> Vec<String> {
        generate_ngrams(lemmas, self.ngram_min, self.ngram_max)
    }

    /// Training step: counts every n-gram occurrence under the tweet's class.
    pub fn update(&mut self, lemmas: &[String], label: Label) {
        for gram in self.tweet_ngrams(lemmas) {
            *self.counts[label.index()].entry(gram).or_insert(0) += 1;
        }
        self.samples_seen += 1;
    }

    /// Exact stored frequency of one n-gram under one class.
    pub fn frequency(&self, gram: &str, label: Label) -> u64 {
        self.counts[label.index()].get(gram).copied().unwrap_or(0)
    }

    /// Derives the disjoint class lexica; empty before warm-up.
    pub fn build_class_lexica(&self) -> ClassLexica {
        if !self.warmed_up() {
            return ClassLexica::default();
        }

        let candidates = |idx: usize| -> BTreeMap<&str, u64> {
            self.counts[idx]
                .iter()
                .filter(|(_, &f)| f > self.threshold)
                .map(|(g, &f)| (g.as_str(), f))
                .collect()
        };
        let fake_cand = candidates(Label::Fake.index());
        let non_fake_cand = candidates(Label::NonFake.index());

        let mut fake: Vec<(String, u64)> = Vec::new();
        let mut non_fake: Vec<(String, u64)> = Vec::new();
        for (gram, &f_freq) in &fake_cand {
            match non_fake_cand.get(gram) {
                Some(&n_freq) if n_freq > f_freq => {} // belongs to non-fake
                Some(&n_freq) if n_freq == f_freq => {} // tie: excluded from both
                _ => fake.push((gram.to_string(), f_freq)),
            }
        }
        for (gram, &n_freq) in &non_fake_cand {
            match fake_cand.get(gram) {
                Some(&f_freq) if f_freq >= n_freq => {} // fake's or a tie
                _ => non_fake.push((gram.to_string(), n_freq)),
            }
        }

        let order = |list: &mut LexiconEntries| {
            list.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            list.truncate(self.num_elements);
        };
        order(&mut fake);
        order(&mut non_fake);
        ClassLexica::from_lists(fake, non_fake)
    }
}

/// Hit counts of a tweet's n-grams against the two lexica.
pub fn lexicon_features(
    tweet_ngrams: &[String],
    lexica: &ClassLexica,
) -> (u64, u64) {
    let mut fake = 0;
    let mut non_fake = 0;
    for gram in tweet_ngrams {
        if lexica.contains_fake(gram) {
            fake += 1;
        }
        if lexica.contains_non_fake(gram) {
            non_fake += 1;
        }
    }
    (fake, non_fake)
}
