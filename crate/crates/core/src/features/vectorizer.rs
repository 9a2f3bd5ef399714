//! Word n-gram counting with document-frequency pruning.
//!
//! The vectorizer accumulates document frequencies over the stream and keeps
//! a vocabulary of n-grams whose relative document frequency lies inside
//! [min_df, max_df]. Membership is evaluated against the current document
//! count, so the active vocabulary is always consistent with what has been
//! seen so far.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NgramVectorizer {
    ngram_min: usize,
    ngram_max: usize,
    max_df: f64,
    min_df: f64,
    documents: u64,
    document_frequency: BTreeMap<String, u64>,
}

/// All n-grams of the token sequence within [lo, hi], with multiplicity,
/// joined by single spaces.
pub fn generate_ngrams(tokens: &[String], lo: usize, hi: usize) -> Vec<String> {
    let mut grams = Vec::new();
    for n in lo..=hi {
        if n == 0 || n > tokens.len() {
            continue;
        }
        for window in tokens.windows(n) {
            grams.push(window.join(" "));
        }
    }
    grams
}

impl NgramVectorizer {
    pub fn new(ngram_min: usize, ngram_max: usize, min_df: f64, max_df: f64) -> Self {
        Self {
            ngram_min,
            ngram_max,
            max_df,
            min_df,
            documents: 0,
            document_frequency: BTreeMap::new(),
        }
    }

    pub fn documents(&self) -> u64 {
        self.documents
    }

    fn df_bounds(&self) -> (u64, u64) {
        let n = self.documents as f64;
        let lo = (self.min_df * n).ceil() as u64;
        let hi = (self.max_df * n).floor() as u64;
        (lo, hi)
    }

    /// Whether an n-gram is inside the pruning bounds right now.
    pub fn is_active(&self, gram: &str) -> bool {
        if self.documents == 0 {
            return false;
        }
        let (lo, hi) = self.df_bounds();
        match self.document_frequency.get(gram) {
            Some(&df) => df >= lo && df <= hi,
            None => false,
        }
    }

    /// Counts of the document's n-grams restricted to the active vocabulary.
    pub fn transform(&self, tokens: &[String]) -> BTreeMap<String, f64> {
        let mut counts = BTreeMap::new();
        for gram in generate_ngrams(tokens, self.ngram_min, self.ngram_max) {
            if self.is_active(&gram) {
                *counts.entry(gram).or_insert(0.0) += 1.0;
            }
        }
        counts
    }

    /// Advances document frequencies with this document.
    pub fn learn(&mut self, tokens: &[String]) {
        self.documents += 1;
        let distinct: BTreeSet<String> =
            generate_ngrams(tokens, self.ngram_min, self.ngram_max)
                .into_iter()
                .collect();
        for gram in distinct {
            *self.document_frequency.entry(gram).or_insert(0) += 1;
        }
    }

    /// Refreshes frequencies first, then transforms.
    pub fn update_transform(&mut self, tokens: &[String]) -> BTreeMap<String, f64> {
        self.learn(tokens);
        self.transform(tokens)
    }

    /// Materialized active vocabulary, for audit and tests.
    pub fn active_vocabulary(&self) -> Vec<&str> {
        let (lo, hi) = self.df_bounds();
        if self.documents == 0 {
            return Vec::new();
        }
        self.document_frequency
            .iter()
            .filter(|(_, &df)| df >= lo && df <= hi)
            .map(|(g, _)| g.as_str())
            .collect()
    }
}
