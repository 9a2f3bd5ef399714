//! Hashtag decomposition into constituent words.
//!
//! Title-format tags (`JeSuisCharlie`) split at capital boundaries. All
//! other tags are segmented against an English corpus with the minimum
//! number of splits; unsegmentable tags are returned unchanged with
//! `resolved = false`.

use super::resources::WordCorpus;

/// Result of decomposing one hashtag body (without the leading `#`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashtagSplit {
    pub words: Vec<String>,
    pub resolved: bool,
}

/// Splits a hashtag into words.
///
/// Ties between segmentations with the same word count are broken by
/// preferring the longest word at each position, left to right, which makes
/// the output deterministic.
pub fn split_hashtag(tag: &str, corpus: &WordCorpus) -> HashtagSplit {
    if tag.is_empty() {
        return HashtagSplit {
            words: Vec::new(),
            resolved: false,
        };
    }

    if is_title_format(tag) {
        return HashtagSplit {
            words: split_at_capitals(tag),
            resolved: true,
        };
    }

    let lowered = tag.to_lowercase();
    match min_split_segmentation(&lowered, corpus) {
        Some(words) => HashtagSplit {
            words,
            resolved: true,
        },
        None => HashtagSplit {
            words: vec![tag.to_string()],
            resolved: false,
        },
    }
}

/// Title format: leading capital, at least one lowercase letter, letters only.
fn is_title_format(tag: &str) -> bool {
    let mut chars = tag.chars();
    let first_upper = chars.next().map(|c| c.is_uppercase()).unwrap_or(false);
    first_upper
        && tag.chars().all(|c| c.is_alphabetic())
        && tag.chars().any(|c| c.is_lowercase())
        && tag.chars().skip(1).any(|c| c.is_uppercase())
}

fn split_at_capitals(tag: &str) -> Vec<String> {
    let mut words = Vec::new();
    let mut current = String::new();
    for c in tag.chars() {
        if c.is_uppercase() && !current.is_empty() {
            words.push(std::mem::take(&mut current));
        }
        current.push(c);
    }
    if !current.is_empty() {
        words.push(current);
    }
    words
}

/// Dynamic program over character positions: `best[i]` is the minimum word
/// count needed to segment the suffix starting at byte offset `i`.
fn min_split_segmentation(tag: &str, corpus: &WordCorpus) -> Option<Vec<String>> {
    let offsets: Vec<usize> = tag
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(tag.len()))
        .collect();
    let n = offsets.len() - 1; // number of characters
    if n == 0 {
        return None;
    }
    let max_step = corpus.max_word_len().min(n);

    const INF: u32 = u32::MAX;
    let mut best = vec![INF; n + 1];
    best[n] = 0;
    for i in (0..n).rev() {
        for step in 1..=max_step.min(n - i) {
            let piece = &tag[offsets[i]..offsets[i + step]];
            if corpus.contains(piece) && best[i + step] != INF {
                best[i] = best[i].min(1 + best[i + step]);
            }
        }
    }
    if best[0] == INF {
        return None;
    }

    // Reconstruct, preferring the longest word at each position among
    // choices that keep the total minimal.
    let mut words = Vec::new();
    let mut i = 0;
    while i < n {
        let step = (1..=max_step.min(n - i))
            .rev()
            .find(|&step| {
                let piece = &tag[offsets[i]..offsets[i + step]];
                corpus.contains(piece) && best[i + step] != INF && 1 + best[i + step] == best[i]
            })
            .expect("reachable position must have a continuation");
        words.push(tag[offsets[i]..offsets[i + step]].to_string());
        i += step;
    }
    Some(words)
}
