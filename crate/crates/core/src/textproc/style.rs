//! Physical style counters over one post.
//!
//! Surface counters (characters, punctuation, uppercase words, hashtags,
//! links) run over the raw text. Part-of-speech counters run over the raw
//! word tokens, casefolded, so closed-class words survive; bad-word and
//! difficult-word counters run over the normalized token stream. Image and
//! video counts come from the propagation context.

use super::readability::{alnum_only, count_syllables, word_tokens};
use super::resources::TextResources;
use super::ProcessedText;
use crate::ingest::ContextMeta;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StyleCounts {
    pub adjective: usize,
    pub auxiliary: usize,
    pub bad_word: usize,
    pub determiner: usize,
    pub difficult_word: usize,
    pub hashtag: usize,
    pub link: usize,
    pub link_repeated: usize,
    pub noun: usize,
    pub pronoun: usize,
    pub punctuation: usize,
    pub uppercase_word: usize,
    pub word: usize,
    pub char: usize,
    pub image: usize,
    pub video: usize,
}

/// True for tokens that look like URLs.
pub fn is_url_token(token: &str) -> bool {
    let t = token.trim_start_matches(['(', '[', '"', '\'']);
    t.starts_with("http://") || t.starts_with("https://") || t.starts_with("www.")
}

fn normalize_url(token: &str) -> &str {
    token.trim_matches(|c: char| c.is_ascii_punctuation() && !matches!(c, '/' | ':' | '.'))
}

/// Suffix fallback for words missing from the POS table.
fn suffix_pos(word: &str) -> Option<&'static str> {
    const ADJ: [&str; 8] = ["ous", "ful", "ive", "ish", "less", "able", "ible", "ical"];
    const NOUN: [&str; 8] = ["tion", "sion", "ment", "ness", "ity", "ship", "hood", "ism"];
    if ADJ.iter().any(|s| word.ends_with(s)) {
        Some("ADJ")
    } else if NOUN.iter().any(|s| word.ends_with(s)) {
        Some("NOUN")
    } else {
        None
    }
}

pub fn style_counts(
    text: &str,
    processed: &ProcessedText,
    context: &ContextMeta,
    resources: &TextResources,
) -> StyleCounts {
    let mut c = StyleCounts {
        char: text.chars().filter(|ch| !ch.is_whitespace()).count(),
        punctuation: text.chars().filter(|ch| ch.is_ascii_punctuation()).count(),
        hashtag: count_hashtags(text),
        image: context.image_urls.len(),
        video: context.video_urls.len(),
        ..StyleCounts::default()
    };

    // Links, deduplicated by their trimmed form.
    let mut seen_links = std::collections::BTreeSet::new();
    for token in text.split_whitespace().filter(|t| is_url_token(t)) {
        c.link += 1;
        if !seen_links.insert(normalize_url(token).to_string()) {
            c.link_repeated += 1;
        }
    }

    for token in word_tokens(text) {
        c.word += 1;
        let letters: Vec<char> = token.chars().filter(|ch| ch.is_alphabetic()).collect();
        if letters.len() >= 2 && letters.iter().all(|ch| ch.is_uppercase()) {
            c.uppercase_word += 1;
        }
        if is_url_token(token) {
            continue;
        }
        let lowered = alnum_only(token).to_lowercase();
        if lowered.is_empty() {
            continue;
        }
        let tag = resources
            .pos_tags
            .get(&lowered)
            .map(String::as_str)
            .or_else(|| suffix_pos(&lowered));
        match tag {
            Some("ADJ") => c.adjective += 1,
            Some("AUX") => c.auxiliary += 1,
            Some("DET") => c.determiner += 1,
            Some("NOUN") => c.noun += 1,
            Some("PRON") => c.pronoun += 1,
            _ => {}
        }
    }

    for token in &processed.tokens {
        if resources.bad_words.contains(token) {
            c.bad_word += 1;
        }
        if !resources.easy_words.contains(token) && count_syllables(token) >= 2 {
            c.difficult_word += 1;
        }
    }

    c
}

fn count_hashtags(text: &str) -> usize {
    let bytes: Vec<char> = text.chars().collect();
    let mut n = 0;
    for (i, &ch) in bytes.iter().enumerate() {
        if ch == '#' {
            if let Some(&next) = bytes.get(i + 1) {
                if next.is_alphanumeric() || next == '_' {
                    n += 1;
                }
            }
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textproc::{normalize_and_tokenize, TextResources};

    fn counts(text: &str) -> StyleCounts {
        let r = TextResources::embedded();
        let processed = normalize_and_tokenize(text, &r.stopwords, &r.lemmas);
        style_counts(text, &processed, &ContextMeta::default(), &r)
    }

    #[test]
    fn uppercase_hashtag_and_link() {
        let c = counts("WOW #news http://a.b");
        assert_eq!(c.uppercase_word, 1);
        assert_eq!(c.hashtag, 1);
        assert_eq!(c.link, 1);
        assert_eq!(c.link_repeated, 0);
    }

    #[test]
    fn repeated_link_counted_once_as_repeat() {
        let c = counts("see http://a.b and http://a.b");
        assert_eq!(c.link, 2);
        assert_eq!(c.link_repeated, 1);
    }

    #[test]
    fn empty_text_is_all_zero() {
        let c = counts("");
        assert_eq!(c, StyleCounts::default());
    }

    #[test]
    fn pos_counters_cover_closed_classes() {
        let c = counts("The police said they are near this station");
        assert!(c.determiner >= 2); // the, this
        assert!(c.pronoun >= 1); // they
        assert!(c.auxiliary >= 1); // are
        assert!(c.noun >= 2); // police, station
    }

    #[test]
    fn bad_and_difficult_words() {
        let c = counts("what an idiot spreading unbelievable propaganda");
        assert_eq!(c.bad_word, 1);
        assert!(c.difficult_word >= 2); // spreading? propaganda, unbelievable
    }

    #[test]
    fn word_never_below_uppercase_word() {
        for text in ["THE", "A B C", "WOW nice", "I am HERE now."] {
            let c = counts(text);
            assert!(c.word >= c.uppercase_word, "{text}");
        }
    }

    #[test]
    fn surface_counters_additive_over_concatenation() {
        let a = "Fake NEWS spreading fast!";
        let b = "Police confirm two #arrests http://x.y";
        let joined = format!("{a} {b}");
        let (ca, cb, cj) = (counts(a), counts(b), counts(&joined));
        assert_eq!(cj.char, ca.char + cb.char);
        assert_eq!(cj.word, ca.word + cb.word);
        assert_eq!(cj.punctuation, ca.punctuation + cb.punctuation);
    }

    #[test]
    fn image_and_video_come_from_context() {
        let r = TextResources::embedded();
        let processed = normalize_and_tokenize("look", &r.stopwords, &r.lemmas);
        let ctx = ContextMeta {
            image_urls: vec!["http://i/1.jpg".into(), "http://i/2.jpg".into()],
            video_urls: vec!["http://v/1.mp4".into()],
            ..ContextMeta::default()
        };
        let c = style_counts("look", &processed, &ctx, &r);
        assert_eq!(c.image, 2);
        assert_eq!(c.video, 1);
    }
}
