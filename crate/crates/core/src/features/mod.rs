//! Feature assembly: the named, ordered vector that flows through
//! selection, clustering and classification.
//!
//! Base features live in three profile classes (creator, content, context).
//! Every tracked numeric base feature contributes two companions: the user's
//! running average and a trend flag comparing the current value against it.
//! Feature sets nest: A (no word n-grams) ⊂ B (adds n-grams) ⊂ C (adds the
//! frequency-lexicon hit counts).

mod profile;
mod select;
mod vectorizer;

pub use profile::{creator_features, trend_flag, CreatorFeatures, ProfileStore, UserProfile};
pub use select::{Standardizer, VarianceSelector};
pub use vectorizer::{generate_ngrams, NgramVectorizer};

use crate::config::FeatureSet;
use crate::error::CoreError;
use crate::ingest::ContextMeta;
use crate::textproc::{AffectScores, ReadabilityScores, StyleCounts};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Identifier of one vector dimension. The enum ordering fixes the vector
/// ordering: base block, then companions, then timezone one-hot, then the
/// textual blocks.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum FeatureKey {
    Base(String),
    UserAvg(String),
    Trend(String),
    Timezone(u8),
    Ngram(String),
    LexiconFake,
    LexiconNonFake,
}

impl FeatureKey {
    pub fn base(id: &str) -> Self {
        FeatureKey::Base(id.to_string())
    }

    /// True for the textual block (word n-grams and lexicon hits), which is
    /// exempt from variance selection.
    pub fn is_textual(&self) -> bool {
        matches!(
            self,
            FeatureKey::Ngram(_) | FeatureKey::LexiconFake | FeatureKey::LexiconNonFake
        )
    }

    /// Human-readable name used in explanations.
    pub fn display_name(&self) -> String {
        match self {
            FeatureKey::Base(id) => id
                .strip_prefix("emotion_")
                .unwrap_or(id)
                .replace('_', " "),
            FeatureKey::UserAvg(id) => format!("user average of {}", id.replace('_', " ")),
            FeatureKey::Trend(id) => format!("trend of {}", id.replace('_', " ")),
            FeatureKey::Timezone(slot) => format!("timezone slot {slot}"),
            FeatureKey::Ngram(g) => format!("n-gram \"{g}\""),
            FeatureKey::LexiconFake => "fake-lexicon hits".to_string(),
            FeatureKey::LexiconNonFake => "non-fake-lexicon hits".to_string(),
        }
    }
}

impl fmt::Display for FeatureKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureKey::Base(id) => write!(f, "base:{id}"),
            FeatureKey::UserAvg(id) => write!(f, "avg:{id}"),
            FeatureKey::Trend(id) => write!(f, "trend:{id}"),
            FeatureKey::Timezone(slot) => write!(f, "tz:{slot}"),
            FeatureKey::Ngram(g) => write!(f, "ngram:{g}"),
            FeatureKey::LexiconFake => write!(f, "lex:fake"),
            FeatureKey::LexiconNonFake => write!(f, "lex:non_fake"),
        }
    }
}

impl From<FeatureKey> for String {
    fn from(k: FeatureKey) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for FeatureKey {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        let (prefix, rest) = s
            .split_once(':')
            .ok_or_else(|| format!("bad feature key: {s}"))?;
        match prefix {
            "base" => Ok(FeatureKey::Base(rest.to_string())),
            "avg" => Ok(FeatureKey::UserAvg(rest.to_string())),
            "trend" => Ok(FeatureKey::Trend(rest.to_string())),
            "tz" => rest
                .parse()
                .map(FeatureKey::Timezone)
                .map_err(|_| format!("bad timezone slot: {rest}")),
            "ngram" => Ok(FeatureKey::Ngram(rest.to_string())),
            "lex" => match rest {
                "fake" => Ok(FeatureKey::LexiconFake),
                "non_fake" => Ok(FeatureKey::LexiconNonFake),
                _ => Err(format!("bad lexicon key: {rest}")),
            },
            _ => Err(format!("bad feature key prefix: {prefix}")),
        }
    }
}

/// Named, ordered feature vector. Boolean features are encoded {0, 1};
/// absent dimensions read as 0 (sparse contract).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub set: FeatureSet,
    values: BTreeMap<FeatureKey, f64>,
}

impl FeatureVector {
    pub fn new(set: FeatureSet) -> Self {
        Self {
            set,
            values: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, key: FeatureKey, value: f64) {
        self.values.insert(key, value);
    }

    pub fn get(&self, key: &FeatureKey) -> f64 {
        self.values.get(key).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, key: &FeatureKey) -> bool {
        self.values.contains_key(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FeatureKey, f64)> {
        self.values.iter().map(|(k, v)| (k, *v))
    }

    pub fn keys(&self) -> impl Iterator<Item = &FeatureKey> {
        self.values.keys()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn key_set(&self) -> BTreeSet<FeatureKey> {
        self.values.keys().cloned().collect()
    }
}

/// Profile family of a feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileClass {
    Creator,
    Content,
    Context,
}

impl fmt::Display for ProfileClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileClass::Creator => write!(f, "creator"),
            ProfileClass::Content => write!(f, "content"),
            ProfileClass::Context => write!(f, "context"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataType {
    Boolean,
    Categorical,
    Numerical,
    Textual,
}

/// One row of the feature dictionary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub id: &'static str,
    pub class: ProfileClass,
    pub dtype: DataType,
    /// Whether the per-user average/trend companion pair exists.
    pub companions: bool,
    /// Smallest feature set containing this feature.
    pub min_set: FeatureSet,
}

macro_rules! spec {
    ($id:literal, $class:ident, $dtype:ident, $comp:literal) => {
        FeatureSpec {
            id: $id,
            class: ProfileClass::$class,
            dtype: DataType::$dtype,
            companions: $comp,
            min_set: FeatureSet::A,
        }
    };
}

/// The base feature dictionary, in presentation order.
pub const BASE_FEATURES: &[FeatureSpec] = &[
    spec!("has_profile_description", Creator, Boolean, false),
    spec!("has_profile_image", Creator, Boolean, false),
    spec!("protected", Creator, Boolean, false),
    spec!("verified", Creator, Boolean, false),
    spec!("timezone", Creator, Categorical, false),
    spec!("follower_count", Creator, Numerical, true),
    spec!("friend_count", Creator, Numerical, true),
    spec!("friends_followers_ratio", Creator, Numerical, true),
    spec!("user_favourite_count", Creator, Numerical, true),
    spec!("registration_span_days", Creator, Numerical, false),
    spec!("weekly_tweet_frequency", Creator, Numerical, false),
    spec!("text_duplicated", Content, Boolean, false),
    spec!("adjective_count", Content, Numerical, true),
    spec!("auxiliary_count", Content, Numerical, true),
    spec!("bad_word_count", Content, Numerical, true),
    spec!("char_count", Content, Numerical, true),
    spec!("determiner_count", Content, Numerical, true),
    spec!("difficult_word_count", Content, Numerical, true),
    spec!("emotion_anger", Content, Numerical, false),
    spec!("emotion_fear", Content, Numerical, false),
    spec!("emotion_happiness", Content, Numerical, false),
    spec!("emotion_sadness", Content, Numerical, false),
    spec!("emotion_surprise", Content, Numerical, false),
    spec!("flesch_reading_ease", Content, Numerical, false),
    spec!("hashtag_count", Content, Numerical, true),
    spec!("image_count", Content, Numerical, true),
    spec!("link_count", Content, Numerical, true),
    spec!("link_repeated_count", Content, Numerical, true),
    spec!("mcalpine_eflaw", Content, Numerical, false),
    spec!("noun_count", Content, Numerical, true),
    spec!("polarity", Content, Numerical, false),
    spec!("pronoun_count", Content, Numerical, true),
    spec!("punctuation_count", Content, Numerical, true),
    spec!("reading_time", Content, Numerical, false),
    spec!("uppercase_word_count", Content, Numerical, true),
    spec!("video_count", Content, Numerical, true),
    spec!("word_count", Content, Numerical, true),
    spec!("retweeted", Context, Boolean, false),
    spec!("favourited", Context, Boolean, false),
    spec!("distribution_depth", Context, Numerical, false),
    spec!("first_level_retweets", Context, Numerical, false),
    spec!("retweet_count", Context, Numerical, true),
    spec!("favourite_count", Context, Numerical, true),
];

/// Looks up the dictionary row for a base feature id.
pub fn feature_spec(id: &str) -> Option<&'static FeatureSpec> {
    BASE_FEATURES.iter().find(|s| s.id == id)
}

/// Ids of the numeric base features that carry average/trend companions.
pub fn tracked_feature_ids() -> impl Iterator<Item = &'static str> {
    BASE_FEATURES.iter().filter(|s| s.companions).map(|s| s.id)
}

/// The full exported dictionary: base rows plus the textual blocks.
pub fn feature_dictionary() -> Vec<FeatureSpec> {
    let mut rows: Vec<FeatureSpec> = BASE_FEATURES.to_vec();
    rows.push(FeatureSpec {
        id: "word_ngrams",
        class: ProfileClass::Content,
        dtype: DataType::Textual,
        companions: false,
        min_set: FeatureSet::B,
    });
    rows.push(FeatureSpec {
        id: "lexicon_fake_hits",
        class: ProfileClass::Content,
        dtype: DataType::Textual,
        companions: false,
        min_set: FeatureSet::C,
    });
    rows.push(FeatureSpec {
        id: "lexicon_non_fake_hits",
        class: ProfileClass::Content,
        dtype: DataType::Textual,
        companions: false,
        min_set: FeatureSet::C,
    });
    rows
}

/// Incremental one-hot encoder for the timezone category, capped at 64
/// slots; the last slot is the overflow bucket.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TimezoneEncoder {
    categories: BTreeMap<String, u8>,
}

impl TimezoneEncoder {
    pub const MAX_SLOTS: usize = 64;
    const OVERFLOW: u8 = (Self::MAX_SLOTS - 1) as u8;

    pub fn encode(&mut self, timezone: &str) -> u8 {
        if let Some(&slot) = self.categories.get(timezone) {
            return slot;
        }
        if self.categories.len() < Self::MAX_SLOTS - 1 {
            let slot = self.categories.len() as u8;
            self.categories.insert(timezone.to_string(), slot);
            slot
        } else {
            Self::OVERFLOW
        }
    }

    /// Number of slots currently in use; once the cap is reached the
    /// overflow slot counts too.
    pub fn slot_count(&self) -> u8 {
        if self.categories.len() >= Self::MAX_SLOTS - 1 {
            Self::MAX_SLOTS as u8
        } else {
            self.categories.len() as u8
        }
    }
}

/// Whole-run duplicate detector over normalized text hashes.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DuplicateStore {
    seen: BTreeSet<u64>,
}

impl DuplicateStore {
    /// True iff the normalized text was seen earlier in the stream; the
    /// hash is inserted afterwards.
    pub fn check_and_insert(&mut self, normalized: &str) -> bool {
        let h = crate::fnv1a64(normalized.as_bytes());
        !self.seen.insert(h)
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }
}

/// Everything computed for one event before assembly.
pub struct AssembleParts<'a> {
    pub style: Option<&'a StyleCounts>,
    pub readability: Option<&'a ReadabilityScores>,
    pub affect: Option<&'a AffectScores>,
    pub creator: Option<&'a CreatorFeatures>,
    pub context: Option<&'a ContextMeta>,
    pub duplicated: Option<bool>,
    /// Active timezone slot and the number of known slots to emit.
    pub timezone: Option<(u8, u8)>,
    pub ngrams: Option<&'a BTreeMap<String, f64>>,
    pub lexicon_hits: Option<(u64, u64)>,
}

/// Raw values of every numeric/boolean base feature, in dictionary order.
fn base_values(parts: &AssembleParts<'_>) -> Result<Vec<(&'static str, f64)>, CoreError> {
    let style = parts.style.ok_or(CoreError::MissingPart("style"))?;
    let read = parts
        .readability
        .ok_or(CoreError::MissingPart("readability"))?;
    let affect = parts.affect.ok_or(CoreError::MissingPart("affect"))?;
    let creator = parts.creator.ok_or(CoreError::MissingPart("creator"))?;
    let context = parts.context.ok_or(CoreError::MissingPart("context"))?;
    let duplicated = parts
        .duplicated
        .ok_or(CoreError::MissingPart("duplicate flag"))?;

    let b = |v: bool| if v { 1.0 } else { 0.0 };
    Ok(vec![
        ("has_profile_description", b(creator.has_description)),
        ("has_profile_image", b(creator.has_profile_image)),
        ("protected", b(creator.protected)),
        ("verified", b(creator.verified)),
        ("follower_count", creator.follower_count),
        ("friend_count", creator.friend_count),
        ("friends_followers_ratio", creator.friends_followers_ratio),
        ("user_favourite_count", creator.user_favourite_count),
        ("registration_span_days", creator.registration_span_days),
        ("weekly_tweet_frequency", creator.weekly_tweet_frequency),
        ("text_duplicated", b(duplicated)),
        ("adjective_count", style.adjective as f64),
        ("auxiliary_count", style.auxiliary as f64),
        ("bad_word_count", style.bad_word as f64),
        ("char_count", style.char as f64),
        ("determiner_count", style.determiner as f64),
        ("difficult_word_count", style.difficult_word as f64),
        ("emotion_anger", affect.anger),
        ("emotion_fear", affect.fear),
        ("emotion_happiness", affect.happiness),
        ("emotion_sadness", affect.sadness),
        ("emotion_surprise", affect.surprise),
        ("flesch_reading_ease", read.flesch_reading_ease),
        ("hashtag_count", style.hashtag as f64),
        ("image_count", style.image as f64),
        ("link_count", style.link as f64),
        ("link_repeated_count", style.link_repeated as f64),
        ("mcalpine_eflaw", read.mcalpine_eflaw),
        ("noun_count", style.noun as f64),
        ("polarity", affect.polarity),
        ("pronoun_count", style.pronoun as f64),
        ("punctuation_count", style.punctuation as f64),
        ("reading_time", read.reading_time_s),
        ("uppercase_word_count", style.uppercase_word as f64),
        ("video_count", style.video as f64),
        ("word_count", style.word as f64),
        ("retweeted", b(context.retweeted)),
        ("favourited", b(context.favourited)),
        ("distribution_depth", context.distribution_depth as f64),
        ("first_level_retweets", context.first_level_retweets as f64),
        ("retweet_count", context.retweet_count as f64),
        ("favourite_count", context.favourite_count as f64),
    ])
}

/// Values of the tracked base features, used to advance the user profile.
pub fn tracked_values(parts: &AssembleParts<'_>) -> Result<Vec<(&'static str, f64)>, CoreError> {
    Ok(base_values(parts)?
        .into_iter()
        .filter(|(id, _)| feature_spec(id).map(|s| s.companions).unwrap_or(false))
        .collect())
}

/// Assembles the feature vector for one event.
///
/// The profile supplies the user averages from strictly earlier posts; a
/// user's first post averages to its own value (trend flag true).
pub fn assemble(
    set: FeatureSet,
    parts: &AssembleParts<'_>,
    profile: &UserProfile,
) -> Result<FeatureVector, CoreError> {
    let mut vector = FeatureVector::new(set);

    for (id, value) in base_values(parts)? {
        vector.insert(FeatureKey::base(id), value);
        let spec = feature_spec(id).expect("base feature in dictionary");
        if spec.companions {
            let avg = profile.mean(id).unwrap_or(value);
            vector.insert(FeatureKey::UserAvg(id.to_string()), avg);
            vector.insert(
                FeatureKey::Trend(id.to_string()),
                if trend_flag(value, profile.mean(id)) {
                    1.0
                } else {
                    0.0
                },
            );
        }
    }

    let (active, slot_count) = parts.timezone.ok_or(CoreError::MissingPart("timezone"))?;
    for slot in 0..slot_count.max(active + 1) {
        vector.insert(
            FeatureKey::Timezone(slot),
            if slot == active { 1.0 } else { 0.0 },
        );
    }

    if set.includes_ngrams() {
        let ngrams = parts.ngrams.ok_or(CoreError::MissingPart("ngrams"))?;
        for (gram, count) in ngrams {
            vector.insert(FeatureKey::Ngram(gram.clone()), *count);
        }
    }

    if set.includes_lexicon() {
        let (fake, non_fake) = parts
            .lexicon_hits
            .ok_or(CoreError::MissingPart("lexicon"))?;
        vector.insert(FeatureKey::LexiconFake, fake as f64);
        vector.insert(FeatureKey::LexiconNonFake, non_fake as f64);
    }

    Ok(vector)
}
