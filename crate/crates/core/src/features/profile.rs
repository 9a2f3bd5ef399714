//! Per-creator incremental statistics.
//!
//! A profile carries one running mean per tracked numeric feature; the
//! engine reads it before training on the event, so averages always describe
//! strictly earlier posts.

use crate::ingest::CreatorMeta;
use crate::stats::RunningStat;
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserProfile {
    pub user_id: String,
    pub n_posts: u64,
    pub first_seen: Option<DateTime<Utc>>,
    pub registered_at: Option<DateTime<Utc>>,
    means: BTreeMap<String, RunningStat>,
}

impl UserProfile {
    pub fn new(user_id: &str) -> Self {
        Self {
            user_id: user_id.to_string(),
            n_posts: 0,
            first_seen: None,
            registered_at: None,
            means: BTreeMap::new(),
        }
    }

    /// Running mean of a tracked feature over prior posts, if any.
    pub fn mean(&self, feature_id: &str) -> Option<f64> {
        self.means.get(feature_id).map(|s| s.mean)
    }

    /// Folds the event's tracked feature values in: each running mean moves
    /// by (x - m)/n and the post count advances once.
    pub fn update(&mut self, values: &[(&'static str, f64)], timestamp: DateTime<Utc>) {
        for (id, v) in values {
            self.means
                .entry((*id).to_string())
                .or_default()
                .observe(*v, 1.0);
        }
        self.n_posts += 1;
        if self.first_seen.is_none() {
            self.first_seen = Some(timestamp);
        }
    }
}

/// All user profiles of a run, keyed by user id.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ProfileStore {
    profiles: BTreeMap<String, UserProfile>,
}

impl ProfileStore {
    pub fn get_or_create(&mut self, user_id: &str) -> &mut UserProfile {
        self.profiles
            .entry(user_id.to_string())
            .or_insert_with(|| UserProfile::new(user_id))
    }

    pub fn get(&self, user_id: &str) -> Option<&UserProfile> {
        self.profiles.get(user_id)
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }
}

/// True iff the current value is equal to or higher than the user's
/// average; a first observation compares against itself, so true.
pub fn trend_flag(current: f64, profile_mean: Option<f64>) -> bool {
    match profile_mean {
        Some(mean) => current >= mean,
        None => true,
    }
}

/// Creator-profile features for one event.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CreatorFeatures {
    pub has_description: bool,
    pub has_profile_image: bool,
    pub protected: bool,
    pub verified: bool,
    pub timezone: String,
    pub follower_count: f64,
    pub friend_count: f64,
    pub friends_followers_ratio: f64,
    pub user_favourite_count: f64,
    pub registration_span_days: f64,
    pub weekly_tweet_frequency: f64,
}

/// Computes the creator block. The friends/followers ratio is 0 when the
/// account has no followers; the weekly frequency denominator floors at one
/// week so new accounts do not blow up.
pub fn creator_features(
    creator: &CreatorMeta,
    profile: &UserProfile,
    now: DateTime<Utc>,
) -> CreatorFeatures {
    let followers = creator.follower_count as f64;
    let friends = creator.friend_count as f64;
    let ratio = if followers > 0.0 { friends / followers } else { 0.0 };

    let span_days = creator
        .registered_at
        .map(|reg| (now - reg).num_seconds() as f64 / 86_400.0)
        .unwrap_or(0.0)
        .max(0.0);
    let weeks = (span_days / 7.0).max(1.0);

    CreatorFeatures {
        has_description: creator.has_description,
        has_profile_image: creator.has_profile_image,
        protected: creator.protected,
        verified: creator.verified,
        timezone: creator.timezone.clone(),
        follower_count: followers,
        friend_count: friends,
        friends_followers_ratio: ratio,
        user_favourite_count: creator.user_favourite_count as f64,
        registration_span_days: span_days,
        weekly_tweet_frequency: profile.n_posts as f64 / weeks,
    }
}
