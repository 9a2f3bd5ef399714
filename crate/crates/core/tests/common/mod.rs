//! Shared fixtures for the integration suites.

use chrono::{TimeZone, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use veristream_core::{ContextMeta, CreatorMeta, Label, TweetEvent};

const FAKE_TEXTS: &[&str] = &[
    "BREAKING unconfirmed gunman seen near the station #panic",
    "SHOCKING footage shows explosion downtown share now!!!",
    "police cover up the real story wake up people",
    "unbelievable they are hiding the truth about the crash",
    "hostage crisis spreading fast retweet before deleted",
    "fake media will not show you this terrifying scene",
];

const REAL_TEXTS: &[&str] = &[
    "Police confirm two arrests after the incident, investigation ongoing.",
    "Official statement: road closed, no injuries reported.",
    "The mayor announced new details at the press briefing today.",
    "Emergency services responded quickly; situation under control.",
    "Reporters on the scene say the area has been secured.",
    "City officials published the full report this morning.",
];

/// Deterministic labeled stream with creator/context metadata; text pools
/// correlate with the label so the lexicon and classifiers have signal.
pub fn synthetic_events(n: usize, seed: u64) -> Vec<TweetEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Utc.with_ymd_and_hms(2014, 8, 6, 20, 0, 0).unwrap();
    let registered = Utc.with_ymd_and_hms(2012, 3, 1, 0, 0, 0).unwrap();
    let timezones = ["Eastern", "Central", "London", ""];

    (0..n)
        .map(|i| {
            let fake = rng.gen_bool(0.4);
            let pool = if fake { FAKE_TEXTS } else { REAL_TEXTS };
            let mut text = pool[rng.gen_range(0..pool.len())].to_string();
            if rng.gen_bool(0.3) {
                text.push_str(&format!(" http://t.co/x{}", i % 7));
            }
            let retweets = rng.gen_range(0..200u64);
            TweetEvent {
                tweet_id: format!("t{i:05}"),
                user_id: format!("u{}", rng.gen_range(1..60)),
                timestamp: start + chrono::Duration::minutes(i as i64),
                text,
                label: Some(if fake { Label::Fake } else { Label::NonFake }),
                creator: CreatorMeta {
                    has_description: rng.gen_bool(0.7),
                    has_profile_image: true,
                    protected: false,
                    verified: rng.gen_bool(0.1),
                    timezone: timezones[rng.gen_range(0..timezones.len())].to_string(),
                    follower_count: rng.gen_range(0..5000),
                    friend_count: rng.gen_range(0..2000),
                    user_favourite_count: rng.gen_range(0..900),
                    registered_at: Some(registered),
                },
                context: ContextMeta {
                    retweeted: rng.gen_bool(0.5),
                    favourited: rng.gen_bool(0.3),
                    distribution_depth: rng.gen_range(0..5),
                    first_level_retweets: rng.gen_range(0..10),
                    retweet_count: retweets,
                    favourite_count: rng.gen_range(0..80),
                    image_urls: if rng.gen_bool(0.2) {
                        vec!["http://img/1.jpg".to_string()]
                    } else {
                        Vec::new()
                    },
                    video_urls: Vec::new(),
                    link_urls: Vec::new(),
                },
            }
        })
        .collect()
}
