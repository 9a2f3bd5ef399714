//! Shared stream generator for the benchmarks.

use chrono::{TimeZone, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use veristream_core::{ContextMeta, CreatorMeta, Label, TweetEvent};

const FAKE_TEXTS: &[&str] = &[
    "BREAKING unconfirmed gunman seen near the station #panic",
    "SHOCKING footage shows explosion downtown share now!!!",
    "they are hiding the truth about the crash wake up",
];

const REAL_TEXTS: &[&str] = &[
    "Police confirm two arrests after the incident, investigation ongoing.",
    "Official statement: road closed, no injuries reported.",
    "The mayor announced new details at the press briefing today.",
];

/// Deterministic labeled stream for throughput measurement.
pub fn synthetic_events(n: usize, seed: u64) -> Vec<TweetEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Utc.with_ymd_and_hms(2014, 8, 6, 20, 0, 0).unwrap();
    let registered = Utc.with_ymd_and_hms(2012, 3, 1, 0, 0, 0).unwrap();
    (0..n)
        .map(|i| {
            let fake = rng.gen_bool(0.4);
            let pool = if fake { FAKE_TEXTS } else { REAL_TEXTS };
            TweetEvent {
                tweet_id: format!("t{i:05}"),
                user_id: format!("u{}", rng.gen_range(1..50)),
                timestamp: start + chrono::Duration::minutes(i as i64),
                text: pool[rng.gen_range(0..pool.len())].to_string(),
                label: Some(if fake { Label::Fake } else { Label::NonFake }),
                creator: CreatorMeta {
                    timezone: "London".into(),
                    follower_count: rng.gen_range(0..5000),
                    friend_count: rng.gen_range(0..2000),
                    registered_at: Some(registered),
                    ..CreatorMeta::default()
                },
                context: ContextMeta {
                    retweet_count: rng.gen_range(0..200),
                    ..ContextMeta::default()
                },
            }
        })
        .collect()
}
