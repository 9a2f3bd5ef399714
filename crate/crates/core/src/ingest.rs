//! Event schema, stream loading and validation.
//!
//! Input is line-delimited JSON, one event per line, fields in snake_case
//! and timestamps in RFC 3339. Malformed lines become per-line error records
//! instead of aborting the stream; out-of-order input is sorted at load time
//! and flagged in the load report.

use crate::error::CoreError;
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

/// Ground-truth class of a post.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Fake,
    NonFake,
}

impl Label {
    pub const COUNT: usize = 2;

    pub fn index(self) -> usize {
        match self {
            Label::Fake => 0,
            Label::NonFake => 1,
        }
    }

    pub fn from_index(i: usize) -> Label {
        if i == 0 {
            Label::Fake
        } else {
            Label::NonFake
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Fake => "fake",
            Label::NonFake => "non_fake",
        }
    }
}

/// Account metadata of the post's creator at posting time.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CreatorMeta {
    pub has_description: bool,
    pub has_profile_image: bool,
    pub protected: bool,
    pub verified: bool,
    pub timezone: String,
    pub follower_count: u64,
    pub friend_count: u64,
    pub user_favourite_count: u64,
    pub registered_at: Option<DateTime<Utc>>,
}

/// Propagation and engagement context of the post.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ContextMeta {
    pub retweeted: bool,
    pub favourited: bool,
    pub distribution_depth: u64,
    pub first_level_retweets: u64,
    pub retweet_count: u64,
    pub favourite_count: u64,
    pub image_urls: Vec<String>,
    pub video_urls: Vec<String>,
    pub link_urls: Vec<String>,
}

/// One timestamped post with creator metadata and propagation context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TweetEvent {
    pub tweet_id: String,
    pub user_id: String,
    pub timestamp: DateTime<Utc>,
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
    pub creator: CreatorMeta,
    pub context: ContextMeta,
}

// Loose mirror of the wire schema: everything optional so validation can
// report precisely what is missing or malformed.
#[derive(Debug, Default, Deserialize)]
struct RawRecord {
    tweet_id: Option<String>,
    user_id: Option<String>,
    timestamp: Option<String>,
    text: Option<String>,
    label: Option<String>,
    #[serde(default)]
    creator: RawCreator,
    #[serde(default)]
    context: RawContext,
}

#[derive(Debug, Default, Deserialize)]
struct RawCreator {
    has_description: Option<bool>,
    has_profile_image: Option<bool>,
    protected: Option<bool>,
    verified: Option<bool>,
    timezone: Option<String>,
    follower_count: Option<i64>,
    friend_count: Option<i64>,
    user_favourite_count: Option<i64>,
    registered_at: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
struct RawContext {
    retweeted: Option<bool>,
    favourited: Option<bool>,
    distribution_depth: Option<i64>,
    first_level_retweets: Option<i64>,
    retweet_count: Option<i64>,
    favourite_count: Option<i64>,
    image_urls: Option<Vec<String>>,
    video_urls: Option<Vec<String>>,
    link_urls: Option<Vec<String>>,
}

/// A rejected input line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineError {
    pub line: usize,
    pub reason: String,
}

/// Counts describing one load, written beside the run output.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LoadReport {
    pub input_lines: usize,
    pub valid_events: usize,
    pub error_records: usize,
    /// Per-field tally of values that had to be defaulted.
    pub defaulted_fields: BTreeMap<String, usize>,
    /// True when the input was not timestamp-ordered and got sorted.
    pub sorted_on_load: bool,
    pub label_counts: BTreeMap<String, usize>,
    pub distinct_users: usize,
}

/// Result of replaying one input file.
#[derive(Debug, Clone, Default)]
pub struct StreamLoad {
    pub events: Vec<TweetEvent>,
    pub errors: Vec<LineError>,
    pub report: LoadReport,
}

fn count_field(
    raw: Option<i64>,
    field: &'static str,
    defaulted: &mut Vec<&'static str>,
) -> Result<u64, String> {
    match raw {
        Some(v) if v < 0 => Err(format!("negative count in field {field}: {v}")),
        Some(v) => Ok(v as u64),
        None => {
            defaulted.push(field);
            Ok(0)
        }
    }
}

fn flag_field(raw: Option<bool>, field: &'static str, defaulted: &mut Vec<&'static str>) -> bool {
    match raw {
        Some(v) => v,
        None => {
            defaulted.push(field);
            false
        }
    }
}

/// Validates one parsed record into a [`TweetEvent`], collecting the names
/// of fields that fell back to their documented defaults.
fn validate_record(raw: RawRecord) -> Result<(TweetEvent, Vec<&'static str>), String> {
    let tweet_id = raw.tweet_id.ok_or("missing required field tweet_id")?;
    let user_id = raw.user_id.ok_or("missing required field user_id")?;
    let ts_raw = raw.timestamp.ok_or("missing required field timestamp")?;
    let text = raw.text.ok_or("missing required field text")?;

    let timestamp = DateTime::parse_from_rfc3339(&ts_raw)
        .map_err(|e| format!("timestamp not RFC 3339: {e}"))?
        .with_timezone(&Utc);

    let label = match raw.label.as_deref() {
        None => None,
        Some("fake") => Some(Label::Fake),
        Some("non_fake") => Some(Label::NonFake),
        Some(other) => return Err(format!("unknown label value: {other}")),
    };

    let mut defaulted = Vec::new();
    let c = raw.creator;
    let registered_at = match c.registered_at {
        Some(s) => Some(
            DateTime::parse_from_rfc3339(&s)
                .map_err(|e| format!("registered_at not RFC 3339: {e}"))?
                .with_timezone(&Utc),
        ),
        None => {
            defaulted.push("registered_at");
            None
        }
    };
    if let Some(reg) = registered_at {
        if reg > timestamp {
            return Err("registered_at is after the event timestamp".to_string());
        }
    }

    let creator = CreatorMeta {
        has_description: flag_field(c.has_description, "has_description", &mut defaulted),
        has_profile_image: flag_field(c.has_profile_image, "has_profile_image", &mut defaulted),
        protected: flag_field(c.protected, "protected", &mut defaulted),
        verified: flag_field(c.verified, "verified", &mut defaulted),
        timezone: c.timezone.unwrap_or_else(|| {
            defaulted.push("timezone");
            String::new()
        }),
        follower_count: count_field(c.follower_count, "follower_count", &mut defaulted)?,
        friend_count: count_field(c.friend_count, "friend_count", &mut defaulted)?,
        user_favourite_count: count_field(
            c.user_favourite_count,
            "user_favourite_count",
            &mut defaulted,
        )?,
        registered_at,
    };

    let x = raw.context;
    let context = ContextMeta {
        retweeted: flag_field(x.retweeted, "retweeted", &mut defaulted),
        favourited: flag_field(x.favourited, "favourited", &mut defaulted),
        distribution_depth: count_field(x.distribution_depth, "distribution_depth", &mut defaulted)?,
        first_level_retweets: count_field(
            x.first_level_retweets,
            "first_level_retweets",
            &mut defaulted,
        )?,
        retweet_count: count_field(x.retweet_count, "retweet_count", &mut defaulted)?,
        favourite_count: count_field(x.favourite_count, "favourite_count", &mut defaulted)?,
        image_urls: x.image_urls.unwrap_or_default(),
        video_urls: x.video_urls.unwrap_or_default(),
        link_urls: x.link_urls.unwrap_or_default(),
    };

    Ok((
        TweetEvent {
            tweet_id,
            user_id,
            timestamp,
            text,
            label,
            creator,
            context,
        },
        defaulted,
    ))
}

/// Validates one raw JSON line.
pub fn validate_event(line: &str) -> Result<(TweetEvent, Vec<&'static str>), String> {
    let raw: RawRecord =
        serde_json::from_str(line).map_err(|e| format!("malformed record: {e}"))?;
    validate_record(raw)
}

/// Loads and replays one event file as a chronologically ordered stream.
///
/// Every non-blank input line becomes either a valid event or an error
/// record, so `valid + errors == input lines`.
pub fn read_stream(source: &Path) -> Result<StreamLoad, CoreError> {
    let file = std::fs::File::open(source)?;
    let reader = BufReader::new(file);

    let mut load = StreamLoad::default();
    let mut seen_ids: BTreeSet<String> = BTreeSet::new();
    let mut users: BTreeSet<String> = BTreeSet::new();

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let line_no = idx + 1;
        load.report.input_lines += 1;
        match validate_event(&line) {
            Ok((event, defaulted)) => {
                if !seen_ids.insert(event.tweet_id.clone()) {
                    load.errors.push(LineError {
                        line: line_no,
                        reason: format!("duplicate tweet_id: {}", event.tweet_id),
                    });
                    continue;
                }
                for f in defaulted {
                    *load.report.defaulted_fields.entry(f.to_string()).or_insert(0) += 1;
                }
                if let Some(label) = event.label {
                    *load
                        .report
                        .label_counts
                        .entry(label.as_str().to_string())
                        .or_insert(0) += 1;
                }
                users.insert(event.user_id.clone());
                load.events.push(event);
            }
            Err(reason) => load.errors.push(LineError {
                line: line_no,
                reason,
            }),
        }
    }

    let ordered = load
        .events
        .windows(2)
        .all(|w| w[0].timestamp <= w[1].timestamp);
    if !ordered {
        load.events.sort_by_key(|e| e.timestamp);
        load.report.sorted_on_load = true;
    }

    load.report.valid_events = load.events.len();
    load.report.error_records = load.errors.len();
    load.report.distinct_users = users.len();
    Ok(load)
}

/// Writes events in the line-delimited schema, one JSON object per line.
pub fn write_events(path: &Path, events: &[TweetEvent]) -> Result<(), CoreError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for event in events {
        serde_json::to_writer(&mut out, event)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

impl LoadReport {
    pub fn write_json(&self, path: &Path) -> Result<(), CoreError> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}
