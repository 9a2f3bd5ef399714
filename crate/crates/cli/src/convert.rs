//! Converter from the public PHEME thread layout to the line-delimited
//! event schema.
//!
//! The expected layout nests `<event>/rumours|non-rumours/<thread>/` with
//! the source tweet under `source-tweets/<id>.json` (singular also accepted)
//! and replies under `reactions/*.json`. Rumour threads label their source
//! tweet `fake`, non-rumour threads `non_fake`. The propagation context is
//! derived from the reaction tree: `distribution_depth` is the longest
//! reply chain below the source and `first_level_retweets` counts direct
//! children of it.

use anyhow::{bail, Context, Result};
use chrono::{DateTime, Utc};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use veristream_core::{ContextMeta, CreatorMeta, Label, TweetEvent};

#[derive(Debug, Default, Deserialize)]
struct RawTweet {
    id_str: Option<String>,
    id: Option<u64>,
    text: Option<String>,
    created_at: Option<String>,
    #[serde(default)]
    user: RawUser,
    retweet_count: Option<i64>,
    favorite_count: Option<i64>,
    retweeted: Option<bool>,
    favorited: Option<bool>,
    in_reply_to_status_id_str: Option<String>,
    in_reply_to_status_id: Option<u64>,
    #[serde(default)]
    entities: RawEntities,
}

#[derive(Debug, Default, Deserialize)]
struct RawUser {
    id_str: Option<String>,
    id: Option<u64>,
    description: Option<String>,
    profile_image_url: Option<String>,
    protected: Option<bool>,
    verified: Option<bool>,
    time_zone: Option<String>,
    followers_count: Option<i64>,
    friends_count: Option<i64>,
    favourites_count: Option<i64>,
    created_at: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
struct RawEntities {
    #[serde(default)]
    media: Vec<RawMedia>,
    #[serde(default)]
    urls: Vec<RawUrl>,
}

#[derive(Debug, Default, Deserialize)]
struct RawMedia {
    #[serde(rename = "type")]
    media_type: Option<String>,
    media_url: Option<String>,
    expanded_url: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
struct RawUrl {
    expanded_url: Option<String>,
    url: Option<String>,
}

/// Twitter's classic timestamp format.
fn parse_twitter_time(s: &str) -> Option<DateTime<Utc>> {
    DateTime::parse_from_str(s, "%a %b %d %H:%M:%S %z %Y")
        .ok()
        .map(|t| t.with_timezone(&Utc))
        .or_else(|| {
            DateTime::parse_from_rfc3339(s)
                .ok()
                .map(|t| t.with_timezone(&Utc))
        })
}

fn tweet_id(raw: &RawTweet) -> Option<String> {
    raw.id_str.clone().or_else(|| raw.id.map(|i| i.to_string()))
}

fn reply_parent(raw: &RawTweet) -> Option<String> {
    raw.in_reply_to_status_id_str
        .clone()
        .or_else(|| raw.in_reply_to_status_id.map(|i| i.to_string()))
}

/// Longest chain below `root` in the reply forest.
fn tree_depth(root: &str, children: &BTreeMap<String, Vec<String>>) -> u64 {
    match children.get(root) {
        None => 0,
        Some(kids) => {
            1 + kids
                .iter()
                .map(|k| tree_depth(k, children))
                .max()
                .unwrap_or(0)
        }
    }
}

struct Thread {
    source: RawTweet,
    reactions: Vec<RawTweet>,
    label: Label,
}

fn read_thread(dir: &Path, label: Label) -> Result<Option<Thread>> {
    let mut source_file = None;
    for name in ["source-tweets", "source-tweet"] {
        let candidate = dir.join(name);
        if candidate.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(&candidate)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
                .collect();
            entries.sort();
            source_file = entries.into_iter().next();
            break;
        }
    }
    let Some(source_file) = source_file else {
        return Ok(None);
    };
    let source: RawTweet = serde_json::from_str(
        &std::fs::read_to_string(&source_file)
            .with_context(|| format!("reading {}", source_file.display()))?,
    )
    .with_context(|| format!("parsing {}", source_file.display()))?;

    let mut reactions = Vec::new();
    let reactions_dir = dir.join("reactions");
    if reactions_dir.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(&reactions_dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
            .collect();
        files.sort();
        for f in files {
            if let Ok(raw) = serde_json::from_str::<RawTweet>(&std::fs::read_to_string(&f)?) {
                reactions.push(raw);
            }
        }
    }
    Ok(Some(Thread {
        source,
        reactions,
        label,
    }))
}

/// Finds every thread under the root, walking into the per-story folders.
fn collect_threads(root: &Path, threads: &mut Vec<Thread>) -> Result<()> {
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        let Ok(entries) = std::fs::read_dir(&dir) else {
            continue;
        };
        let mut subdirs: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_dir())
            .collect();
        subdirs.sort();
        for sub in subdirs {
            let name = sub.file_name().and_then(|n| n.to_str()).unwrap_or("");
            let label = match name {
                "rumours" => Some(Label::Fake),
                "non-rumours" => Some(Label::NonFake),
                _ => None,
            };
            match label {
                Some(label) => {
                    let mut thread_dirs: Vec<PathBuf> = std::fs::read_dir(&sub)?
                        .filter_map(|e| e.ok().map(|e| e.path()))
                        .filter(|p| p.is_dir())
                        .collect();
                    thread_dirs.sort();
                    for td in thread_dirs {
                        if let Some(t) = read_thread(&td, label)? {
                            threads.push(t);
                        }
                    }
                }
                None => stack.push(sub),
            }
        }
    }
    Ok(())
}

fn convert_thread(thread: &Thread) -> Option<TweetEvent> {
    let source = &thread.source;
    let id = tweet_id(source)?;
    let timestamp = source.created_at.as_deref().and_then(parse_twitter_time)?;
    let text = source.text.clone()?;
    let user_id = source
        .user
        .id_str
        .clone()
        .or_else(|| source.user.id.map(|i| i.to_string()))?;

    // Reply forest over the reactions, rooted at the source tweet.
    let mut children: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for r in &thread.reactions {
        let (Some(rid), Some(parent)) = (tweet_id(r), reply_parent(r)) else {
            continue;
        };
        children.entry(parent).or_default().push(rid);
    }
    for kids in children.values_mut() {
        kids.sort();
    }
    let depth = tree_depth(&id, &children);
    let first_level = children.get(&id).map(|k| k.len() as u64).unwrap_or(0);

    let mut image_urls = Vec::new();
    let mut video_urls = Vec::new();
    for m in &source.entities.media {
        let url = m
            .media_url
            .clone()
            .or_else(|| m.expanded_url.clone())
            .unwrap_or_default();
        if url.is_empty() {
            continue;
        }
        match m.media_type.as_deref() {
            Some("video") | Some("animated_gif") => video_urls.push(url),
            _ => image_urls.push(url),
        }
    }
    let link_urls: Vec<String> = source
        .entities
        .urls
        .iter()
        .filter_map(|u| u.expanded_url.clone().or_else(|| u.url.clone()))
        .collect();

    let registered_at = source
        .user
        .created_at
        .as_deref()
        .and_then(parse_twitter_time)
        // Clock skew in archival data: registration never postdates the post.
        .map(|t| t.min(timestamp));

    Some(TweetEvent {
        tweet_id: id,
        user_id,
        timestamp,
        text,
        label: Some(thread.label),
        creator: CreatorMeta {
            has_description: source
                .user
                .description
                .as_deref()
                .map(|d| !d.trim().is_empty())
                .unwrap_or(false),
            has_profile_image: source
                .user
                .profile_image_url
                .as_deref()
                .map(|u| !u.is_empty())
                .unwrap_or(false),
            protected: source.user.protected.unwrap_or(false),
            verified: source.user.verified.unwrap_or(false),
            timezone: source.user.time_zone.clone().unwrap_or_default(),
            follower_count: source.user.followers_count.unwrap_or(0).max(0) as u64,
            friend_count: source.user.friends_count.unwrap_or(0).max(0) as u64,
            user_favourite_count: source.user.favourites_count.unwrap_or(0).max(0) as u64,
            registered_at,
        },
        context: ContextMeta {
            retweeted: source.retweeted.unwrap_or(false),
            favourited: source.favorited.unwrap_or(false),
            distribution_depth: depth,
            first_level_retweets: first_level,
            retweet_count: source.retweet_count.unwrap_or(0).max(0) as u64,
            favourite_count: source.favorite_count.unwrap_or(0).max(0) as u64,
            image_urls,
            video_urls,
            link_urls,
        },
    })
}

/// Converts a PHEME-style directory into a chronologically ordered event
/// file. Returns the events written.
pub fn convert_pheme(root: &Path, output: &Path) -> Result<Vec<TweetEvent>> {
    if !root.is_dir() {
        bail!("{} is not a directory", root.display());
    }
    let mut threads = Vec::new();
    collect_threads(root, &mut threads)?;
    if threads.is_empty() {
        bail!(
            "no rumours/non-rumours threads found under {}",
            root.display()
        );
    }
    let mut events: Vec<TweetEvent> = threads.iter().filter_map(convert_thread).collect();
    if events.is_empty() {
        bail!("threads found but none produced a valid event");
    }
    events.sort_by(|a, b| {
        a.timestamp
            .cmp(&b.timestamp)
            .then_with(|| a.tweet_id.cmp(&b.tweet_id))
    });
    events.dedup_by(|a, b| a.tweet_id == b.tweet_id);
    veristream_core::ingest::write_events(output, &events)?;
    Ok(events)
}
