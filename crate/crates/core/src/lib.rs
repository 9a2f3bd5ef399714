//! Online, explainable fake-news classification engine.
//!
//! The engine consumes a chronologically ordered stream of social-media
//! posts, incrementally builds creator/content/context profiles, routes each
//! sample through cluster-specific incremental classifiers, and emits a
//! human-readable explanation for every prediction.
//!
//! Module map:
//! - [`ingest`] — event schema, stream loading and validation
//! - [`textproc`] — pure text analysis (tokenization, hashtag splitting,
//!   style counters, readability, sentiment/emotion scoring)
//! - [`features`] — feature assembly, user profiles, n-gram vectorization,
//!   online variance-based selection
//! - [`lexicon`] — per-class n-gram frequency store and derived disjoint
//!   fake/non-fake lexica
//! - [`learn`] — online k-means routing plus the incremental classifier bank
//!   (GNB, Hoeffding tree, adaptive Hoeffding tree, adaptive random forest)
//! - [`eval`] — prequential test-then-train driver, metrics, sliding windows
//! - [`explain`] — per-prediction explanation records and report rendering

pub mod config;
pub mod error;
pub mod eval;
pub mod explain;
pub mod features;
pub mod ingest;
pub mod learn;
pub mod lexicon;
pub mod stats;
pub mod textproc;

pub use config::RunConfig;
pub use error::CoreError;
pub use ingest::{ContextMeta, CreatorMeta, Label, TweetEvent};

/// Stable 64-bit FNV-1a hash. Used wherever a run-to-run reproducible hash
/// is required (duplicate detection, seed derivation).
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Derives a child seed from a parent seed and a label, deterministically.
pub fn derive_seed(parent: u64, label: &str, index: u64) -> u64 {
    let mut buf = Vec::with_capacity(label.len() + 16);
    buf.extend_from_slice(&parent.to_le_bytes());
    buf.extend_from_slice(label.as_bytes());
    buf.extend_from_slice(&index.to_le_bytes());
    fnv1a64(&buf)
}
