use thiserror::Error;

/// Errors surfaced by the engine crate.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),

    #[error("invalid record on line {line}: {reason}")]
    InvalidRecord { line: usize, reason: String },

    #[error("missing feature part: {0}")]
    MissingPart(&'static str),

    #[error("event {0} carries no label but the run is prequential")]
    UnlabeledEvent(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown report format: {0}")]
    UnknownFormat(String),

    #[error("unknown tweet id: {0}")]
    UnknownTweet(String),
}
