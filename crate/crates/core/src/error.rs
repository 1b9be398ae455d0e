//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by corpus construction, metric computation, and ingestion.
#[derive(Error, Debug)]
pub enum Error {
    #[error("document must contain at least one sentence")]
    EmptyDocument,

    #[error("invalid segmentation: {0}")]
    InvalidSegmentation(String),

    #[error("label count {labels} does not match boundary count {boundaries}")]
    LabelCountMismatch { labels: usize, boundaries: usize },

    #[error("sentence counts differ: reference has {reference}, hypothesis has {hypothesis}")]
    SentenceCountMismatch { reference: usize, hypothesis: usize },

    #[error("need at least {min} sentences, got {got}")]
    TooFewSentences { got: usize, min: usize },

    #[error("input lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("{0} must not be empty")]
    EmptyInput(&'static str),

    #[error("document {id:?}: {reason}")]
    MalformedDocument { id: String, reason: String },

    #[error("no documents to evaluate")]
    NoDocuments,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
