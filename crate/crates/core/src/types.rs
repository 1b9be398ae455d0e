//! Canonical domain types: documents, segmentations, and labeled
//! segmentations.
//!
//! All types validate their invariants at construction and are immutable
//! afterwards, so they can be shared freely across threads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether a document's "sentences" are prose sentences or conversation
/// turns. Turn truncation only applies to conversations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modality {
    #[default]
    Document,
    Conversation,
}

/// An ordered list of sentences (or conversation turns) with an id.
///
/// Sentences may be empty strings — the empty-sentence augmentation relies on
/// that — but the list itself is never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    id: String,
    sentences: Vec<String>,
    modality: Modality,
}

impl Document {
    pub fn new(id: impl Into<String>, sentences: Vec<String>, modality: Modality) -> Result<Self> {
        if sentences.is_empty() {
            return Err(Error::EmptyDocument);
        }
        Ok(Self {
            id: id.into(),
            sentences,
            modality,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn sentences(&self) -> &[String] {
        &self.sentences
    }

    pub fn modality(&self) -> Modality {
        self.modality
    }

    /// Number of sentences |S|.
    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least one sentence
    }
}

/// A linear segmentation of a document with `num_sentences` sentences.
///
/// Boundaries are 0-based indices of the *last* sentence of each segment,
/// strictly increasing, and always ending with `num_sentences - 1` so every
/// sentence belongs to exactly one segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    boundaries: Vec<usize>,
    num_sentences: usize,
}

impl Segmentation {
    pub fn new(boundaries: Vec<usize>, num_sentences: usize) -> Result<Self> {
        if num_sentences == 0 {
            return Err(Error::InvalidSegmentation(
                "num_sentences must be >= 1".into(),
            ));
        }
        if boundaries.is_empty() {
            return Err(Error::InvalidSegmentation(
                "at least one boundary required".into(),
            ));
        }
        if !boundaries.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidSegmentation(format!(
                "boundaries not strictly increasing: {boundaries:?}"
            )));
        }
        let last = *boundaries.last().unwrap();
        if last != num_sentences - 1 {
            return Err(Error::InvalidSegmentation(format!(
                "final boundary {last} must equal num_sentences - 1 = {}",
                num_sentences - 1
            )));
        }
        Ok(Self {
            boundaries,
            num_sentences,
        })
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn num_sentences(&self) -> usize {
        self.num_sentences
    }

    /// Number of segments.
    pub fn num_segments(&self) -> usize {
        self.boundaries.len()
    }

    /// Inclusive (start, end) sentence spans of each segment, in order.
    pub fn segment_spans(&self) -> Vec<(usize, usize)> {
        let mut spans = Vec::with_capacity(self.boundaries.len());
        let mut start = 0;
        for &b in &self.boundaries {
            spans.push((start, b));
            start = b + 1;
        }
        spans
    }

    /// Segment index of every sentence; two sentences are in the same segment
    /// iff their ids are equal.
    pub fn sentence_segment_ids(&self) -> Vec<usize> {
        let mut ids = vec![0; self.num_sentences];
        let mut seg = 0;
        let mut next = self.boundaries.iter().copied().peekable();
        for (i, id) in ids.iter_mut().enumerate() {
            *id = seg;
            if next.peek() == Some(&i) {
                next.next();
                seg += 1;
            }
        }
        ids
    }
}

/// Replace delimiter substrings a label may not contain and trim surrounding
/// whitespace. Applied to every label at construction so encoded target
/// sequences stay unambiguous and decode back to the same labels.
pub fn normalize_label(raw: &str) -> String {
    raw.replace(":=", "/").replace('|', "/").trim().to_string()
}

/// A segmentation with one free-text label per segment.
///
/// Labels are normalized at construction: occurrences of the segment
/// delimiter `|` and the pair delimiter `:=` are replaced with `/`, and
/// surrounding whitespace is trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSegmentation {
    segmentation: Segmentation,
    labels: Vec<String>,
}

impl LabeledSegmentation {
    pub fn new(segmentation: Segmentation, labels: Vec<String>) -> Result<Self> {
        if labels.len() != segmentation.num_segments() {
            return Err(Error::LabelCountMismatch {
                labels: labels.len(),
                boundaries: segmentation.num_segments(),
            });
        }
        let labels = labels.iter().map(|l| normalize_label(l)).collect();
        Ok(Self {
            segmentation,
            labels,
        })
    }

    pub fn segmentation(&self) -> &Segmentation {
        &self.segmentation
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_sentences(&self) -> usize {
        self.segmentation.num_sentences()
    }

    pub fn into_parts(self) -> (Segmentation, Vec<String>) {
        (self.segmentation, self.labels)
    }
}
