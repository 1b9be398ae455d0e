//! Sentence-position marking for encoder inputs.
//!
//! Long-input encoders see a document as one flat token stream with a marker
//! token prepended to every sentence. The marker either carries a constant id
//! (`FixedBos`, one shared begin-of-sentence index) or the sentence's own
//! 0-based index (`Indexed`), which exposes unambiguous position information
//! to a decoder that must emit sentence indices as text.

use crate::tokenize::tokenize;
use crate::types::Document;

/// How sentence-initial marker tokens encode position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositionScheme {
    /// Every sentence starts with the same marker id 0.
    FixedBos,
    /// Sentence `i` starts with marker id `i`.
    Indexed,
}

/// One token of a marked stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedToken {
    pub text: String,
    /// Index of the sentence this token came from.
    pub sentence_index: usize,
    pub is_sentence_marker: bool,
    /// Present only on marker tokens.
    pub marker_id: Option<usize>,
}

/// A document flattened to tokens with one marker per sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedTokenStream {
    pub tokens: Vec<MarkedToken>,
    pub scheme: PositionScheme,
}

impl MarkedTokenStream {
    /// Marker ids in sentence order.
    pub fn marker_ids(&self) -> Vec<usize> {
        self.tokens
            .iter()
            .filter(|t| t.is_sentence_marker)
            .map(|t| t.marker_id.expect("markers always carry an id"))
            .collect()
    }
}

/// Flatten `doc` into a token stream, prepending exactly one marker token per
/// sentence (empty sentences contribute just their marker).
pub fn mark_sentence_positions(doc: &Document, scheme: PositionScheme) -> MarkedTokenStream {
    let mut tokens = Vec::new();
    for (i, sentence) in doc.sentences().iter().enumerate() {
        let marker_id = match scheme {
            PositionScheme::FixedBos => 0,
            PositionScheme::Indexed => i,
        };
        let text = match scheme {
            PositionScheme::FixedBos => "<bos>".to_string(),
            PositionScheme::Indexed => format!("<{marker_id}>"),
        };
        tokens.push(MarkedToken {
            text,
            sentence_index: i,
            is_sentence_marker: true,
            marker_id: Some(marker_id),
        });
        for word in tokenize(sentence) {
            tokens.push(MarkedToken {
                text: word,
                sentence_index: i,
                is_sentence_marker: false,
                marker_id: None,
            });
        }
    }
    MarkedTokenStream { tokens, scheme }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Modality;

    fn doc(sentences: &[&str]) -> Document {
        Document::new(
            "d",
            sentences.iter().map(|s| s.to_string()).collect(),
            Modality::Document,
        )
        .unwrap()
    }

    #[test]
    fn indexed_markers_are_identity() {
        let stream = mark_sentence_positions(&doc(&["a b", "c", "d e f"]), PositionScheme::Indexed);
        assert_eq!(stream.marker_ids(), vec![0, 1, 2]);
    }

    #[test]
    fn fixed_bos_markers_are_all_zero() {
        let stream = mark_sentence_positions(&doc(&["a b", "c", "d"]), PositionScheme::FixedBos);
        assert_eq!(stream.marker_ids(), vec![0, 0, 0]);
    }

    #[test]
    fn markers_lead_their_sentences() {
        let stream = mark_sentence_positions(&doc(&["a b", "", "c"]), PositionScheme::Indexed);
        let texts: Vec<&str> = stream.tokens.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, vec!["<0>", "a", "b", "<1>", "<2>", "c"]);
        // non-marker tokens keep their sentence's index
        assert!(stream
            .tokens
            .iter()
            .filter(|t| !t.is_sentence_marker)
            .all(|t| t.marker_id.is_none()));
    }

    #[test]
    fn one_marker_per_sentence() {
        let d = doc(&["x", "", "y z", ""]);
        let stream = mark_sentence_positions(&d, PositionScheme::Indexed);
        let markers = stream.tokens.iter().filter(|t| t.is_sentence_marker).count();
        assert_eq!(markers, d.len());
    }
}
