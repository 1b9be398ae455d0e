//! Lossless encoding and fault-tolerant decoding between structured
//! segmentations and their flat target-sequence strings.
//!
//! Encoding is total over valid inputs. Decoding never fails: any part of a
//! (possibly model-corrupted) string that cannot be interpreted is dropped
//! and counted, and the result is repaired into a valid [`Segmentation`] by
//! forcing the closing boundary.

use serde::{Deserialize, Serialize};

use crate::types::{LabeledSegmentation, Segmentation};

/// Delimiter between per-segment units in a target sequence.
pub const SEGMENT_DELIMITER: &str = "|";
/// Delimiter between a boundary position and its label in combined mode.
pub const PAIR_DELIMITER: &str = ":=";

/// Which of the three target-sequence layouts a string uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetMode {
    SegOnly,
    LabelsOnly,
    Combined,
}

/// The flat string form of a (labeled) segmentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSequence {
    pub text: String,
    pub mode: TargetMode,
}

/// Encode boundary indices as decimal strings joined by `" | "`.
///
/// `[31, 410, 680]` becomes `"31 | 410 | 680"`.
pub fn encode_segmentation(seg: &Segmentation) -> TargetSequence {
    let text = seg
        .boundaries()
        .iter()
        .map(|b| b.to_string())
        .collect::<Vec<_>>()
        .join(" | ");
    TargetSequence {
        text,
        mode: TargetMode::SegOnly,
    }
}

/// Encode segment labels joined by `" | "`, without positions.
pub fn encode_labels(labels: &[String]) -> TargetSequence {
    TargetSequence {
        text: labels.join(" | "),
        mode: TargetMode::LabelsOnly,
    }
}

/// Encode `"<boundary> := <label>"` units joined by `" | "`.
pub fn encode_combined(ls: &LabeledSegmentation) -> TargetSequence {
    let text = ls
        .segmentation()
        .boundaries()
        .iter()
        .zip(ls.labels())
        .map(|(b, label)| format!("{b} := {label}"))
        .collect::<Vec<_>>()
        .join(" | ");
    TargetSequence {
        text,
        mode: TargetMode::Combined,
    }
}

/// Parse one delimited part as a boundary position in `[0, num_sentences)`.
fn parse_position(part: &str, num_sentences: usize) -> Option<usize> {
    part.trim()
        .parse::<usize>()
        .ok()
        .filter(|&p| p < num_sentences)
}

/// Decode a seg-only target sequence.
///
/// Splits on `|`, trims each part, and keeps the parts that parse as in-range
/// integers; everything else is dropped and counted in `dropped_parts`
/// (empty parts are skipped without counting). Surviving indices are
/// deduplicated and sorted, and the closing boundary `num_sentences - 1` is
/// appended if missing — the append is a repair, not a drop.
///
/// Total over arbitrary input: the returned segmentation is always valid.
pub fn decode_segmentation(raw: &str, num_sentences: usize) -> (Segmentation, usize) {
    assert!(num_sentences >= 1, "num_sentences must be >= 1");
    let mut dropped = 0;
    let mut indices = Vec::new();
    for part in raw.split(SEGMENT_DELIMITER) {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        match parse_position(part, num_sentences) {
            Some(p) => indices.push(p),
            None => dropped += 1,
        }
    }
    indices.sort_unstable();
    indices.dedup();
    if indices.last() != Some(&(num_sentences - 1)) {
        indices.push(num_sentences - 1);
    }
    let seg = Segmentation::new(indices, num_sentences)
        .expect("repaired boundary list always satisfies the invariants");
    (seg, dropped)
}

/// Decode a combined target sequence.
///
/// Each `|`-delimited part is split on the first `:=`; the left side must
/// parse as an in-range position or the whole unit is dropped and counted.
/// The label is the trimmed remainder (empty when `:=` is missing). Units
/// are sorted by position, duplicate positions keep the first occurrence,
/// and a final `(num_sentences - 1, "")` unit is appended if absent.
pub fn decode_combined(raw: &str, num_sentences: usize) -> (LabeledSegmentation, usize) {
    assert!(num_sentences >= 1, "num_sentences must be >= 1");
    let mut dropped = 0;
    let mut units: Vec<(usize, String)> = Vec::new();
    for part in raw.split(SEGMENT_DELIMITER) {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (pos_str, label) = match part.split_once(PAIR_DELIMITER) {
            Some((p, l)) => (p, l.trim()),
            None => (part, ""),
        };
        match parse_position(pos_str, num_sentences) {
            Some(p) => units.push((p, label.to_string())),
            None => dropped += 1,
        }
    }
    // keep the first occurrence of each position, then order by position
    let mut seen = std::collections::HashSet::new();
    units.retain(|(p, _)| seen.insert(*p));
    units.sort_by_key(|(p, _)| *p);
    if units.last().map(|(p, _)| *p) != Some(num_sentences - 1) {
        units.push((num_sentences - 1, String::new()));
    }
    let (boundaries, labels): (Vec<usize>, Vec<String>) = units.into_iter().unzip();
    let seg = Segmentation::new(boundaries, num_sentences)
        .expect("repaired boundary list always satisfies the invariants");
    let ls = LabeledSegmentation::new(seg, labels)
        .expect("label count matches boundary count by construction");
    (ls, dropped)
}

/// Decode a labels-only target sequence: split on `|` and trim. Every part
/// is a valid label, so nothing is ever dropped.
pub fn decode_labels(raw: &str) -> Vec<String> {
    raw.split(SEGMENT_DELIMITER)
        .map(|part| part.trim().to_string())
        .collect()
}

/// Binary boundary indicator per sentence: `v[i]` is true iff sentence `i`
/// is the last sentence of a segment.
pub fn boundary_labels(seg: &Segmentation) -> Vec<bool> {
    let mut v = vec![false; seg.num_sentences()];
    for &b in seg.boundaries() {
        v[b] = true;
    }
    v
}

/// Inverse of [`boundary_labels`]: boundaries at the true positions, with the
/// final index force-appended when the vector does not end in a boundary.
pub fn segmentation_from_labels(v: &[bool]) -> Segmentation {
    assert!(!v.is_empty(), "label vector must not be empty");
    let mut boundaries: Vec<usize> = v
        .iter()
        .enumerate()
        .filter_map(|(i, &is_boundary)| is_boundary.then_some(i))
        .collect();
    if boundaries.last() != Some(&(v.len() - 1)) {
        boundaries.push(v.len() - 1);
    }
    Segmentation::new(boundaries, v.len())
        .expect("indicator positions are strictly increasing and in range")
}
