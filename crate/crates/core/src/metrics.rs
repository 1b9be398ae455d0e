//! Evaluation metrics: P_k, Rouge-1/2/L over serialized labels,
//! micro-averaged label F1 with max-overlap alignment, and the fraction of
//! outputs containing erroneous boundary positions.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::codec::{decode_combined, decode_segmentation, TargetMode};
use crate::error::{Error, Result};
use crate::tokenize::tokenize_lower;
use crate::types::Segmentation;

/// Precision / recall / F1 triple as reported by the Rouge metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeScore {
    #[serde(rename = "p")]
    pub precision: f64,
    #[serde(rename = "r")]
    pub recall: f64,
    #[serde(rename = "f")]
    pub f1: f64,
}

impl RougeScore {
    /// Build a score from precision and recall; F1 is their harmonic mean,
    /// 0 when both are 0.
    pub fn from_pr(precision: f64, recall: f64) -> Self {
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Self {
            precision,
            recall,
            f1,
        }
    }

    pub const ZERO: RougeScore = RougeScore {
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
    };
}

/// Window size for P_k: half the mean reference segment length, rounded
/// half-up and floored at 1.
pub fn compute_k(reference: &Segmentation) -> usize {
    let n_sentences = reference.num_sentences() as f64;
    let n_segments = reference.num_segments() as f64;
    let k = (n_sentences / (2.0 * n_segments)).round() as usize;
    k.max(1)
}

/// P_k: the fraction of sentence-index windows of width `k` on which the
/// reference and hypothesis disagree about whether the two endpoints fall in
/// the same segment.
///
/// When `k` is `None` it is computed from the reference via [`compute_k`];
/// either way the effective k is clamped to `[1, |S| - 1]`. Windows are
/// `(i, i + k)` for `i` in `0..|S| - k`, and two positions are in the same
/// segment iff no boundary lies in `[i, i + k - 1]`.
pub fn pk(reference: &Segmentation, hypothesis: &Segmentation, k: Option<usize>) -> Result<f64> {
    if reference.num_sentences() != hypothesis.num_sentences() {
        return Err(Error::SentenceCountMismatch {
            reference: reference.num_sentences(),
            hypothesis: hypothesis.num_sentences(),
        });
    }
    let n = reference.num_sentences();
    if n < 2 {
        return Err(Error::TooFewSentences { got: n, min: 2 });
    }
    let k = k.unwrap_or_else(|| compute_k(reference)).clamp(1, n - 1);
    let ref_ids = reference.sentence_segment_ids();
    let hyp_ids = hypothesis.sentence_segment_ids();
    let disagreements = (0..n - k)
        .filter(|&i| (ref_ids[i] == ref_ids[i + k]) != (hyp_ids[i] == hyp_ids[i + k]))
        .count();
    Ok(disagreements as f64 / (n - k) as f64)
}

/// Join segment labels with `" | "` for Rouge scoring.
pub fn serialize_labels(labels: &[String]) -> String {
    labels.join(" | ")
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

/// Rouge-N with clipped n-gram counts over lowercased tokens.
pub fn rouge_n(pred: &str, reference: &str, n: usize) -> RougeScore {
    assert!(n >= 1, "n-gram order must be >= 1");
    let pred_tokens = tokenize_lower(pred);
    let ref_tokens = tokenize_lower(reference);
    let pred_counts = ngram_counts(&pred_tokens, n);
    let ref_counts = ngram_counts(&ref_tokens, n);
    let overlap: usize = pred_counts
        .iter()
        .map(|(gram, &c)| c.min(*ref_counts.get(gram).unwrap_or(&0)))
        .sum();
    let pred_total: usize = pred_counts.values().sum();
    let ref_total: usize = ref_counts.values().sum();
    let precision = if pred_total > 0 {
        overlap as f64 / pred_total as f64
    } else {
        0.0
    };
    let recall = if ref_total > 0 {
        overlap as f64 / ref_total as f64
    } else {
        0.0
    };
    RougeScore::from_pr(precision, recall)
}

/// Length of the longest common subsequence of two token slices.
fn lcs_len(a: &[String], b: &[String]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Rouge-L: LCS length over lowercased token sequences, with recall against
/// the reference length and precision against the prediction length.
pub fn rouge_l(pred: &str, reference: &str) -> RougeScore {
    let pred_tokens = tokenize_lower(pred);
    let ref_tokens = tokenize_lower(reference);
    let lcs = lcs_len(&pred_tokens, &ref_tokens);
    let precision = if pred_tokens.is_empty() {
        0.0
    } else {
        lcs as f64 / pred_tokens.len() as f64
    };
    let recall = if ref_tokens.is_empty() {
        0.0
    } else {
        lcs as f64 / ref_tokens.len() as f64
    };
    RougeScore::from_pr(precision, recall)
}

/// Map every hypothesis segment to the reference segment it shares the most
/// sentences with (many-to-one; ties go to the earlier reference segment).
pub fn align_segments(hypothesis: &Segmentation, reference: &Segmentation) -> Result<Vec<usize>> {
    if reference.num_sentences() != hypothesis.num_sentences() {
        return Err(Error::SentenceCountMismatch {
            reference: reference.num_sentences(),
            hypothesis: hypothesis.num_sentences(),
        });
    }
    let ref_spans = reference.segment_spans();
    let mut mapping = Vec::with_capacity(hypothesis.num_segments());
    for (h_start, h_end) in hypothesis.segment_spans() {
        let mut best = 0;
        let mut best_overlap = 0;
        for (r_idx, &(r_start, r_end)) in ref_spans.iter().enumerate() {
            if r_start > h_end {
                break;
            }
            let lo = h_start.max(r_start);
            let hi = h_end.min(r_end);
            let overlap = if lo <= hi { hi - lo + 1 } else { 0 };
            if overlap > best_overlap {
                best_overlap = overlap;
                best = r_idx;
            }
        }
        mapping.push(best);
    }
    Ok(mapping)
}

fn fold_label(label: &str) -> String {
    label.trim().to_lowercase()
}

/// Micro-averaged label F1 with max-overlap alignment.
///
/// Each hypothesis segment predicts its label against the label of its
/// aligned reference segment. Because alignment gives every prediction
/// exactly one gold label, the micro-F1 reduces to accuracy over hypothesis
/// segments, which is the value returned. Labels are compared after trimming
/// and case-folding.
pub fn label_f1(
    hyp: &crate::types::LabeledSegmentation,
    reference: &crate::types::LabeledSegmentation,
) -> Result<f64> {
    let (correct, total) = label_match_counts(hyp, reference)?;
    Ok(correct as f64 / total as f64)
}

/// (matching predictions, total predictions) for one document; summing these
/// across a corpus yields the micro-averaged F1.
pub fn label_match_counts(
    hyp: &crate::types::LabeledSegmentation,
    reference: &crate::types::LabeledSegmentation,
) -> Result<(usize, usize)> {
    let mapping = align_segments(hyp.segmentation(), reference.segmentation())?;
    let correct = mapping
        .iter()
        .zip(hyp.labels())
        .filter(|&(&r, pred)| fold_label(pred) == fold_label(&reference.labels()[r]))
        .count();
    Ok((correct, hyp.labels().len()))
}

/// Fraction of raw outputs whose decode drops at least one part.
///
/// `mode` selects the decoder; labels-only sequences have no positions to
/// validate, so their fraction is always 0.
pub fn erroneous_fraction(
    raws: &[String],
    num_sentences: &[usize],
    mode: TargetMode,
) -> Result<f64> {
    if raws.len() != num_sentences.len() {
        return Err(Error::LengthMismatch {
            left: raws.len(),
            right: num_sentences.len(),
        });
    }
    if raws.is_empty() {
        return Ok(0.0);
    }
    let erroneous = raws
        .iter()
        .zip(num_sentences)
        .filter(|(raw, &n)| match mode {
            TargetMode::SegOnly => decode_segmentation(raw, n).1 >= 1,
            TargetMode::Combined => decode_combined(raw, n).1 >= 1,
            TargetMode::LabelsOnly => false,
        })
        .count();
    Ok(erroneous as f64 / raws.len() as f64)
}

/// Per-document inputs for a corpus evaluation run.
#[derive(Debug, Clone)]
pub struct DocumentEval {
    pub ref_seg: Segmentation,
    pub hyp_seg: Segmentation,
    pub ref_labels: Option<Vec<String>>,
    pub hyp_labels: Option<Vec<String>>,
    /// Parts dropped while decoding the hypothesis, when it came from a raw
    /// target sequence.
    pub decode_dropped: usize,
}

/// Corpus-level evaluation report.
///
/// `pk` and the Rouge triples are means of per-document values; `label_f1`
/// pools match counts across documents (micro average) and is `None` when no
/// document carries labels on both sides.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub pk: f64,
    pub rouge1: RougeScore,
    pub rouge2: RougeScore,
    #[serde(rename = "rougeL")]
    pub rouge_l: RougeScore,
    pub label_f1: Option<f64>,
    pub erroneous_fraction: f64,
    pub documents_evaluated: usize,
    /// Effective k used for each document, in input order.
    pub k_values: Vec<usize>,
}

impl EvalReport {
    /// Scale all rates by 100 for table-style display.
    pub fn into_percent(mut self) -> Self {
        self.pk *= 100.0;
        for score in [&mut self.rouge1, &mut self.rouge2, &mut self.rouge_l] {
            score.precision *= 100.0;
            score.recall *= 100.0;
            score.f1 *= 100.0;
        }
        self.label_f1 = self.label_f1.map(|v| v * 100.0);
        self.erroneous_fraction *= 100.0;
        self
    }
}

fn mean_rouge(scores: &[RougeScore]) -> RougeScore {
    if scores.is_empty() {
        return RougeScore::ZERO;
    }
    let n = scores.len() as f64;
    RougeScore {
        precision: scores.iter().map(|s| s.precision).sum::<f64>() / n,
        recall: scores.iter().map(|s| s.recall).sum::<f64>() / n,
        f1: scores.iter().map(|s| s.f1).sum::<f64>() / n,
    }
}

/// Evaluate a corpus of (reference, hypothesis) pairs.
///
/// `k_override` fixes the P_k window for every document instead of deriving
/// it from each reference.
pub fn evaluate_corpus(docs: &[DocumentEval], k_override: Option<usize>) -> Result<EvalReport> {
    if docs.is_empty() {
        return Err(Error::NoDocuments);
    }
    let mut pk_values = Vec::with_capacity(docs.len());
    let mut k_values = Vec::with_capacity(docs.len());
    let mut rouge1_scores = Vec::new();
    let mut rouge2_scores = Vec::new();
    let mut rouge_l_scores = Vec::new();
    let mut label_correct = 0;
    let mut label_total = 0;
    let mut erroneous_docs = 0;

    for doc in docs {
        let n = doc.ref_seg.num_sentences();
        let k = k_override
            .unwrap_or_else(|| compute_k(&doc.ref_seg))
            .clamp(1, n.saturating_sub(1).max(1));
        pk_values.push(pk(&doc.ref_seg, &doc.hyp_seg, Some(k))?);
        k_values.push(k);
        if doc.decode_dropped >= 1 {
            erroneous_docs += 1;
        }
        if let (Some(ref_labels), Some(hyp_labels)) = (&doc.ref_labels, &doc.hyp_labels) {
            let ref_text = serialize_labels(ref_labels);
            let hyp_text = serialize_labels(hyp_labels);
            rouge1_scores.push(rouge_n(&hyp_text, &ref_text, 1));
            rouge2_scores.push(rouge_n(&hyp_text, &ref_text, 2));
            rouge_l_scores.push(rouge_l(&hyp_text, &ref_text));

            let reference = crate::types::LabeledSegmentation::new(
                doc.ref_seg.clone(),
                ref_labels.clone(),
            )?;
            let hypothesis = crate::types::LabeledSegmentation::new(
                doc.hyp_seg.clone(),
                hyp_labels.clone(),
            )?;
            let (correct, total) = label_match_counts(&hypothesis, &reference)?;
            label_correct += correct;
            label_total += total;
        }
    }

    Ok(EvalReport {
        pk: pk_values.iter().sum::<f64>() / pk_values.len() as f64,
        rouge1: mean_rouge(&rouge1_scores),
        rouge2: mean_rouge(&rouge2_scores),
        rouge_l: mean_rouge(&rouge_l_scores),
        label_f1: (label_total > 0).then(|| label_correct as f64 / label_total as f64),
        erroneous_fraction: erroneous_docs as f64 / docs.len() as f64,
        documents_evaluated: docs.len(),
        k_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::LabeledSegmentation;

    fn seg(boundaries: &[usize], n: usize) -> Segmentation {
        Segmentation::new(boundaries.to_vec(), n).unwrap()
    }

    fn labeled(boundaries: &[usize], labels: &[&str], n: usize) -> LabeledSegmentation {
        LabeledSegmentation::new(seg(boundaries, n), labels.iter().map(|s| s.to_string()).collect())
            .unwrap()
    }

    #[test]
    fn k_is_half_mean_segment_length() {
        // 100 sentences in 5 segments: mean length 20, k = 10
        let r = seg(&[19, 39, 59, 79, 99], 100);
        assert_eq!(compute_k(&r), 10);
        // floor at 1
        let r = seg(&[0, 1, 2], 3);
        assert_eq!(compute_k(&r), 1);
        // 7 / (2 * 2) = 1.75 rounds half-up to 2
        let r = seg(&[3, 6], 7);
        assert_eq!(compute_k(&r), 2);
    }

    #[test]
    fn pk_zero_on_identical_segmentations() {
        let r = seg(&[2, 5, 9], 10);
        assert_eq!(pk(&r, &r, None).unwrap(), 0.0);
        assert_eq!(pk(&r, &r, Some(3)).unwrap(), 0.0);
    }

    #[test]
    fn pk_hand_computed_miss() {
        // ref splits at 1 and 3, hyp sees one segment; k = 1.
        // Windows (0,1), (1,2), (2,3): ref same-segment = [T, F, T],
        // hyp = [T, T, T] -> one disagreement out of three windows.
        let r = seg(&[1, 3], 4);
        let h = seg(&[3], 4);
        let value = pk(&r, &h, Some(1)).unwrap();
        assert!((value - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn pk_rejects_undefined_inputs() {
        let r = seg(&[0], 1);
        assert!(pk(&r, &r, None).is_err());
        let r = seg(&[4], 5);
        let h = seg(&[3], 4);
        assert!(pk(&r, &h, None).is_err());
    }

    #[test]
    fn serialize_joins_with_delimiter() {
        assert_eq!(serialize_labels(&["A".into(), "B".into()]), "A | B");
        assert_eq!(serialize_labels(&[]), "");
    }

    #[test]
    fn rouge_n_hand_counts() {
        let s = rouge_n("a b c", "a b c", 1);
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
        // unigram overlap {a, b} = 2 of 3 each side
        let s = rouge_n("a b c", "a b d", 1);
        assert!((s.f1 - 2.0 / 3.0).abs() < 1e-12);
        assert!((s.precision - 2.0 / 3.0).abs() < 1e-12);
        // bigram overlap {"a b"} = 1 of 2 each side
        let s = rouge_n("a b c", "a b d", 2);
        assert!((s.f1 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rouge_n_clips_repeats() {
        // pred has "a" twice but ref only once: clipped overlap = 1 + "b" = 2
        let s = rouge_n("a a b", "a b b", 1);
        assert!((s.precision - 2.0 / 3.0).abs() < 1e-12);
        assert!((s.recall - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rouge_empty_sides_are_zero() {
        assert_eq!(rouge_n("", "a b", 1), RougeScore::ZERO);
        assert_eq!(rouge_n("a b", "", 1), RougeScore::ZERO);
        assert_eq!(rouge_l("", ""), RougeScore::ZERO);
    }

    #[test]
    fn rouge_l_hand_counts() {
        let s = rouge_l("a b c", "a b c");
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
        // LCS("a c b", "a b c") = 2
        let s = rouge_l("a c b", "a b c");
        assert!((s.f1 - 2.0 / 3.0).abs() < 1e-12);
        let s = rouge_l("x y", "a b");
        assert_eq!(s, RougeScore::ZERO);
    }

    #[test]
    fn rouge_swaps_precision_and_recall() {
        let a = rouge_n("a b c d", "a b", 1);
        let b = rouge_n("a b", "a b c d", 1);
        assert_eq!(a.precision, b.recall);
        assert_eq!(a.recall, b.precision);
        assert_eq!(a.f1, b.f1);
    }

    #[test]
    fn alignment_identity() {
        let r = seg(&[4, 9], 10);
        assert_eq!(align_segments(&r, &r).unwrap(), vec![0, 1]);
    }

    #[test]
    fn alignment_max_overlap() {
        // ref [0..4], [5..9]; hyp [0..6], [7..9]
        let r = seg(&[4, 9], 10);
        let h = seg(&[6, 9], 10);
        assert_eq!(align_segments(&h, &r).unwrap(), vec![0, 1]);
    }

    #[test]
    fn alignment_tie_prefers_earlier_reference() {
        // hyp segment [1..2] overlaps ref [0..1] and ref [2..3] by 1 each
        let r = seg(&[1, 3], 4);
        let h = seg(&[0, 2, 3], 4);
        assert_eq!(align_segments(&h, &r).unwrap(), vec![0, 0, 1]);
    }

    #[test]
    fn label_f1_exact_match() {
        let r = labeled(&[4, 9], &["A", "B"], 10);
        assert_eq!(label_f1(&r, &r).unwrap(), 1.0);
    }

    #[test]
    fn label_f1_half_wrong() {
        let r = labeled(&[4, 9], &["A", "B"], 10);
        let h = labeled(&[4, 9], &["A", "X"], 10);
        assert_eq!(label_f1(&h, &r).unwrap(), 0.5);
    }

    #[test]
    fn label_f1_over_segmentation_counts_both_correct() {
        // two hyp segments inside one ref segment, both labeled correctly
        let r = labeled(&[4, 9], &["A", "B"], 10);
        let h = labeled(&[2, 4, 9], &["A", "A", "B"], 10);
        assert_eq!(label_f1(&h, &r).unwrap(), 1.0);
    }

    #[test]
    fn label_comparison_folds_case_and_whitespace() {
        let r = labeled(&[3], &["History"], 4);
        let h = labeled(&[3], &["  hISTORY "], 4);
        assert_eq!(label_f1(&h, &r).unwrap(), 1.0);
    }

    #[test]
    fn erroneous_fraction_counts_dropping_decodes() {
        let raws: Vec<String> = vec![
            "1 | 3".into(),
            "10 | 31e | 299".into(),
            "10 | 31 | 413".into(),
            "0 | 2".into(),
        ]
        .into_iter()
        .collect();
        let ns = vec![4, 300, 300, 3];
        let f = erroneous_fraction(&raws, &ns, TargetMode::SegOnly).unwrap();
        assert_eq!(f, 0.5);
        assert!(erroneous_fraction(&raws, &ns[..2], TargetMode::SegOnly).is_err());
    }

    #[test]
    fn corpus_report_perfect_hypothesis() {
        let r = seg(&[2, 5], 6);
        let docs = vec![DocumentEval {
            ref_seg: r.clone(),
            hyp_seg: r,
            ref_labels: Some(vec!["A".into(), "B".into()]),
            hyp_labels: Some(vec!["A".into(), "B".into()]),
            decode_dropped: 0,
        }];
        let report = evaluate_corpus(&docs, None).unwrap();
        assert_eq!(report.pk, 0.0);
        assert_eq!(report.rouge1.f1, 1.0);
        assert_eq!(report.rouge_l.f1, 1.0);
        assert_eq!(report.label_f1, Some(1.0));
        assert_eq!(report.erroneous_fraction, 0.0);
        assert_eq!(report.documents_evaluated, 1);
    }

    #[test]
    fn corpus_report_without_labels_has_no_f1() {
        let r = seg(&[2, 5], 6);
        let docs = vec![DocumentEval {
            ref_seg: r.clone(),
            hyp_seg: r,
            ref_labels: None,
            hyp_labels: None,
            decode_dropped: 1,
        }];
        let report = evaluate_corpus(&docs, None).unwrap();
        assert_eq!(report.label_f1, None);
        assert_eq!(report.erroneous_fraction, 1.0);
        assert!(evaluate_corpus(&[], None).is_err());
    }

    #[test]
    fn percent_scaling() {
        let r = seg(&[2, 5], 6);
        let docs = vec![DocumentEval {
            ref_seg: r.clone(),
            hyp_seg: seg(&[5], 6),
            ref_labels: None,
            hyp_labels: None,
            decode_dropped: 0,
        }];
        let report = evaluate_corpus(&docs, Some(2)).unwrap();
        let pct = report.clone().into_percent();
        assert!((pct.pk - report.pk * 100.0).abs() < 1e-12);
    }
}
