//! Metric computation over evaluation runs.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::scalar::{cast_usize, lit, Scalar};
use crate::sequence::Sequence;

use super::{EvalRun, FrameOutcome};

/// Frames ignored after each re-initialization when averaging overlap
/// (the window starts at the re-initialization frame itself).
const ACCURACY_BURN_IN: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Accuracy<S> {
    pub value: S,
    /// Sequences excluded for having no countable frames.
    pub excluded: Vec<String>,
}

/// Mean overlap over counted frames, averaged per sequence and then over
/// sequences. Skipped frames, failure frames, initialization frames, and the
/// ten-frame window starting at each re-initialization are not counted.
pub fn accuracy<S: Scalar>(runs: &[EvalRun<S>]) -> Result<Accuracy<S>> {
    if runs.is_empty() {
        return Err(Error::Protocol("no runs to score".into()));
    }
    let mut per_sequence = Vec::new();
    let mut excluded = Vec::new();
    for run in runs {
        let mut burned = vec![false; run.frames.len()];
        for &r in &run.reinits {
            for b in burned.iter_mut().skip(r).take(ACCURACY_BURN_IN) {
                *b = true;
            }
        }
        let mut acc = S::zero();
        let mut count = 0usize;
        for (i, frame) in run.frames.iter().enumerate() {
            if let FrameOutcome::Tracked(v) = frame {
                if !burned[i] {
                    acc += *v;
                    count += 1;
                }
            }
        }
        if count == 0 {
            excluded.push(run.sequence.clone());
        } else {
            per_sequence.push(acc / cast_usize::<S>(count));
        }
    }
    if per_sequence.is_empty() {
        return Err(Error::Protocol(
            "every run was excluded: no countable frames".into(),
        ));
    }
    let value = per_sequence.iter().copied().sum::<S>() / cast_usize::<S>(per_sequence.len());
    Ok(Accuracy { value, excluded })
}

/// Mean failure count per sequence.
pub fn robustness<S: Scalar>(runs: &[EvalRun<S>]) -> Result<S> {
    if runs.is_empty() {
        return Err(Error::Protocol("no runs to score".into()));
    }
    let total: usize = runs.iter().map(|r| r.failures.len()).sum();
    Ok(lit::<S>(total as f64) / cast_usize::<S>(runs.len()))
}

/// A failure-free tracking segment: the overlaps collected after one
/// (re)initialization, and whether the segment ended in a failure.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment<S> {
    pub overlaps: Vec<S>,
    pub ends_in_failure: bool,
}

/// Splits a run into segments anchored at every initialization frame.
/// Segments that reach the end of the sequence without failing are kept but
/// marked; empty non-failing segments (an initialization on the last frame)
/// are dropped.
pub fn segments_of<S: Scalar>(run: &EvalRun<S>) -> Vec<Segment<S>> {
    let mut segments = Vec::new();
    let n = run.frames.len();
    let mut anchors = vec![0usize];
    anchors.extend(run.reinits.iter().copied());
    for &a in &anchors {
        let mut overlaps = Vec::new();
        let mut ends_in_failure = false;
        for i in a + 1..n {
            match run.frames[i] {
                FrameOutcome::Tracked(v) => overlaps.push(v),
                FrameOutcome::Failure => {
                    ends_in_failure = true;
                    break;
                }
                FrameOutcome::Init | FrameOutcome::Skipped => break,
            }
        }
        if !overlaps.is_empty() || ends_in_failure {
            segments.push(Segment {
                overlaps,
                ends_in_failure,
            });
        }
    }
    segments
}

/// Averaging interval for the expected average overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EaoInterval {
    Fixed(usize, usize),
    /// `[100, 356]` for long sequences (mean length >= 712), otherwise
    /// `[ceil(0.1 L), ceil(0.5 L)]` of the mean run length `L`.
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EAOCurve<S> {
    /// `phi[n - 1]` is the expected overlap at segment length `n`.
    pub phi: Vec<S>,
    pub interval: (usize, usize),
    pub eao: S,
    pub segments: usize,
}

fn resolve_interval<S: Scalar>(runs: &[EvalRun<S>], interval: EaoInterval) -> (usize, usize) {
    match interval {
        EaoInterval::Fixed(lo, hi) => (lo.max(1), hi.max(lo.max(1))),
        EaoInterval::Auto => {
            let mean_len =
                runs.iter().map(|r| r.frames.len()).sum::<usize>() as f64 / runs.len() as f64;
            if mean_len >= 712.0 {
                (100, 356)
            } else {
                let lo = (0.1 * mean_len).ceil() as usize;
                let hi = (0.5 * mean_len).ceil() as usize;
                (lo.max(1), hi.max(lo.max(1)))
            }
        }
    }
}

fn eao_from_segments<S: Scalar>(
    segments: &[Segment<S>],
    interval: (usize, usize),
) -> Result<EAOCurve<S>> {
    if segments.is_empty() {
        return Err(Error::Protocol("no tracking segments for EAO".into()));
    }
    let max_len = segments.iter().map(|s| s.overlaps.len()).max().unwrap();
    let any_failure = segments.iter().any(|s| s.ends_in_failure);
    let curve_len = if any_failure {
        max_len.max(interval.1)
    } else {
        max_len
    };
    if curve_len == 0 {
        return Err(Error::Protocol(
            "all segments are empty; nothing to average".into(),
        ));
    }
    let mut phi = Vec::with_capacity(curve_len);
    for n in 1..=curve_len {
        let mut acc = S::zero();
        let mut count = 0usize;
        for seg in segments {
            // Segments that ended in failure are zero-padded past the
            // failure point; segments that reached the sequence end only
            // count for lengths they actually cover.
            if !seg.ends_in_failure && seg.overlaps.len() < n {
                continue;
            }
            let sum: S = seg.overlaps.iter().take(n).copied().sum();
            acc += sum / cast_usize::<S>(n);
            count += 1;
        }
        if count == 0 {
            break;
        }
        phi.push(acc / cast_usize::<S>(count));
    }
    if phi.is_empty() {
        return Err(Error::Protocol("empty expected-overlap curve".into()));
    }
    let lo = interval.0.min(phi.len());
    let hi = interval.1.min(phi.len());
    if lo == 0 || lo > hi {
        return Err(Error::Protocol(format!(
            "EAO interval [{}, {}] lies outside the curve (length {})",
            interval.0,
            interval.1,
            phi.len()
        )));
    }
    let eao = phi[lo - 1..hi].iter().copied().sum::<S>() / cast_usize::<S>(hi - lo + 1);
    Ok(EAOCurve {
        phi,
        interval: (lo, hi),
        eao,
        segments: segments.len(),
    })
}

/// Expected average overlap over all runs. The averaging interval clamps to
/// the computable curve length; the effective bounds are reported in the
/// returned curve.
pub fn eao<S: Scalar>(runs: &[EvalRun<S>], interval: EaoInterval) -> Result<EAOCurve<S>> {
    if runs.is_empty() {
        return Err(Error::Protocol("no runs to score".into()));
    }
    let segments: Vec<Segment<S>> = runs.iter().flat_map(|r| segments_of(r)).collect();
    eao_from_segments(&segments, resolve_interval(runs, interval))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuccessCurve<S> {
    pub thresholds: Vec<S>,
    pub success: Vec<S>,
    pub auc: S,
}

/// Default success-plot thresholds: 0, 0.01, ..., 1.
pub fn default_thresholds<S: Scalar>() -> Vec<S> {
    (0..=100).map(|i| lit::<S>(i as f64 / 100.0)).collect()
}

/// Success rate per threshold (`overlap > threshold`, strict) over a
/// no-reset run, and its area under the curve.
pub fn ope_success<S: Scalar>(run: &EvalRun<S>, thresholds: &[S]) -> Result<SuccessCurve<S>> {
    if !run.failures.is_empty() {
        return Err(Error::Protocol(
            "success analysis requires a run without resets".into(),
        ));
    }
    let overlaps = run.tracked_overlaps();
    if overlaps.is_empty() {
        return Err(Error::Protocol("run has no tracked frames".into()));
    }
    if thresholds.is_empty() {
        return Err(Error::Protocol("no thresholds given".into()));
    }
    let n = cast_usize::<S>(overlaps.len());
    let success: Vec<S> = thresholds
        .iter()
        .map(|&t| {
            let hits = overlaps.iter().filter(|&&v| v > t).count();
            cast_usize::<S>(hits) / n
        })
        .collect();
    let auc = success.iter().copied().sum::<S>() / cast_usize::<S>(success.len());
    Ok(SuccessCurve {
        thresholds: thresholds.to_vec(),
        success,
        auc,
    })
}

/// Per-attribute expected average overlap. Sequence-level tags select whole
/// runs; frame-level tags restrict segments to the maximal tagged frame
/// spans (a span segment ends in failure when the frame right after it is a
/// failure). Attributes with no data are omitted and reported as warnings.
pub fn attribute_breakdown<S: Scalar>(
    runs: &[EvalRun<S>],
    sequences: &[Sequence<S>],
    interval: EaoInterval,
) -> Result<(BTreeMap<String, EAOCurve<S>>, Vec<String>)> {
    if runs.len() != sequences.len() {
        return Err(Error::Protocol(format!(
            "{} runs but {} sequences",
            runs.len(),
            sequences.len()
        )));
    }
    let mut tags: BTreeSet<String> = BTreeSet::new();
    for seq in sequences {
        tags.extend(seq.sequence_attributes().iter().cloned());
        for fa in seq.frame_attributes() {
            tags.extend(fa.iter().cloned());
        }
    }
    let resolved = resolve_interval(runs, interval);
    let mut out = BTreeMap::new();
    let mut warnings = Vec::new();
    for tag in tags {
        let mut segments: Vec<Segment<S>> = Vec::new();
        for (run, seq) in runs.iter().zip(sequences) {
            if seq.sequence_attributes().contains(&tag) {
                segments.extend(segments_of(run));
            } else {
                segments.extend(tagged_span_segments(run, seq, &tag));
            }
        }
        match eao_from_segments(&segments, resolved) {
            Ok(curve) => {
                out.insert(tag, curve);
            }
            Err(_) => warnings.push(format!("attribute {tag}: no data, omitted")),
        }
    }
    Ok((out, warnings))
}

/// Segments restricted to maximal contiguous frame spans carrying `tag`.
fn tagged_span_segments<S: Scalar>(
    run: &EvalRun<S>,
    seq: &Sequence<S>,
    tag: &str,
) -> Vec<Segment<S>> {
    let tagged: Vec<bool> = seq
        .frame_attributes()
        .iter()
        .map(|a| a.contains(tag))
        .collect();
    let n = run.frames.len().min(tagged.len());
    let mut segments = Vec::new();
    let mut overlaps: Vec<S> = Vec::new();
    for i in 0..n {
        let in_span = tagged[i];
        match (&run.frames[i], in_span) {
            (FrameOutcome::Tracked(v), true) => overlaps.push(*v),
            (FrameOutcome::Failure, true) => {
                segments.push(Segment {
                    overlaps: std::mem::take(&mut overlaps),
                    ends_in_failure: true,
                });
            }
            _ => {
                if !overlaps.is_empty() {
                    let ends_in_failure = matches!(run.frames[i], FrameOutcome::Failure);
                    segments.push(Segment {
                        overlaps: std::mem::take(&mut overlaps),
                        ends_in_failure,
                    });
                }
            }
        }
    }
    if !overlaps.is_empty() {
        segments.push(Segment {
            overlaps,
            ends_in_failure: false,
        });
    }
    segments
}
