//! Tracker evaluation: the reset-based protocol (accuracy, robustness,
//! expected average overlap) and one-pass evaluation (success/AUC), with
//! attribute breakdowns and report emission.
//!
//! Reset protocol: the tracker is initialized on frame 0 from ground truth.
//! A failure is declared on the first tracked frame whose overlap with
//! ground truth drops to the failure threshold (default exactly 0); that
//! frame and the four after it are skipped, and the tracker is re-initialized
//! from ground truth five frames after the failure. Initialization frames
//! carry no overlap. Accuracy ignores a ten-frame window starting at each
//! re-initialization.

mod metrics;
mod report;

pub use metrics::{
    accuracy, attribute_breakdown, default_thresholds, eao, ope_success, robustness, segments_of,
    Accuracy, EAOCurve, EaoInterval, Segment, SuccessCurve,
};
pub use report::{write_reports, write_trajectories, ReportFiles};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::geometry::BoundingBox;
use crate::scalar::Scalar;
use crate::sequence::Sequence;
use crate::tracker::{TrackState, TrackerConfig};

/// Per-frame outcome in an evaluation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameOutcome<S> {
    /// Tracker (re)initialized on this frame; no prediction recorded.
    Init,
    /// Tracked frame with its ground-truth overlap.
    Tracked(S),
    /// Failure declared on this frame.
    Failure,
    /// Frame skipped while waiting for re-initialization.
    Skipped,
}

/// One tracker-on-sequence run. `boxes` carries the per-frame box record
/// for trajectory emission: the initialization box on init frames, the
/// prediction on tracked and failure frames, nothing on skipped frames.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRun<S> {
    pub sequence: String,
    pub frames: Vec<FrameOutcome<S>>,
    pub failures: Vec<usize>,
    pub reinits: Vec<usize>,
    pub boxes: Vec<Option<BoundingBox<S>>>,
}

impl<S: Scalar> EvalRun<S> {
    /// Overlaps of tracked frames, in order.
    pub fn tracked_overlaps(&self) -> Vec<S> {
        self.frames
            .iter()
            .filter_map(|f| match f {
                FrameOutcome::Tracked(v) => Some(*v),
                _ => None,
            })
            .collect()
    }
}

/// Anything that can be driven frame-by-frame by the protocols.
pub trait SequenceTracker<S: Scalar> {
    /// (Re)initializes on a frame with a ground-truth box.
    fn init(&mut self, frame: &Frame, bbox: BoundingBox<S>) -> Result<()>;
    /// Tracks the next frame, returning the predicted box.
    fn track(&mut self, frame: &Frame) -> Result<BoundingBox<S>>;
}

/// The engine tracker behind the [`SequenceTracker`] interface.
pub struct CorrelationTracker<S: Scalar> {
    cfg: TrackerConfig<S>,
    state: Option<TrackState<S>>,
}

impl<S: Scalar> CorrelationTracker<S> {
    pub fn new(cfg: TrackerConfig<S>) -> Self {
        CorrelationTracker { cfg, state: None }
    }
}

impl<S: Scalar> SequenceTracker<S> for CorrelationTracker<S> {
    fn init(&mut self, frame: &Frame, bbox: BoundingBox<S>) -> Result<()> {
        self.state = Some(TrackState::init(frame, bbox, self.cfg.clone())?);
        Ok(())
    }

    fn track(&mut self, frame: &Frame) -> Result<BoundingBox<S>> {
        self.state
            .as_mut()
            .ok_or_else(|| Error::Protocol("tracker not initialized".into()))?
            .step(frame)
    }
}

/// Reset-protocol options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VotOptions<S> {
    /// Overlap at or below this value is a failure.
    pub fail_threshold: S,
    /// Frames skipped after a failure before re-initialization.
    pub reinit_gap: usize,
}

impl<S: Scalar> Default for VotOptions<S> {
    fn default() -> Self {
        VotOptions {
            fail_threshold: S::zero(),
            reinit_gap: 5,
        }
    }
}

fn attach_frame(err: Error, frame: usize) -> Error {
    Error::Protocol(format!("tracker failed at frame {frame}: {err}"))
}

/// Runs the reset-based protocol over one sequence.
pub fn run_vot<S: Scalar>(
    tracker: &mut dyn SequenceTracker<S>,
    seq: &Sequence<S>,
    opts: &VotOptions<S>,
) -> Result<EvalRun<S>> {
    let n = seq.len();
    if n < 2 {
        return Err(Error::Protocol(format!(
            "sequence {} too short to evaluate",
            seq.name()
        )));
    }
    let gt = seq.groundtruth();
    let mut frames = vec![FrameOutcome::Skipped; n];
    let mut boxes: Vec<Option<BoundingBox<S>>> = vec![None; n];
    let mut failures = Vec::new();
    let mut reinits = Vec::new();

    let first = seq.frame(0)?;
    tracker
        .init(&first, gt[0])
        .map_err(|e| attach_frame(e, 0))?;
    frames[0] = FrameOutcome::Init;
    boxes[0] = Some(gt[0]);

    let mut i = 1usize;
    while i < n {
        let frame = seq.frame(i)?;
        let pred = tracker
            .track(&frame)
            .map_err(|e| attach_frame(e, i))?;
        let overlap = pred.iou(&gt[i]);
        boxes[i] = Some(pred);
        if overlap <= opts.fail_threshold {
            frames[i] = FrameOutcome::Failure;
            failures.push(i);
            for j in i + 1..(i + opts.reinit_gap).min(n) {
                frames[j] = FrameOutcome::Skipped;
            }
            let r = i + opts.reinit_gap;
            if r < n {
                let rf = seq.frame(r)?;
                tracker
                    .init(&rf, gt[r])
                    .map_err(|e| attach_frame(e, r))?;
                frames[r] = FrameOutcome::Init;
                boxes[r] = Some(gt[r]);
                reinits.push(r);
                i = r + 1;
            } else {
                break;
            }
        } else {
            frames[i] = FrameOutcome::Tracked(overlap);
            i += 1;
        }
    }
    Ok(EvalRun {
        sequence: seq.name().to_string(),
        frames,
        failures,
        reinits,
        boxes,
    })
}

/// Runs one-pass evaluation (no resets) over one sequence.
pub fn run_ope<S: Scalar>(
    tracker: &mut dyn SequenceTracker<S>,
    seq: &Sequence<S>,
) -> Result<EvalRun<S>> {
    let n = seq.len();
    if n < 2 {
        return Err(Error::Protocol(format!(
            "sequence {} too short to evaluate",
            seq.name()
        )));
    }
    let gt = seq.groundtruth();
    let mut frames = Vec::with_capacity(n);
    let mut boxes = Vec::with_capacity(n);
    let first = seq.frame(0)?;
    tracker
        .init(&first, gt[0])
        .map_err(|e| attach_frame(e, 0))?;
    frames.push(FrameOutcome::Init);
    boxes.push(Some(gt[0]));
    for i in 1..n {
        let frame = seq.frame(i)?;
        let pred = tracker
            .track(&frame)
            .map_err(|e| attach_frame(e, i))?;
        frames.push(FrameOutcome::Tracked(pred.iou(&gt[i])));
        boxes.push(Some(pred));
    }
    Ok(EvalRun {
        sequence: seq.name().to_string(),
        frames,
        failures: Vec::new(),
        reinits: Vec::new(),
        boxes,
    })
}

/// Evaluation protocol selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    Vot,
    Ope,
}

/// Runs the correlation tracker over every sequence on a bounded worker
/// pool. Results keep the input order regardless of completion order.
pub fn evaluate_dataset<S: Scalar + Send + Sync>(
    sequences: &[Sequence<S>],
    cfg: &TrackerConfig<S>,
    protocol: Protocol,
    opts: &VotOptions<S>,
    jobs: usize,
) -> Result<Vec<EvalRun<S>>> {
    if sequences.is_empty() {
        return Err(Error::Protocol("no sequences to evaluate".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Protocol(format!("cannot build worker pool: {e}")))?;
    pool.install(|| {
        sequences
            .par_iter()
            .map(|seq| {
                let mut tracker = CorrelationTracker::new(cfg.clone());
                match protocol {
                    Protocol::Vot => run_vot(&mut tracker, seq, opts),
                    Protocol::Ope => run_ope(&mut tracker, seq),
                }
            })
            .collect()
    })
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// Tracker that always outputs ground truth (needs the sequence).
    pub struct PerfectTracker<'a, S: Scalar> {
        seq: &'a Sequence<S>,
        cursor: usize,
    }

    impl<'a, S: Scalar> PerfectTracker<'a, S> {
        pub fn new(seq: &'a Sequence<S>) -> Self {
            PerfectTracker { seq, cursor: 0 }
        }
    }

    impl<S: Scalar> SequenceTracker<S> for PerfectTracker<'_, S> {
        fn init(&mut self, _frame: &Frame, _bbox: BoundingBox<S>) -> Result<()> {
            Ok(())
        }

        fn track(&mut self, _frame: &Frame) -> Result<BoundingBox<S>> {
            self.cursor += 1;
            Ok(self.seq.groundtruth()[self.cursor.min(self.seq.len() - 1)])
        }
    }

    /// Tracker that freezes on whatever box it was initialized with.
    pub struct FrozenTracker<S: Scalar> {
        bbox: Option<BoundingBox<S>>,
    }

    impl<S: Scalar> FrozenTracker<S> {
        pub fn new() -> Self {
            FrozenTracker { bbox: None }
        }
    }

    impl<S: Scalar> SequenceTracker<S> for FrozenTracker<S> {
        fn init(&mut self, _frame: &Frame, bbox: BoundingBox<S>) -> Result<()> {
            self.bbox = Some(bbox);
            Ok(())
        }

        fn track(&mut self, _frame: &Frame) -> Result<BoundingBox<S>> {
            self.bbox
                .ok_or_else(|| Error::Protocol("not initialized".into()))
        }
    }

    /// Fixed far-away box, failing every tracked frame.
    pub struct LostTracker;

    impl<S: Scalar> SequenceTracker<S> for LostTracker {
        fn init(&mut self, _frame: &Frame, _bbox: BoundingBox<S>) -> Result<()> {
            Ok(())
        }

        fn track(&mut self, _frame: &Frame) -> Result<BoundingBox<S>> {
            BoundingBox::new(
                S::from_f64(1e6).unwrap(),
                S::from_f64(1e6).unwrap(),
                S::one(),
                S::one(),
            )
        }
    }

    /// Constant-size sequence of blank frames with static ground truth.
    pub fn blank_sequence(name: &str, len: usize) -> Sequence<f64> {
        let frames = vec![Frame::filled(32, 32, 0); len];
        let gt = vec![BoundingBox::new(8.0, 8.0, 8.0, 8.0).unwrap(); len];
        Sequence::in_memory(name.to_string(), frames, gt).unwrap()
    }
}
