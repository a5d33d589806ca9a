//! Annotated image sequences.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::geometry::BoundingBox;
use crate::scalar::Scalar;

/// Where a frame's pixels come from. Disk-backed sequences decode lazily;
/// in-memory sequences are used by the synthetic pipeline and tests.
#[derive(Debug, Clone)]
pub enum FrameSource {
    Path(PathBuf),
    Memory(Arc<Frame>),
}

/// A video sequence with exactly one ground-truth box and one attribute set
/// per frame. Immutable after construction; safe to share across evaluation
/// workers.
#[derive(Debug, Clone)]
pub struct Sequence<S> {
    name: String,
    frames: Vec<FrameSource>,
    groundtruth: Vec<BoundingBox<S>>,
    frame_attributes: Vec<BTreeSet<String>>,
    sequence_attributes: BTreeSet<String>,
}

impl<S: Scalar> Sequence<S> {
    pub fn new(
        name: String,
        frames: Vec<FrameSource>,
        groundtruth: Vec<BoundingBox<S>>,
        frame_attributes: Vec<BTreeSet<String>>,
        sequence_attributes: BTreeSet<String>,
    ) -> Result<Self> {
        if groundtruth.len() != frames.len() {
            return Err(Error::Dataset(format!(
                "sequence {name}: {} frames but {} ground-truth boxes",
                frames.len(),
                groundtruth.len()
            )));
        }
        if frame_attributes.len() != frames.len() {
            return Err(Error::Dataset(format!(
                "sequence {name}: {} frames but {} frame attribute sets",
                frames.len(),
                frame_attributes.len()
            )));
        }
        Ok(Sequence {
            name,
            frames,
            groundtruth,
            frame_attributes,
            sequence_attributes,
        })
    }

    /// Builds an in-memory sequence without attribute annotations.
    pub fn in_memory(
        name: String,
        frames: Vec<Frame>,
        groundtruth: Vec<BoundingBox<S>>,
    ) -> Result<Self> {
        let n = frames.len();
        Self::new(
            name,
            frames
                .into_iter()
                .map(|f| FrameSource::Memory(Arc::new(f)))
                .collect(),
            groundtruth,
            vec![BTreeSet::new(); n],
            BTreeSet::new(),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Decodes/returns frame `idx`.
    pub fn frame(&self, idx: usize) -> Result<Frame> {
        match &self.frames[idx] {
            FrameSource::Path(p) => Frame::load(p),
            FrameSource::Memory(f) => Ok((**f).clone()),
        }
    }

    pub fn groundtruth(&self) -> &[BoundingBox<S>] {
        &self.groundtruth
    }

    pub fn frame_attributes(&self) -> &[BTreeSet<String>] {
        &self.frame_attributes
    }

    pub fn sequence_attributes(&self) -> &BTreeSet<String> {
        &self.sequence_attributes
    }
}
