//! Dataset ingestion, synthetic sequence generation, and image statistics.

mod load;
mod stats;
mod synth;

pub use load::{load_dataset, load_sequence, scan_dataset, DatasetManifest};
pub use stats::{grad_histogram, mass_above, GradHistogram};
pub use synth::{
    render_synth, synth_groundtruth, synth_sequence, synth_sequence_in_memory, MotionModel,
    OccluderSpec, SynthSpec, TargetShape,
};
