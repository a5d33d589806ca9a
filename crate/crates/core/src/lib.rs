//! Correlation-filter tracking engine for grayscale and thermal-style video.
//!
//! The crate provides:
//!
//! - multi-channel discriminative correlation filters with a closed-form
//!   Fourier-domain solution ([`dcf`]);
//! - a continuous-domain filter model with interpolated feature layers,
//!   channel projection, spatial regularization and iterative solvers
//!   ([`eco`]);
//! - handcrafted feature extraction: intensity, HOG and a motion mask
//!   channel ([`features`]);
//! - the online tracking loop with multi-scale search and subgrid
//!   refinement ([`tracker`]);
//! - reset-based and one-pass evaluation protocols with report emission
//!   ([`eval`]);
//! - dataset ingestion, a synthetic sequence generator and gradient
//!   statistics ([`data`]);
//! - image-translation losses and a translation-quality metric
//!   ([`translate`]).
//!
//! All numerical code is generic over the [`Scalar`] type (`f32` or `f64`);
//! the [`Real`] alias fixes the default precision used by the shipped tools.

pub mod data;
pub mod dcf;
pub mod eco;
pub mod error;
pub mod eval;
pub mod features;
pub mod fft;
pub mod frame;
pub mod geometry;
pub mod scalar;
pub mod sequence;
pub mod tracker;
pub mod translate;

pub use error::{Error, Result};
pub use frame::Frame;
pub use scalar::Scalar;

/// Default scalar precision for the shipped tracker and CLI.
pub type Real = f64;
/// Bounding box at default precision.
pub type BBox = geometry::BoundingBox<Real>;
/// Polygon at default precision.
pub type Poly = geometry::Polygon<Real>;
/// Sequence at default precision.
pub type Seq = sequence::Sequence<Real>;

/// Crate version string, echoed into run outputs for provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
