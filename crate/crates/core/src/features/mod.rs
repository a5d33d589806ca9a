//! Multi-channel feature extraction: intensity, HOG and motion-mask
//! channels pooled on cell grids, assembled into per-frame feature stacks.

mod crop;
mod hog;
mod intensity;
mod motion;

pub use crop::crop_resize;
pub use hog::hog_channels;
pub use intensity::{intensity_channel, intensity_channel_centered};
pub use motion::motion_mask;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::geometry::BoundingBox;
use crate::scalar::{lit, Scalar};

/// Layer ids used by [`build_stack`].
pub const LAYER_INTENSITY: usize = 0;
pub const LAYER_HOG: usize = 1;
pub const LAYER_MOTION: usize = 2;

/// One feature layer: a square `size x size` grid with `channels` planes.
/// Values are stored plane-major (`[channel][y][x]`).
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureChannelMap<S> {
    pub layer: usize,
    pub size: usize,
    pub channels: usize,
    values: Vec<S>,
}

impl<S: Scalar> FeatureChannelMap<S> {
    pub fn new(layer: usize, size: usize, channels: usize, values: Vec<S>) -> Result<Self> {
        if size < 3 {
            return Err(Error::Dimension(format!(
                "feature grid must be at least 3x3, got {size}"
            )));
        }
        if values.len() != size * size * channels {
            return Err(Error::Dimension(format!(
                "feature buffer {} does not match {size}x{size}x{channels}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite feature value".into()));
        }
        Ok(FeatureChannelMap {
            layer,
            size,
            channels,
            values,
        })
    }

    #[inline]
    pub fn plane(&self, c: usize) -> &[S] {
        let n = self.size * self.size;
        &self.values[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn value(&self, c: usize, y: usize, x: usize) -> S {
        self.values[c * self.size * self.size + y * self.size + x]
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// Scales every value in place (per-layer feature weighting).
    pub fn scale_values(&mut self, weight: S) {
        if weight != S::one() {
            for v in &mut self.values {
                *v *= weight;
            }
        }
    }

    /// Multiplies by a separable Hann window aligned with the cell centers.
    pub fn apply_cosine_window(&mut self) {
        let n = self.size;
        let profile: Vec<S> = (0..n)
            .map(|i| {
                let phase = S::PI() * (lit::<S>(i as f64) + lit::<S>(0.5)) / lit::<S>(n as f64);
                phase.sin() * phase.sin()
            })
            .collect();
        for c in 0..self.channels {
            for y in 0..n {
                for x in 0..n {
                    self.values[c * n * n + y * n + x] *= profile[y] * profile[x];
                }
            }
        }
    }
}

/// Extraction geometry recorded with every stack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StackMeta<S> {
    /// Crop center in source-frame pixels.
    pub center: (S, S),
    /// Side of the square crop in source-frame pixels.
    pub crop_side: S,
    pub crop_factor: S,
    pub patch_size: usize,
}

/// Ordered feature layers extracted from one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureStack<S> {
    pub layers: Vec<FeatureChannelMap<S>>,
    pub meta: StackMeta<S>,
}

impl<S: Scalar> FeatureStack<S> {
    pub fn channel_count(&self) -> usize {
        self.layers.iter().map(|l| l.channels).sum()
    }
}

/// Motion-mask channel settings. The threshold is in 8-bit intensity units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionConfig<S> {
    pub threshold: S,
    pub enabled: bool,
}

impl<S: Scalar> Default for MotionConfig<S> {
    fn default() -> Self {
        MotionConfig {
            threshold: lit(25.0),
            enabled: true,
        }
    }
}

impl<S: Scalar> MotionConfig<S> {
    pub fn validate(&self) -> Result<()> {
        if self.threshold <= S::zero() || self.threshold >= lit(255.0) {
            return Err(Error::Config(format!(
                "motion threshold must lie in (0, 255), got {}",
                self.threshold
            )));
        }
        Ok(())
    }
}

/// Channel selection, cell sizes and per-layer weights for [`build_stack`].
/// Weights balance the layers' contributions to the joint least-squares fit
/// (gradient features are contrast-normalized and would otherwise drown the
/// intensity channel on weakly textured scenes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig<S> {
    pub intensity: bool,
    /// Cell size for the intensity (and motion) grid; must divide the patch.
    pub intensity_cell: usize,
    /// Subtract the layer mean from the intensity channel, making the stack
    /// invariant to global intensity offsets.
    pub zero_mean_intensity: bool,
    pub intensity_weight: S,
    pub hog: bool,
    pub hog_cell: usize,
    pub hog_weight: S,
    pub motion: MotionConfig<S>,
    pub motion_weight: S,
    /// Multiply every layer by a separable cosine (Hann) window, suppressing
    /// periodic wrap-around discontinuities and frame-border replication.
    pub cosine_window: bool,
}

impl<S: Scalar> Default for ChannelConfig<S> {
    fn default() -> Self {
        ChannelConfig {
            intensity: true,
            intensity_cell: 5,
            zero_mean_intensity: true,
            intensity_weight: lit(1.0),
            hog: true,
            hog_cell: 4,
            hog_weight: lit(0.3),
            motion: MotionConfig::default(),
            motion_weight: lit(1.0),
            cosine_window: true,
        }
    }
}

impl<S: Scalar> ChannelConfig<S> {
    pub fn validate(&self) -> Result<()> {
        if !self.intensity && !self.hog && !self.motion.enabled {
            return Err(Error::Config("no feature channel enabled".into()));
        }
        if self.intensity_cell == 0 || self.hog_cell == 0 {
            return Err(Error::Config("cell sizes must be nonzero".into()));
        }
        self.motion.validate()
    }
}

/// Crops the target region from `frame` (and `prev`, when the motion channel
/// is active), extracts the configured channels and assembles the stack.
/// The motion layer is present iff motion is enabled and `prev` is given.
pub fn build_stack<S: Scalar>(
    frame: &Frame,
    prev: Option<&Frame>,
    bbox: &BoundingBox<S>,
    cfg: &ChannelConfig<S>,
    crop_factor: S,
    patch_size: usize,
) -> Result<FeatureStack<S>> {
    cfg.validate()?;
    let patch = crop_resize(frame, bbox, crop_factor, patch_size)?;
    let mut layers = Vec::new();
    if cfg.intensity {
        let mut layer = if cfg.zero_mean_intensity {
            intensity_channel_centered(&patch, cfg.intensity_cell)?
        } else {
            intensity_channel(&patch, cfg.intensity_cell)?
        };
        layer.scale_values(cfg.intensity_weight);
        layers.push(layer);
    }
    if cfg.hog {
        let mut layer = hog_channels(&patch, cfg.hog_cell)?;
        layer.scale_values(cfg.hog_weight);
        layers.push(layer);
    }
    if cfg.motion.enabled {
        if let Some(prev) = prev {
            let prev_patch = crop_resize(prev, bbox, crop_factor, patch_size)?;
            let mut layer = motion_mask(&patch, &prev_patch, &cfg.motion, cfg.intensity_cell)?;
            layer.scale_values(cfg.motion_weight);
            layers.push(layer);
        }
    }
    if layers.is_empty() {
        return Err(Error::Config(
            "feature stack is empty (only motion enabled and no previous frame)".into(),
        ));
    }
    if cfg.cosine_window {
        for layer in &mut layers {
            layer.apply_cosine_window();
        }
    }
    let (cx, cy) = bbox.center();
    let side = crop_factor * bbox.w.max(bbox.h);
    Ok(FeatureStack {
        layers,
        meta: StackMeta {
            center: (cx, cy),
            crop_side: side,
            crop_factor,
            patch_size,
        },
    })
}
