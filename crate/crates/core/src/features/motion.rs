//! Motion mask from thresholded frame differences.

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::scalar::{cast_usize, Scalar};

use super::{FeatureChannelMap, MotionConfig, LAYER_MOTION};

/// Thresholds the absolute pixel-wise difference between two frames into a
/// binary mask, then average-pools it onto the intensity cell grid.
pub fn motion_mask<S: Scalar>(
    curr: &Frame,
    prev: &Frame,
    cfg: &MotionConfig<S>,
    cell: usize,
) -> Result<FeatureChannelMap<S>> {
    cfg.validate()?;
    if curr.width() != prev.width()
        || curr.height() != prev.height()
        || curr.channels() != prev.channels()
    {
        return Err(Error::Dimension(format!(
            "frame dimensions differ: {}x{}x{} vs {}x{}x{}",
            curr.width(),
            curr.height(),
            curr.channels(),
            prev.width(),
            prev.height(),
            prev.channels()
        )));
    }
    let side = curr.width();
    if curr.height() != side {
        return Err(Error::Dimension("patch must be square".into()));
    }
    if cell == 0 || side % cell != 0 {
        return Err(Error::Config(format!(
            "cell size {cell} does not divide patch side {side}"
        )));
    }
    let n = side / cell;
    let a: Vec<S> = curr.luma();
    let b: Vec<S> = prev.luma();
    let inv = S::one() / cast_usize::<S>(cell * cell);
    let mut values = vec![S::zero(); n * n];
    for cy in 0..n {
        for cx in 0..n {
            let mut acc = S::zero();
            for y in cy * cell..(cy + 1) * cell {
                for x in cx * cell..(cx + 1) * cell {
                    let d = (a[y * side + x] - b[y * side + x]).abs();
                    if d > cfg.threshold {
                        acc += S::one();
                    }
                }
            }
            values[cy * n + cx] = acc * inv;
        }
    }
    FeatureChannelMap::new(LAYER_MOTION, n, 1, values)
}
