//! Cell-pooled intensity channel.

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::scalar::{cast_usize, lit, Scalar};

use super::{FeatureChannelMap, LAYER_INTENSITY};

fn pooled_sums<S: Scalar>(patch: &Frame, cell: usize) -> Result<(usize, Vec<S>)> {
    if cell == 0 {
        return Err(Error::Config("cell size must be nonzero".into()));
    }
    let side = patch.width();
    if patch.height() != side {
        return Err(Error::Dimension("patch must be square".into()));
    }
    if side % cell != 0 {
        return Err(Error::Config(format!(
            "cell size {cell} does not divide patch side {side}"
        )));
    }
    let n = side / cell;
    let luma: Vec<S> = patch.luma();
    let mut sums = vec![S::zero(); n * n];
    for cy in 0..n {
        for cx in 0..n {
            let mut acc = S::zero();
            for y in cy * cell..(cy + 1) * cell {
                for x in cx * cell..(cx + 1) * cell {
                    acc += luma[y * side + x];
                }
            }
            sums[cy * n + cx] = acc;
        }
    }
    Ok((n, sums))
}

/// Average-pools the grayscale patch over `cell x cell` blocks and rescales
/// 8-bit values to `[-0.5, 0.5]`.
pub fn intensity_channel<S: Scalar>(patch: &Frame, cell: usize) -> Result<FeatureChannelMap<S>> {
    let (n, sums) = pooled_sums::<S>(patch, cell)?;
    let inv = S::one() / (cast_usize::<S>(cell * cell) * lit::<S>(255.0));
    let half = lit::<S>(0.5);
    let values = sums.into_iter().map(|acc| acc * inv - half).collect();
    FeatureChannelMap::new(LAYER_INTENSITY, n, 1, values)
}

/// Zero-mean variant used by the tracking stack: the layer mean is removed
/// in the integer domain (`sum_i * N - total`) before any rescaling, so a
/// constant added to every pixel cancels exactly, bit for bit.
pub fn intensity_channel_centered<S: Scalar>(
    patch: &Frame,
    cell: usize,
) -> Result<FeatureChannelMap<S>> {
    let (n, sums) = pooled_sums::<S>(patch, cell)?;
    let count = cast_usize::<S>(n * n);
    let total: S = sums.iter().copied().sum();
    let inv = S::one() / (count * cast_usize::<S>(cell * cell) * lit::<S>(255.0));
    let values = sums
        .into_iter()
        .map(|acc| (acc * count - total) * inv)
        .collect();
    FeatureChannelMap::new(LAYER_INTENSITY, n, 1, values)
}
