//! 31-channel histogram-of-oriented-gradients features.
//!
//! Channels 0-17 are contrast sensitive (full 360 degrees), 18-26 contrast
//! insensitive (180 degrees), 27-30 texture energy. Gradients use central
//! differences on intensities scaled to `[0, 1]`, votes are bilinearly
//! shared between the four surrounding cells, and per-cell features are
//! normalized against the four overlapping 2x2 cell blocks with truncation
//! at 0.2. One boundary cell is trimmed per edge.

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::scalar::{lit, Scalar};

use super::{FeatureChannelMap, LAYER_HOG};

const ORIENTATIONS: usize = 9;
const TRUNCATION: f64 = 0.2;
const NORM_EPS: f64 = 1e-4;
/// 1/sqrt(18), the texture-energy weight.
const TEXTURE_WEIGHT: f64 = 0.235_702_260_395_515_84;

/// Snaps a gradient to one of 18 signed orientation bins by maximizing the
/// dot product with the bin directions.
pub(crate) fn snap_orientation(gx: f64, gy: f64) -> usize {
    let mut best = 0.0f64;
    let mut bin = 0usize;
    for k in 0..ORIENTATIONS {
        let angle = std::f64::consts::PI * k as f64 / ORIENTATIONS as f64;
        let dot = angle.cos() * gx + angle.sin() * gy;
        if dot > best {
            best = dot;
            bin = k;
        } else if -dot > best {
            best = -dot;
            bin = k + ORIENTATIONS;
        }
    }
    bin
}

pub fn hog_channels<S: Scalar>(patch: &Frame, cell: usize) -> Result<FeatureChannelMap<S>> {
    if cell == 0 {
        return Err(Error::Config("cell size must be nonzero".into()));
    }
    let side = patch.width();
    if patch.height() != side {
        return Err(Error::Dimension("patch must be square".into()));
    }
    if side < 3 * cell {
        return Err(Error::Dimension(format!(
            "patch side {side} too small for cell size {cell} (need >= {})",
            3 * cell
        )));
    }
    let cells = side / cell;
    let out = cells - 2;
    if out < 3 {
        return Err(Error::Dimension(format!(
            "patch side {side} with cell {cell} leaves a {out}x{out} grid; need at least 3x3"
        )));
    }

    let luma64: Vec<f64> = patch.luma();
    let at = |x: isize, y: isize| -> f64 {
        let xc = x.clamp(0, side as isize - 1) as usize;
        let yc = y.clamp(0, side as isize - 1) as usize;
        luma64[yc * side + xc]
    };

    // Orientation histograms over the full (untrimmed) cell grid. Gradients
    // are differenced on raw 8-bit values before rescaling to [0, 1], so a
    // constant intensity offset cancels exactly.
    let mut hist = vec![0.0f64; cells * cells * 2 * ORIENTATIONS];
    let used = cells * cell;
    for y in 0..used {
        for x in 0..used {
            let gx = (at(x as isize + 1, y as isize) - at(x as isize - 1, y as isize)) / 255.0;
            let gy = (at(x as isize, y as isize + 1) - at(x as isize, y as isize - 1)) / 255.0;
            let mag = (gx * gx + gy * gy).sqrt();
            if mag == 0.0 {
                continue;
            }
            let bin = snap_orientation(gx, gy);
            // Bilinear vote into the four neighboring cells.
            let cxp = (x as f64 + 0.5) / cell as f64 - 0.5;
            let cyp = (y as f64 + 0.5) / cell as f64 - 0.5;
            let x0 = cxp.floor() as isize;
            let y0 = cyp.floor() as isize;
            let vx = cxp - x0 as f64;
            let vy = cyp - y0 as f64;
            for (dx, wx) in [(0isize, 1.0 - vx), (1, vx)] {
                for (dy, wy) in [(0isize, 1.0 - vy), (1, vy)] {
                    let cx = x0 + dx;
                    let cy = y0 + dy;
                    if cx < 0 || cy < 0 || cx >= cells as isize || cy >= cells as isize {
                        continue;
                    }
                    hist[(cy as usize * cells + cx as usize) * 2 * ORIENTATIONS + bin] +=
                        mag * wx * wy;
                }
            }
        }
    }

    // Per-cell contrast-insensitive energy.
    let mut energy = vec![0.0f64; cells * cells];
    for c in 0..cells * cells {
        let h = &hist[c * 2 * ORIENTATIONS..(c + 1) * 2 * ORIENTATIONS];
        for o in 0..ORIENTATIONS {
            let v = h[o] + h[o + ORIENTATIONS];
            energy[c] += v * v;
        }
    }
    let block = |cy: isize, cx: isize| -> f64 {
        if cy < 0 || cx < 0 || cy + 1 >= cells as isize || cx + 1 >= cells as isize {
            // Out-of-range blocks fall back to the epsilon floor only.
            return 0.0;
        }
        let (cy, cx) = (cy as usize, cx as usize);
        energy[cy * cells + cx]
            + energy[cy * cells + cx + 1]
            + energy[(cy + 1) * cells + cx]
            + energy[(cy + 1) * cells + cx + 1]
    };

    let mut values = vec![S::zero(); out * out * 31];
    let plane = out * out;
    for oy in 0..out {
        for ox in 0..out {
            let cy = (oy + 1) as isize;
            let cx = (ox + 1) as isize;
            let norms = [
                1.0 / (block(cy, cx) + NORM_EPS).sqrt(),
                1.0 / (block(cy - 1, cx) + NORM_EPS).sqrt(),
                1.0 / (block(cy, cx - 1) + NORM_EPS).sqrt(),
                1.0 / (block(cy - 1, cx - 1) + NORM_EPS).sqrt(),
            ];
            let h = &hist[(cy as usize * cells + cx as usize) * 2 * ORIENTATIONS..];
            let mut texture = [0.0f64; 4];
            for o in 0..2 * ORIENTATIONS {
                let mut sum = 0.0;
                for (i, n) in norms.iter().enumerate() {
                    let v = (h[o] * n).min(TRUNCATION);
                    sum += v;
                    texture[i] += v;
                }
                values[o * plane + oy * out + ox] = lit(0.5 * sum);
            }
            for o in 0..ORIENTATIONS {
                let hv = h[o] + h[o + ORIENTATIONS];
                let sum: f64 = norms.iter().map(|n| (hv * n).min(TRUNCATION)).sum();
                values[(18 + o) * plane + oy * out + ox] = lit(0.5 * sum);
            }
            for (i, t) in texture.iter().enumerate() {
                values[(27 + i) * plane + oy * out + ox] = lit(TEXTURE_WEIGHT * t);
            }
        }
    }
    FeatureChannelMap::new(LAYER_HOG, out, 31, values)
}
