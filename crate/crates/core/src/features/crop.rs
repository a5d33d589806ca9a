//! Square target-region cropping with bilinear resampling.

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::geometry::BoundingBox;
use crate::scalar::Scalar;

/// Cuts a square patch of side `crop_factor * max(w, h)` centered on the box
/// center and resamples it to `out_size x out_size` with bilinear
/// interpolation. Samples outside the frame replicate the nearest edge pixel.
pub fn crop_resize<S: Scalar>(
    frame: &Frame,
    bbox: &BoundingBox<S>,
    crop_factor: S,
    out_size: usize,
) -> Result<Frame> {
    if crop_factor <= S::one() {
        return Err(Error::Config(format!(
            "crop factor must exceed 1, got {crop_factor}"
        )));
    }
    if out_size < 16 {
        return Err(Error::Config(format!(
            "output patch must be at least 16 px, got {out_size}"
        )));
    }
    let (cx, cy) = bbox.center();
    let cx = cx.to_f64().unwrap();
    let cy = cy.to_f64().unwrap();
    if cx < 0.0 || cy < 0.0 || cx >= frame.width() as f64 || cy >= frame.height() as f64 {
        return Err(Error::Geometry(format!(
            "box center ({cx:.2}, {cy:.2}) lies outside the {}x{} frame",
            frame.width(),
            frame.height()
        )));
    }
    let side = (crop_factor * bbox.w.max(bbox.h)).to_f64().unwrap();
    let step = side / out_size as f64;
    let left = cx - side / 2.0;
    let top = cy - side / 2.0;

    let channels = frame.channels();
    let mut data = vec![0u8; out_size * out_size * channels];
    for j in 0..out_size {
        // Pixel centers map to source coordinates; -0.5 converts from
        // continuous position to pixel-index space.
        let sy = top + (j as f64 + 0.5) * step - 0.5;
        let y0 = sy.floor();
        let fy = sy - y0;
        for i in 0..out_size {
            let sx = left + (i as f64 + 0.5) * step - 0.5;
            let x0 = sx.floor();
            let fx = sx - x0;
            for c in 0..channels {
                let p00 = frame.get_replicated(x0 as isize, y0 as isize, c) as f64;
                let p10 = frame.get_replicated(x0 as isize + 1, y0 as isize, c) as f64;
                let p01 = frame.get_replicated(x0 as isize, y0 as isize + 1, c) as f64;
                let p11 = frame.get_replicated(x0 as isize + 1, y0 as isize + 1, c) as f64;
                // Factored form: the weights act on pixel differences, so a
                // constant added to every pixel passes through exactly and
                // the resampled patch shifts by exactly that constant.
                let v = p00
                    + fx * (p10 - p00)
                    + fy * (p01 - p00)
                    + fx * fy * (p11 - p10 - p01 + p00);
                data[(j * out_size + i) * channels + c] = (v + 0.5).floor().clamp(0.0, 255.0) as u8;
            }
        }
    }
    Frame::new(out_size, out_size, channels, data)
}
