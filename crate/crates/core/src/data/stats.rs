//! Gradient-magnitude statistics.

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::scalar::{cast_usize, lit, Scalar};

/// Normalized gradient-magnitude histogram over a set of images.
#[derive(Debug, Clone, PartialEq)]
pub struct GradHistogram<S> {
    pub range: (S, S),
    /// Normalized frequencies, summing to one.
    pub frequencies: Vec<S>,
}

impl<S: Scalar> GradHistogram<S> {
    pub fn bins(&self) -> usize {
        self.frequencies.len()
    }

    pub fn bin_edges(&self, i: usize) -> (S, S) {
        let width = (self.range.1 - self.range.0) / cast_usize::<S>(self.bins());
        (
            self.range.0 + width * cast_usize::<S>(i),
            self.range.0 + width * cast_usize::<S>(i + 1),
        )
    }

    /// CSV rendering with header `bin_low,bin_high,frequency`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_low,bin_high,frequency\n");
        for (i, f) in self.frequencies.iter().enumerate() {
            let (lo, hi) = self.bin_edges(i);
            out.push_str(&format!(
                "{:.6},{:.6},{:.6}\n",
                lo.to_f64().unwrap(),
                hi.to_f64().unwrap(),
                f.to_f64().unwrap()
            ));
        }
        out
    }
}

/// Central-difference gradient magnitudes (edge replication), histogrammed
/// over `[range.0, range.1)` with `bins` equal bins; out-of-range magnitudes
/// clamp into the boundary bins. Counts are normalized to sum one.
pub fn grad_histogram<S: Scalar>(
    images: &[Frame],
    bins: usize,
    range: (S, S),
) -> Result<GradHistogram<S>> {
    if images.is_empty() {
        return Err(Error::Dataset("no images to histogram".into()));
    }
    if bins < 2 {
        return Err(Error::Config(format!("need at least 2 bins, got {bins}")));
    }
    if !(range.1 > range.0) {
        return Err(Error::Config("histogram range must be increasing".into()));
    }
    let mut counts = vec![0u64; bins];
    for frame in images {
        let (w, h) = (frame.width(), frame.height());
        let luma: Vec<S> = frame.luma();
        let at = |x: isize, y: isize| -> S {
            let xc = x.clamp(0, w as isize - 1) as usize;
            let yc = y.clamp(0, h as isize - 1) as usize;
            luma[yc * w + xc]
        };
        let half = lit::<S>(0.5);
        for y in 0..h as isize {
            for x in 0..w as isize {
                let gx = (at(x + 1, y) - at(x - 1, y)) * half;
                let gy = (at(x, y + 1) - at(x, y - 1)) * half;
                let mag = (gx * gx + gy * gy).sqrt();
                let rel = (mag - range.0) / (range.1 - range.0);
                let bin = (rel * cast_usize::<S>(bins))
                    .floor()
                    .to_f64()
                    .unwrap()
                    .clamp(0.0, bins as f64 - 1.0) as usize;
                counts[bin] += 1;
            }
        }
    }
    let total: u64 = counts.iter().sum();
    let frequencies = counts
        .into_iter()
        .map(|c| lit::<S>(c as f64 / total as f64))
        .collect();
    Ok(GradHistogram { range, frequencies })
}

/// Mass in bins at or above the bin containing `threshold`.
pub fn mass_above<S: Scalar>(hist: &GradHistogram<S>, threshold: S) -> S {
    let width = (hist.range.1 - hist.range.0) / cast_usize::<S>(hist.bins());
    let first = ((threshold - hist.range.0) / width)
        .floor()
        .to_f64()
        .unwrap()
        .max(0.0) as usize;
    hist.frequencies.iter().skip(first).copied().sum()
}
