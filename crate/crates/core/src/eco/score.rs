//! Continuous filters, Gaussian labels and the detection-score operator.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

use super::coeff::CoeffGrid;
use super::interp::InterpolatedSample;
use super::projection::ProjectionMatrix;

/// Multi-channel filter in the continuous domain: one truncated coefficient
/// grid per (projected) channel, each constrained to its own bandwidth.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousFilter<S> {
    pub channels: Vec<CoeffGrid<S>>,
    pub bandwidths: Vec<usize>,
}

impl<S: Scalar> ContinuousFilter<S> {
    /// Zero filter matching the layout of a projected sample.
    pub fn zeros_like(sample: &InterpolatedSample<S>) -> Self {
        let common = sample.common_bandwidth();
        ContinuousFilter {
            channels: vec![CoeffGrid::zeros(common); sample.channel_count()],
            bandwidths: sample.bandwidths.clone(),
        }
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn common_bandwidth(&self) -> usize {
        self.channels.first().map(|c| c.bandwidth()).unwrap_or(0)
    }

    /// Projects every channel back onto its bandwidth mask.
    pub fn apply_masks(&mut self) {
        for (ch, &bw) in self.channels.iter_mut().zip(&self.bandwidths) {
            ch.truncate(bw);
        }
    }

    pub fn scale(&mut self, s: S) {
        for ch in &mut self.channels {
            ch.scale(s);
        }
    }

    pub fn axpy(&mut self, s: S, other: &ContinuousFilter<S>) {
        for (a, b) in self.channels.iter_mut().zip(&other.channels) {
            a.axpy(s, b);
        }
    }

    pub fn dot_re(&self, other: &ContinuousFilter<S>) -> S {
        self.channels
            .iter()
            .zip(&other.channels)
            .map(|(a, b)| a.dot_re(b))
            .sum()
    }

    pub fn norm_sqr(&self) -> S {
        self.channels.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_conjugate_asymmetry(&self) -> S {
        self.channels
            .iter()
            .map(|c| c.conjugate_asymmetry())
            .fold(S::zero(), |a, b| a.max(b))
    }
}

/// Detection score: Fourier coefficients of the periodic score function,
/// with pointwise and grid evaluators.
#[derive(Debug, Clone, PartialEq)]
pub struct Score<S> {
    pub coeffs: CoeffGrid<S>,
}

impl<S: Scalar> Score<S> {
    pub fn eval(&self, ty: S, tx: S) -> S {
        self.coeffs.eval(ty, tx)
    }

    pub fn eval_grid(&self, fft: &mut crate::fft::Fft2d<S>, grid: usize) -> Vec<S> {
        self.coeffs.eval_grid(fft, grid)
    }
}

/// Applies the score operator to an already-projected sample:
/// `shat = sum_c fhat_c . zhat_c` (pointwise per frequency).
pub fn score_projected<S: Scalar>(
    filter: &ContinuousFilter<S>,
    projected: &InterpolatedSample<S>,
) -> Result<Score<S>> {
    if filter.channel_count() != projected.channel_count() {
        return Err(Error::Dimension(format!(
            "filter has {} channels, sample has {}",
            filter.channel_count(),
            projected.channel_count()
        )));
    }
    let bw = filter.common_bandwidth();
    let mut acc = CoeffGrid::zeros(bw);
    for (f, z) in filter.channels.iter().zip(&projected.channels) {
        if f.bandwidth() != z.bandwidth() {
            return Err(Error::Dimension(format!(
                "filter bandwidth {} does not match sample bandwidth {}",
                f.bandwidth(),
                z.bandwidth()
            )));
        }
        let prod = f.mul_pointwise(z);
        acc.axpy(S::one(), &prod);
    }
    Ok(Score { coeffs: acc })
}

/// Full score operator: projects the raw sample with `p`, then correlates
/// with the filter.
pub fn score<S: Scalar>(
    filter: &ContinuousFilter<S>,
    p: &ProjectionMatrix<S>,
    sample: &InterpolatedSample<S>,
) -> Result<Score<S>> {
    let projected = p.project(sample)?;
    score_projected(filter, &projected)
}

/// Fourier coefficients of a periodically repeated Gaussian label centered
/// at `center` (continuous coordinates on the unit period) with per-axis
/// standard deviations `sigma`, truncated at `bandwidth`.
pub fn gaussian_label_coeffs<S: Scalar>(
    bandwidth: usize,
    sigma: (S, S),
    center: (S, S),
) -> Result<CoeffGrid<S>> {
    for s in [sigma.0, sigma.1] {
        if !(s > S::zero()) || !s.is_finite() {
            return Err(Error::Config(format!("label sigma must be positive, got {s}")));
        }
    }
    let two_pi = lit::<S>(2.0) * S::PI();
    let sqrt_two_pi = (lit::<S>(2.0) * S::PI()).sqrt();
    let axis = |k: isize, s: S, c: S| -> Complex<S> {
        let kf = lit::<S>(k as f64);
        let mag = sqrt_two_pi * s * (-(lit::<S>(2.0) * S::PI() * S::PI()) * s * s * kf * kf).exp();
        let phase = -two_pi * kf * c;
        Complex::new(mag * phase.cos(), mag * phase.sin())
    };
    let k = bandwidth as isize;
    let mut out = CoeffGrid::zeros(bandwidth);
    for ky in -k..=k {
        let ay = axis(ky, sigma.0, center.0);
        for kx in -k..=k {
            out.set(ky, kx, ay * axis(kx, sigma.1, center.1));
        }
    }
    Ok(out)
}
