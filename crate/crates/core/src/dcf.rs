//! Baseline multi-channel discriminative correlation filter.
//!
//! The filter minimizes a ridge objective over circular correlations of the
//! feature channels and has a closed-form per-frequency solution.
//!
//! Correlation convention, fixed once and used throughout the crate:
//! `(f corr x)[n] = sum_m f[m] * x[(m + n) mod N]`, which in the frequency
//! domain reads `conj(fhat) * xhat`. Under this convention circularly
//! shifting `x` by `(p, q)` shifts the response by `(p, q)`, and the
//! closed-form solution below is the exact minimizer of the objective.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::features::FeatureChannelMap;
use crate::fft::Fft2d;
use crate::scalar::{cast_usize, lit, Scalar};

/// Regression-target map: a periodically wrapped Gaussian with peak 1 at the
/// grid center.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMap<S> {
    pub size: usize,
    pub peak: (usize, usize),
    values: Vec<S>,
}

impl<S: Scalar> LabelMap<S> {
    pub fn values(&self) -> &[S] {
        &self.values
    }

    #[inline]
    pub fn value(&self, y: usize, x: usize) -> S {
        self.values[y * self.size + x]
    }
}

/// Ridge regularization weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegParams<S> {
    pub lambda: S,
}

impl<S: Scalar> RegParams<S> {
    pub fn new(lambda: S) -> Result<Self> {
        if !lambda.is_finite() || lambda < S::zero() {
            return Err(Error::Config(format!(
                "ridge weight must be finite and nonnegative, got {lambda}"
            )));
        }
        Ok(RegParams { lambda })
    }
}

/// Learned filter as per-channel complex Fourier coefficient grids.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierFilter<S> {
    pub size: usize,
    channels: Vec<Vec<Complex<S>>>,
}

impl<S: Scalar> FourierFilter<S> {
    pub fn channels(&self) -> &[Vec<Complex<S>>] {
        &self.channels
    }

    /// All-zero filter with `d` channels.
    pub fn zeros(size: usize, d: usize) -> Self {
        FourierFilter {
            size,
            channels: vec![vec![Complex::new(S::zero(), S::zero()); size * size]; d],
        }
    }

    /// Filter from explicit per-channel coefficient grids.
    pub fn from_channels(size: usize, channels: Vec<Vec<Complex<S>>>) -> Result<Self> {
        if channels.is_empty() || channels.iter().any(|c| c.len() != size * size) {
            return Err(Error::Dimension(
                "filter channels must all be size x size and nonempty".into(),
            ));
        }
        Ok(FourierFilter { size, channels })
    }

    /// Spatial-domain filter planes (inverse transform per channel).
    pub fn to_spatial(&self, fft: &mut Fft2d<S>) -> Vec<Vec<S>> {
        self.channels
            .iter()
            .map(|ch| {
                let mut buf = ch.clone();
                fft.inverse(&mut buf, self.size);
                buf.into_iter().map(|c| c.re).collect()
            })
            .collect()
    }

    /// Sum of squared spatial-domain filter energies.
    pub fn spatial_energy(&self, fft: &mut Fft2d<S>) -> S {
        self.to_spatial(fft)
            .iter()
            .map(|p| p.iter().map(|&v| v * v).sum::<S>())
            .sum()
    }
}

/// Gaussian regression target of side `size`: value 1 at the grid center,
/// wrapped over the adjacent periods and renormalized so the peak stays 1.
pub fn gaussian_label<S: Scalar>(size: usize, sigma: S) -> Result<LabelMap<S>> {
    if size < 3 {
        return Err(Error::Dimension(format!(
            "label grid must be at least 3x3, got {size}"
        )));
    }
    if !(sigma > S::zero()) || !sigma.is_finite() {
        return Err(Error::Config(format!("sigma must be positive, got {sigma}")));
    }
    let center = size / 2;
    let two_sigma2 = lit::<S>(2.0) * sigma * sigma;
    let n = cast_usize::<S>(size);
    // Separable wrapped 1-D profile over offsets {-N, 0, +N}. The wrap terms
    // are summed pairwise first so the profile is exactly reflection
    // symmetric in floating point.
    let profile: Vec<S> = (0..size)
        .map(|i| {
            let d = cast_usize::<S>(i) - cast_usize::<S>(center);
            let (dm, dp) = (d - n, d + n);
            let tail = (-(dm * dm) / two_sigma2).exp() + (-(dp * dp) / two_sigma2).exp();
            (-(d * d) / two_sigma2).exp() + tail
        })
        .collect();
    let peak = profile[center] * profile[center];
    let values: Vec<S> = (0..size * size)
        .map(|i| profile[i / size] * profile[i % size] / peak)
        .collect();
    Ok(LabelMap {
        size,
        peak: (center, center),
        values,
    })
}

fn check_sizes<S: Scalar>(x: &FeatureChannelMap<S>, size: usize) -> Result<()> {
    if x.size != size {
        return Err(Error::Dimension(format!(
            "feature grid {} does not match size {}",
            x.size, size
        )));
    }
    Ok(())
}

/// Ridge objective: squared error of the summed channel correlations against
/// the label, plus `lambda` times the filter energy.
pub fn dcf_objective<S: Scalar>(
    fft: &mut Fft2d<S>,
    filter_spatial: &[Vec<S>],
    x: &FeatureChannelMap<S>,
    y: &LabelMap<S>,
    reg: RegParams<S>,
) -> Result<S> {
    let size = y.size;
    check_sizes(x, size)?;
    if filter_spatial.len() != x.channels {
        return Err(Error::Dimension(format!(
            "filter has {} channels, features have {}",
            filter_spatial.len(),
            x.channels
        )));
    }
    if filter_spatial.iter().any(|p| p.len() != size * size) {
        return Err(Error::Dimension("filter plane size mismatch".into()));
    }

    let mut acc = vec![Complex::new(S::zero(), S::zero()); size * size];
    for (plane, feat_idx) in filter_spatial.iter().zip(0..x.channels) {
        let fhat = fft.forward_real(plane, size);
        let xhat = fft.forward_real(x.plane(feat_idx), size);
        for (a, (fh, xh)) in acc.iter_mut().zip(fhat.iter().zip(&xhat)) {
            *a += fh.conj() * xh;
        }
    }
    fft.inverse(&mut acc, size);

    let data: S = acc
        .iter()
        .zip(y.values())
        .map(|(r, &t)| {
            let d = r.re - t;
            d * d
        })
        .sum();
    let energy: S = filter_spatial
        .iter()
        .map(|p| p.iter().map(|&v| v * v).sum::<S>())
        .sum();
    Ok(data + reg.lambda * energy)
}

/// Closed-form Fourier-domain solve: per frequency,
/// `fhat_d = xhat_d * conj(yhat) / (sum_d |xhat_d|^2 + lambda)`.
pub fn solve_dcf<S: Scalar>(
    fft: &mut Fft2d<S>,
    x: &FeatureChannelMap<S>,
    y: &LabelMap<S>,
    reg: RegParams<S>,
) -> Result<FourierFilter<S>> {
    let size = y.size;
    check_sizes(x, size)?;
    let xhat: Vec<Vec<Complex<S>>> = (0..x.channels)
        .map(|c| fft.forward_real(x.plane(c), size))
        .collect();
    let yhat = fft.forward_real(y.values(), size);

    let mut channels = vec![vec![Complex::new(S::zero(), S::zero()); size * size]; x.channels];
    for k in 0..size * size {
        let mut denom = reg.lambda;
        for ch in &xhat {
            denom += ch[k].norm_sqr();
        }
        if denom == S::zero() {
            return Err(Error::Numeric(format!(
                "zero denominator at frequency bin {k}: lambda = 0 and all channels vanish"
            )));
        }
        let yc = yhat[k].conj();
        for (d, ch) in xhat.iter().enumerate() {
            channels[d][k] = ch[k] * yc / denom;
        }
    }
    Ok(FourierFilter { size, channels })
}

/// Correlation response of the filter on a sample, computed in the frequency
/// domain. The result of a real-input/real-filter correlation is real; the
/// imaginary residue is checked against 1e-9 (relative) and discarded.
pub fn response<S: Scalar>(
    fft: &mut Fft2d<S>,
    filter: &FourierFilter<S>,
    x: &FeatureChannelMap<S>,
) -> Result<Vec<S>> {
    let size = filter.size;
    check_sizes(x, size)?;
    if filter.channels.len() != x.channels {
        return Err(Error::Dimension(format!(
            "filter has {} channels, features have {}",
            filter.channels.len(),
            x.channels
        )));
    }
    let mut acc = vec![Complex::new(S::zero(), S::zero()); size * size];
    for (d, ch) in filter.channels.iter().enumerate() {
        let xhat = fft.forward_real(x.plane(d), size);
        for (a, (fh, xh)) in acc.iter_mut().zip(ch.iter().zip(&xhat)) {
            *a += fh.conj() * xh;
        }
    }
    fft.inverse(&mut acc, size);

    let max_re = acc
        .iter()
        .map(|c| c.re.abs())
        .fold(S::zero(), |a, b| a.max(b));
    let max_im = acc
        .iter()
        .map(|c| c.im.abs())
        .fold(S::zero(), |a, b| a.max(b));
    if max_im > lit::<S>(1e-9) * S::one().max(max_re) {
        return Err(Error::Numeric(format!(
            "imaginary residue {max_im:e} exceeds tolerance (max real {max_re:e})"
        )));
    }
    Ok(acc.into_iter().map(|c| c.re).collect())
}
