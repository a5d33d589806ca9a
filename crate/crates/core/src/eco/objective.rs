//! The regularized least-squares objective, computed along two independent
//! routes: pointwise quadrature in the spatial domain and coefficient
//! algebra in the Fourier domain. Parseval's identity makes the two agree;
//! tests and the acceptance suite hold them to each other.

use crate::error::{Error, Result};
use crate::fft::Fft2d;
use crate::scalar::{cast_usize, Scalar};

use super::memory::SampleMemory;
use super::projection::ProjectionMatrix;
use super::regularizer::SpatialRegularizer;
use super::score::{score_projected, ContinuousFilter};

/// Quadrature grid size for the spatial route. Band-limited integrands make
/// the rectangle rule exact once the grid resolves twice the bandwidth; 128
/// covers every desk-scale configuration with margin.
const QUADRATURE: usize = 128;

fn quadrature_grid(bandwidth: usize) -> usize {
    QUADRATURE.max(4 * bandwidth + 8)
}

/// Spatial-domain objective: sample-weighted squared score errors plus the
/// spatially weighted filter energy plus the projection penalty, all
/// integrated over the unit period by dense quadrature.
pub fn eco_objective<S: Scalar>(
    fft: &mut Fft2d<S>,
    filter: &ContinuousFilter<S>,
    p: &ProjectionMatrix<S>,
    memory: &SampleMemory<S>,
    w: &SpatialRegularizer<S>,
    lambda: S,
) -> Result<S> {
    if memory.is_empty() {
        return Err(Error::Protocol("sample memory is empty".into()));
    }
    let q = quadrature_grid(filter.common_bandwidth() + w.coeffs().bandwidth());
    let cell = S::one() / cast_usize::<S>(q * q);

    let weights = memory.weights();
    let mut data_term = S::zero();
    for (entry, alpha) in memory.samples().iter().zip(weights) {
        let s = score_projected(filter, &entry.sample)?;
        let s_vals = s.coeffs.eval_grid(fft, q);
        let y_vals = entry.label.embed(s.coeffs.bandwidth()).eval_grid(fft, q);
        let err: S = s_vals
            .iter()
            .zip(&y_vals)
            .map(|(&a, &b)| {
                let d = a - b;
                d * d
            })
            .sum();
        data_term += alpha * err * cell;
    }

    let mut reg_term = S::zero();
    for ch in &filter.channels {
        let f_vals = ch.eval_grid(fft, q);
        let mut acc = S::zero();
        for (i, &fv) in f_vals.iter().enumerate() {
            let ty = cast_usize::<S>(i / q) / cast_usize::<S>(q);
            let tx = cast_usize::<S>(i % q) / cast_usize::<S>(q);
            let wv = w.eval(ty, tx);
            acc += wv * wv * fv * fv;
        }
        reg_term += acc * cell;
    }

    Ok(data_term + reg_term + lambda * p.frobenius_sqr())
}

/// Fourier-domain objective: identical value computed from coefficients.
/// The regularization term is a convolution of coefficient sequences on the
/// extended support, which represents the product function exactly.
pub fn eco_objective_fourier<S: Scalar>(
    filter: &ContinuousFilter<S>,
    p: &ProjectionMatrix<S>,
    memory: &SampleMemory<S>,
    w: &SpatialRegularizer<S>,
    lambda: S,
) -> Result<S> {
    if memory.is_empty() {
        return Err(Error::Protocol("sample memory is empty".into()));
    }
    let weights = memory.weights();
    let mut data_term = S::zero();
    for (entry, alpha) in memory.samples().iter().zip(weights) {
        let s = score_projected(filter, &entry.sample)?;
        let mut diff = s.coeffs;
        diff.axpy(-S::one(), &entry.label.embed(diff.bandwidth()));
        data_term += alpha * diff.norm_sqr();
    }
    let mut reg_term = S::zero();
    for ch in &filter.channels {
        reg_term += ch.convolve_full(w.coeffs()).norm_sqr();
    }
    Ok(data_term + reg_term + lambda * p.frobenius_sqr())
}
