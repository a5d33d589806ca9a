//! Conjugate-gradient solve of the filter normal equations with the
//! projection held fixed.
//!
//! The objective in the filter alone is a convex quadratic; its normal
//! operator applies, per sample, the score operator followed by its adjoint,
//! plus convolution with the squared spatial-penalty kernel. The operator is
//! symmetric positive definite on the masked coefficient space because the
//! penalty never drops below its base weight.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

use super::coeff::CoeffGrid;
use super::interp::InterpolatedSample;
use super::memory::SampleMemory;
use super::regularizer::SpatialRegularizer;
use super::score::{score_projected, ContinuousFilter};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgStats<S> {
    pub iterations: usize,
    pub relative_residual: S,
}

/// Normal-equations operator for the filter subproblem.
pub struct FilterOperator<'a, S: Scalar> {
    samples: Vec<(&'a InterpolatedSample<S>, S, &'a CoeffGrid<S>)>,
    squared_kernel: CoeffGrid<S>,
    bandwidths: Vec<usize>,
}

impl<'a, S: Scalar> FilterOperator<'a, S> {
    pub fn from_memory(memory: &'a SampleMemory<S>, w: &SpatialRegularizer<S>) -> Result<Self> {
        if memory.is_empty() {
            return Err(Error::Protocol("sample memory is empty".into()));
        }
        let weights = memory.weights();
        let samples: Vec<_> = memory
            .samples()
            .iter()
            .zip(weights)
            .map(|(entry, alpha)| (&entry.sample, alpha, &entry.label))
            .collect();
        let bandwidths = samples[0].0.bandwidths.clone();
        Ok(FilterOperator {
            samples,
            squared_kernel: w.squared_kernel(),
            bandwidths,
        })
    }

    pub fn bandwidths(&self) -> &[usize] {
        &self.bandwidths
    }

    /// `A f`: data and regularization normal terms, masked per channel.
    pub fn apply(&self, f: &ContinuousFilter<S>) -> ContinuousFilter<S> {
        let mut out = ContinuousFilter {
            channels: vec![CoeffGrid::zeros(f.common_bandwidth()); f.channel_count()],
            bandwidths: f.bandwidths.clone(),
        };
        for (sample, alpha, _) in &self.samples {
            let s = score_projected(f, sample).expect("operator dims fixed at construction");
            for (oc, zc) in out.channels.iter_mut().zip(&sample.channels) {
                oc.accumulate_conj_product(*alpha, zc, &s.coeffs);
            }
        }
        for (oc, fc) in out.channels.iter_mut().zip(&f.channels) {
            let reg = fc.convolve_truncated(&self.squared_kernel);
            oc.axpy(S::one(), &reg);
        }
        out.apply_masks();
        out
    }

    /// Right-hand side `A* y` of the normal equations.
    pub fn rhs(&self) -> ContinuousFilter<S> {
        let bw = self.samples[0].0.common_bandwidth();
        let mut out = ContinuousFilter {
            channels: vec![CoeffGrid::zeros(bw); self.samples[0].0.channel_count()],
            bandwidths: self.bandwidths.clone(),
        };
        for (sample, alpha, label) in &self.samples {
            let y = label.embed(bw);
            for (oc, zc) in out.channels.iter_mut().zip(&sample.channels) {
                oc.accumulate_conj_product(*alpha, zc, &y);
            }
        }
        out.apply_masks();
        out
    }

    /// Data term plus spatial penalty at `f` (no projection constant); the
    /// quantity CG is guaranteed not to increase.
    pub fn objective(&self, f: &ContinuousFilter<S>) -> S {
        let mut acc = S::zero();
        for (sample, alpha, label) in &self.samples {
            let s = score_projected(f, sample).expect("dims fixed");
            let mut d = s.coeffs;
            d.axpy(-S::one(), &label.embed(d.bandwidth()));
            acc += *alpha * d.norm_sqr();
        }
        // squared_kernel already holds conv(w, w); the penalty is
        // sum_c ||w-hat * f-hat_c||^2 over the extended support, which equals
        // Re<f, conv(squared_kernel, f)> for band-limited w and f.
        for fc in &f.channels {
            let reg = fc.convolve_truncated(&self.squared_kernel);
            acc += fc.dot_re(&reg);
        }
        acc
    }
}

/// Solves the filter normal equations by conjugate gradients, warm-started
/// at `f0`. Terminates when the relative residual drops below `tol` or after
/// `max_iters` iterations. The returned filter never has a larger objective
/// than the starting point.
pub fn solve_filter_cg<S: Scalar>(
    memory: &SampleMemory<S>,
    w: &SpatialRegularizer<S>,
    f0: &ContinuousFilter<S>,
    max_iters: usize,
    tol: S,
) -> Result<(ContinuousFilter<S>, CgStats<S>)> {
    let op = FilterOperator::from_memory(memory, w)?;
    cg_solve(
        |f| op.apply(f),
        |f| op.objective(f),
        &op.rhs(),
        f0,
        max_iters,
        tol,
    )
}

/// Preconditioner-free CG over filter-shaped vectors with a monotonicity
/// safeguard on the supplied objective.
pub fn cg_solve<S, A, Q>(
    apply: A,
    objective: Q,
    rhs: &ContinuousFilter<S>,
    f0: &ContinuousFilter<S>,
    max_iters: usize,
    tol: S,
) -> Result<(ContinuousFilter<S>, CgStats<S>)>
where
    S: Scalar,
    A: Fn(&ContinuousFilter<S>) -> ContinuousFilter<S>,
    Q: Fn(&ContinuousFilter<S>) -> S,
{
    let rhs_norm = rhs.norm_sqr().sqrt();
    let rel = |rr: S| {
        if rhs_norm > S::zero() {
            rr.sqrt() / rhs_norm
        } else {
            S::zero()
        }
    };
    let start_objective = objective(f0);
    let mut x = f0.clone();
    let mut r = rhs.clone();
    r.axpy(-S::one(), &apply(&x));
    let mut p = r.clone();
    let mut rr = r.norm_sqr();
    let mut stats = CgStats {
        iterations: 0,
        relative_residual: rel(rr),
    };
    for iter in 0..max_iters {
        if stats.relative_residual <= tol {
            break;
        }
        let ap = apply(&p);
        let p_ap = p.dot_re(&ap);
        if !p_ap.is_finite() {
            return Err(Error::Numeric(format!(
                "non-finite curvature at CG iteration {iter}"
            )));
        }
        if p_ap <= S::zero() {
            // Exhausted numerically; the current iterate is still valid.
            break;
        }
        let alpha = rr / p_ap;
        x.axpy(alpha, &p);
        r.axpy(-alpha, &ap);
        let rr_new = r.norm_sqr();
        if !rr_new.is_finite() {
            return Err(Error::Numeric(format!(
                "non-finite residual at CG iteration {iter}"
            )));
        }
        let beta = rr_new / rr;
        let mut p_next = r.clone();
        p_next.axpy(beta, &p);
        p = p_next;
        rr = rr_new;
        stats.iterations = iter + 1;
        stats.relative_residual = rel(rr);
    }
    // Late-iteration rounding must never yield a worse point than the start.
    if objective(&x) > start_objective * (S::one() + lit::<S>(1e-12)) {
        return Ok((f0.clone(), stats));
    }
    Ok((x, stats))
}
