//! First-frame joint training of the filter and the channel projection.
//!
//! Each outer iteration linearizes the bilinear residual about the current
//! projection: with `P = P0 + dP` the score splits into a term linear in the
//! filter (through the `P0`-projected sample) and one linear in `dP`
//! (through the current filter estimate). The resulting convex least-squares
//! problem in `(f, dP)` is solved by conjugate gradients, and the step is
//! accepted through a backtracking safeguard that never lets the true
//! objective increase: the zero-step fallback reduces to the plain filter
//! solve, which is monotone by construction.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

use super::coeff::CoeffGrid;
use super::interp::InterpolatedSample;
use super::memory::SampleMemory;
use super::objective::eco_objective_fourier;
use super::projection::{init_projection, ProjectionMatrix};
use super::regularizer::SpatialRegularizer;
use super::score::ContinuousFilter;
use super::solver::solve_filter_cg;

/// Settings for the joint first-frame optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointConfig<S> {
    /// Number of projected channels; `None` keeps the identity projection
    /// frozen (no dimensionality reduction).
    pub output_channels: Option<usize>,
    pub gn_iterations: usize,
    pub cg_iterations: usize,
    pub tolerance: S,
    /// Penalty weight on the projection's Frobenius norm.
    pub projection_reg: S,
}

impl<S: Scalar> Default for JointConfig<S> {
    fn default() -> Self {
        JointConfig {
            output_channels: None,
            gn_iterations: 5,
            cg_iterations: 50,
            tolerance: lit(1e-6),
            projection_reg: lit(1e-4),
        }
    }
}

/// Result of the first-frame optimization.
#[derive(Debug, Clone)]
pub struct JointTraining<S> {
    pub filter: ContinuousFilter<S>,
    pub projection: ProjectionMatrix<S>,
    /// Objective value before training and after each outer iteration.
    pub objective_trace: Vec<S>,
}

/// Joint variable for the linearized subproblem.
#[derive(Clone)]
struct JointVec<S> {
    filter: ContinuousFilter<S>,
    dp: Vec<S>,
}

impl<S: Scalar> JointVec<S> {
    fn zeros(filter_template: &ContinuousFilter<S>, dp_len: usize) -> Self {
        let mut filter = filter_template.clone();
        for ch in &mut filter.channels {
            ch.scale(S::zero());
        }
        JointVec {
            filter,
            dp: vec![S::zero(); dp_len],
        }
    }

    fn dot(&self, other: &JointVec<S>) -> S {
        self.filter.dot_re(&other.filter)
            + self
                .dp
                .iter()
                .zip(&other.dp)
                .map(|(&a, &b)| a * b)
                .sum::<S>()
    }

    fn axpy(&mut self, s: S, other: &JointVec<S>) {
        self.filter.axpy(s, &other.filter);
        for (a, &b) in self.dp.iter_mut().zip(&other.dp) {
            *a += b * s;
        }
    }

    fn norm_sqr(&self) -> S {
        self.dot(self)
    }
}

struct JointOperator<'a, S: Scalar> {
    raw: &'a InterpolatedSample<S>,
    projected: InterpolatedSample<S>,
    f0: &'a ContinuousFilter<S>,
    squared_kernel: CoeffGrid<S>,
    projection_reg: S,
    rows: usize,
    cols: usize,
}

impl<'a, S: Scalar> JointOperator<'a, S> {
    /// Score of the linearized model at `u`.
    fn forward(&self, u: &JointVec<S>) -> CoeffGrid<S> {
        let bw = u.filter.common_bandwidth();
        let mut acc = CoeffGrid::zeros(bw);
        for (f, z) in u.filter.channels.iter().zip(&self.projected.channels) {
            acc.axpy(S::one(), &f.mul_pointwise(z));
        }
        // dP contribution through the current filter estimate.
        for c in 0..self.cols {
            let mut zc = CoeffGrid::zeros(bw);
            for r in 0..self.rows {
                let p = u.dp[r * self.cols + c];
                if p != S::zero() {
                    zc.axpy(p, &self.raw.channels[r]);
                }
            }
            acc.axpy(S::one(), &self.f0.channels[c].mul_pointwise(&zc));
        }
        acc
    }

    /// Adjoint of [`Self::forward`].
    fn adjoint(&self, g: &CoeffGrid<S>) -> JointVec<S> {
        let mut out = JointVec::zeros(self.f0, self.rows * self.cols);
        for (oc, zc) in out.filter.channels.iter_mut().zip(&self.projected.channels) {
            oc.accumulate_conj_product(S::one(), zc, g);
        }
        out.filter.apply_masks();
        for c in 0..self.cols {
            // dp[r, c] = Re <f0_c . z_r, g> = Re sum conj(z_r) conj(f0_c) g.
            let fg = self.f0.channels[c].conj_mul(g);
            for r in 0..self.rows {
                out.dp[r * self.cols + c] = self.raw.channels[r].dot_re(&fg);
            }
        }
        out
    }

    fn apply(&self, u: &JointVec<S>) -> JointVec<S> {
        let mut out = self.adjoint(&self.forward(u));
        for (oc, fc) in out.filter.channels.iter_mut().zip(&u.filter.channels) {
            oc.axpy(S::one(), &fc.convolve_truncated(&self.squared_kernel));
        }
        out.filter.apply_masks();
        for (o, &d) in out.dp.iter_mut().zip(&u.dp) {
            *o += self.projection_reg * d;
        }
        out
    }

    fn rhs(&self, label: &CoeffGrid<S>, p0: &ProjectionMatrix<S>) -> JointVec<S> {
        let mut out = self.adjoint(&label.embed(self.f0.common_bandwidth()));
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.dp[r * self.cols + c] -= self.projection_reg * p0.get(r, c);
            }
        }
        out
    }
}

fn joint_cg<S: Scalar>(
    op: &JointOperator<'_, S>,
    rhs: &JointVec<S>,
    u0: JointVec<S>,
    max_iters: usize,
    tol: S,
) -> Result<JointVec<S>> {
    let rhs_norm = rhs.norm_sqr().sqrt();
    let mut x = u0;
    let mut r = rhs.clone();
    r.axpy(-S::one(), &op.apply(&x));
    let mut p = r.clone();
    let mut rr = r.norm_sqr();
    for iter in 0..max_iters {
        if rhs_norm > S::zero() && rr.sqrt() / rhs_norm <= tol {
            break;
        }
        let ap = op.apply(&p);
        let p_ap = p.dot(&ap);
        if !p_ap.is_finite() {
            return Err(Error::Numeric(format!(
                "non-finite curvature in joint CG at iteration {iter}"
            )));
        }
        if p_ap <= S::zero() {
            break;
        }
        let alpha = rr / p_ap;
        x.axpy(alpha, &p);
        r.axpy(-alpha, &ap);
        let rr_new = r.norm_sqr();
        if !rr_new.is_finite() {
            return Err(Error::Numeric(format!(
                "non-finite residual in joint CG at iteration {iter}"
            )));
        }
        let beta = rr_new / rr;
        let mut p_next = r.clone();
        p_next.axpy(beta, &p);
        p = p_next;
        rr = rr_new;
    }
    Ok(x)
}

fn single_sample_memory<S: Scalar>(
    sample: InterpolatedSample<S>,
    label: CoeffGrid<S>,
) -> SampleMemory<S> {
    let mut m = SampleMemory::new(1, lit(0.5)).expect("static parameters");
    m.insert(sample, label);
    m
}

fn objective_at<S: Scalar>(
    filter: &ContinuousFilter<S>,
    p: &ProjectionMatrix<S>,
    raw: &InterpolatedSample<S>,
    label: &CoeffGrid<S>,
    w: &SpatialRegularizer<S>,
    lambda: S,
) -> Result<S> {
    let memory = single_sample_memory(p.project(raw)?, label.clone());
    eco_objective_fourier(filter, p, &memory, w, lambda)
}

/// Learns the filter and projection from the first sample. The objective is
/// non-increasing across outer iterations by construction.
pub fn learn_joint_gn<S: Scalar>(
    sample: &InterpolatedSample<S>,
    label: &CoeffGrid<S>,
    w: &SpatialRegularizer<S>,
    cfg: &JointConfig<S>,
) -> Result<JointTraining<S>> {
    let channels = sample.channel_count();
    let (mut projection, learn_projection) = match cfg.output_channels {
        None => (ProjectionMatrix::identity(channels), false),
        Some(cols) => (init_projection(sample, cols)?, true),
    };

    let projected = projection.project(sample)?;
    let mut filter = ContinuousFilter::zeros_like(&projected);
    let mut trace = Vec::with_capacity(cfg.gn_iterations + 1);
    trace.push(objective_at(
        &filter,
        &projection,
        sample,
        label,
        w,
        cfg.projection_reg,
    )?);

    for _outer in 0..cfg.gn_iterations {
        let current = *trace.last().expect("trace seeded");
        let projected = projection.project(sample)?;

        let mut accepted: Option<(ContinuousFilter<S>, ProjectionMatrix<S>, S)> = None;
        if learn_projection {
            let op = JointOperator {
                raw: sample,
                projected: projected.clone(),
                f0: &filter,
                squared_kernel: w.squared_kernel(),
                projection_reg: cfg.projection_reg,
                rows: projection.rows(),
                cols: projection.cols(),
            };
            let rhs = op.rhs(label, &projection);
            let mut u0 = JointVec::zeros(&filter, projection.rows() * projection.cols());
            u0.filter = filter.clone();
            let u = joint_cg(&op, &rhs, u0, cfg.cg_iterations, cfg.tolerance)?;
            drop(op);
            // The full linearized step first; damped projections afterwards.
            let dp = ProjectionMatrix::new(projection.rows(), projection.cols(), u.dp.clone())?;
            let p1 = projection.add_scaled(&dp, S::one());
            let e1 = objective_at(&u.filter, &p1, sample, label, w, cfg.projection_reg)?;
            if e1 <= current * (S::one() + lit::<S>(1e-12)) {
                accepted = Some((u.filter, p1, e1));
            } else {
                for step in [lit::<S>(0.5), lit::<S>(0.25)] {
                    let pc = projection.add_scaled(&dp, step);
                    let mem = single_sample_memory(pc.project(sample)?, label.clone());
                    let (fc, _) =
                        solve_filter_cg(&mem, w, &filter, cfg.cg_iterations, cfg.tolerance)?;
                    let ec = objective_at(&fc, &pc, sample, label, w, cfg.projection_reg)?;
                    if ec <= current * (S::one() + lit::<S>(1e-12)) {
                        accepted = Some((fc, pc, ec));
                        break;
                    }
                }
            }
        }
        let (next_filter, next_projection, next_objective) = match accepted {
            Some(step) => step,
            None => {
                // Zero projection step: plain filter solve, monotone by the
                // CG safeguard.
                let mem = single_sample_memory(projected, label.clone());
                let (fc, _) = solve_filter_cg(&mem, w, &filter, cfg.cg_iterations, cfg.tolerance)?;
                let ec = objective_at(&fc, &projection, sample, label, w, cfg.projection_reg)?;
                (fc, projection.clone(), ec)
            }
        };
        if next_objective > current * (S::one() + lit::<S>(1e-9)) {
            return Err(Error::Numeric(
                "joint optimization failed to hold the objective monotone".into(),
            ));
        }
        filter = next_filter;
        projection = next_projection;
        trace.push(next_objective);
    }

    Ok(JointTraining {
        filter,
        projection,
        objective_trace: trace,
    })
}
