//! Square 2-D FFTs on top of `rustfft`, with per-instance plan caching.
//!
//! Conventions: the forward transform is unnormalized,
//! `X[k] = sum_n x[n] exp(-i 2 pi k.n / N)`, and [`Fft2d::inverse`] applies
//! the `1/N^2` factor so that a forward/inverse round trip is the identity.
//! Transforms run at the exact grid size (no padding).
//!
//! An `Fft2d` caches plans per size and is intended to be owned by a single
//! worker; it is cheap to construct one per thread.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::scalar::{cast_usize, Scalar};

pub struct Fft2d<S: Scalar> {
    planner: FftPlanner<S>,
    forward: HashMap<usize, Arc<dyn Fft<S>>>,
    inverse: HashMap<usize, Arc<dyn Fft<S>>>,
}

impl<S: Scalar> Default for Fft2d<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> Fft2d<S> {
    pub fn new() -> Self {
        Fft2d {
            planner: FftPlanner::new(),
            forward: HashMap::new(),
            inverse: HashMap::new(),
        }
    }

    fn plan(&mut self, n: usize, dir: FftDirection) -> Arc<dyn Fft<S>> {
        let cache = match dir {
            FftDirection::Forward => &mut self.forward,
            FftDirection::Inverse => &mut self.inverse,
        };
        cache
            .entry(n)
            .or_insert_with(|| self.planner.plan_fft(n, dir))
            .clone()
    }

    fn transform(&mut self, data: &mut [Complex<S>], n: usize, dir: FftDirection) {
        assert_eq!(data.len(), n * n, "grid must be n x n");
        let plan = self.plan(n, dir);
        // Rows in place, then columns through a gather/scatter buffer.
        for row in data.chunks_exact_mut(n) {
            plan.process(row);
        }
        let mut col = vec![Complex::new(S::zero(), S::zero()); n];
        for x in 0..n {
            for y in 0..n {
                col[y] = data[y * n + x];
            }
            plan.process(&mut col);
            for y in 0..n {
                data[y * n + x] = col[y];
            }
        }
    }

    /// Unnormalized forward transform of an `n x n` grid.
    pub fn forward(&mut self, data: &mut [Complex<S>], n: usize) {
        self.transform(data, n, FftDirection::Forward);
    }

    /// Inverse transform of an `n x n` grid, including the `1/n^2` factor.
    pub fn inverse(&mut self, data: &mut [Complex<S>], n: usize) {
        self.transform(data, n, FftDirection::Inverse);
        let scale = S::one() / cast_usize::<S>(n * n);
        for v in data.iter_mut() {
            *v = *v * scale;
        }
    }

    /// Forward transform of a real-valued grid.
    pub fn forward_real(&mut self, values: &[S], n: usize) -> Vec<Complex<S>> {
        let mut buf: Vec<Complex<S>> = values
            .iter()
            .map(|&v| Complex::new(v, S::zero()))
            .collect();
        self.forward(&mut buf, n);
        buf
    }
}

/// Signed frequency for DFT bin `i` of an `n`-point transform
/// (`0, 1, ..., n/2-ish, -(n/2), ..., -1` in numpy order).
#[inline]
pub fn signed_freq(i: usize, n: usize) -> isize {
    if i < n.div_ceil(2) {
        i as isize
    } else {
        i as isize - n as isize
    }
}

/// DFT bin holding signed frequency `k` of an `n`-point transform.
#[inline]
pub fn freq_bin(k: isize, n: usize) -> usize {
    k.rem_euclid(n as isize) as usize
}
