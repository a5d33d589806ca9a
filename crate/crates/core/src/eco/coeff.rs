//! Truncated 2-D Fourier coefficient grids.
//!
//! A [`CoeffGrid`] holds the coefficients `c[k_y, k_x]` of a periodic
//! function on the unit square, `g(t) = sum_k c[k] exp(i 2 pi k . t)`, for
//! `|k_y|, |k_x| <= K`. With this convention the function-space `L^2` norm
//! over one period equals the plain coefficient norm (Parseval), which the
//! objective code relies on.

use num_complex::Complex;

use crate::fft::{freq_bin, Fft2d};
use crate::scalar::{cast_usize, lit, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffGrid<S> {
    bandwidth: usize,
    data: Vec<Complex<S>>,
}

impl<S: Scalar> CoeffGrid<S> {
    pub fn zeros(bandwidth: usize) -> Self {
        let side = 2 * bandwidth + 1;
        CoeffGrid {
            bandwidth,
            data: vec![Complex::new(S::zero(), S::zero()); side * side],
        }
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn side(&self) -> usize {
        2 * self.bandwidth + 1
    }

    pub fn data(&self) -> &[Complex<S>] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex<S>] {
        &mut self.data
    }

    #[inline]
    fn index(&self, ky: isize, kx: isize) -> usize {
        let k = self.bandwidth as isize;
        debug_assert!(ky.abs() <= k && kx.abs() <= k);
        ((ky + k) as usize) * self.side() + (kx + k) as usize
    }

    #[inline]
    pub fn get(&self, ky: isize, kx: isize) -> Complex<S> {
        self.data[self.index(ky, kx)]
    }

    #[inline]
    pub fn set(&mut self, ky: isize, kx: isize, v: Complex<S>) {
        let i = self.index(ky, kx);
        self.data[i] = v;
    }

    /// Iterates `(ky, kx, value)` over the full grid.
    pub fn iter(&self) -> impl Iterator<Item = (isize, isize, Complex<S>)> + '_ {
        let k = self.bandwidth as isize;
        let side = self.side() as isize;
        self.data
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i as isize / side - k, i as isize % side - k, v))
    }

    /// Copies into a grid of bandwidth `target >= self.bandwidth`,
    /// zero-padding the new frequencies.
    pub fn embed(&self, target: usize) -> CoeffGrid<S> {
        assert!(target >= self.bandwidth);
        let mut out = CoeffGrid::zeros(target);
        for (ky, kx, v) in self.iter() {
            out.set(ky, kx, v);
        }
        out
    }

    /// Zeroes all coefficients with `max(|k_y|, |k_x|) > limit`.
    pub fn truncate(&mut self, limit: usize) {
        if limit >= self.bandwidth {
            return;
        }
        let lim = limit as isize;
        let k = self.bandwidth as isize;
        let side = self.side();
        for ky in -k..=k {
            for kx in -k..=k {
                if ky.abs() > lim || kx.abs() > lim {
                    self.data[((ky + k) as usize) * side + (kx + k) as usize] =
                        Complex::new(S::zero(), S::zero());
                }
            }
        }
    }

    pub fn scale(&mut self, s: S) {
        for v in &mut self.data {
            *v = *v * s;
        }
    }

    /// `self += other * s` (other must share the bandwidth).
    pub fn axpy(&mut self, s: S, other: &CoeffGrid<S>) {
        assert_eq!(self.bandwidth, other.bandwidth);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += *b * s;
        }
    }

    /// Real inner product `Re <self, other>` over coefficients.
    pub fn dot_re(&self, other: &CoeffGrid<S>) -> S {
        assert_eq!(self.bandwidth, other.bandwidth);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    /// Squared coefficient norm, equal to the `L^2` norm of the function.
    pub fn norm_sqr(&self) -> S {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Pointwise product with another grid of the same bandwidth.
    pub fn mul_pointwise(&self, other: &CoeffGrid<S>) -> CoeffGrid<S> {
        assert_eq!(self.bandwidth, other.bandwidth);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = *a * *b;
        }
        out
    }

    /// `conj(self) . other` pointwise.
    pub fn conj_mul(&self, other: &CoeffGrid<S>) -> CoeffGrid<S> {
        assert_eq!(self.bandwidth, other.bandwidth);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a = a.conj() * *b;
        }
        out
    }

    /// Pointwise product with the conjugate of `other`, accumulated into
    /// `self` scaled by `s`: `self += s * conj(other) . rhs`.
    pub fn accumulate_conj_product(&mut self, s: S, other: &CoeffGrid<S>, rhs: &CoeffGrid<S>) {
        assert_eq!(self.bandwidth, other.bandwidth);
        assert_eq!(self.bandwidth, rhs.bandwidth);
        for ((a, b), r) in self.data.iter_mut().zip(&other.data).zip(&rhs.data) {
            *a += b.conj() * r * s;
        }
    }

    /// Full-support convolution of coefficient sequences: the result has
    /// bandwidth `self.bandwidth + kernel.bandwidth` and exactly represents
    /// the product function.
    pub fn convolve_full(&self, kernel: &CoeffGrid<S>) -> CoeffGrid<S> {
        let kb = kernel.bandwidth as isize;
        let out_bw = self.bandwidth + kernel.bandwidth;
        let mut out = CoeffGrid::zeros(out_bw);
        for (ky, kx, v) in self.iter() {
            if v.re == S::zero() && v.im == S::zero() {
                continue;
            }
            for wy in -kb..=kb {
                for wx in -kb..=kb {
                    let w = kernel.get(wy, wx);
                    if w.re == S::zero() && w.im == S::zero() {
                        continue;
                    }
                    let i = out.index(ky + wy, kx + wx);
                    out.data[i] += v * w;
                }
            }
        }
        out
    }

    /// Convolution truncated back to this grid's bandwidth.
    pub fn convolve_truncated(&self, kernel: &CoeffGrid<S>) -> CoeffGrid<S> {
        let kb = kernel.bandwidth as isize;
        let k = self.bandwidth as isize;
        let mut out = CoeffGrid::zeros(self.bandwidth);
        for (ky, kx, v) in self.iter() {
            if v.re == S::zero() && v.im == S::zero() {
                continue;
            }
            for wy in -kb..=kb {
                for wx in -kb..=kb {
                    let (oy, ox) = (ky + wy, kx + wx);
                    if oy.abs() > k || ox.abs() > k {
                        continue;
                    }
                    let w = kernel.get(wy, wx);
                    let i = out.index(oy, ox);
                    out.data[i] += v * w;
                }
            }
        }
        out
    }

    /// Evaluates the Fourier series at continuous position `(ty, tx)` on the
    /// unit square. Returns the real part.
    pub fn eval(&self, ty: S, tx: S) -> S {
        let two_pi = lit::<S>(2.0) * S::PI();
        let mut acc = Complex::new(S::zero(), S::zero());
        for (ky, kx, v) in self.iter() {
            let phase = two_pi * (lit::<S>(ky as f64) * ty + lit::<S>(kx as f64) * tx);
            acc += v * Complex::new(phase.cos(), phase.sin());
        }
        acc.re
    }

    /// Samples the function on a `grid x grid` spatial lattice
    /// (`t = m / grid`) via a zero-padded inverse FFT. Requires
    /// `grid >= side()`.
    pub fn eval_grid(&self, fft: &mut Fft2d<S>, grid: usize) -> Vec<S> {
        assert!(grid >= self.side(), "evaluation grid must cover the band");
        let mut buf = vec![Complex::new(S::zero(), S::zero()); grid * grid];
        for (ky, kx, v) in self.iter() {
            buf[freq_bin(ky, grid) * grid + freq_bin(kx, grid)] += v;
        }
        // The inverse FFT computes (1/G^2) sum X exp(+i...); coefficients
        // enter unnormalized, so undo the scaling.
        fft.inverse(&mut buf, grid);
        let g2 = cast_usize::<S>(grid * grid);
        buf.into_iter().map(|c| c.re * g2).collect()
    }

    /// Maximum conjugate-symmetry violation `|c[-k] - conj(c[k])|`.
    pub fn conjugate_asymmetry(&self) -> S {
        let k = self.bandwidth as isize;
        let mut worst = S::zero();
        for ky in -k..=k {
            for kx in -k..=k {
                let d = (self.get(-ky, -kx) - self.get(ky, kx).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}
