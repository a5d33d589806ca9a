//! Channel projection matrix and its deterministic initialization.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

use super::coeff::CoeffGrid;
use super::interp::InterpolatedSample;

/// Real matrix mapping `rows` input feature channels to `cols <= rows`
/// filter channels. Stored row-major: `data[r * cols + c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> ProjectionMatrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if cols == 0 || cols > rows {
            return Err(Error::Dimension(format!(
                "projection must map {rows} channels onto 1..={rows}, got {cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "projection buffer {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite projection entry".into()));
        }
        Ok(ProjectionMatrix { rows, cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![S::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = S::one();
        }
        ProjectionMatrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> S {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn frobenius_sqr(&self) -> S {
        self.data.iter().map(|&v| v * v).sum()
    }

    pub fn add_scaled(&self, other: &ProjectionMatrix<S>, s: S) -> ProjectionMatrix<S> {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a + b * s)
            .collect();
        ProjectionMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Projects a sample's channels: output channel `c` is
    /// `sum_r P[r, c] * input[r]`. Per-output bandwidths are the maxima over
    /// contributing inputs.
    pub fn project(&self, sample: &InterpolatedSample<S>) -> Result<InterpolatedSample<S>> {
        if sample.channel_count() != self.rows {
            return Err(Error::Dimension(format!(
                "projection expects {} channels, sample has {}",
                self.rows,
                sample.channel_count()
            )));
        }
        let common = sample.common_bandwidth();
        let mut channels = Vec::with_capacity(self.cols);
        let mut bandwidths = Vec::with_capacity(self.cols);
        for c in 0..self.cols {
            let mut acc = CoeffGrid::zeros(common);
            let mut bw = 0usize;
            for r in 0..self.rows {
                let p = self.get(r, c);
                if p == S::zero() {
                    continue;
                }
                acc.axpy(p, &sample.channels[r]);
                bw = bw.max(sample.bandwidths[r]);
            }
            channels.push(acc);
            bandwidths.push(bw.max(1));
        }
        Ok(InterpolatedSample {
            channels,
            bandwidths,
        })
    }
}

/// Jacobi eigendecomposition of a symmetric matrix; returns eigenvalues and
/// eigenvectors (columns), sorted by descending eigenvalue. Deterministic.
fn symmetric_eigen<S: Scalar>(mut a: Vec<Vec<S>>) -> (Vec<S>, Vec<Vec<S>>) {
    let n = a.len();
    let mut v = vec![vec![S::zero(); n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = S::one();
    }
    for _sweep in 0..100 {
        let mut off = S::zero();
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < lit::<S>(1e-24) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < lit::<S>(1e-30) {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (lit::<S>(2.0) * a[p][q]);
                let t = {
                    let sign = if theta >= S::zero() { S::one() } else { -S::one() };
                    sign / (theta.abs() + (theta * theta + S::one()).sqrt())
                };
                let c = S::one() / (t * t + S::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).unwrap());
    let eigvals: Vec<S> = order.iter().map(|&i| a[i][i]).collect();
    let eigvecs: Vec<Vec<S>> = order
        .iter()
        .map(|&col| {
            let mut vec: Vec<S> = v.iter().map(|row| row[col]).collect();
            // Deterministic sign: largest-magnitude component positive.
            let mut lead = 0usize;
            for (i, x) in vec.iter().enumerate() {
                if x.abs() > vec[lead].abs() {
                    lead = i;
                }
            }
            if vec[lead] < S::zero() {
                for x in &mut vec {
                    *x = -*x;
                }
            }
            vec
        })
        .collect();
    (eigvals, eigvecs)
}

/// Initializes the projection from the principal components of the sample's
/// channel covariance (computed on the interpolated coefficient blocks).
/// Rank-deficient directions are replaced once by orthonormal completion
/// against the canonical basis; if completion fails the error is returned.
pub fn init_projection<S: Scalar>(
    sample: &InterpolatedSample<S>,
    cols: usize,
) -> Result<ProjectionMatrix<S>> {
    let rows = sample.channel_count();
    if cols == 0 || cols > rows {
        return Err(Error::Dimension(format!(
            "cannot project {rows} channels onto {cols}"
        )));
    }
    // Channel covariance via real inner products of coefficient blocks.
    let mut cov = vec![vec![S::zero(); rows]; rows];
    for i in 0..rows {
        for j in i..rows {
            let v = sample.channels[i].dot_re(&sample.channels[j]);
            cov[i][j] = v;
            cov[j][i] = v;
        }
    }
    let (eigvals, eigvecs) = symmetric_eigen(cov);
    let scale = eigvals[0].max(lit::<S>(1e-30));
    let mut columns: Vec<Vec<S>> = Vec::with_capacity(cols);
    for c in 0..cols {
        if eigvals[c] > lit::<S>(1e-12) * scale {
            columns.push(eigvecs[c].clone());
        } else {
            // Reinitialize the deficient direction: pick the canonical basis
            // vector least explained by the columns so far, orthonormalize.
            let mut best: Option<Vec<S>> = None;
            let mut best_norm = lit::<S>(1e-9);
            for basis in 0..rows {
                let mut cand = vec![S::zero(); rows];
                cand[basis] = S::one();
                for col in &columns {
                    let d: S = col.iter().zip(&cand).map(|(&a, &b)| a * b).sum();
                    for (x, &c2) in cand.iter_mut().zip(col) {
                        *x -= d * c2;
                    }
                }
                let norm = cand.iter().map(|&x| x * x).sum::<S>().sqrt();
                if norm > best_norm {
                    for x in &mut cand {
                        *x /= norm;
                    }
                    best = Some(cand);
                    best_norm = norm;
                    break;
                }
            }
            match best {
                Some(col) => columns.push(col),
                None => {
                    return Err(Error::Numeric(format!(
                        "projection initialization rank-deficient at column {c}"
                    )))
                }
            }
        }
    }
    let mut data = vec![S::zero(); rows * cols];
    for (c, col) in columns.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            data[r * cols + c] = v;
        }
    }
    ProjectionMatrix::new(rows, cols, data)
}
