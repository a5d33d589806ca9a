//! Spatial penalty on filter energy.
//!
//! The penalty is a raised-cosine bowl centered on the target,
//!
//! `w(t) = base + sum_axis growth * (1 - cos(2 pi (t - 1/2))) / (1 - cos(2 pi r_axis))`,
//!
//! which is band-limited by construction (DC plus one harmonic per axis),
//! equals `base` exactly at the target center, `base + 2 * growth` at the
//! target corner `(r_u, r_v)` from center, never drops below `base`, and
//! grows quadratically near the center like the conventional polynomial
//! bowl it stands in for.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

use super::coeff::CoeffGrid;

/// Parameters of the penalty bowl. `radii` are the target half-sizes in
/// continuous units of the unit period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizerParams<S> {
    pub base: S,
    pub growth: S,
    pub radii: (S, S),
}

/// The penalty function stored as truncated Fourier coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialRegularizer<S> {
    pub params: RegularizerParams<S>,
    coeffs: CoeffGrid<S>,
}

/// Builds the penalty from explicit parameters.
pub fn spatial_reg<S: Scalar>(params: RegularizerParams<S>) -> Result<SpatialRegularizer<S>> {
    let RegularizerParams { base, growth, radii } = params;
    if !(base > S::zero()) || !base.is_finite() {
        return Err(Error::Config(format!("base weight must be positive, got {base}")));
    }
    if growth < S::zero() || !growth.is_finite() {
        return Err(Error::Config(format!(
            "growth must be nonnegative, got {growth}"
        )));
    }
    let half = lit::<S>(0.5);
    for r in [radii.0, radii.1] {
        if !(r > S::zero()) || r >= half {
            return Err(Error::Config(format!(
                "target half-size {r} must lie in (0, 0.5) of the period"
            )));
        }
    }
    let two_pi = lit::<S>(2.0) * S::PI();
    // Per-axis amplitude so the bowl reaches `growth` at the target radius.
    let amp = |r: S| growth / (S::one() - (two_pi * r).cos());
    let (ay, ax) = (amp(radii.0), amp(radii.1));

    // 1 - cos(2 pi (t - 1/2)) = 1 + cos(2 pi t); coefficients are +1/2 at
    // the first harmonic (both signs) and 1 at DC.
    let mut coeffs = CoeffGrid::zeros(1);
    coeffs.set(0, 0, Complex::new(base + ay + ax, S::zero()));
    coeffs.set(1, 0, Complex::new(ay * half, S::zero()));
    coeffs.set(-1, 0, Complex::new(ay * half, S::zero()));
    coeffs.set(0, 1, Complex::new(ax * half, S::zero()));
    coeffs.set(0, -1, Complex::new(ax * half, S::zero()));
    Ok(SpatialRegularizer { params, coeffs })
}

impl<S: Scalar> SpatialRegularizer<S> {
    /// Penalty calibrated so the value at the patch edge is `edge_factor`
    /// times the base weight.
    pub fn with_edge_factor(base: S, edge_factor: S, radii: (S, S)) -> Result<Self> {
        if edge_factor <= S::one() {
            return Err(Error::Config(format!(
                "edge factor must exceed 1, got {edge_factor}"
            )));
        }
        let two_pi = lit::<S>(2.0) * S::PI();
        // At the patch edge (distance 1/2 on both axes) each bowl term
        // contributes 2 / (1 - cos(2 pi r)) times growth.
        let edge_gain = lit::<S>(2.0) / (S::one() - (two_pi * radii.0).cos())
            + lit::<S>(2.0) / (S::one() - (two_pi * radii.1).cos());
        let growth = (edge_factor - S::one()) * base / edge_gain;
        spatial_reg(RegularizerParams {
            base,
            growth,
            radii,
        })
    }

    pub fn coeffs(&self) -> &CoeffGrid<S> {
        &self.coeffs
    }

    /// Pointwise penalty value at `(ty, tx)` via the inverse transform,
    /// measured on the unit period with the target centered at (0.5, 0.5).
    pub fn eval(&self, ty: S, tx: S) -> S {
        self.coeffs.eval(ty, tx)
    }

    /// Coefficient sequence of `w * w` (autocorrelation of a real, even
    /// `w-hat`), used by the normal-equations operator.
    pub fn squared_kernel(&self) -> CoeffGrid<S> {
        self.coeffs.convolve_full(&self.coeffs)
    }
}
