//! Image-translation losses, a translation-quality metric, and an analytic
//! grayscale-to-pseudo-thermal baseline translator.

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::scalar::{cast_usize, lit, Scalar};

/// Probability clamp keeping discriminator outputs inside the open unit
/// interval.
const PROB_EPS: f64 = 1e-7;

/// Real-valued single-channel image used by the loss evaluators.
#[derive(Debug, Clone, PartialEq)]
pub struct RealImage<S> {
    pub width: usize,
    pub height: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> RealImage<S> {
    pub fn new(width: usize, height: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Dimension(format!(
                "buffer {} does not match {width}x{height}",
                data.len()
            )));
        }
        Ok(RealImage {
            width,
            height,
            data,
        })
    }

    pub fn from_frame(frame: &Frame) -> Self {
        RealImage {
            width: frame.width(),
            height: frame.height(),
            data: frame.luma(),
        }
    }

    fn same_shape(&self, other: &RealImage<S>) -> bool {
        self.width == other.width && self.height == other.height
    }
}

/// Translation domains for mapping functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    X,
    Y,
}

enum MapKind<S> {
    Identity,
    /// `gain * v + bias`, optionally clamped to the 8-bit range.
    Affine { gain: S, bias: S, clamp: bool },
    Custom(Box<dyn Fn(&RealImage<S>) -> RealImage<S> + Send + Sync>),
}

/// Deterministic image-to-image mapping with tagged domains.
pub struct MappingFn<S> {
    pub from: Domain,
    pub to: Domain,
    kind: MapKind<S>,
}

impl<S: Scalar> MappingFn<S> {
    pub fn identity(from: Domain, to: Domain) -> Self {
        MappingFn {
            from,
            to,
            kind: MapKind::Identity,
        }
    }

    pub fn affine(from: Domain, to: Domain, gain: S, bias: S, clamp: bool) -> Self {
        MappingFn {
            from,
            to,
            kind: MapKind::Affine { gain, bias, clamp },
        }
    }

    pub fn custom(
        from: Domain,
        to: Domain,
        f: impl Fn(&RealImage<S>) -> RealImage<S> + Send + Sync + 'static,
    ) -> Self {
        MappingFn {
            from,
            to,
            kind: MapKind::Custom(Box::new(f)),
        }
    }

    pub fn apply(&self, img: &RealImage<S>) -> Result<RealImage<S>> {
        let out = match &self.kind {
            MapKind::Identity => img.clone(),
            MapKind::Affine { gain, bias, clamp } => {
                let data = img
                    .data
                    .iter()
                    .map(|&v| {
                        let mapped = *gain * v + *bias;
                        if *clamp {
                            mapped.max(S::zero()).min(lit(255.0))
                        } else {
                            mapped
                        }
                    })
                    .collect();
                RealImage {
                    width: img.width,
                    height: img.height,
                    data,
                }
            }
            MapKind::Custom(f) => f(img),
        };
        if !out.same_shape(img) {
            return Err(Error::Dimension(
                "mapping changed the image dimensions".into(),
            ));
        }
        Ok(out)
    }
}

/// Discriminator outputs clamped into the open unit interval.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminatorOutput<S>(Vec<S>);

impl<S: Scalar> DiscriminatorOutput<S> {
    pub fn new(values: Vec<S>) -> Self {
        let lo = lit::<S>(PROB_EPS);
        let hi = S::one() - lo;
        DiscriminatorOutput(values.into_iter().map(|v| v.max(lo).min(hi)).collect())
    }

    pub fn values(&self) -> &[S] {
        &self.0
    }
}

/// Mean over the batch of the sum of absolute pixel differences.
pub fn l1_loss<S: Scalar>(target: &[RealImage<S>], generated: &[RealImage<S>]) -> Result<S> {
    if target.len() != generated.len() || target.is_empty() {
        return Err(Error::Dimension(format!(
            "batch sizes differ or empty: {} vs {}",
            target.len(),
            generated.len()
        )));
    }
    let mut acc = S::zero();
    for (t, g) in target.iter().zip(generated) {
        if !t.same_shape(g) {
            return Err(Error::Dimension("image shapes differ in batch".into()));
        }
        acc += t
            .data
            .iter()
            .zip(&g.data)
            .map(|(&a, &b)| (a - b).abs())
            .sum::<S>();
    }
    Ok(acc / cast_usize::<S>(target.len()))
}

/// Adversarial objective value: mean log of real scores plus mean log of one
/// minus fake scores (natural log; clamping prevents infinities).
pub fn cgan_loss<S: Scalar>(
    d_real: &DiscriminatorOutput<S>,
    d_fake: &DiscriminatorOutput<S>,
) -> Result<S> {
    if d_real.values().is_empty() || d_fake.values().is_empty() {
        return Err(Error::Dimension("empty discriminator batch".into()));
    }
    let mean_ln = |vals: &[S], flip: bool| -> S {
        vals.iter()
            .map(|&v| if flip { (S::one() - v).ln() } else { v.ln() })
            .sum::<S>()
            / cast_usize::<S>(vals.len())
    };
    Ok(mean_ln(d_real.values(), false) + mean_ln(d_fake.values(), true))
}

/// Weighted sum of the adversarial and reconstruction terms.
pub fn pix2pix_objective<S: Scalar>(cgan: S, l1: S, lambda: S) -> Result<S> {
    if lambda < S::zero() {
        return Err(Error::Config(format!(
            "loss weight must be nonnegative, got {lambda}"
        )));
    }
    Ok(cgan + lambda * l1)
}

/// Round-trip consistency loss in both directions:
/// `mean |F(G(x)) - x| + mean |G(F(y)) - y|` (image sums, batch means).
pub fn cycle_loss<S: Scalar>(
    g: &MappingFn<S>,
    f: &MappingFn<S>,
    batch_x: &[RealImage<S>],
    batch_y: &[RealImage<S>],
) -> Result<S> {
    if g.from != Domain::X || g.to != Domain::Y || f.from != Domain::Y || f.to != Domain::X {
        return Err(Error::Config(
            "cycle loss needs G: X->Y and F: Y->X".into(),
        ));
    }
    if batch_x.is_empty() || batch_y.is_empty() {
        return Err(Error::Dimension("empty batch".into()));
    }
    let forward: Vec<RealImage<S>> = batch_x
        .iter()
        .map(|x| f.apply(&g.apply(x)?))
        .collect::<Result<_>>()?;
    let backward: Vec<RealImage<S>> = batch_y
        .iter()
        .map(|y| g.apply(&f.apply(y)?))
        .collect::<Result<_>>()?;
    Ok(l1_loss(batch_x, &forward)? + l1_loss(batch_y, &backward)?)
}

/// Average per-frame root-mean-square pixel difference between two
/// sequences, in 8-bit units. Symmetric; zero iff the sequences agree.
pub fn translation_distance<S: Scalar>(pred: &[Frame], gt: &[Frame]) -> Result<S> {
    if pred.len() != gt.len() || pred.is_empty() {
        return Err(Error::Dimension(format!(
            "sequence lengths differ or empty: {} vs {}",
            pred.len(),
            gt.len()
        )));
    }
    let mut acc = S::zero();
    for (p, g) in pred.iter().zip(gt) {
        if p.width() != g.width() || p.height() != g.height() {
            return Err(Error::Dimension("frame dimensions differ".into()));
        }
        let pl: Vec<S> = p.luma();
        let gl: Vec<S> = g.luma();
        let sq: S = pl
            .iter()
            .zip(&gl)
            .map(|(&a, &b)| {
                let d = a - b;
                d * d
            })
            .sum();
        acc += (sq / cast_usize::<S>(pl.len())).sqrt();
    }
    Ok(acc / cast_usize::<S>(pred.len()))
}

/// Analytic stand-in for a learned grayscale-to-thermal translator:
/// inverts the low-pass component, `out = 255 - boxblur(luma, radius)`.
/// The blur is a normalized box filter with edge replication.
pub fn pseudo_tir(frame: &Frame, radius: usize) -> Frame {
    let (w, h) = (frame.width(), frame.height());
    let luma: Vec<f64> = frame.luma();
    let at = |buf: &[f64], x: isize, y: isize| -> f64 {
        let xc = x.clamp(0, w as isize - 1) as usize;
        let yc = y.clamp(0, h as isize - 1) as usize;
        buf[yc * w + xc]
    };
    // Separable box blur: horizontal then vertical.
    let r = radius as isize;
    let norm = (2 * radius + 1) as f64;
    let mut tmp = vec![0.0f64; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = 0.0;
            for dx in -r..=r {
                acc += at(&luma, x + dx, y);
            }
            tmp[y as usize * w + x as usize] = acc / norm;
        }
    }
    let mut out = vec![0u8; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = 0.0;
            for dy in -r..=r {
                acc += at(&tmp, x, y + dy);
            }
            let blurred = acc / norm;
            out[y as usize * w + x as usize] = (255.0 - blurred).round().clamp(0.0, 255.0) as u8;
        }
    }
    Frame::new(w, h, 1, out).expect("dimensions preserved")
}
