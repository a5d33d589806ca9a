//! Axis-aligned boxes and four-point polygons in continuous pixel coordinates.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Axis-aligned bounding box. `x`/`y` is the top-left corner; coordinates are
/// continuous (subpixel positions are meaningful), `w > 0`, `h > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox<S> {
    pub x: S,
    pub y: S,
    pub w: S,
    pub h: S,
}

impl<S: Scalar> BoundingBox<S> {
    pub fn new(x: S, y: S, w: S, h: S) -> Result<Self> {
        for (name, v) in [("x", x), ("y", y), ("w", w), ("h", h)] {
            if !v.is_finite() {
                return Err(Error::Geometry(format!("non-finite box field {name}")));
            }
        }
        if w <= S::zero() || h <= S::zero() {
            return Err(Error::Geometry(format!(
                "box sides must be positive, got w={w} h={h}"
            )));
        }
        Ok(BoundingBox { x, y, w, h })
    }

    pub fn center(&self) -> (S, S) {
        let half = lit::<S>(0.5);
        (self.x + self.w * half, self.y + self.h * half)
    }

    pub fn area(&self) -> S {
        self.w * self.h
    }

    pub fn from_center(cx: S, cy: S, w: S, h: S) -> Result<Self> {
        let half = lit::<S>(0.5);
        Self::new(cx - w * half, cy - h * half, w, h)
    }

    /// Intersection over union with `other`. Symmetric, in `[0, 1]`.
    pub fn iou(&self, other: &BoundingBox<S>) -> S {
        let ix = (self.x + self.w).min(other.x + other.w) - self.x.max(other.x);
        let iy = (self.y + self.h).min(other.y + other.h) - self.y.max(other.y);
        if ix <= S::zero() || iy <= S::zero() {
            return S::zero();
        }
        let inter = ix * iy;
        let union = self.area() + other.area() - inter;
        // Rounding can push the ratio a few ulps past 1 for near-identical
        // boxes; the overlap is 1 by definition there.
        (inter / union).min(S::one())
    }
}

/// Four-corner polygon, as stored in eight-value ground-truth lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polygon<S> {
    pub points: [(S, S); 4],
}

impl<S: Scalar> Polygon<S> {
    pub fn new(points: [(S, S); 4]) -> Result<Self> {
        if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return Err(Error::Geometry("non-finite polygon corner".into()));
        }
        Ok(Polygon { points })
    }

    /// Axis-aligned bounding rectangle of the corners. Rejects polygons that
    /// collapse to a point or a line.
    pub fn bounding_box(&self) -> Result<BoundingBox<S>> {
        let mut min_x = self.points[0].0;
        let mut max_x = min_x;
        let mut min_y = self.points[0].1;
        let mut max_y = min_y;
        for &(px, py) in &self.points[1..] {
            min_x = min_x.min(px);
            max_x = max_x.max(px);
            min_y = min_y.min(py);
            max_y = max_y.max(py);
        }
        if max_x <= min_x || max_y <= min_y {
            return Err(Error::Geometry(format!(
                "degenerate polygon: extent {}x{}",
                max_x - min_x,
                max_y - min_y
            )));
        }
        BoundingBox::new(min_x, min_y, max_x - min_x, max_y - min_y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bx(x: f64, y: f64, w: f64, h: f64) -> BoundingBox<f64> {
        BoundingBox::new(x, y, w, h).unwrap()
    }

    #[test]
    fn iou_identical_boxes() {
        let a = bx(0.0, 0.0, 10.0, 10.0);
        assert_eq!(a.iou(&a), 1.0);
    }

    #[test]
    fn iou_disjoint_boxes() {
        let a = bx(0.0, 0.0, 2.0, 2.0);
        let b = bx(5.0, 5.0, 2.0, 2.0);
        assert_eq!(a.iou(&b), 0.0);
    }

    #[test]
    fn iou_partial_overlap() {
        // intersection 1x2 = 2, union 4 + 4 - 2 = 6
        let a = bx(0.0, 0.0, 2.0, 2.0);
        let b = bx(1.0, 0.0, 2.0, 2.0);
        assert!((a.iou(&b) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn iou_works_in_f32() {
        let a = BoundingBox::<f32>::new(0.0, 0.0, 2.0, 2.0).unwrap();
        let b = BoundingBox::<f32>::new(1.0, 0.0, 2.0, 2.0).unwrap();
        assert!((a.iou(&b) - 1.0 / 3.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_degenerate_boxes() {
        assert!(BoundingBox::new(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(BoundingBox::new(0.0, 0.0, 1.0, -2.0).is_err());
        assert!(BoundingBox::new(f64::NAN, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn polygon_axis_aligned_rectangle() {
        let p = Polygon::new([(0.0, 0.0), (4.0, 0.0), (4.0, 2.0), (0.0, 2.0)]).unwrap();
        let b = p.bounding_box().unwrap();
        assert_eq!(b, bx(0.0, 0.0, 4.0, 2.0));
    }

    #[test]
    fn polygon_rotated_square() {
        let r = std::f64::consts::SQRT_2 / 2.0;
        let p = Polygon::new([(r, 0.0), (0.0, r), (-r, 0.0), (0.0, -r)]).unwrap();
        let b = p.bounding_box().unwrap();
        assert!((b.x + r).abs() < 1e-15);
        assert!((b.y + r).abs() < 1e-15);
        assert!((b.w - 2.0 * r).abs() < 1e-15);
        assert!((b.h - 2.0 * r).abs() < 1e-15);
    }

    #[test]
    fn polygon_collapsed_to_point_is_rejected() {
        let p = Polygon::new([(1.0, 1.0); 4]).unwrap();
        assert!(p.bounding_box().is_err());
    }

    #[test]
    fn polygon_of_box_corners_round_trips() {
        let b = bx(3.25, -1.5, 7.0, 2.5);
        let p = Polygon::new([
            (b.x, b.y),
            (b.x + b.w, b.y),
            (b.x + b.w, b.y + b.h),
            (b.x, b.y + b.h),
        ])
        .unwrap();
        assert_eq!(p.bounding_box().unwrap(), b);
    }

    fn arb_box() -> impl Strategy<Value = BoundingBox<f64>> {
        (
            -100.0f64..100.0,
            -100.0f64..100.0,
            0.1f64..50.0,
            0.1f64..50.0,
        )
            .prop_map(|(x, y, w, h)| bx(x, y, w, h))
    }

    proptest! {
        #[test]
        fn iou_symmetric(a in arb_box(), b in arb_box()) {
            prop_assert_eq!(a.iou(&b), b.iou(&a));
        }

        #[test]
        fn iou_bounded_and_reflexive(a in arb_box(), b in arb_box()) {
            let v = a.iou(&b);
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert!(1.0 - a.iou(&a) < 1e-12);
        }

        #[test]
        fn iou_translation_invariant(a in arb_box(), b in arb_box(),
                                     dx in -20.0f64..20.0, dy in -20.0f64..20.0) {
            let shift = |r: &BoundingBox<f64>| bx(r.x + dx, r.y + dy, r.w, r.h);
            let before = a.iou(&b);
            let after = shift(&a).iou(&shift(&b));
            prop_assert!((before - after).abs() < 1e-9);
        }
    }
}
