//! Closed curves parametrized by arc length.
//!
//! Every curve handed to the chord functionals is an [`ArcLengthCurve`]:
//! an immutable, cheaply clonable handle to a unit-speed evaluator of
//! period `L`. Named families are evaluated in closed form per segment;
//! trigonometric curves ([`FourierCurve`]) go through an explicit
//! reparametrization step, see [`realize`].

mod descriptor;
mod families;
mod fourier;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use descriptor::{CoefficientEntry, CurveDescriptor};
pub use families::{
    make_circle, make_doubled_segment, make_ellipse, make_regular_polygon, make_stadium,
    make_trefoil,
};
pub use fourier::{make_fourier_curve, realize, FourierCurve, NormalizedFourier};

/// A point in R^d, d ≤ 3; unused coordinates are zero.
pub type Point = [f64; 3];

pub(crate) fn distance(a: &Point, b: &Point) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmoothnessClass {
    C2,
    PiecewiseC2,
    /// Curves with zero chords at nonzero separation, e.g. a doubled segment.
    Degenerate,
}

/// Unit-speed evaluation of a closed curve on `[0, length())`.
pub trait CurveShape: Send + Sync + fmt::Debug {
    fn length(&self) -> f64;

    /// Point at arc length `s`, already reduced to `[0, length())`.
    fn point(&self, s: f64) -> Point;
}

/// Closed unit-speed curve in R^d.
#[derive(Clone)]
pub struct ArcLengthCurve {
    dimension: usize,
    smoothness: SmoothnessClass,
    corners: Vec<f64>,
    curvature_jumps: Vec<f64>,
    shape: Arc<dyn CurveShape>,
    scale: f64,
    label: String,
}

impl fmt::Debug for ArcLengthCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ArcLengthCurve")
            .field("label", &self.label)
            .field("dimension", &self.dimension)
            .field("length", &self.length())
            .field("smoothness", &self.smoothness)
            .field("corners", &self.corners.len())
            .finish()
    }
}

pub(crate) fn check_dimension(d: usize) -> Result<()> {
    match d {
        2 | 3 => Ok(()),
        0 | 1 => Err(Error::param(
            "dimension",
            format!("must be at least 2, got {d}"),
        )),
        _ => Err(Error::UnsupportedDimension(d)),
    }
}

impl ArcLengthCurve {
    /// Wrap a unit-speed evaluator. `corners` and `curvature_jumps` are arc
    /// length positions in `[0, shape.length())`.
    pub fn from_shape(
        shape: Arc<dyn CurveShape>,
        dimension: usize,
        smoothness: SmoothnessClass,
        corners: Vec<f64>,
        curvature_jumps: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        check_dimension(dimension)?;
        let length = shape.length();
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::param(
                "length",
                format!("must be positive, got {length}"),
            ));
        }
        Ok(ArcLengthCurve {
            dimension,
            smoothness,
            corners,
            curvature_jumps,
            shape,
            scale: 1.0,
            label: label.into(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn length(&self) -> f64 {
        self.scale * self.shape.length()
    }

    pub fn smoothness(&self) -> SmoothnessClass {
        self.smoothness
    }

    /// Arc-length positions where the tangent jumps.
    pub fn corners(&self) -> Vec<f64> {
        self.corners.iter().map(|c| c * self.scale).collect()
    }

    /// Positions where the tangent is continuous but the curvature jumps.
    pub fn curvature_jumps(&self) -> Vec<f64> {
        self.curvature_jumps
            .iter()
            .map(|c| c * self.scale)
            .collect()
    }

    /// Corners and curvature jumps together: every point where the curve
    /// fails to be C2.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut all = self.corners();
        all.extend(self.curvature_jumps());
        all.sort_by(f64::total_cmp);
        all
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_planar(&self) -> bool {
        self.dimension == 2
    }

    /// Same curve uniformly scaled by `factor`, so its length is `factor·L`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::param(
                "factor",
                format!("must be positive, got {factor}"),
            ));
        }
        let mut out = self.clone();
        out.scale *= factor;
        Ok(out)
    }

    /// Same shape rescaled to total length `length`.
    pub fn with_length(&self, length: f64) -> Result<Self> {
        self.scaled(length / self.length())
    }

    /// Point at arc length `s`; any real `s` is reduced modulo `L`.
    pub fn point(&self, s: f64) -> Point {
        let base = self.shape.length();
        let mut t = (s / self.scale).rem_euclid(base);
        if t >= base {
            t = 0.0;
        }
        let p = self.shape.point(t);
        [self.scale * p[0], self.scale * p[1], self.scale * p[2]]
    }

    /// Length of the chord spanning the arc from `s` to `s + u`.
    pub fn chord(&self, s: f64, u: f64) -> Result<f64> {
        let l = self.length();
        if !(u > 0.0 && u < l) {
            return Err(Error::param("u", format!("must lie in (0, {l}), got {u}")));
        }
        Ok(self.chord_unchecked(s, u))
    }

    pub(crate) fn chord_unchecked(&self, s: f64, u: f64) -> f64 {
        distance(&self.point(s + u), &self.point(s))
    }

    /// Points at `n` equispaced arc lengths starting from `offset`.
    pub fn sample(&self, n: usize, offset: f64) -> Vec<Point> {
        let h = self.length() / n as f64;
        (0..n).map(|j| self.point(offset + j as f64 * h)).collect()
    }
}

/// Checks `u ∈ (0, L/2]`, the range of the mean-chord inequalities.
pub(crate) fn check_half_range(curve: &ArcLengthCurve, u: f64) -> Result<()> {
    let half = 0.5 * curve.length();
    if u > 0.0 && u <= half * (1.0 + 1e-14) {
        Ok(())
    } else {
        Err(Error::param(
            "u",
            format!("must lie in (0, {half}], got {u}"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn corpus() -> Vec<ArcLengthCurve> {
        vec![
            make_circle(2.0 * PI, 2).unwrap(),
            make_circle(3.0, 3).unwrap(),
            make_stadium(0.3).unwrap(),
            make_regular_polygon(6, 2.0 * PI).unwrap(),
            make_doubled_segment(2.0 * PI).unwrap(),
            make_ellipse(2.0, 2.0 * PI).unwrap(),
            make_trefoil(2.0 * PI).unwrap(),
        ]
    }

    #[test]
    fn chords_bounded_by_arc() {
        for c in corpus() {
            let l = c.length();
            for i in 0..37 {
                let s = i as f64 * 0.37;
                for k in 1..40 {
                    let u = k as f64 * l / 40.0;
                    let ch = c.chord(s, u).unwrap();
                    assert!(ch >= 0.0);
                    assert!(
                        ch <= u.min(l - u) * (1.0 + 1e-9) + 1e-12,
                        "{} s={s} u={u}",
                        c.label()
                    );
                }
            }
        }
    }

    #[test]
    fn chord_symmetry() {
        for c in corpus() {
            let l = c.length();
            for (s, frac) in [(0.1, 0.1), (2.0, 0.45), (5.5, 0.8)] {
                let u = frac * l;
                let a = c.chord(s, u).unwrap();
                let b = c.chord(s + u, l - u).unwrap();
                assert!((a - b).abs() < 1e-9, "{}", c.label());
            }
        }
    }

    #[test]
    fn unit_speed_and_closure() {
        for c in corpus() {
            let l = c.length();
            let h = 1e-6;
            for i in 0..50 {
                let s = i as f64 * l / 50.0 + 0.013;
                let ratio = c.chord(s, h).unwrap() / h;
                assert!(
                    ratio <= 1.0 + 1e-7 && ratio > 1.0 - 1e-5,
                    "{} s={s} ratio={ratio}",
                    c.label()
                );
            }
            let gap = distance(&c.point(0.0), &c.point(l * (1.0 - 1e-15)));
            assert!(gap < 1e-9 * l, "{} gap {gap}", c.label());
        }
    }

    #[test]
    fn chord_rejects_bad_u() {
        let c = make_circle(2.0 * PI, 2).unwrap();
        assert!(c.chord(0.0, 0.0).is_err());
        assert!(c.chord(0.0, 2.0 * PI).is_err());
        assert!(c.chord(0.0, -1.0).is_err());
    }

    #[test]
    fn negative_s_reduces_mod_l() {
        let c = make_stadium(0.5).unwrap();
        let a = c.point(-0.5);
        let b = c.point(2.0 * PI - 0.5);
        assert!(distance(&a, &b) < 1e-12);
    }

    #[test]
    fn scaling_is_linear() {
        for c in corpus() {
            let big = c.scaled(2.5).unwrap();
            assert!((big.length() - 2.5 * c.length()).abs() < 1e-12);
            let (s, u) = (0.4, 0.3 * c.length());
            let a = c.chord(s, u).unwrap();
            let b = big.chord(2.5 * s, 2.5 * u).unwrap();
            assert!((b - 2.5 * a).abs() < 1e-10);
        }
    }
}
