use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::fourier::{make_fourier_curve, realize};
use super::{check_dimension, ArcLengthCurve, CurveShape, Point, SmoothnessClass};
use crate::error::{Error, Result};

fn check_length(l: f64) -> Result<()> {
    if l > 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(Error::param("length", format!("must be positive, got {l}")))
    }
}

#[derive(Debug)]
struct Circle {
    radius: f64,
}

impl CurveShape for Circle {
    fn length(&self) -> f64 {
        2.0 * PI * self.radius
    }

    fn point(&self, s: f64) -> Point {
        let (sin, cos) = (s / self.radius).sin_cos();
        [self.radius * cos, self.radius * sin, 0.0]
    }
}

/// Planar circle of length `length` in the first two coordinates of R^d.
pub fn make_circle(length: f64, dimension: usize) -> Result<ArcLengthCurve> {
    check_length(length)?;
    check_dimension(dimension)?;
    ArcLengthCurve::from_shape(
        Arc::new(Circle {
            radius: length / (2.0 * PI),
        }),
        dimension,
        SmoothnessClass::C2,
        vec![],
        vec![],
        "circle",
    )
}

/// Stadium of perimeter 2π: straight sides of length πa, end caps of radius
/// 1 − a. Arc length starts at the midpoint of the lower side and runs
/// counterclockwise.
#[derive(Debug)]
struct Stadium {
    half_side: f64,
    radius: f64,
}

impl Stadium {
    fn junctions(&self) -> [f64; 4] {
        let h = self.half_side;
        let arc = PI * self.radius;
        [h, h + arc, 3.0 * h + arc, 3.0 * h + 2.0 * arc]
    }
}

impl CurveShape for Stadium {
    fn length(&self) -> f64 {
        4.0 * self.half_side + 2.0 * PI * self.radius
    }

    fn point(&self, s: f64) -> Point {
        let (h, r) = (self.half_side, self.radius);
        let [j1, j2, j3, j4] = self.junctions();
        if s < j1 {
            [s, -r, 0.0]
        } else if s < j2 {
            let (sin, cos) = ((s - j1) / r).sin_cos();
            [h + r * sin, -r * cos, 0.0]
        } else if s < j3 {
            [h - (s - j2), r, 0.0]
        } else if s < j4 {
            let (sin, cos) = ((s - j3) / r).sin_cos();
            [-h - r * sin, r * cos, 0.0]
        } else {
            [-h + (s - j4), -r, 0.0]
        }
    }
}

/// Stadium of total length 2π with straight sides of length πa, `0 <= a < 1`.
pub fn make_stadium(a: f64) -> Result<ArcLengthCurve> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::param("a", format!("must lie in [0, 1), got {a}")));
    }
    let shape = Stadium {
        half_side: 0.5 * PI * a,
        radius: 1.0 - a,
    };
    let (class, jumps) = if a == 0.0 {
        (SmoothnessClass::C2, vec![])
    } else {
        (SmoothnessClass::PiecewiseC2, shape.junctions().to_vec())
    };
    ArcLengthCurve::from_shape(
        Arc::new(shape),
        2,
        class,
        vec![],
        jumps,
        format!("stadium(a={a})"),
    )
}

#[derive(Debug)]
struct Polygon {
    vertices: Vec<[f64; 2]>,
    side: f64,
}

impl CurveShape for Polygon {
    fn length(&self) -> f64 {
        self.side * self.vertices.len() as f64
    }

    fn point(&self, s: f64) -> Point {
        let n = self.vertices.len();
        let k = ((s / self.side).floor() as usize).min(n - 1);
        let t = (s - k as f64 * self.side) / self.side;
        let a = self.vertices[k];
        let b = self.vertices[(k + 1) % n];
        [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), 0.0]
    }
}

/// Regular polygon with an even number `sides = 2m >= 4` of sides and
/// perimeter `length`; arc length starts at a vertex.
pub fn make_regular_polygon(sides: usize, length: f64) -> Result<ArcLengthCurve> {
    if !sides.is_multiple_of(2) {
        return Err(Error::param("sides", format!("must be even, got {sides}")));
    }
    if sides < 4 {
        return Err(Error::param(
            "sides",
            format!("need 2m with m >= 2, got {sides}"),
        ));
    }
    check_length(length)?;
    let side = length / sides as f64;
    let circumradius = side / (2.0 * (PI / sides as f64).sin());
    let vertices = (0..sides)
        .map(|k| {
            let (sin, cos) = (2.0 * PI * k as f64 / sides as f64).sin_cos();
            [circumradius * cos, circumradius * sin]
        })
        .collect();
    let corners = (0..sides).map(|k| k as f64 * side).collect();
    ArcLengthCurve::from_shape(
        Arc::new(Polygon { vertices, side }),
        2,
        SmoothnessClass::PiecewiseC2,
        corners,
        vec![],
        format!("polygon({sides})"),
    )
}

#[derive(Debug)]
struct DoubledSegment {
    length: f64,
}

impl CurveShape for DoubledSegment {
    fn length(&self) -> f64 {
        self.length
    }

    fn point(&self, s: f64) -> Point {
        let half = 0.5 * self.length;
        if s <= half {
            [s, 0.0, 0.0]
        } else {
            [self.length - s, 0.0, 0.0]
        }
    }
}

/// Interval of length L/2 traversed forth and back: Γ(s) = (s, 0) on
/// [0, L/2] and (L − s, 0) on [L/2, L].
pub fn make_doubled_segment(length: f64) -> Result<ArcLengthCurve> {
    check_length(length)?;
    ArcLengthCurve::from_shape(
        Arc::new(DoubledSegment { length }),
        2,
        SmoothnessClass::Degenerate,
        vec![0.0, 0.5 * length],
        vec![],
        "doubled_segment",
    )
}

/// Planar ellipse with semi-axis ratio `axis_ratio`, reparametrized to unit
/// speed and scaled to length `length`.
pub fn make_ellipse(axis_ratio: f64, length: f64) -> Result<ArcLengthCurve> {
    if !(axis_ratio > 0.0 && axis_ratio.is_finite()) {
        return Err(Error::param(
            "axis_ratio",
            format!("must be positive, got {axis_ratio}"),
        ));
    }
    check_length(length)?;
    let c1 = vec![
        Complex64::new(0.5 * axis_ratio, 0.0),
        Complex64::new(0.0, -0.5),
    ];
    let c1_conj: Vec<Complex64> = c1.iter().map(|c| c.conj()).collect();
    let fc = make_fourier_curve(2, &[(1, c1), (-1, c1_conj)])?.curve;
    let mut curve = realize(&fc, 256, 1e-12)?.with_length(length)?;
    curve.label = format!("ellipse(ratio={axis_ratio})");
    Ok(curve)
}

/// Trefoil knot (sin t + 2 sin 2t, cos t − 2 cos 2t, −sin 3t), unit speed,
/// scaled to length `length`.
pub fn make_trefoil(length: f64) -> Result<ArcLengthCurve> {
    check_length(length)?;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let modes = [
        (1, vec![c(0.0, -0.5), c(0.5, 0.0), c(0.0, 0.0)]),
        (2, vec![c(0.0, -1.0), c(-1.0, 0.0), c(0.0, 0.0)]),
        (3, vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.5)]),
    ];
    let mut entries = Vec::new();
    for (n, v) in modes {
        entries.push((-n, v.iter().map(|z| z.conj()).collect()));
        entries.push((n, v));
    }
    let fc = make_fourier_curve(3, &entries)?.curve;
    let mut curve = realize(&fc, 512, 1e-12)?.with_length(length)?;
    curve.label = "trefoil".into();
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::super::distance;
    use super::*;

    const TWO_PI: f64 = 2.0 * PI;

    #[test]
    fn circle_examples() {
        let c = make_circle(TWO_PI, 2).unwrap();
        assert!((c.chord(0.3, PI).unwrap() - 2.0).abs() < 1e-14);
        assert!((c.chord(1.1, PI / 2.0).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        let c3 = make_circle(4.0 * PI, 3).unwrap();
        assert!((c3.chord(0.0, TWO_PI).unwrap() - 4.0).abs() < 1e-14);
        assert_eq!(c3.dimension(), 3);
    }

    #[test]
    fn circle_errors() {
        assert!(make_circle(0.0, 2).is_err());
        assert!(make_circle(-1.0, 2).is_err());
        assert!(make_circle(1.0, 1).is_err());
        assert!(matches!(
            make_circle(1.0, 4),
            Err(Error::UnsupportedDimension(4))
        ));
    }

    #[test]
    fn stadium_zero_is_circle() {
        let st = make_stadium(0.0).unwrap();
        let c = make_circle(TWO_PI, 2).unwrap();
        for i in 0..100 {
            let s = i as f64 * 0.0628;
            // Both start at the bottom of the unit circle / at angle 0; compare
            // chords instead of points since the origins differ.
            assert!((st.chord(s, 1.3).unwrap() - c.chord(s, 1.3).unwrap()).abs() < 1e-13);
        }
        assert_eq!(st.smoothness(), SmoothnessClass::C2);
    }

    #[test]
    fn stadium_half() {
        let st = make_stadium(0.5).unwrap();
        assert!((st.length() - TWO_PI).abs() < 1e-14);
        let jumps = st.curvature_jumps();
        assert_eq!(jumps.len(), 4);
        assert!((jumps[0] - PI / 4.0).abs() < 1e-14);
        assert!(
            (jumps[1] - jumps[0] - PI / 2.0).abs() < 1e-14,
            "arc of radius 0.5"
        );
        assert!(
            (jumps[2] - jumps[1] - PI / 2.0).abs() < 1e-14,
            "segment of length π/2"
        );
        assert!(st.corners().is_empty());
        // Midpoint of the lower side to the midpoint of the upper side.
        assert!((st.chord(0.0, PI).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn stadium_errors() {
        assert!(make_stadium(1.0).is_err());
        assert!(make_stadium(-0.1).is_err());
    }

    #[test]
    fn square_and_hexagon() {
        let sq = make_regular_polygon(4, TWO_PI).unwrap();
        assert!((sq.chord(0.0, PI).unwrap() - PI / 2.0 * 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(sq.corners().len(), 4);
        let hex = make_regular_polygon(6, TWO_PI).unwrap();
        let r = distance(&hex.point(0.0), &[0.0; 3]);
        assert!((r - PI / 3.0).abs() < 1e-14);
        assert!((hex.chord(0.0, PI / 3.0).unwrap() - PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn polygon_errors() {
        assert!(make_regular_polygon(5, 1.0).is_err());
        assert!(make_regular_polygon(2, 1.0).is_err());
        assert!(make_regular_polygon(4, 0.0).is_err());
    }

    #[test]
    fn polygons_approach_circumcircle() {
        let mut last = f64::INFINITY;
        for sides in [8, 32, 128, 512] {
            let poly = make_regular_polygon(sides, TWO_PI).unwrap();
            let circumradius = distance(&poly.point(0.0), &[0.0; 3]);
            let sup = (0..2000)
                .map(|i| {
                    circumradius - distance(&poly.point(i as f64 * TWO_PI / 2000.0), &[0.0; 3])
                })
                .fold(0.0, f64::max);
            assert!(sup < last);
            last = sup;
        }
        assert!(last < 1e-4);
    }

    #[test]
    fn doubled_segment_chords() {
        let d = make_doubled_segment(TWO_PI).unwrap();
        assert_eq!(d.smoothness(), SmoothnessClass::Degenerate);
        assert!((d.chord(PI / 4.0, PI).unwrap() - PI / 2.0).abs() < 1e-14);
        // The fold maps s = π/2 onto s + π = 3π/2.
        assert!(d.chord(PI / 2.0, PI).unwrap() < 1e-14);
        // From the start to the far end of the interval.
        assert!((d.chord(0.0, PI).unwrap() - PI).abs() < 1e-14);
        for i in 0..60 {
            let x = i as f64 * PI / 120.0;
            assert!((d.chord(x, PI).unwrap() - (PI - 2.0 * x)).abs() < 1e-13);
        }
        assert!(make_doubled_segment(-1.0).is_err());
    }

    #[test]
    fn ellipse_and_trefoil_lengths() {
        let e = make_ellipse(2.0, TWO_PI).unwrap();
        assert!((e.length() - TWO_PI).abs() < 1e-12);
        let t = make_trefoil(10.0).unwrap();
        assert!((t.length() - 10.0).abs() < 1e-12);
        assert_eq!(t.dimension(), 3);
    }
}
