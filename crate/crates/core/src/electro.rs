//! Renormalized Coulomb self-energy of a uniformly charged closed curve.
//!
//! The self-energy `∫∫ ds ds′ / |Γ(s) − Γ(s′)|` diverges logarithmically; the
//! difference to a circle of the same length does not:
//!
//! ```text
//! δ(Γ) = 2 ∫₀^{L/2} du ∫₀^L ds [ 1/|Γ(s+u) − Γ(s)| − (π/L) csc(πu/L) ]
//! ```
//!
//! The bracket is evaluated as a single fraction so that the two `1/u`
//! singularities cancel before rounding. Arcs shorter than `u_min` are not
//! integrated; their contribution is bounded from the local expansion
//! `chord = u (1 − κ² u²/24 + O(u⁴))`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{distance, ArcLengthCurve, Point, SmoothnessClass};
use crate::error::{Error, Result};
use crate::quad::{composite_nodes, periodic_trapezoid, roundoff_floor, Estimate, PANEL_ORDER};

/// Default cutoff as a fraction of the length.
pub const DEFAULT_CUTOFF_FRACTION: f64 = 1e-4;

/// Safety factor applied to the leading-order cutoff remainder.
const CUTOFF_SAFETY: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyResult {
    pub delta: f64,
    #[serde(rename = "u_min")]
    pub cutoff_used: f64,
    #[serde(rename = "quad_error")]
    pub quadrature_error: f64,
    #[serde(rename = "cutoff_bound")]
    pub cutoff_remainder_bound: f64,
}

impl EnergyResult {
    pub fn total_error(&self) -> f64 {
        self.quadrature_error + self.cutoff_remainder_bound
    }
}

fn require_smooth(curve: &ArcLengthCurve) -> Result<()> {
    if curve.smoothness() != SmoothnessClass::C2 || !curve.breakpoints().is_empty() {
        return Err(Error::NotSmooth(format!(
            "`{}` is not C2; the renormalized energy needs bounded curvature",
            curve.label()
        )));
    }
    Ok(())
}

/// `1/chord − 1/circle_chord` written as one fraction.
fn bracket(chord: f64, circle_chord: f64) -> f64 {
    (circle_chord - chord) / (chord * circle_chord)
}

/// `∫ |κ²/24 − π²/(6L²)| ds`, curvature from fourth-order second
/// differences at `n` points.
fn curvature_excess(curve: &ArcLengthCurve, n: usize) -> f64 {
    let l = curve.length();
    let h = 1e-3 * l;
    let flat = PI * PI / (6.0 * l * l);
    periodic_trapezoid(l, 0.0, n, |s| {
        let f: [Point; 5] = std::array::from_fn(|k| curve.point(s + (k as f64 - 2.0) * h));
        let k2: f64 = (0..3)
            .map(|i| {
                let d2 = -f[0][i] + 16.0 * f[1][i] - 30.0 * f[2][i] + 16.0 * f[3][i] - f[4][i];
                (d2 / (12.0 * h * h)).powi(2)
            })
            .sum();
        (k2 / 24.0 - flat).abs()
    })
    .value
}

/// `δ(Γ)` from the chord-difference form, integrating `u ∈ [u_min, L/2]`.
///
/// `u_min` defaults to `1e-4·L` and may not exceed `L/10`. The inner `s`
/// integral uses the periodic trapezoid rule on `n_quad` nodes; the outer `u`
/// integral uses Gauss–Legendre panels with about `n_quad` nodes.
pub fn renormalized_energy(
    curve: &ArcLengthCurve,
    u_min: Option<f64>,
    n_quad: usize,
) -> Result<EnergyResult> {
    require_smooth(curve)?;
    let l = curve.length();
    let u_min = u_min.unwrap_or(DEFAULT_CUTOFF_FRACTION * l);
    if !(u_min > 0.0 && u_min <= 0.1 * l) {
        return Err(Error::param(
            "u_min",
            format!("must lie in (0, L/10] = (0, {}], got {u_min}", 0.1 * l),
        ));
    }
    if n_quad < 16 {
        return Err(Error::param(
            "n_quad",
            format!("need at least 16 nodes, got {n_quad}"),
        ));
    }
    let n_s = n_quad + n_quad % 2;
    // A chord is a difference of points of size `extent`, so it carries an
    // absolute rounding error near ε·extent; the bracket turns that into
    // ε·extent/chord².
    let extent = curve
        .sample(n_s, 0.0)
        .iter()
        .flat_map(|p| p.iter().map(|x| x.abs()))
        .fold(0.0, f64::max);
    let chord_rounding = 4.0 * f64::EPSILON * extent;
    let inner = |u: f64| {
        let circle_chord = l / PI * (PI * u / l).sin();
        periodic_trapezoid(l, 0.0, n_s, |s| {
            bracket(curve.chord_unchecked(s, u), circle_chord)
        })
    };

    let breaks = [u_min, 0.5 * l];
    let span = breaks[1] - breaks[0];
    let width = span / (n_quad / PANEL_ORDER).max(2) as f64;
    let outer = |width: f64| -> (f64, f64, f64, usize) {
        let nodes = composite_nodes(&breaks, width);
        let parts: Vec<(f64, f64, Estimate)> =
            nodes.par_iter().map(|&(u, w)| (u, w, inner(u))).collect();
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        let mut inner_err = 0.0;
        for (u, w, e) in &parts {
            let circle_chord = l / PI * (PI * u / l).sin();
            let rounding = l * chord_rounding / (circle_chord * circle_chord);
            sum += w * e.value;
            abs_sum += (w * e.value).abs();
            inner_err += w * (e.error + rounding);
        }
        (sum, abs_sum, inner_err, parts.len())
    };
    let (fine, abs_sum, inner_err, count) = outer(width);
    let (coarse, _, _, _) = outer(2.0 * width);
    let outer_err = (fine - coarse).abs().max(roundoff_floor(abs_sum, count));

    let remainder = CUTOFF_SAFETY * u_min * u_min * curvature_excess(curve, n_s);
    Ok(EnergyResult {
        delta: 2.0 * fine,
        cutoff_used: u_min,
        quadrature_error: 2.0 * (outer_err + inner_err),
        cutoff_remainder_bound: remainder,
    })
}

/// `δ(Γ)` from the pair form `∫∫ [1/|Γ(s) − Γ(s′)| − 1/|𝒞(s) − 𝒞(s′)|]` on an
/// `n × n` grid with the diagonal left out, extrapolated from `n` and `n/2`.
///
/// The integrand is bounded but has a `|s − s′|` kink on the diagonal, so the
/// plain sum converges at second order; the extrapolated value at fourth.
pub fn pair_sum_energy(curve: &ArcLengthCurve, n: usize) -> Result<Estimate> {
    require_smooth(curve)?;
    if n < 16 || !n.is_multiple_of(2) {
        return Err(Error::param(
            "n",
            format!("must be even and at least 16, got {n}"),
        ));
    }
    let l = curve.length();
    let sum = |n: usize| -> f64 {
        let h = l / n as f64;
        let pts: Vec<Point> = curve.sample(n, 0.0);
        let circle: Vec<f64> = (0..n)
            .map(|k| l / PI * (PI * k as f64 / n as f64).sin())
            .collect();
        let rows: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                (1..n)
                    .map(|k| bracket(distance(&pts[i], &pts[(i + k) % n]), circle[k]))
                    .sum::<f64>()
            })
            .collect();
        rows.iter().sum::<f64>() * h * h
    };
    let fine = sum(n);
    let coarse = sum(n / 2);
    let value = (4.0 * fine - coarse) / 3.0;
    Ok(Estimate {
        value,
        error: (value - fine).abs(),
    })
}
