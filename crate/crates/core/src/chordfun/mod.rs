//! Chord p-means and the mean-chord inequalities.
//!
//! For a closed unit-speed curve Γ of length L and an arc length
//! `u ∈ (0, L/2]` the chord p-mean is `∫₀ᴸ |Γ(s+u) − Γ(s)|^p ds`. The planar
//! circle gives `L^{1+p} π^{−p} sin^p(πu/L)`; it is the maximum for
//! `0 < p <= 2` and the minimum for `−2 <= p < 0` (more generally for every
//! `p < 0` reached from some admissible positive exponent).

mod extremal;
mod fourier_side;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::curve::{check_half_range, ArcLengthCurve, SmoothnessClass};
use crate::error::{Error, Result};
use crate::quad::{composite_gauss, periodic_breaks, periodic_trapezoid, Estimate};

pub use extremal::{
    doubled_segment_pmean_closed_form, local_stability_closed_form, local_stability_derivative,
    polygon_expansion_check, segment_crossover_p, stadium_derivatives, stadium_second_closed_form,
    stadium_threshold_p, ExtendedPolygonFit, LocalStability, ModePerturbation, PerturbationFamily,
    PolygonFit, RadialShrink, StadiumDerivatives, DEFAULT_M_LIST,
};
pub use fourier_side::{chord_square_mean_fourier, quadratic_form_lhs, sine_bound_margin};

/// Default number of quadrature nodes in `s`.
pub const DEFAULT_N_QUAD: usize = 256;

/// Outcome of one inequality check at fixed `(p, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChordReport {
    pub p: f64,
    pub u: f64,
    /// Chord p-mean of the curve.
    pub lhs: f64,
    /// Circle value at the same length.
    pub rhs: f64,
    pub satisfied: bool,
    /// `(rhs − lhs)/rhs` for `p >= 0`, `(lhs − rhs)/lhs` for `p < 0`.
    #[serde(rename = "margin")]
    pub relative_margin: f64,
    /// Absolute quadrature error estimate of `lhs`.
    #[serde(rename = "quad_error")]
    pub quadrature_error_estimate: f64,
}

impl ChordReport {
    /// Quadrature error expressed in the units of `relative_margin`.
    pub fn relative_quad_error(&self) -> f64 {
        let denom = if self.p < 0.0 { self.lhs } else { self.rhs };
        self.quadrature_error_estimate / denom.abs()
    }
}

/// Positions `s` where `chord(s, u)` vanishes, found as local minima of a
/// dense scan refined by golden-section search.
fn zero_chords(curve: &ArcLengthCurve, u: f64) -> Vec<f64> {
    let l = curve.length();
    let n = 4096;
    let h = l / n as f64;
    let c: Vec<f64> = (0..n)
        .map(|j| curve.chord_unchecked(j as f64 * h, u))
        .collect();
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut out = Vec::new();
    for j in 0..n {
        let (prev, next) = (c[(j + n - 1) % n], c[(j + 1) % n]);
        if !(c[j] <= prev && c[j] < next && c[j] < 4.0 * h) {
            continue;
        }
        let (mut a, mut b) = ((j as f64 - 1.0) * h, (j as f64 + 1.0) * h);
        for _ in 0..100 {
            let x1 = b - g * (b - a);
            let x2 = a + g * (b - a);
            if curve.chord_unchecked(x1, u) < curve.chord_unchecked(x2, u) {
                b = x2;
            } else {
                a = x1;
            }
        }
        let s = 0.5 * (a + b);
        if curve.chord_unchecked(s, u) <= 1e-8 * u {
            out.push(s.rem_euclid(l));
        }
    }
    out
}

/// `∫₀ᴸ chord(s, u)^p ds` with an error estimate.
///
/// Smooth curves use the periodic trapezoid rule on `n_quad` nodes. Curves
/// with corners or curvature jumps use Gauss–Legendre panels whose ends sit
/// on every `s` where either `s` or `s + u` hits a breakpoint, so the
/// integrand is smooth on each panel. On degenerate curves the zeros of the
/// chord are panel ends as well.
pub fn chord_pmean(curve: &ArcLengthCurve, p: f64, u: f64, n_quad: usize) -> Result<Estimate> {
    check_half_range(curve, u)?;
    if !p.is_finite() {
        return Err(Error::param("p", format!("must be finite, got {p}")));
    }
    if n_quad < 8 {
        return Err(Error::param(
            "n_quad",
            format!("need at least 8 nodes, got {n_quad}"),
        ));
    }
    let l = curve.length();
    let zeros = if curve.smoothness() == SmoothnessClass::Degenerate {
        zero_chords(curve, u)
    } else {
        Vec::new()
    };
    if p < 0.0 {
        if let Some(&s) = zeros.first() {
            return Err(Error::DivergentIntegral { s, u, p });
        }
    }
    let integrand = |s: f64| curve.chord_unchecked(s, u).powf(p);

    let breakpoints = curve.breakpoints();
    let est = if breakpoints.is_empty() {
        periodic_trapezoid(l, 0.0, n_quad + n_quad % 2, integrand)
    } else {
        // Geometric grading toward each zero chord, where |chord|^p is only
        // Hölder continuous.
        let graded = zeros.iter().flat_map(|&z| {
            (2..48).flat_map(move |k| {
                let d = l * 0.5f64.powi(k);
                [z - d, z, z + d]
            })
        });
        let shifted = breakpoints.iter().flat_map(|&b| [b, b - u]).chain(graded);
        let breaks = periodic_breaks(shifted, l);
        composite_gauss(&breaks, n_quad, integrand)
    };
    if !est.value.is_finite() {
        return Err(Error::DivergentIntegral { s: f64::NAN, u, p });
    }
    Ok(est)
}

/// Circle value `L^{1+p} π^{−p} sin^p(πu/L)` of the chord p-mean; for `p < 0`
/// this is `π^{|p|} L^{1−|p|} / sin^{|p|}(πu/L)`.
pub fn circle_reference(length: f64, p: f64, u: f64) -> Result<f64> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::param(
            "length",
            format!("must be positive, got {length}"),
        ));
    }
    if !(u > 0.0 && u <= 0.5 * length * (1.0 + 1e-14)) {
        return Err(Error::param("u", format!("must lie in (0, L/2], got {u}")));
    }
    let circle_chord = length / PI * (PI * u / length).sin();
    Ok(length * circle_chord.powf(p))
}

/// Compare the chord p-mean of `curve` with the circle value.
pub fn check_inequality(
    curve: &ArcLengthCurve,
    p: f64,
    u: f64,
    n_quad: usize,
    tol: f64,
) -> Result<ChordReport> {
    let est = chord_pmean(curve, p, u, n_quad)?;
    let rhs = circle_reference(curve.length(), p, u)?;
    let lhs = est.value;
    let (margin, denom) = if p < 0.0 {
        ((lhs - rhs) / lhs, lhs)
    } else {
        ((rhs - lhs) / rhs, rhs)
    };
    let rel_err = est.error / denom.abs();
    Ok(ChordReport {
        p,
        u,
        lhs,
        rhs,
        satisfied: margin >= -(rel_err + tol),
        relative_margin: margin,
        quadrature_error_estimate: est.error,
    })
}

/// Power means and Schwarz products along a list of positive exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderChain {
    pub u: f64,
    pub length: f64,
    /// `(p, M_p)` with `M_p = ((1/L)·∫ chord^p)^{1/p}`, in input order.
    pub means: Vec<(f64, f64)>,
    /// `(p, I_{−p}·I_p)`; each must be at least `L²`.
    pub schwarz_products: Vec<(f64, f64)>,
    /// Largest relative quadrature error among the integrals used.
    pub max_relative_error: f64,
}

impl HolderChain {
    /// Whether the means are nondecreasing in `p` up to `slack` (relative).
    pub fn is_monotone(&self, slack: f64) -> bool {
        let mut sorted = self.means.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        sorted.windows(2).all(|w| w[1].1 >= w[0].1 * (1.0 - slack))
    }

    pub fn schwarz_holds(&self, slack: f64) -> bool {
        let bound = self.length * self.length;
        self.schwarz_products
            .iter()
            .all(|&(_, prod)| prod >= bound * (1.0 - slack))
    }
}

/// Power means `M_p` and Schwarz products for every `p` in `p_list`.
pub fn holder_chain(
    curve: &ArcLengthCurve,
    u: f64,
    p_list: &[f64],
    n_quad: usize,
) -> Result<HolderChain> {
    let l = curve.length();
    let mut means = Vec::with_capacity(p_list.len());
    let mut products = Vec::with_capacity(p_list.len());
    let mut max_rel: f64 = 0.0;
    for &p in p_list {
        if !(p > 0.0) {
            return Err(Error::param(
                "p_list",
                format!("exponents must be positive, got {p}"),
            ));
        }
        let plus = chord_pmean(curve, p, u, n_quad)?;
        let minus = chord_pmean(curve, -p, u, n_quad)?;
        max_rel = max_rel
            .max(plus.error / plus.value)
            .max(minus.error / minus.value);
        means.push((p, (plus.value / l).powf(1.0 / p)));
        products.push((p, plus.value * minus.value));
    }
    Ok(HolderChain {
        u,
        length: l,
        means,
        schwarz_products: products,
        max_relative_error: max_rel,
    })
}
