//! Closed forms and derivative checks around the circle for `p > 2`: the
//! doubled segment, the stadium family, regular polygons and perturbations
//! of the circle that keep the radial mode fixed.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::chord_pmean;
use crate::curve::{make_regular_polygon, make_stadium};
use crate::error::{Error, Result};
use crate::quad::periodic_trapezoid;
use crate::roots::bisect_secant;

/// `∫₀^{2π} chord(s, π)^p ds` of the doubled segment of length 2π:
/// `2^{2+p} (π/2)^{p+1} / (p+1)`.
pub fn doubled_segment_pmean_closed_form(p: f64) -> Result<f64> {
    if !(p > -1.0) {
        return Err(Error::param("p", format!("must exceed −1, got {p}")));
    }
    Ok(2f64.powf(2.0 + p) * (0.5 * PI).powf(p + 1.0) / (p + 1.0))
}

/// Largest root of `(π/2)^p = p + 1`, the exponent above which the doubled
/// segment beats the circle at `u = π`.
pub fn segment_crossover_p() -> f64 {
    let ln_half_pi = (0.5 * PI).ln();
    // f < 0 on (0, p*) and f > 0 beyond; p = 0 is the trivial root.
    bisect_secant(
        |p| Ok(p * ln_half_pi - (p + 1.0).ln()),
        1.0,
        10.0,
        1e-6,
        1e-15,
    )
    .expect("bracket [1, 10] always changes sign")
}

/// Exponent where the stadium's second derivative at `a = 0` changes sign.
pub fn stadium_threshold_p() -> f64 {
    8.0 / (PI * PI - 8.0)
}

/// `2^{p−1} p π ((π² − 12) + (π² − 8)(p/2 − 1))`.
pub fn stadium_second_closed_form(p: f64) -> f64 {
    let pi2 = PI * PI;
    2f64.powf(p - 1.0) * p * PI * ((pi2 - 12.0) + (pi2 - 8.0) * (0.5 * p - 1.0))
}

/// Derivatives of `a ↦ ∫ chord(s, π)^p ds` over stadiums of length 2π at
/// `a = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StadiumDerivatives {
    pub p: f64,
    pub step: f64,
    pub first: f64,
    pub second: f64,
    pub closed_form_second: f64,
    /// Quadrature noise propagated into `first` and `second`.
    pub first_noise: f64,
    pub second_noise: f64,
}

/// One-sided differences in `a >= 0` at steps `{h, h/2, h/4}`, Richardson
/// extrapolated: second order for the first derivative, third order for the
/// second.
pub fn stadium_derivatives(p: f64, h: f64, n_quad: usize) -> Result<StadiumDerivatives> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::param("p", format!("must be positive, got {p}")));
    }
    if !(h > 0.0 && h <= 0.1) {
        return Err(Error::param("h", format!("must lie in (0, 0.1], got {h}")));
    }
    let mut max_err: f64 = 0.0;
    let mut value = |a: f64| -> Result<f64> {
        let est = chord_pmean(&make_stadium(a)?, p, PI, n_quad)?;
        max_err = max_err.max(est.error);
        Ok(est.value)
    };
    let i0 = value(0.0)?;
    let i_q = value(0.25 * h)?;
    let i_h2 = value(0.5 * h)?;
    let i_h = value(h)?;
    let i_2h = value(2.0 * h)?;

    let d1 = |ie: f64, eta: f64| (ie - i0) / eta;
    let (f1, f2, f3) = (d1(i_h, h), d1(i_h2, 0.5 * h), d1(i_q, 0.25 * h));
    // D1(η) = I' + η I''/2 + O(η²)
    let r1 = 2.0 * f2 - f1;
    let r2 = 2.0 * f3 - f2;
    let first = (4.0 * r2 - r1) / 3.0;

    let d2 = |i2e: f64, ie: f64, eta: f64| (i2e - 2.0 * ie + i0) / (eta * eta);
    let (s1, s2, s3) = (
        d2(i_2h, i_h, h),
        d2(i_h, i_h2, 0.5 * h),
        d2(i_h2, i_q, 0.25 * h),
    );
    // D2(η) = I'' + η I''' + (7/12) η² I'''' + O(η³)
    let q1 = 2.0 * s2 - s1;
    let q2 = 2.0 * s3 - s2;
    let second = (4.0 * q2 - q1) / 3.0;

    // Coefficient sums of the combined stencils, scaled by the smallest step.
    let eta = 0.25 * h;
    let first_noise = max_err * 12.0 / eta;
    let second_noise = max_err * 40.0 / (eta * eta);
    if !(first.is_finite() && second.is_finite()) || second_noise > 1e-3 * i0.abs() / (h * h) {
        return Err(Error::FiniteDifferenceNoise {
            noise: second_noise,
            signal: second.abs(),
        });
    }
    Ok(StadiumDerivatives {
        p,
        step: h,
        first,
        second,
        closed_form_second: stadium_second_closed_form(p),
        first_noise,
        second_noise,
    })
}

/// Least-squares fit of `I/(2^{1+p}π) − 1 = c4 x⁴ + c6 x⁶` in `x = π/m` over
/// regular `2m`-gons of length 2π at `u = π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonFit {
    pub p: f64,
    pub c4_fit: f64,
    pub c6_fit: f64,
    /// `p(p − 6)/5760`.
    pub c4_predicted: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    /// `(m, r(m))`.
    pub samples: Vec<(usize, f64)>,
    /// Same data fitted with an `x²` term allowed.
    pub extended: ExtendedPolygonFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtendedPolygonFit {
    pub c2: f64,
    pub c4: f64,
    pub c6: f64,
    pub residual: f64,
}

fn least_squares(xs: &[f64], ys: &[f64], powers: &[i32]) -> Result<(Vec<f64>, f64)> {
    let rows = xs.len();
    let cols = powers.len();
    let a = DMatrix::from_fn(rows, cols, |i, j| xs[i].powi(powers[j]));
    // Column scaling keeps the conditioning test meaningful.
    let norms: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    let scaled = DMatrix::from_fn(rows, cols, |i, j| a[(i, j)] / norms[j]);
    let b = DVector::from_column_slice(ys);
    let svd = scaled.clone().svd(true, true);
    let (smax, smin) = svd
        .singular_values
        .iter()
        .fold((0.0f64, f64::INFINITY), |(hi, lo), &s| {
            (hi.max(s), lo.min(s))
        });
    if !(smin > 1e-10 * smax) {
        return Err(Error::FitConditioning(format!(
            "singular values {smax:e} / {smin:e} for {rows} samples"
        )));
    }
    let sol = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::FitConditioning(e.to_string()))?;
    let coeffs: Vec<f64> = (0..cols).map(|j| sol[j] / norms[j]).collect();
    let resid = (&scaled * &sol - &b).norm() / (rows as f64).sqrt();
    Ok((coeffs, resid))
}

/// Default `m` values for [`polygon_expansion_check`].
pub const DEFAULT_M_LIST: [usize; 5] = [8, 12, 16, 24, 32];

pub fn polygon_expansion_check(p: f64, m_list: &[usize], n_quad: usize) -> Result<PolygonFit> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::param("p", format!("must be positive, got {p}")));
    }
    if let Some(&m) = m_list.iter().find(|&&m| m < 4) {
        return Err(Error::param(
            "m_list",
            format!("every m must be at least 4, got {m}"),
        ));
    }
    let mut distinct = m_list.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::FitConditioning(format!(
            "need at least 3 distinct m values, got {}",
            distinct.len()
        )));
    }
    let reference = 2f64.powf(1.0 + p) * PI;
    let mut samples = Vec::with_capacity(distinct.len());
    for &m in &distinct {
        let poly = make_regular_polygon(2 * m, 2.0 * PI)?;
        let est = chord_pmean(&poly, p, PI, n_quad.max(64 * m))?;
        samples.push((m, est.value / reference - 1.0));
    }
    let xs: Vec<f64> = distinct.iter().map(|&m| PI / m as f64).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let (c, residual) = least_squares(&xs, &ys, &[4, 6])?;
    let extended = if distinct.len() >= 4 {
        let (e, r) = least_squares(&xs, &ys, &[2, 4, 6])?;
        ExtendedPolygonFit {
            c2: e[0],
            c4: e[1],
            c6: e[2],
            residual: r,
        }
    } else {
        ExtendedPolygonFit {
            c2: f64::NAN,
            c4: f64::NAN,
            c6: f64::NAN,
            residual: f64::NAN,
        }
    };
    Ok(PolygonFit {
        p,
        c4_fit: c[0],
        c6_fit: c[1],
        c4_predicted: p * (p - 6.0) / 5760.0,
        residual,
        samples,
        extended,
    })
}

/// A planar family `Γ(γ, s) = (1 − γ) e^{is} + Θ(γ, s)` in complex notation,
/// with `Θ(0, ·) = 0` and `Θ(γ, ·)` orthogonal to `e^{is}`.
pub trait PerturbationFamily: Send + Sync {
    fn theta(&self, gamma: f64, s: f64) -> Complex64;

    fn point(&self, gamma: f64, s: f64) -> Complex64 {
        (1.0 - gamma) * Complex64::from_polar(1.0, s) + self.theta(gamma, s)
    }
}

/// Pure shrinking, `Θ ≡ 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RadialShrink;

impl PerturbationFamily for RadialShrink {
    fn theta(&self, _gamma: f64, _s: f64) -> Complex64 {
        Complex64::default()
    }
}

/// `Θ(γ, s) = γ Σ c_k e^{iks}`.
#[derive(Debug, Clone, Default)]
pub struct ModePerturbation {
    pub modes: Vec<(i32, Complex64)>,
}

impl PerturbationFamily for ModePerturbation {
    fn theta(&self, gamma: f64, s: f64) -> Complex64 {
        self.modes
            .iter()
            .map(|&(k, c)| c * Complex64::from_polar(gamma, k as f64 * s))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalStability {
    pub p: f64,
    pub u: f64,
    pub step: f64,
    pub fd: f64,
    pub closed_form: f64,
}

/// `−p 2^{1+p} π |sin(u/2)|^p`.
pub fn local_stability_closed_form(p: f64, u: f64) -> f64 {
    -p * 2f64.powf(1.0 + p) * PI * (0.5 * u).sin().abs().powf(p)
}

/// Derivative at `γ = 0⁺` of `γ ↦ ∫₀^{2π} |Γ(γ, s+u) − Γ(γ, s)|^p ds`, by the
/// second-order one-sided stencil `(−3I(0) + 4I(h) − I(2h)) / 2h`.
pub fn local_stability_derivative(
    family: &dyn PerturbationFamily,
    p: f64,
    u: f64,
    h: f64,
    n_quad: usize,
) -> Result<LocalStability> {
    if !p.is_finite() || p == 0.0 {
        return Err(Error::param(
            "p",
            format!("must be finite and nonzero, got {p}"),
        ));
    }
    if !(u > 0.0 && u < 2.0 * PI) {
        return Err(Error::param("u", format!("must lie in (0, 2π), got {u}")));
    }
    if !(h > 0.0 && h < 0.5) {
        return Err(Error::param("h", format!("must lie in (0, 0.5), got {h}")));
    }
    let n = (n_quad.max(16) + 1) & !1;
    for gamma in [h, 2.0 * h] {
        let overlap = periodic_trapezoid(2.0 * PI, 0.0, n, |s| {
            (family.theta(gamma, s) * Complex64::from_polar(1.0, -s)).re
        })
        .value
        .hypot(
            periodic_trapezoid(2.0 * PI, 0.0, n, |s| {
                (family.theta(gamma, s) * Complex64::from_polar(1.0, -s)).im
            })
            .value,
        ) / (2.0 * PI);
        let scale: f64 = (0..n)
            .map(|j| family.theta(gamma, 2.0 * PI * j as f64 / n as f64).norm())
            .fold(0.0, f64::max);
        if overlap > 1e-10 * (1.0 + scale) {
            return Err(Error::NotOrthogonal { gamma, overlap });
        }
    }
    let integral = |gamma: f64| {
        periodic_trapezoid(2.0 * PI, 0.0, n, |s| {
            (family.point(gamma, s + u) - family.point(gamma, s))
                .norm()
                .powf(p)
        })
        .value
    };
    let (i0, i1, i2) = (integral(0.0), integral(h), integral(2.0 * h));
    Ok(LocalStability {
        p,
        u,
        step: h,
        fd: (-3.0 * i0 + 4.0 * i1 - i2) / (2.0 * h),
        closed_form: local_stability_closed_form(p, u),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordfun::circle_reference;
    use crate::curve::make_doubled_segment;

    #[test]
    fn doubled_segment_closed_form_values() {
        assert!(
            (doubled_segment_pmean_closed_form(2.0).unwrap() - 2.0 * PI.powi(3) / 3.0).abs()
                < 1e-12
        );
        assert!((doubled_segment_pmean_closed_form(0.0).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!(doubled_segment_pmean_closed_form(-1.0).is_err());
        let d = make_doubled_segment(2.0 * PI).unwrap();
        for p in [0.5, 1.0, 3.3, 4.0] {
            let q = chord_pmean(&d, p, PI, 512).unwrap().value;
            let want = doubled_segment_pmean_closed_form(p).unwrap();
            assert!(((q - want) / want).abs() < 1e-10, "p={p}: {q} vs {want}");
        }
    }

    #[test]
    fn crossover_root() {
        let p = segment_crossover_p();
        assert!((3.15295..=3.15297).contains(&p), "{p}");
        let seg = doubled_segment_pmean_closed_form(p).unwrap();
        let circ = circle_reference(2.0 * PI, p, PI).unwrap();
        assert!(((seg - circ) / circ).abs() < 1e-12);
        let seg3 = doubled_segment_pmean_closed_form(3.0).unwrap();
        assert!(seg3 < circle_reference(2.0 * PI, 3.0, PI).unwrap());
    }

    #[test]
    fn stadium_closed_form_arithmetic() {
        let pi2 = PI * PI;
        assert!((stadium_second_closed_form(4.0) - 32.0 * PI * (2.0 * pi2 - 20.0)).abs() < 1e-11);
        assert!((stadium_second_closed_form(6.0) - 192.0 * PI * (3.0 * pi2 - 28.0)).abs() < 1e-10);
        assert!(stadium_second_closed_form(4.0) < 0.0 && stadium_second_closed_form(6.0) > 0.0);
        let t = stadium_threshold_p();
        assert!((t - 4.27898).abs() < 1e-5);
        assert!(stadium_second_closed_form(t).abs() < 1e-10);
    }

    #[test]
    fn stadium_fd_matches() {
        for p in [2.0, 5.0] {
            let d = stadium_derivatives(p, 1e-2, 512).unwrap();
            let rel = (d.second - d.closed_form_second).abs() / d.closed_form_second.abs();
            assert!(rel < 1e-3, "p={p} {d:?}");
            assert!(d.first.abs() < 1e-4 * d.closed_form_second.abs(), "{d:?}");
        }
        assert!(stadium_derivatives(2.0, 0.5, 64).is_err());
        assert!(stadium_derivatives(-1.0, 0.01, 64).is_err());
    }

    #[test]
    fn polygon_fit_guards() {
        assert!(matches!(
            polygon_expansion_check(2.0, &[8, 12], 256),
            Err(Error::FitConditioning(_))
        ));
        assert!(polygon_expansion_check(2.0, &[3, 8, 12], 256).is_err());
    }

    #[test]
    fn polygon_samples_follow_true_leading_terms() {
        // The even polygon's r(m) starts with −p x²/24 + p(3p − 2) x⁴/1920.
        for p in [2.0, 4.0, 8.0] {
            let fit = polygon_expansion_check(p, &DEFAULT_M_LIST, 256).unwrap();
            let e = fit.extended;
            assert!((e.c2 + p / 24.0).abs() < 1e-6 * p, "p={p} {e:?}");
            let c4 = p * (3.0 * p - 2.0) / 1920.0;
            assert!((e.c4 - c4).abs() < 1e-2 * c4.abs(), "p={p} {e:?}");
            for &(_, r) in &fit.samples {
                assert!(r < 0.0);
            }
        }
    }

    #[test]
    fn local_stability_shrink() {
        let ls = local_stability_derivative(&RadialShrink, 2.0, PI, 1e-3, 64).unwrap();
        assert!((ls.closed_form + 16.0 * PI).abs() < 1e-12);
        assert!(((ls.fd - ls.closed_form) / ls.closed_form).abs() < 1e-5);
        let c = local_stability_closed_form(1.0, 0.5 * PI);
        assert!((c + 2.0 * 2f64.sqrt() * PI).abs() < 1e-12);
    }

    #[test]
    fn local_stability_modes() {
        let fam = ModePerturbation {
            modes: vec![
                (2, Complex64::new(0.3, 0.1)),
                (-1, Complex64::new(0.0, 0.2)),
                (3, Complex64::new(0.1, 0.0)),
            ],
        };
        for (p, u) in [(1.0, PI / 3.0), (4.0, PI / 2.0), (3.5, PI)] {
            let ls = local_stability_derivative(&fam, p, u, 1e-4, 128).unwrap();
            assert!(ls.fd < 0.0);
            assert!(
                ((ls.fd - ls.closed_form) / ls.closed_form).abs() < 1e-3,
                "{ls:?}"
            );
        }
        let bad = ModePerturbation {
            modes: vec![(1, Complex64::new(0.3, 0.0))],
        };
        assert!(matches!(
            local_stability_derivative(&bad, 2.0, PI, 1e-3, 64),
            Err(Error::NotOrthogonal { .. })
        ));
    }
}
