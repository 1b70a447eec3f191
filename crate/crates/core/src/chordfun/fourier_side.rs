use std::f64::consts::PI;

use crate::curve::FourierCurve;
use crate::error::{Error, Result};

/// `∫₀^{2π} |Γ(t+u) − Γ(t)|² dt` of the trigonometric curve itself, in its own
/// 2π parametrization: `8π Σ_{n≠0} |c_n|² sin²(nu/2)`.
pub fn chord_square_mean_fourier(fc: &FourierCurve, u: f64) -> f64 {
    let half: f64 = fc
        .mode_energies()
        .map(|(n, e)| e * (0.5 * n as f64 * u).sin().powi(2))
        .sum();
    16.0 * PI * half
}

/// `Σ_{n≠0} n²|c_n|² (sin(nu/2) / (n sin(u/2)))²`, at most one for every
/// normalized curve and equal to one only for pure `n = ±1` content.
pub fn quadratic_form_lhs(fc: &FourierCurve, u: f64) -> Result<f64> {
    if !(u > 0.0 && u <= PI) {
        return Err(Error::param("u", format!("must lie in (0, π], got {u}")));
    }
    let denom = (0.5 * u).sin().powi(2);
    let sum: f64 = fc
        .mode_energies()
        .map(|(n, e)| e * (0.5 * n as f64 * u).sin().powi(2))
        .sum();
    Ok(2.0 * sum / denom)
}

/// `n sin x − |sin nx|` for `n >= 1`, `x ∈ (0, π/2]`.
pub fn sine_bound_margin(n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n", "must be a positive integer"));
    }
    if !(x > 0.0 && x <= 0.5 * PI * (1.0 + 1e-15)) {
        return Err(Error::param("x", format!("must lie in (0, π/2], got {x}")));
    }
    Ok(n as f64 * x.sin() - (n as f64 * x).sin().abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::make_fourier_curve;
    use num_complex::Complex64;

    fn pair(n: i32, c: [Complex64; 2]) -> Vec<(i32, Vec<Complex64>)> {
        vec![(n, c.to_vec()), (-n, c.iter().map(|z| z.conj()).collect())]
    }

    #[test]
    fn circle_values() {
        let fc = FourierCurve::circle();
        assert!((chord_square_mean_fourier(&fc, PI) - 8.0 * PI).abs() < 1e-13);
        for u in [0.1, 1.0, 2.5, PI] {
            assert!((quadratic_form_lhs(&fc, u).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn second_mode_only() {
        let fc = make_fourier_curve(
            2,
            &pair(2, [Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)]),
        )
        .unwrap()
        .curve;
        // |c_2|² = 1/8 per sign after normalization
        for u in [0.3f64, 1.1, 2.0] {
            let want = 2.0 * PI * u.sin().powi(2);
            assert!((chord_square_mean_fourier(&fc, u) - want).abs() < 1e-13);
        }
        assert!(quadratic_form_lhs(&fc, PI).unwrap().abs() < 1e-15);
    }

    #[test]
    fn small_u_slope() {
        let entries: Vec<_> = pair(1, [Complex64::new(0.5, 0.1), Complex64::new(0.2, -0.4)])
            .into_iter()
            .chain(pair(
                3,
                [Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.05)],
            ))
            .collect();
        let fc = make_fourier_curve(2, &entries).unwrap().curve;
        let u = 1e-4;
        let ratio = chord_square_mean_fourier(&fc, u) / (u * u);
        assert!((ratio - 2.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn sine_bound_examples() {
        assert_eq!(sine_bound_margin(1, 0.7).unwrap(), 0.0);
        let v = sine_bound_margin(2, PI / 4.0).unwrap();
        assert!((v - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!(sine_bound_margin(5, 0.3).unwrap() > 0.0);
        assert!(sine_bound_margin(0, 0.3).is_err());
        assert!(sine_bound_margin(3, 0.0).is_err());
        assert!(sine_bound_margin(3, 2.0).is_err());
        assert!(quadratic_form_lhs(&FourierCurve::circle(), 0.0).is_err());
    }
}
