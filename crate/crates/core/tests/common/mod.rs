//! Oracles and curve corpora shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use chordmean::curve::{
    make_circle, make_ellipse, make_fourier_curve, make_regular_polygon, make_stadium, realize,
    ArcLengthCurve,
};
use chordmean::specfun::bessel_k0;
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `e^x K₀(x) = ∫₀^∞ e^{−x(cosh t − 1)} dt` by the trapezoid rule. The
/// integrand is entire and decays doubly exponentially, so the error falls
/// like `e^{−c/h}`: once two passes agree to 1e-13, one more halving squares
/// that error and the result is at rounding level.
pub fn k0_scaled_integral(x: f64) -> f64 {
    assert!(x > 0.0);
    // beyond t_max the integrand is below e^{-745}
    let t_max = (1.0 + 745.0 / x).acosh();
    let f = |t: f64| (-x * 2.0 * (0.5 * t).sinh().powi(2)).exp();
    let mut h = 0.25f64.min(t_max / 8.0);
    let sum = |h: f64| {
        let n = (t_max / h).ceil() as usize;
        let mut s = 0.5 * f(0.0);
        for k in 1..=n {
            s += f(k as f64 * h);
        }
        s * h
    };
    let mut prev = sum(h);
    loop {
        h *= 0.5;
        let next = sum(h);
        if (next - prev).abs() <= 1e-13 * next {
            return sum(0.5 * h);
        }
        prev = next;
    }
}

pub fn k0_integral(x: f64) -> f64 {
    k0_scaled_integral(x) * (-x).exp()
}

/// Tanh–sinh rule on `[a, b]`; `f` receives the point and its distance to the
/// nearer endpoint, so endpoint singularities can be evaluated without
/// cancellation.
pub fn tanh_sinh<F: Fn(f64, f64) -> f64>(a: f64, b: f64, f: F) -> f64 {
    let half = 0.5 * (b - a);
    let rule = |h: f64| {
        let mut s = 0.0;
        let mut k: i64 = 0;
        loop {
            let t = k as f64 * h;
            let v = 0.5 * PI * t.sinh();
            // distance from the endpoint, 1 − tanh(v) = 2/(1 + e^{2v})
            let gap = half * 2.0 / (1.0 + (2.0 * v).exp());
            let w = half * 0.5 * PI * t.cosh() / v.cosh().powi(2);
            if gap < 1e-300 || w < 1e-300 {
                break;
            }
            let mid = if k == 0 {
                f(a + half, half)
            } else {
                f(a + gap, gap) + f(b - gap, gap)
            };
            s += w * mid;
            k += 1;
        }
        s * h
    };
    let mut h = 0.5;
    let mut prev = rule(h);
    loop {
        h *= 0.5;
        let next = rule(h);
        if (next - prev).abs() <= 1e-13 * next.abs() || h < 1e-4 {
            return rule(0.5 * h);
        }
        prev = next;
    }
}

/// Top eigenvalue of the circle operator of length 2π: its eigenfunction is
/// constant, so `λ(κ) = (α/2π) ∫₀^{2π} K₀(2κ sin(θ/2)) dθ
/// = (2α/π) ∫₀^{π/2} K₀(2κ sin φ) dφ`.
pub fn circle_lambda(alpha: f64, kappa: f64) -> f64 {
    let integral = tanh_sinh(0.0, 0.5 * PI, |phi, gap| {
        let s = if phi < 0.25 * PI {
            gap.sin()
        } else {
            phi.sin()
        };
        bessel_k0(2.0 * kappa * s).unwrap()
    });
    2.0 * alpha / PI * integral
}

/// `κ*` with `circle_lambda(α, κ*) = 1`, by plain bisection.
pub fn circle_kappa_star(alpha: f64) -> f64 {
    let (mut lo, mut hi) = (1e-6, 50.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if circle_lambda(alpha, mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Planar trigonometric curve near the unit circle with random content in
/// modes 1..=5, realized by arc length.
pub fn random_fourier_curve(seed: u64) -> ArcLengthCurve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    for n in 1..=5i32 {
        let amp = 0.35 / (n * n) as f64;
        let mut c: Vec<Complex64> = (0..2)
            .map(|_| Complex64::new(rng.random_range(-amp..amp), rng.random_range(-amp..amp)))
            .collect();
        if n == 1 {
            c[0] += Complex64::new(0.5, 0.0);
            c[1] += Complex64::new(0.0, -0.5);
        }
        entries.push((-n, c.iter().map(|z| z.conj()).collect()));
        entries.push((n, c));
    }
    let fc = make_fourier_curve(2, &entries).unwrap().curve;
    realize(&fc, 256, 1e-12).unwrap()
}

pub fn random_fourier_corpus(count: usize) -> Vec<ArcLengthCurve> {
    (0..count as u64)
        .map(|k| random_fourier_curve(1000 + k))
        .collect()
}

/// The fixed noncircular curves, all of length 2π.
pub fn named_noncircular() -> Vec<ArcLengthCurve> {
    let tau = 2.0 * PI;
    vec![
        make_ellipse(1.5, tau).unwrap(),
        make_ellipse(2.0, tau).unwrap(),
        make_ellipse(3.0, tau).unwrap(),
        make_stadium(0.2).unwrap(),
        make_stadium(0.5).unwrap(),
        make_regular_polygon(6, tau).unwrap(),
    ]
}

pub fn unit_circle() -> ArcLengthCurve {
    make_circle(2.0 * PI, 2).unwrap()
}

pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}
