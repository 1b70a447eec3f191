use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{check_dimension, ArcLengthCurve, CurveShape, Point, SmoothnessClass};
use crate::error::{Error, Result};

const MAX_SAMPLES: usize = 1 << 16;

/// Closed curve Γ(t) = Σ_{n≠0} c_n e^{int} on the period [0, 2π].
///
/// Only c_n for n > 0 are stored; c_{−n} = conj(c_n). The coefficients are
/// normalized so that Σ n²|c_n|² = 1, i.e. the mean-square speed is one.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCurve {
    dimension: usize,
    modes: Vec<[Complex64; 3]>,
}

/// Output of [`make_fourier_curve`]: the normalized curve and the positive
/// factor that was applied to the input coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedFourier {
    pub curve: FourierCurve,
    pub rescale_factor: f64,
}

fn norm_sqr(v: &[Complex64; 3]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Build a [`FourierCurve`] from `(n, c_n)` pairs.
///
/// Both c_n and c_{−n} must be supplied and satisfy c_{−n} = conj(c_n). A
/// c_0 entry is a translation and is dropped. The coefficients are rescaled
/// to Σ n²|c_n|² = 1.
pub fn make_fourier_curve(
    dimension: usize,
    entries: &[(i32, Vec<Complex64>)],
) -> Result<NormalizedFourier> {
    check_dimension(dimension)?;
    let max_mode = entries
        .iter()
        .map(|(n, _)| n.unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    let mut positive = vec![[Complex64::default(); 3]; max_mode];
    let mut negative = vec![[Complex64::default(); 3]; max_mode];
    let mut scale = 0.0f64;
    for (n, c) in entries {
        if c.len() != dimension {
            return Err(Error::param(
                "coefficients",
                format!("mode {n} has {} components, expected {dimension}", c.len()),
            ));
        }
        if *n == 0 {
            continue;
        }
        let slot = if *n > 0 {
            &mut positive[*n as usize - 1]
        } else {
            &mut negative[n.unsigned_abs() as usize - 1]
        };
        for (dst, src) in slot.iter_mut().zip(c) {
            *dst += src;
            scale = scale.max(src.norm());
        }
    }
    let tol = 1e-12 * scale.max(1e-300);
    for (k, (p, m)) in positive.iter().zip(&negative).enumerate() {
        let defect = p
            .iter()
            .zip(m)
            .map(|(a, b)| (b - a.conj()).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if defect > tol {
            return Err(Error::RealityViolation {
                n: k as i32 + 1,
                defect,
            });
        }
    }
    let mut modes: Vec<[Complex64; 3]> = positive
        .iter()
        .zip(&negative)
        .map(|(p, m)| {
            let mut c = [Complex64::default(); 3];
            for j in 0..3 {
                c[j] = 0.5 * (p[j] + m[j].conj());
            }
            c
        })
        .collect();
    while modes.last().is_some_and(|c| norm_sqr(c) == 0.0) {
        modes.pop();
    }
    let weighted: f64 = 2.0
        * modes
            .iter()
            .enumerate()
            .map(|(k, c)| ((k + 1) * (k + 1)) as f64 * norm_sqr(c))
            .sum::<f64>();
    if weighted == 0.0 {
        return Err(Error::ZeroCoefficients);
    }
    let factor = 1.0 / weighted.sqrt();
    if factor != 1.0 {
        for c in &mut modes {
            for z in c.iter_mut() {
                *z *= factor;
            }
        }
    }
    Ok(NormalizedFourier {
        curve: FourierCurve { dimension, modes },
        rescale_factor: factor,
    })
}

impl FourierCurve {
    /// Unit circle, c_{±1} = (1/2, ∓i/2).
    pub fn circle() -> Self {
        FourierCurve {
            dimension: 2,
            modes: vec![[
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, -0.5),
                Complex64::default(),
            ]],
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Largest |n| with a nonzero coefficient.
    pub fn max_mode(&self) -> usize {
        self.modes.len()
    }

    /// c_n for any n (zero outside the stored range).
    pub fn coefficient(&self, n: i32) -> [Complex64; 3] {
        let k = n.unsigned_abs() as usize;
        if n == 0 || k > self.modes.len() {
            return [Complex64::default(); 3];
        }
        let c = self.modes[k - 1];
        if n > 0 {
            c
        } else {
            [c[0].conj(), c[1].conj(), c[2].conj()]
        }
    }

    /// |c_n|² summed over components, for n = 1..=max_mode.
    pub fn mode_energies(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.modes
            .iter()
            .enumerate()
            .map(|(k, c)| (k + 1, norm_sqr(c)))
    }

    /// Σ_{n≠0} n²|c_n|², equal to one after normalization.
    pub fn weighted_norm(&self) -> f64 {
        2.0 * self
            .mode_energies()
            .map(|(n, e)| (n * n) as f64 * e)
            .sum::<f64>()
    }

    /// (n, c_n) for all nonzero n, negative modes included.
    pub fn entries(&self) -> Vec<(i32, Vec<Complex64>)> {
        let d = self.dimension;
        let mut out = Vec::with_capacity(2 * self.modes.len());
        for k in 1..=self.modes.len() as i32 {
            out.push((-k, self.coefficient(-k)[..d].to_vec()));
            out.push((k, self.coefficient(k)[..d].to_vec()));
        }
        out
    }

    /// Γ(t) and Γ'(t).
    pub fn point_and_velocity(&self, t: f64) -> (Point, Point) {
        let step = Complex64::from_polar(1.0, t);
        let mut z = Complex64::new(1.0, 0.0);
        let mut p = [0.0; 3];
        let mut v = [0.0; 3];
        for (k, c) in self.modes.iter().enumerate() {
            z *= step;
            let n = (k + 1) as f64;
            for j in 0..3 {
                let w = c[j] * z;
                p[j] += 2.0 * w.re;
                // d/dt 2 Re(c e^{int}) = −2n Im(c e^{int})
                v[j] -= 2.0 * n * w.im;
            }
        }
        (p, v)
    }

    pub fn point(&self, t: f64) -> Point {
        self.point_and_velocity(t).0
    }

    pub fn speed(&self, t: f64) -> f64 {
        let v = self.point_and_velocity(t).1;
        (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
    }
}

/// Arc-length function σ(t) = ∫₀ᵗ |Γ'| as a trigonometric series, with a
/// coarse table for Newton starting points.
#[derive(Debug)]
struct UnitSpeedFourier {
    curve: FourierCurve,
    mean_speed: f64,
    cos_coef: Vec<f64>,
    sin_coef: Vec<f64>,
    table: Vec<f64>,
}

impl UnitSpeedFourier {
    /// σ(t) and σ'(t) from the speed series.
    fn arc_and_speed(&self, t: f64) -> (f64, f64) {
        let step = Complex64::from_polar(1.0, t);
        let mut z = Complex64::new(1.0, 0.0);
        let mut arc = self.mean_speed * t;
        let mut speed = self.mean_speed;
        for (k, (a, b)) in self.cos_coef.iter().zip(&self.sin_coef).enumerate() {
            z *= step;
            let n = (k + 1) as f64;
            speed += a * z.re + b * z.im;
            arc += (a * z.im + b * (1.0 - z.re)) / n;
        }
        (arc, speed)
    }

    fn parameter_at(&self, s: f64) -> f64 {
        let n = self.table.len() - 1;
        let h = 2.0 * PI / n as f64;
        let j = self.table.partition_point(|&v| v <= s).clamp(1, n);
        let (lo, hi) = (self.table[j - 1], self.table[j]);
        let mut t = ((j - 1) as f64 + (s - lo) / (hi - lo)) * h;
        for _ in 0..20 {
            let (arc, speed) = self.arc_and_speed(t);
            let dt = (arc - s) / speed;
            t -= dt;
            if dt.abs() <= 8.0 * f64::EPSILON * (1.0 + t.abs()) {
                break;
            }
        }
        t
    }
}

impl CurveShape for UnitSpeedFourier {
    fn length(&self) -> f64 {
        2.0 * PI * self.mean_speed
    }

    fn point(&self, s: f64) -> Point {
        self.curve.point(self.parameter_at(s))
    }
}

/// Reparametrize a [`FourierCurve`] by arc length.
///
/// The speed |Γ'(t)| is sampled on `n_samples` points and expanded in a
/// trigonometric series; sampling is refined until the discarded tail is
/// below `tol` relative to the mean speed. The returned curve has length
/// 2π·mean speed, which is at most 2π and equals it only for constant speed.
pub fn realize(fc: &FourierCurve, n_samples: usize, tol: f64) -> Result<ArcLengthCurve> {
    let min_samples = 8 * fc.max_mode();
    if n_samples < min_samples {
        return Err(Error::param(
            "n_samples",
            format!("need at least 8·N_max = {min_samples}, got {n_samples}"),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::param("tol", format!("must be positive, got {tol}")));
    }
    let mut n = n_samples.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    loop {
        let h = 2.0 * PI / n as f64;
        let speeds: Vec<f64> = (0..n).map(|j| fc.speed(j as f64 * h)).collect();
        let rms = (speeds.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
        let (j_min, v_min) = speeds
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if v_min <= 1e-8 * rms {
            return Err(Error::SingularReparametrization {
                t: j_min as f64 * h,
                speed: v_min,
            });
        }

        let mut buf: Vec<Complex64> = speeds.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        planner.plan_fft_forward(n).process(&mut buf);
        let mean = buf[0].re / n as f64;
        let half = n / 2;
        // speed(t) = mean + Σ a_k cos kt + b_k sin kt
        let mut cos_coef: Vec<f64> = (1..half).map(|k| 2.0 * buf[k].re / n as f64).collect();
        let mut sin_coef: Vec<f64> = (1..half).map(|k| -2.0 * buf[k].im / n as f64).collect();
        let tail: f64 = (half / 2..half)
            .map(|k| buf[k].norm() * 2.0 / n as f64)
            .sum::<f64>();

        if tail <= 0.1 * tol * mean {
            let keep = cos_coef
                .iter()
                .zip(&sin_coef)
                .rposition(|(a, b)| a.abs() + b.abs() > 1e-18 * mean)
                .map_or(0, |k| k + 1);
            cos_coef.truncate(keep);
            sin_coef.truncate(keep);
            let mut shape = UnitSpeedFourier {
                curve: fc.clone(),
                mean_speed: mean,
                cos_coef,
                sin_coef,
                table: Vec::new(),
            };
            let table_len = 4 * (keep + fc.max_mode()).max(16);
            let th = 2.0 * PI / table_len as f64;
            shape.table = (0..=table_len)
                .map(|j| shape.arc_and_speed(j as f64 * th).0)
                .collect();
            if shape.table.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::SingularReparametrization {
                    t: j_min as f64 * h,
                    speed: v_min,
                });
            }
            return ArcLengthCurve::from_shape(
                Arc::new(shape),
                fc.dimension(),
                SmoothnessClass::C2,
                vec![],
                vec![],
                "fourier",
            );
        }
        if n >= MAX_SAMPLES {
            return Err(Error::param(
                "tol",
                format!(
                    "speed spectrum tail {:e} stays above 0.1·tol·mean at {n} samples",
                    tail / mean
                ),
            ));
        }
        n *= 2;
    }
}
