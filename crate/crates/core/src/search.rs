//! Exploratory maximization of the chord p-mean over closed planar curves of
//! length 2π.
//!
//! Curves are given by their tangent angle `θ(s) = s + Σ (a_k cos ks + b_k sin ks)`,
//! so `Γ′ = e^{iθ}` has unit speed exactly and the winding number is one.
//! Closure, `∫₀^{2π} e^{iθ} ds = 0`, is enforced by a quadratic penalty during
//! the ascent and by a final Newton step on `(a₁, b₁)`.
//!
//! Any value found is a lower bound on the supremum, nothing more.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::chordfun::circle_reference;
use crate::curve::{ArcLengthCurve, CurveShape, Point, SmoothnessClass};
use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Required closure of every reported maximizer.
pub const MAX_CLOSURE_DEFECT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentAngleCurve {
    /// `a_k`, `k = 1..=K`.
    pub a: Vec<f64>,
    /// `b_k`, `k = 1..=K`.
    pub b: Vec<f64>,
}

impl TangentAngleCurve {
    /// The circle, all coefficients zero.
    pub fn circle(modes: usize) -> Self {
        TangentAngleCurve {
            a: vec![0.0; modes],
            b: vec![0.0; modes],
        }
    }

    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::param(
                "b",
                format!("expected {} coefficients, got {}", a.len(), b.len()),
            ));
        }
        if a.iter().chain(&b).any(|x| !x.is_finite()) {
            return Err(Error::param("a", "coefficients must be finite"));
        }
        Ok(TangentAngleCurve { a, b })
    }

    pub fn modes(&self) -> usize {
        self.a.len()
    }

    pub fn theta(&self, s: f64) -> f64 {
        let mut t = s;
        for (k, (a, b)) in self.a.iter().zip(&self.b).enumerate() {
            let (sin, cos) = ((k + 1) as f64 * s).sin_cos();
            t += a * cos + b * sin;
        }
        t
    }

    /// `|∫₀^{2π} e^{iθ(s)} ds|`.
    pub fn closure_defect(&self) -> f64 {
        TWO_PI * Spectrum::new(self).mean().norm()
    }

    fn params(&self) -> Vec<f64> {
        self.a.iter().chain(&self.b).copied().collect()
    }

    fn from_params(x: &[f64]) -> Self {
        let k = x.len() / 2;
        TangentAngleCurve {
            a: x[..k].to_vec(),
            b: x[k..].to_vec(),
        }
    }
}

/// Fourier coefficients `ĝ_m` of `g = e^{iθ}` on `M` samples, with `M`
/// doubled until the upper quarter of the spectrum is negligible.
struct Spectrum {
    coeffs: Vec<Complex64>,
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft(buf: &mut [Complex64], inverse: bool) {
    let plan = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(buf.len())
        } else {
            p.plan_fft_forward(buf.len())
        }
    });
    plan.process(buf);
}

impl Spectrum {
    fn with_min_samples(tc: &TangentAngleCurve, min_samples: usize) -> Self {
        let mut m = min_samples.max(8 * (tc.modes() + 1)).next_power_of_two();
        loop {
            let mut buf: Vec<Complex64> = (0..m)
                .map(|j| Complex64::from_polar(1.0, tc.theta(TWO_PI * j as f64 / m as f64)))
                .collect();
            fft(&mut buf, false);
            let scale = 1.0 / m as f64;
            buf.iter_mut().for_each(|z| *z *= scale);
            let tail = buf[m / 4..3 * m / 4]
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            if tail < 1e-15 || m >= 1 << 16 {
                return Spectrum { coeffs: buf };
            }
            m *= 2;
        }
    }

    fn new(tc: &TangentAngleCurve) -> Self {
        Self::with_min_samples(tc, 64)
    }

    fn len(&self) -> usize {
        self.coeffs.len()
    }

    fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// Signed frequency of storage index `j`; the Nyquist slot maps to 0.
    fn freq(&self, j: usize) -> i64 {
        let m = self.len();
        if j < m / 2 {
            j as i64
        } else if j == m / 2 {
            0
        } else {
            j as i64 - m as i64
        }
    }

    /// `Γ(s_j + u) − Γ(s_j)` on the sample grid.
    fn increments(&self, u: f64) -> Vec<Complex64> {
        let m = self.len();
        let mut buf: Vec<Complex64> = (0..m)
            .map(|j| {
                let f = self.freq(j);
                if j == 0 {
                    self.coeffs[0] * u
                } else if f == 0 {
                    Complex64::default()
                } else {
                    let w = f as f64;
                    self.coeffs[j] * (Complex64::from_polar(1.0, w * u) - 1.0)
                        / Complex64::new(0.0, w)
                }
            })
            .collect();
        fft(&mut buf, true);
        buf
    }

    fn chord_pmean(&self, p: f64, u: f64) -> f64 {
        let d = self.increments(u);
        TWO_PI / d.len() as f64 * d.iter().map(|z| z.norm().powf(p)).sum::<f64>()
    }
}

/// Chord p-mean of the tangent-angle curve with length 2π, resolved until two
/// sample counts agree.
pub fn tangent_pmean(tc: &TangentAngleCurve, p: f64, u: f64) -> f64 {
    let base = Spectrum::new(tc);
    let mut value = base.chord_pmean(p, u);
    let mut m = base.len();
    loop {
        m *= 2;
        let next = Spectrum::with_min_samples(tc, m).chord_pmean(p, u);
        if (next - value).abs() <= 1e-14 * next.abs() || m >= 1 << 16 {
            return next;
        }
        value = next;
    }
}

#[derive(Debug)]
struct TangentShape {
    /// `(frequency, ĝ_m)`, mean term excluded.
    modes: Vec<(f64, Complex64)>,
    mean: Complex64,
}

impl CurveShape for TangentShape {
    fn length(&self) -> f64 {
        TWO_PI
    }

    fn point(&self, s: f64) -> Point {
        let mut z = self.mean * s;
        for &(w, c) in &self.modes {
            z += c * (Complex64::from_polar(1.0, w * s) - 1.0) / Complex64::new(0.0, w);
        }
        [z.re, z.im, 0.0]
    }
}

/// `Γ(s) = ∫₀^s e^{iθ}` as a unit-speed planar curve of length 2π.
pub fn realize_tangent_curve(
    tc: &TangentAngleCurve,
    n_samples: usize,
    tol: f64,
) -> Result<ArcLengthCurve> {
    let spectrum = Spectrum::with_min_samples(tc, n_samples);
    let defect = TWO_PI * spectrum.mean().norm();
    if !(defect <= tol) {
        return Err(Error::ClosureDefect { defect, tol });
    }
    let modes = (1..spectrum.len())
        .filter_map(|j| {
            let f = spectrum.freq(j);
            let c = spectrum.coeffs[j];
            (f != 0 && c.norm() > 1e-18).then_some((f as f64, c))
        })
        .collect();
    let shape = TangentShape {
        modes,
        mean: spectrum.mean(),
    };
    ArcLengthCurve::from_shape(
        Arc::new(shape),
        2,
        SmoothnessClass::C2,
        Vec::new(),
        Vec::new(),
        format!("tangent(K={})", tc.modes()),
    )
}

/// Newton iteration on `(a₁, b₁)` driving `∫ e^{iθ}` to zero.
pub fn project_closure(tc: &TangentAngleCurve) -> Result<TangentAngleCurve> {
    if tc.modes() == 0 {
        return Err(Error::param("modes", "closure needs at least one mode"));
    }
    let mut cur = tc.clone();
    for _ in 0..50 {
        let spectrum = Spectrum::new(&cur);
        let g0 = spectrum.mean();
        if TWO_PI * g0.norm() < 1e-14 {
            return Ok(cur);
        }
        // ∂ĝ₀/∂a₁ = mean(i cos s · g), ∂ĝ₀/∂b₁ = mean(i sin s · g).
        let m = spectrum.len();
        let (mut da, mut db) = (Complex64::default(), Complex64::default());
        for j in 0..m {
            let s = TWO_PI * j as f64 / m as f64;
            let g = Complex64::from_polar(1.0, cur.theta(s)) * Complex64::i();
            da += g * s.cos();
            db += g * s.sin();
        }
        da /= m as f64;
        db /= m as f64;
        let det = da.re * db.im - db.re * da.im;
        if det.abs() < 1e-14 {
            return Err(Error::ClosureDefect {
                defect: TWO_PI * g0.norm(),
                tol: MAX_CLOSURE_DEFECT,
            });
        }
        let step_a = (g0.re * db.im - db.re * g0.im) / det;
        let step_b = (da.re * g0.im - g0.re * da.im) / det;
        cur.a[0] -= step_a;
        cur.b[0] -= step_b;
    }
    let defect = cur.closure_defect();
    if defect <= MAX_CLOSURE_DEFECT {
        Ok(cur)
    } else {
        Err(Error::ClosureDefect {
            defect,
            tol: MAX_CLOSURE_DEFECT,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Total number of starts, the two fixed ones included.
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Closure penalty weight.
    pub mu: f64,
    pub fd_step: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 20,
            seed: 0,
            max_iter: 200,
            mu: 1e4,
            fd_step: 1e-6,
        }
    }
}

/// Best curve found, in serialized form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Maximizer {
    pub p: f64,
    pub u: f64,
    #[serde(rename = "K")]
    pub modes: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub value: f64,
    pub closure_defect: f64,
}

impl Maximizer {
    pub fn curve(&self) -> TangentAngleCurve {
        TangentAngleCurve {
            a: self.a.clone(),
            b: self.b.clone(),
        }
    }
}

/// Outcome of one start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub start: String,
    pub iterations: usize,
    pub initial_value: f64,
    pub value: f64,
    pub closure_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best: Maximizer,
    pub circle_value: f64,
    pub trace: Vec<RestartSummary>,
}

/// Tangent angle of a doubled segment, `θ − s = Σ_j sin(2js)/j` up to a
/// rotation, truncated to `modes` with Lanczos smoothing. Only even modes
/// appear, so the curve closes exactly.
pub fn smoothed_doubled_segment(modes: usize) -> TangentAngleCurve {
    let mut tc = TangentAngleCurve::circle(modes);
    let top = modes / 2;
    for j in 1..=top {
        let x = PI * j as f64 / (top + 1) as f64;
        let sigma = x.sin() / x;
        tc.b[2 * j - 1] = sigma / j as f64;
    }
    tc
}

fn random_start(modes: usize, rng: &mut ChaCha8Rng) -> TangentAngleCurve {
    let mut tc = TangentAngleCurve::circle(modes);
    for k in 2..=modes {
        let amp = 0.6 / k as f64;
        tc.a[k - 1] = rng.random_range(-amp..amp);
        tc.b[k - 1] = rng.random_range(-amp..amp);
    }
    tc
}

fn objective(x: &[f64], p: f64, u: f64, mu: f64) -> f64 {
    let spectrum = Spectrum::new(&TangentAngleCurve::from_params(x));
    let d = TWO_PI * spectrum.mean().norm();
    spectrum.chord_pmean(p, u) - mu * d * d
}

fn fd_gradient(x: &[f64], p: f64, u: f64, cfg: &SearchConfig) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += cfg.fd_step;
            xm[i] -= cfg.fd_step;
            (objective(&xp, p, u, cfg.mu) - objective(&xm, p, u, cfg.mu)) / (2.0 * cfg.fd_step)
        })
        .collect()
}

/// Quasi-Newton (BFGS) ascent on central-difference gradients with Armijo
/// backtracking. Returns the final point and the iteration count.
fn ascend(
    start: &TangentAngleCurve,
    p: f64,
    u: f64,
    cfg: &SearchConfig,
) -> (TangentAngleCurve, usize) {
    let n = 2 * start.modes();
    let mut x = start.params();
    let mut fx = objective(&x, p, u, cfg.mu);
    let mut g = fd_gradient(&x, p, u, cfg);
    // Inverse Hessian approximation of −J, started at a small multiple of I.
    let identity = |scale: f64| -> Vec<f64> {
        (0..n * n)
            .map(|k| if k % (n + 1) == 0 { scale } else { 0.0 })
            .collect()
    };
    let mut h = identity(1e-3);
    let mut iter = 0;
    while iter < cfg.max_iter {
        iter += 1;
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm < 1e-8 * (1.0 + fx.abs()) {
            break;
        }
        let mut dir: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| h[i * n + j] * g[j]).sum())
            .collect();
        let mut slope: f64 = dir.iter().zip(&g).map(|(d, gi)| d * gi).sum();
        if !(slope > 0.0) {
            h = identity(1e-3);
            dir = g.iter().map(|v| 1e-3 * v).collect();
            slope = 1e-3 * gnorm * gnorm;
        }
        let mut t = 1.0;
        let mut next = None;
        while t > 1e-12 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + t * di).collect();
            let ft = objective(&trial, p, u, cfg.mu);
            if ft >= fx + 1e-4 * t * slope {
                next = Some((trial, ft));
                break;
            }
            t *= 0.5;
        }
        let Some((x_new, f_new)) = next else { break };
        let g_new = fd_gradient(&x_new, p, u, cfg);
        // Update for minimizing −J: s = Δx, y = −Δg.
        let sv: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let yv: Vec<f64> = g.iter().zip(&g_new).map(|(a, b)| a - b).collect();
        let sy: f64 = sv.iter().zip(&yv).map(|(a, b)| a * b).sum();
        if sy
            > 1e-12
                * sv.iter().map(|v| v * v).sum::<f64>().sqrt()
                * yv.iter().map(|v| v * v).sum::<f64>().sqrt()
        {
            let rho = 1.0 / sy;
            let hy: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|j| h[i * n + j] * yv[j]).sum())
                .collect();
            let yhy: f64 = yv.iter().zip(&hy).map(|(a, b)| a * b).sum();
            for i in 0..n {
                for j in 0..n {
                    h[i * n + j] += -rho * (hy[i] * sv[j] + sv[i] * hy[j])
                        + (rho * rho * yhy + rho) * sv[i] * sv[j];
                }
            }
        }
        let gain = f_new - fx;
        x = x_new;
        fx = f_new;
        g = g_new;
        if gain <= 1e-15 * fx.abs() {
            break;
        }
    }
    (TangentAngleCurve::from_params(&x), iter)
}

fn run_start(
    label: String,
    start: TangentAngleCurve,
    p: f64,
    u: f64,
    cfg: &SearchConfig,
) -> (RestartSummary, Option<Maximizer>) {
    let initial_value = match project_closure(&start) {
        Ok(tc) => tangent_pmean(&tc, p, u),
        Err(_) => f64::NAN,
    };
    let (end, iterations) = ascend(&start, p, u, cfg);
    let projected = project_closure(&end).ok();
    let (value, defect, best) = match projected {
        Some(tc) => {
            let defect = tc.closure_defect();
            let value = tangent_pmean(&tc, p, u);
            let best = Maximizer {
                p,
                u,
                modes: tc.modes(),
                a: tc.a,
                b: tc.b,
                value,
                closure_defect: defect,
            };
            (value, defect, (defect < MAX_CLOSURE_DEFECT).then_some(best))
        }
        None => (f64::NAN, end.closure_defect(), None),
    };
    (
        RestartSummary {
            start: label,
            iterations,
            initial_value,
            value,
            closure_defect: defect,
        },
        best,
    )
}

/// Multi-start search for closed curves with a large chord p-mean.
///
/// The circle and a smoothed doubled segment are always among the starts; the
/// remaining `restarts − 2` are random, seeded from `cfg.seed`. Restarts run
/// in parallel and are merged in start order, so results depend only on the
/// inputs.
pub fn maximize_pmean(p: f64, u: f64, modes: usize, cfg: &SearchConfig) -> Result<SearchResult> {
    if !p.is_finite() {
        return Err(Error::param("p", format!("must be finite, got {p}")));
    }
    if !(u > 0.0 && u <= PI) {
        return Err(Error::param("u", format!("must lie in (0, π], got {u}")));
    }
    if modes < 2 {
        return Err(Error::param(
            "K",
            format!("need at least 2 modes, got {modes}"),
        ));
    }
    if cfg.restarts < 2 {
        return Err(Error::param(
            "restarts",
            "at least the two fixed starts are required",
        ));
    }
    let mut starts = vec![
        ("circle".to_string(), TangentAngleCurve::circle(modes)),
        (
            "doubled-segment".to_string(),
            smoothed_doubled_segment(modes),
        ),
    ];
    for r in 0..cfg.restarts - 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(r as u64));
        starts.push((format!("random-{r}"), random_start(modes, &mut rng)));
    }
    let runs: Vec<(RestartSummary, Option<Maximizer>)> = starts
        .into_par_iter()
        .map(|(label, tc)| run_start(label, tc, p, u, cfg))
        .collect();
    let mut best: Option<Maximizer> = None;
    let mut trace = Vec::with_capacity(runs.len());
    for (summary, candidate) in runs {
        trace.push(summary);
        if let Some(c) = candidate {
            if best.as_ref().is_none_or(|b| c.value > b.value) {
                best = Some(c);
            }
        }
    }
    let best = best.ok_or_else(|| Error::Internal("no start produced a closed curve".into()))?;
    Ok(SearchResult {
        best,
        circle_value: circle_reference(TWO_PI, p, u)?,
        trace,
    })
}
