//! Ground state of a leaky quantum wire `−Δ − α δ(· − Γ)` on a closed planar
//! curve, through the integral operator with kernel
//! `(α/2π) K₀(κ |Γ(s) − Γ(s′)|)` on `L²(0, L)`: `−κ²` is an eigenvalue of the
//! Schrödinger operator exactly when 1 is an eigenvalue of the integral
//! operator.
//!
//! Discretization is a Nyström rule on `n` equispaced nodes. The logarithmic
//! diagonal singularity is split off as `K₀ = A·ln(4 sin²((t−τ)/2)) + B` and
//! the log factor integrated with trigonometric product weights.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curve::{distance, make_circle, ArcLengthCurve, Point, SmoothnessClass};
use crate::error::{Error, Result};
use crate::quad::{composite_gauss, periodic_breaks, periodic_trapezoid};
use crate::roots::bisect_secant;
use crate::specfun::{k0_unchecked, smooth_part_at, split_unchecked};

/// Largest grid handled by the dense eigensolver.
pub const DENSE_LIMIT: usize = 4096;

/// Number of terms of the I₀ series kept in the log coefficient `A`. The
/// remainder `(I₀ − T) ln(κr)` is `O((κr)^8 ln κr)`, so `B` stays smooth
/// while `A` grows only polynomially with `κr`.
const LOG_SERIES_TERMS: usize = 4;

fn truncated_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..LOG_SERIES_TERMS {
        term *= q / (k * k) as f64;
        sum += term;
    }
    sum
}

/// Nyström matrix of the Birman–Schwinger operator at `(α, κ)`.
#[derive(Debug, Clone)]
pub struct BSDiscretization {
    pub alpha: f64,
    pub kappa: f64,
    pub n: usize,
    /// Symmetric `n × n` matrix acting on nodal values.
    pub matrix: DMatrix<f64>,
    pub curve_label: String,
    /// Arc length of the first node.
    pub offset: f64,
    pub length: f64,
}

fn check_planar_curve(curve: &ArcLengthCurve) -> Result<()> {
    if !curve.is_planar() {
        return Err(Error::param(
            "curve",
            format!(
                "a planar curve is required, got dimension {}",
                curve.dimension()
            ),
        ));
    }
    if curve.smoothness() == SmoothnessClass::Degenerate {
        return Err(Error::DegenerateCurve(format!(
            "`{}` has vanishing chords, the kernel is singular off the diagonal",
            curve.label()
        )));
    }
    Ok(())
}

/// `R_k`, the weight of node `k` in `∫₀^{2π} ln(4 sin²(τ/2)) f(τ) dτ` with
/// `n = 2n′` nodes `τ_k = πk/n′`. Symmetric in `k ↔ n − k` by construction.
fn log_weights(n: usize) -> Vec<f64> {
    let half = n / 2;
    let hf = half as f64;
    let mut w: Vec<f64> = (0..=half)
        .map(|k| {
            let t = PI * k as f64 / hf;
            let series: f64 = (1..half).map(|m| (m as f64 * t).cos() / m as f64).sum();
            -2.0 * PI / hf * series - PI / (hf * hf) * (hf * t).cos()
        })
        .collect();
    let mirror: Vec<f64> = w[1..half].iter().rev().copied().collect();
    w.extend(mirror);
    w
}

/// Grid origin: the first breakpoint if there is one.
fn grid_offset(curve: &ArcLengthCurve) -> f64 {
    curve.breakpoints().first().copied().unwrap_or(0.0)
}

/// Nyström matrix for kernel `K₀(κ r)` scaled by `scale`, on `n` nodes.
fn kernel_matrix(curve: &ArcLengthCurve, kappa: f64, n: usize, scale: f64) -> (DMatrix<f64>, f64) {
    let l = curve.length();
    let offset = grid_offset(curve);
    let pts: Vec<Point> = curve.sample(n, offset);
    let weights = log_weights(n);
    let half = (n / 2) as f64;
    let trap = PI / half;
    let diag = smooth_part_at(0.0) - (kappa * l / (2.0 * PI)).ln();
    let pref = scale * l / (2.0 * PI);

    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0.0; n - i];
            row[0] = pref * (weights[0] * -0.5 + trap * diag);
            for j in i + 1..n {
                let x = kappa * distance(&pts[i], &pts[j]);
                let a = -0.5 * truncated_i0(x);
                let t = PI * (j - i) as f64 / half;
                let log_factor = (4.0 * (0.5 * t).sin().powi(2)).ln();
                let b = k0_unchecked(x) - a * log_factor;
                row[j - i] = pref * (weights[j - i] * a + trap * b);
            }
            row
        })
        .collect();
    let mut m = DMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            m[(i, i + k)] = v;
            m[(i + k, i)] = v;
        }
    }
    (m, offset)
}

/// Assemble the Nyström matrix of `(α/2π) K₀(κ|Γ(s) − Γ(s′)|)` on `n` nodes.
pub fn assemble_bs(
    curve: &ArcLengthCurve,
    alpha: f64,
    kappa: f64,
    n: usize,
) -> Result<BSDiscretization> {
    check_planar_curve(curve)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::param(
            "alpha",
            format!("must be positive, got {alpha}"),
        ));
    }
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::param(
            "kappa",
            format!("must be positive, got {kappa}"),
        ));
    }
    if n < 8 || !n.is_multiple_of(2) {
        return Err(Error::param(
            "n",
            format!("must be even and at least 8, got {n}"),
        ));
    }
    let (matrix, offset) = kernel_matrix(curve, kappa, n, alpha / (2.0 * PI));
    Ok(BSDiscretization {
        alpha,
        kappa,
        n,
        matrix,
        curve_label: curve.label().to_string(),
        offset,
        length: curve.length(),
    })
}

/// Largest eigenvalue and its eigenvector, normalized to unit length with a
/// positive sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Principal {
    pub lambda: f64,
    pub eigenvector: Vec<f64>,
}

fn oriented(v: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = v.collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let sign = if v.iter().sum::<f64>() < 0.0 {
        -1.0
    } else {
        1.0
    };
    v.iter_mut().for_each(|x| *x *= sign / norm);
    v
}

/// Power iteration from `start`, stopped when the Rayleigh quotient settles
/// to `tol` relative.
fn power_iteration(
    m: &DMatrix<f64>,
    start: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
) -> Result<Principal> {
    let n = m.nrows();
    let mut v = match start {
        Some(s) if s.len() == n => DVector::from_column_slice(s),
        _ => DVector::from_element(n, 1.0 / (n as f64).sqrt()),
    };
    v /= v.norm();
    let mut lambda = 0.0;
    for _ in 0..max_iter {
        let w = m * &v;
        let next = v.dot(&w);
        let norm = w.norm();
        if norm == 0.0 {
            return Err(Error::Internal("matrix annihilated the iterate".into()));
        }
        let done = (next - lambda).abs() <= tol * next.abs();
        lambda = next;
        v = w / norm;
        if done {
            // Residual check guards against stalling between two modes.
            let r = (m * &v - &v * lambda).norm();
            if r <= 1e3 * tol.sqrt() * lambda.abs() {
                return Ok(Principal {
                    lambda,
                    eigenvector: oriented(v.iter().copied()),
                });
            }
        }
    }
    Err(Error::EigenNonConvergence {
        iterations: max_iter,
    })
}

/// Largest eigenvalue of the discretized operator with its eigenvector.
///
/// Dense symmetric eigensolve up to [`DENSE_LIMIT`] nodes, power iteration
/// beyond.
pub fn bs_lambda_max(disc: &BSDiscretization) -> Result<Principal> {
    if disc.n > DENSE_LIMIT {
        return power_iteration(&disc.matrix, None, 1e-14, 100_000);
    }
    let eig = SymmetricEigen::try_new(disc.matrix.clone(), f64::EPSILON, 0)
        .ok_or(Error::EigenNonConvergence { iterations: 0 })?;
    let (k, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::Internal("empty spectrum".into()))?;
    Ok(Principal {
        lambda,
        eigenvector: oriented(eig.eigenvectors.column(k).iter().copied()),
    })
}

/// Grid schedule of [`ground_state_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSchedule {
    pub n_start: usize,
    pub n_max: usize,
}

impl Default for GridSchedule {
    fn default() -> Self {
        GridSchedule {
            n_start: 64,
            n_max: 1024,
        }
    }
}

/// Lowest eigenvalue `ε₁ = −κ*²` with the grid it was resolved on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundState {
    pub epsilon1: f64,
    pub kappa_star: f64,
    pub n: usize,
    /// `|λ_max(κ*) − 1|` on the final grid.
    #[serde(rename = "residual")]
    pub bs_eigenvalue_residual: f64,
    /// Nodal values of the principal eigenfunction.
    #[serde(skip)]
    pub eigenvector: Vec<f64>,
    /// `|κ*(n) − κ*(n/2)|` at the final grid.
    #[serde(skip)]
    pub grid_change: f64,
}

fn lambda_at(
    curve: &ArcLengthCurve,
    alpha: f64,
    kappa: f64,
    n: usize,
    warm: &mut Option<Vec<f64>>,
) -> Result<f64> {
    let disc = assemble_bs(curve, alpha, kappa, n)?;
    let principal = if n <= 256 {
        bs_lambda_max(&disc)?
    } else {
        // Warm-started power iteration; the gap below the top eigenvalue is
        // wide at the kappa values a root search visits.
        match power_iteration(&disc.matrix, warm.as_deref(), 1e-15, 20_000) {
            Ok(p) => p,
            Err(_) => bs_lambda_max(&disc)?,
        }
    };
    *warm = Some(principal.eigenvector);
    Ok(principal.lambda)
}

/// Bracket `λ(κ) = 1` by a geometric scan starting at `[α/100, 10α]`.
fn bracket(mut lambda: impl FnMut(f64) -> Result<f64>, alpha: f64) -> Result<(f64, f64)> {
    let mut scanned = Vec::new();
    let mut lo = alpha / 100.0;
    let mut f_lo = lambda(lo)? - 1.0;
    scanned.push((lo, f_lo + 1.0));
    while f_lo <= 0.0 {
        if lo < alpha * 1e-12 {
            return Err(Error::BracketFailure { scanned });
        }
        lo /= 4.0;
        f_lo = lambda(lo)? - 1.0;
        scanned.push((lo, f_lo + 1.0));
    }
    let mut hi = lo;
    loop {
        let next = hi * 2.0;
        let f = lambda(next)? - 1.0;
        scanned.push((next, f + 1.0));
        if f < 0.0 {
            return Ok((hi, next));
        }
        hi = next;
        if hi > 1e4 * alpha {
            return Err(Error::BracketFailure { scanned });
        }
    }
}

fn solve_kappa(
    curve: &ArcLengthCurve,
    alpha: f64,
    n: usize,
    guess: Option<f64>,
    tol: f64,
) -> Result<f64> {
    let mut warm = None;
    let mut lambda = |k: f64| lambda_at(curve, alpha, k, n, &mut warm);
    let (lo, hi) = match guess {
        Some(g) => {
            let (a, b) = (g * 0.95, g * 1.05);
            if lambda(a)? > 1.0 && lambda(b)? < 1.0 {
                (a, b)
            } else {
                bracket(&mut lambda, alpha)?
            }
        }
        None => bracket(&mut lambda, alpha)?,
    };
    bisect_secant(|k| Ok(lambda(k)? - 1.0), lo, hi, 1e-3, tol * lo)
}

/// Ground state with the default [`GridSchedule`].
pub fn ground_state(curve: &ArcLengthCurve, alpha: f64, tol: f64) -> Result<GroundState> {
    ground_state_with(curve, alpha, tol, GridSchedule::default())
}

/// Solve `λ_max(κ) = 1` on grids `n_start, 2·n_start, …` until `κ*` moves by
/// less than `tol` (relative) between grids, or `n_max` is reached.
pub fn ground_state_with(
    curve: &ArcLengthCurve,
    alpha: f64,
    tol: f64,
    grid: GridSchedule,
) -> Result<GroundState> {
    check_planar_curve(curve)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::param(
            "alpha",
            format!("must be positive, got {alpha}"),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::param("tol", format!("must be positive, got {tol}")));
    }
    if grid.n_start < 8 || !grid.n_start.is_multiple_of(2) || grid.n_max < grid.n_start {
        return Err(Error::param("grid", format!("invalid schedule {grid:?}")));
    }
    let root_tol = 0.01 * tol;
    let mut n = grid.n_start;
    let mut kappa = solve_kappa(curve, alpha, n, None, root_tol)?;
    let mut change = f64::INFINITY;
    while 2 * n <= grid.n_max {
        let next = solve_kappa(curve, alpha, 2 * n, Some(kappa), root_tol)?;
        change = (next - kappa).abs();
        kappa = next;
        n *= 2;
        if change < tol * kappa {
            break;
        }
    }
    let disc = assemble_bs(curve, alpha, kappa, n)?;
    let principal = bs_lambda_max(&disc)?;
    Ok(GroundState {
        epsilon1: -kappa * kappa,
        kappa_star: kappa,
        n,
        bs_eigenvalue_residual: (principal.lambda - 1.0).abs(),
        eigenvector: principal.eigenvector,
        grid_change: change,
    })
}

/// Both sides of `∫∫ K₀(κ|Γ(s) − Γ(s′)|) ≥ ∫∫ K₀(κ|𝒞(s) − 𝒞(s′)|)` and the
/// chord form `F_κ` of their half difference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreenCheck {
    pub kappa: f64,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(rename = "F_kappa")]
    pub f_kappa: f64,
    /// Quadrature error estimate of `f_kappa`.
    pub f_kappa_error: f64,
    /// `L ∫ [K₀(κ·mean chord(u)) − K₀(κ·circle chord(u))] du`, below `F_κ`.
    pub jensen_lower_bound: f64,
}

/// `K₀(x) − K₀(y)` for nearby arguments without cancelling the logarithms.
fn k0_difference(x: f64, y: f64) -> f64 {
    if x.max(y) > 2.0 {
        return k0_unchecked(x) - k0_unchecked(y);
    }
    let (sx, sy) = (split_unchecked(x), split_unchecked(y));
    let log_ratio = ((x - y) / y).ln_1p();
    -(sx.log_part_coefficient - sy.log_part_coefficient) * x.ln()
        - sy.log_part_coefficient * log_ratio
        + (sx.smooth_part - sy.smooth_part)
}

/// Evaluate both double integrals with the Nyström rule on `n_quad` nodes and
/// `F_κ(Γ) = ∫₀^{L/2} du ∫₀^L ds [K₀(κ|Γ(s+u) − Γ(s)|) − K₀((κL/π) sin(πu/L))]`
/// with Gauss–Legendre panels in `u` and `s`.
pub fn green_inequality_check(
    curve: &ArcLengthCurve,
    kappa: f64,
    n_quad: usize,
) -> Result<GreenCheck> {
    check_planar_curve(curve)?;
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::param(
            "kappa",
            format!("must be positive, got {kappa}"),
        ));
    }
    if n_quad < 8 || !n_quad.is_multiple_of(2) {
        return Err(Error::param(
            "n_quad",
            format!("must be even and at least 8, got {n_quad}"),
        ));
    }
    let l = curve.length();
    let circle = make_circle(l, 2)?;
    let total = |c: &ArcLengthCurve| {
        let (m, _) = kernel_matrix(c, kappa, n_quad, 1.0);
        m.sum() * l / n_quad as f64
    };
    let lhs = total(curve);
    let rhs = total(&circle);

    let bps = curve.breakpoints();
    let u_breaks = periodic_breaks(
        bps.iter()
            .flat_map(|&a| bps.iter().map(move |&b| (a - b).abs()))
            .chain([0.5 * l]),
        l,
    );
    let u_breaks: Vec<f64> = u_breaks.into_iter().filter(|&u| u <= 0.5 * l).collect();

    let inner = |u: f64| -> (f64, f64) {
        let c0 = l / PI * (PI * u / l).sin();
        let f = |s: f64| k0_difference(kappa * curve.chord_unchecked(s, u), kappa * c0);
        let g = |s: f64| curve.chord_unchecked(s, u);
        if bps.is_empty() {
            (
                periodic_trapezoid(l, 0.0, n_quad, f).value,
                periodic_trapezoid(l, 0.0, n_quad, g).value,
            )
        } else {
            let breaks = periodic_breaks(bps.iter().flat_map(|&b| [b, b - u]), l);
            (
                composite_gauss(&breaks, n_quad, f).value,
                composite_gauss(&breaks, n_quad, g).value,
            )
        }
    };
    let f_est = composite_gauss(&u_breaks, n_quad, |u| inner(u).0);
    let jensen = composite_gauss(&u_breaks, n_quad, |u| {
        let c0 = l / PI * (PI * u / l).sin();
        k0_difference(kappa * inner(u).1 / l, kappa * c0)
    });
    Ok(GreenCheck {
        kappa,
        lhs,
        rhs,
        f_kappa: f_est.value,
        f_kappa_error: f_est.error,
        jensen_lower_bound: l * jensen.value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_doubled_segment, make_ellipse, make_stadium, make_trefoil};
    use crate::specfun::bessel_i0;

    #[test]
    fn log_weights_integrate_cosines() {
        // ∫₀^{2π} ln(4 sin²(τ/2)) cos(mτ) dτ = −2π/m for m ≥ 1, 0 for m = 0.
        let n = 32;
        let w = log_weights(n);
        for m in 0..8 {
            let got: f64 = (0..n)
                .map(|k| w[k] * (m as f64 * PI * k as f64 / 16.0).cos())
                .sum();
            let want = if m == 0 { 0.0 } else { -2.0 * PI / m as f64 };
            assert!((got - want).abs() < 1e-13, "m={m}: {got}");
        }
    }

    #[test]
    fn circle_matrix_is_circulant() {
        let c = make_circle(2.0 * PI, 2).unwrap();
        let d = assemble_bs(&c, 1.0, 0.7, 64).unwrap();
        let m = &d.matrix;
        let sums: Vec<f64> = m.row_iter().map(|r| r.sum()).collect();
        for i in 0..64 {
            assert!((sums[i] - sums[0]).abs() < 1e-12);
            for j in 0..64 {
                assert!((m[(i, j)] - m[(0, (j + 64 - i) % 64)]).abs() < 1e-13);
                assert_eq!(m[(i, j)], m[(j, i)]);
            }
        }
        // Row sum is the constant-mode eigenvalue, αR·I₀(κR)·K₀(κR).
        let want = bessel_i0(0.7) * k0_unchecked(0.7);
        assert!((sums[0] - want).abs() < 1e-12, "{} vs {want}", sums[0]);
    }

    #[test]
    fn linear_in_alpha_and_decreasing_in_kappa() {
        let e = make_ellipse(2.0, 2.0 * PI).unwrap();
        let a = assemble_bs(&e, 1.0, 0.5, 64).unwrap();
        let b = assemble_bs(&e, 2.0, 0.5, 64).unwrap();
        assert_eq!(b.matrix, &a.matrix * 2.0);
        let la = bs_lambda_max(&a).unwrap().lambda;
        let lb = bs_lambda_max(&b).unwrap().lambda;
        assert!((lb - 2.0 * la).abs() <= 4.0 * f64::EPSILON * lb);
        let mut prev = f64::INFINITY;
        for k in [0.1, 0.2, 0.4, 0.8, 1.6, 3.2] {
            let l = bs_lambda_max(&assemble_bs(&e, 1.0, k, 64).unwrap())
                .unwrap()
                .lambda;
            assert!(l < prev);
            prev = l;
        }
    }

    #[test]
    fn principal_vector_positive() {
        let st = make_stadium(0.5).unwrap();
        let p = bs_lambda_max(&assemble_bs(&st, 1.0, 0.6, 128).unwrap()).unwrap();
        assert!(p.eigenvector.iter().all(|&x| x > 0.0));
        let c = make_circle(2.0 * PI, 2).unwrap();
        let p = bs_lambda_max(&assemble_bs(&c, 1.0, 0.6, 64).unwrap()).unwrap();
        let (lo, hi) = p
            .eigenvector
            .iter()
            .fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
        assert!((hi - lo) / hi < 1e-10);
    }

    #[test]
    fn power_iteration_agrees_with_dense() {
        let e = make_ellipse(1.5, 2.0 * PI).unwrap();
        let d = assemble_bs(&e, 1.0, 0.5, 128).unwrap();
        let dense = bs_lambda_max(&d).unwrap();
        let power = power_iteration(&d.matrix, None, 1e-15, 10_000).unwrap();
        assert!((dense.lambda - power.lambda).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_curves() {
        let d = make_doubled_segment(2.0 * PI).unwrap();
        assert!(matches!(
            assemble_bs(&d, 1.0, 1.0, 32),
            Err(Error::DegenerateCurve(_))
        ));
        let t = make_trefoil(2.0 * PI).unwrap();
        assert!(assemble_bs(&t, 1.0, 1.0, 32).is_err());
        let c = make_circle(2.0 * PI, 2).unwrap();
        assert!(assemble_bs(&c, 1.0, 1.0, 31).is_err());
        assert!(assemble_bs(&c, -1.0, 1.0, 32).is_err());
    }

    #[test]
    fn circle_ground_state() {
        let c = make_circle(2.0 * PI, 2).unwrap();
        let g = ground_state(&c, 1.0, 1e-10).unwrap();
        // I₀(κ)K₀(κ) = 1 on the unit circle.
        let k = g.kappa_star;
        assert!((bessel_i0(k) * k0_unchecked(k) - 1.0).abs() < 1e-9, "{g:?}");
        assert!(g.bs_eigenvalue_residual < 1e-9);
        assert_eq!(g.epsilon1, -k * k);
        let v = serde_json::to_value(&g).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        assert_eq!(keys, ["epsilon1", "kappa_star", "n", "residual"]);
    }

    #[test]
    fn green_check_circle_and_ellipse() {
        let c = make_circle(2.0 * PI, 2).unwrap();
        let g = green_inequality_check(&c, 1.0, 64).unwrap();
        assert!(g.f_kappa.abs() < 1e-12, "{g:?}");
        assert!((g.lhs - g.rhs).abs() < 1e-12);
        let e = make_ellipse(2.0, 2.0 * PI).unwrap();
        let g = green_inequality_check(&e, 1.0, 128).unwrap();
        assert!(g.f_kappa > 0.0);
        assert!(g.jensen_lower_bound > 0.0 && g.jensen_lower_bound < g.f_kappa);
        assert!(
            ((g.lhs - g.rhs) - 2.0 * g.f_kappa).abs() < 1e-9 * g.f_kappa.max(1.0),
            "{g:?}"
        );
    }

    #[test]
    fn k0_difference_matches_direct() {
        for (x, y) in [(0.3, 0.31), (1e-3, 1.1e-3), (1.9, 2.5), (0.5, 0.5)] {
            let want = k0_unchecked(x) - k0_unchecked(y);
            assert!((k0_difference(x, y) - want).abs() < 1e-14 * k0_unchecked(x.min(y)));
        }
    }
}
