//! Quadrature rules: periodic trapezoid and composite Gauss–Legendre panels.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

/// Order of the Gauss–Legendre rule used on every panel.
pub const PANEL_ORDER: usize = 16;

fn reference_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let rule = GaussLegendre::new(NonZeroUsize::new(PANEL_ORDER).unwrap());
        let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs
    })
}

/// Result of a quadrature together with an a-posteriori error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Floor on the error estimate from floating-point summation of `n` terms
/// whose absolute sum is `abs_sum`.
pub(crate) fn roundoff_floor(abs_sum: f64, n: usize) -> f64 {
    abs_sum * f64::EPSILON * (n as f64).sqrt().max(4.0)
}

/// Trapezoid rule for a `period`-periodic integrand on `n` equispaced nodes
/// starting at `offset`. The error estimate is the difference to the rule on
/// every second node, floored by summation roundoff.
pub fn periodic_trapezoid<F>(period: f64, offset: f64, n: usize, f: F) -> Estimate
where
    F: Fn(f64) -> f64,
{
    assert!(
        n >= 2 && n.is_multiple_of(2),
        "periodic_trapezoid needs an even node count"
    );
    let h = period / n as f64;
    let mut full = 0.0;
    let mut half = 0.0;
    let mut abs_sum = 0.0;
    for j in 0..n {
        let v = f(offset + j as f64 * h);
        full += v;
        abs_sum += v.abs();
        if j % 2 == 0 {
            half += v;
        }
    }
    let value = full * h;
    let coarse = half * 2.0 * h;
    Estimate {
        value,
        error: (value - coarse).abs().max(roundoff_floor(abs_sum * h, n)),
    }
}

/// Gauss–Legendre nodes and weights mapped to `[a, b]`.
pub fn gauss_panel(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    reference_rule()
        .iter()
        .map(move |&(x, w)| (mid + half * x, half * w))
}

/// Composite Gauss–Legendre nodes over consecutive breakpoints, each interval
/// split into equal panels of width at most `max_width`.
pub fn composite_nodes(breaks: &[f64], max_width: f64) -> Vec<(f64, f64)> {
    let mut nodes = Vec::new();
    for pair in breaks.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b <= a {
            continue;
        }
        let panels = ((b - a) / max_width).ceil().max(1.0) as usize;
        let w = (b - a) / panels as f64;
        for k in 0..panels {
            let lo = a + k as f64 * w;
            nodes.extend(gauss_panel(lo, lo + w));
        }
    }
    nodes
}

/// Composite Gauss–Legendre integral on `breaks` with roughly `n` nodes in
/// total; the error estimate compares against the rule with half as many
/// panels.
pub fn composite_gauss<F>(breaks: &[f64], n: usize, f: F) -> Estimate
where
    F: Fn(f64) -> f64,
{
    let span = breaks.last().unwrap() - breaks[0];
    let panels = (n / PANEL_ORDER).max(breaks.len() - 1).max(2);
    let width = span / panels as f64;
    let integrate = |width: f64| {
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        let nodes = composite_nodes(breaks, width);
        for &(x, w) in &nodes {
            let v = w * f(x);
            sum += v;
            abs_sum += v.abs();
        }
        (sum, abs_sum, nodes.len())
    };
    let (fine, abs_sum, count) = integrate(width);
    let (coarse, _, _) = integrate(2.0 * width);
    Estimate {
        value: fine,
        error: (fine - coarse).abs().max(roundoff_floor(abs_sum, count)),
    }
}

/// Sorted, deduplicated breakpoints of a periodic integrand on `[0, period]`,
/// always containing both ends.
pub fn periodic_breaks(points: impl IntoIterator<Item = f64>, period: f64) -> Vec<f64> {
    let tol = 1e-12 * period;
    let mut breaks: Vec<f64> = points
        .into_iter()
        .map(|x| x.rem_euclid(period))
        .filter(|&x| x > tol && x < period - tol)
        .collect();
    breaks.push(0.0);
    breaks.push(period);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= tol);
    breaks
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn trapezoid_is_spectral_for_periodic() {
        let est = periodic_trapezoid(2.0 * PI, 0.3, 64, |s| (s.cos()).exp());
        // 2π I₀(1)
        let exact = 2.0 * PI * 1.266_065_877_752_008_4;
        assert!((est.value - exact).abs() < 1e-13);
        assert!(est.error >= (est.value - exact).abs());
    }

    #[test]
    fn gauss_panels_integrate_polynomials() {
        let est = composite_gauss(&[0.0, 0.5, 2.0], 64, |x| x.powi(7) - 3.0 * x);
        let exact = 2f64.powi(8) / 8.0 - 6.0;
        assert!((est.value - exact).abs() < 1e-12);
    }

    #[test]
    fn breaks_are_sorted_and_wrapped() {
        let b = periodic_breaks([-1.0, 3.0, 7.0, 3.0 + 1e-15], 2.0 * PI);
        assert_eq!(b.first(), Some(&0.0));
        assert_eq!(b.last(), Some(&(2.0 * PI)));
        assert_eq!(b.len(), 5);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
    }
}
