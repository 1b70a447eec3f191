//! Bracketed scalar root finding: bisection followed by a secant polish.

use crate::error::{Error, Result};

/// Root of `f` on `[lo, hi]`, which must bracket a sign change.
///
/// Bisection shrinks the bracket to relative width `coarse`, then secant
/// steps (falling back to bisection whenever they leave the bracket) run
/// until the step is below `tol` in absolute terms.
pub fn bisect_secant<F>(mut f: F, lo: f64, hi: f64, coarse: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::BracketFailure {
            scanned: vec![(a, fa), (b, fb)],
        });
    }

    for _ in 0..200 {
        if b - a <= coarse * a.abs().max(b.abs()).max(tol) {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }

    // Secant iteration inside the bracket.
    let (mut x0, mut f0, mut x1, mut f1) = (a, fa, b, fb);
    for _ in 0..100 {
        let step = if f1 != f0 {
            f1 * (x1 - x0) / (f1 - f0)
        } else {
            0.0
        };
        let mut x2 = x1 - step;
        if !(x2 > a && x2 < b) || step == 0.0 {
            x2 = 0.5 * (a + b);
        }
        let f2 = f(x2)?;
        if f2 == 0.0 {
            return Ok(x2);
        }
        if f2.signum() == fa.signum() {
            a = x2;
            fa = f2;
        } else {
            b = x2;
        }
        if (x2 - x1).abs() <= tol || b - a <= tol {
            return Ok(x2);
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    Ok(0.5 * (a + b))
}
