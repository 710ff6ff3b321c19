//! Adaptive Simpson quadrature.
//!
//! Used as the numeric side of the density-normalization and Selberg
//! checks: the closed-form constants are exponentiated Gamma products, the
//! integrals here never share code with them.

use crate::error::{Error, Result};

/// Adaptive Simpson integration of `f` on [a, b].
///
/// Recursion halves intervals until the local Richardson error estimate
/// drops below the tolerance share assigned to the interval.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::NonFinite("integration endpoint"));
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let mut evals: usize = 3;
    let v = adaptive_step(f, a, b, fa, fm, fb, whole, tol, 50, &mut evals)?;
    Ok(v)
}

/// Integrate piecewise between consecutive breakpoints and sum.
///
/// Callers pass interior kink locations (for example the diagonal of a
/// Vandermonde factor) so each piece is smooth.
pub fn adaptive_simpson_split<F: Fn(f64) -> f64>(f: &F, points: &[f64], tol: f64) -> Result<f64> {
    assert!(points.len() >= 2, "need at least two breakpoints");
    let share = tol / (points.len() - 1) as f64;
    let mut total = 0.0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            total += adaptive_simpson(f, w[0], w[1], share)?;
        }
    }
    Ok(total)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    evals: &mut usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    *evals += 2;
    if *evals > 20_000_000 {
        return Err(Error::QuadratureNonConvergence(format!(
            "evaluation budget exhausted on [{a}, {b}]"
        )));
    }
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol || (b - a) < 1e-14 * (a.abs() + b.abs() + 1.0) {
        return Ok(left + right + err / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureNonConvergence(format!(
            "max recursion depth on [{a}, {b}], err {err:e}"
        )));
    }
    let lv = adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, evals)?;
    let rv = adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, evals)?;
    Ok(lv + rv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::ln_gamma;

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive_simpson(&|x: f64| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, 1e-12).unwrap();
        // antiderivative x^4/4 - x^2 + x
        assert!((v - 16.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn gaussian_integral() {
        let v = adaptive_simpson(&|x: f64| (-x * x / 2.0).exp(), -12.0, 12.0, 1e-10).unwrap();
        let expect = (2.0 * std::f64::consts::PI).sqrt();
        assert!(((v - expect) / expect).abs() < 1e-9, "{v} vs {expect}");
    }

    #[test]
    fn kink_handled_by_split() {
        // |x| on [-1, 1] integrates to 1
        let f = |x: f64| x.abs();
        let v = adaptive_simpson_split(&f, &[-1.0, 0.0, 1.0], 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-11, "{v}");
    }

    #[test]
    fn chi_moment_quadrature_oracle() {
        // E[chi_r^4] for r = 2 via its density: frozen expected value 8
        let r = 2.0f64;
        let ln_norm = (r / 2.0 - 1.0) * 2.0f64.ln() + ln_gamma(r / 2.0);
        let f =
            |x: f64| x.powi(4) * (((r - 1.0) * x.ln() - x * x / 2.0 - ln_norm).exp());
        let v = adaptive_simpson_split(&f, &[1e-12, 1.0, 5.0, 40.0], 1e-10).unwrap();
        assert!((v - 8.0).abs() < 1e-7, "{v}");
        // and r = 2.5 matches the product identity r(r+2)
        let r = 2.5f64;
        let ln_norm = (r / 2.0 - 1.0) * 2.0f64.ln() + ln_gamma(r / 2.0);
        let f =
            |x: f64| x.powi(4) * (((r - 1.0) * x.ln() - x * x / 2.0 - ln_norm).exp());
        let v = adaptive_simpson_split(&f, &[1e-12, 1.0, 5.0, 40.0], 1e-10).unwrap();
        assert!((v - 11.25).abs() < 1e-7, "{v}");
    }
}
