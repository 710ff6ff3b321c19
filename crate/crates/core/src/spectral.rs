//! Tridiagonal spectral kernels: Sturm-bisection eigenvalues with an
//! implicit-shift QL fast path, characteristic-polynomial evaluation, the
//! Paige first-row formula, Lanczos reconstruction from (q, λ), and the
//! exact Vandermonde/Jacobian identities of the tridiagonal bijection.
//!
//! Characteristic-polynomial minors follow the bottom-right convention:
//! `P_k` is the characteristic polynomial of the k×k lower-right submatrix,
//! so `P_1(y) = y − diag[n−1]` and
//! `P_k(y) = (y − diag[n−k]) P_{k−1}(y) − subdiag[n−k]² P_{k−2}(y)`.
//!
//! Vandermonde and Jacobian values are carried as (sign, log-magnitude)
//! pairs: Δ(λ)^β underflows past n ≈ 20 in plain doubles.

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::matrix::{BidiagonalPos, TridiagonalSym};

/// Relative eigenvalue-gap floor under which a spectrum is treated as
/// degenerate. Ties have probability zero; a hard error beats silent noise.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// A signed value stored in log scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue {
    sign: i8,
    log_abs: f64,
}

impl LogValue {
    pub fn new(sign: i8, log_abs: f64) -> Self {
        Self { sign, log_abs }
    }

    pub fn from_value(x: f64) -> Self {
        if x == 0.0 {
            Self::new(0, f64::NEG_INFINITY)
        } else {
            Self::new(if x > 0.0 { 1 } else { -1 }, x.abs().ln())
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn log_abs(&self) -> f64 {
        self.log_abs
    }

    pub fn value(&self) -> f64 {
        f64::from(self.sign) * self.log_abs.exp()
    }
}

/// Eigenvalues λ (strictly increasing) with the nonnegative unit first
/// eigenvector row q of a symmetric tridiagonal matrix.
#[derive(Clone, Debug)]
pub struct Spectrum {
    lambda: Vec<f64>,
    q: Vec<f64>,
}

impl Spectrum {
    pub fn new(lambda: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() || lambda.len() != q.len() {
            return Err(Error::InvalidParameter(
                "eigenvalue and q lengths must match and be nonzero".into(),
            ));
        }
        if lambda.iter().chain(q.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("spectrum entry"));
        }
        if lambda.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "eigenvalues must be strictly increasing".into(),
            ));
        }
        if q.iter().any(|&x| x < 0.0) {
            return Err(Error::InvalidParameter("q entries must be nonnegative".into()));
        }
        let norm2: f64 = q.iter().map(|x| x * x).sum();
        if (norm2 - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidParameter(format!(
                "q must have unit norm, got |q|^2 = {norm2}"
            )));
        }
        let norm = norm2.sqrt();
        let q = q.into_iter().map(|x| x / norm).collect();
        Ok(Self { lambda, q })
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }
}

/// Number of eigenvalues of T strictly below x, from the signs of the
/// LDLᵀ pivots (Sturm sequence).
pub fn sturm_count(t: &TridiagonalSym, x: f64) -> usize {
    let d = t.diag();
    let e = t.subdiag();
    let guard = 1e-300;
    let mut count = 0;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        let q_safe = if q.abs() < guard {
            if q >= 0.0 {
                guard
            } else {
                -guard
            }
        } else {
            q
        };
        q = (d[i] - x) - e[i - 1] * e[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues in ascending order, each within `tol · ‖T‖` of exact.
///
/// Sturm bisection brackets each eigenvalue inside its Gershgorin interval,
/// then a safeguarded Newton step on the characteristic polynomial polishes
/// the root. O(n² log(1/tol)) total.
pub fn eigenvalues(t: &TridiagonalSym, tol: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must lie in (0, 1e-6], got {tol}"
        )));
    }
    let n = t.n();
    if n == 1 {
        return Ok(vec![t.diag()[0]]);
    }
    let (glo, ghi) = t.gershgorin();
    let scale = t.norm_bound().max(f64::MIN_POSITIVE);
    let width_floor = tol * scale;
    let margin = 1e-3 * (ghi - glo).abs() + width_floor;
    let glo = glo - margin;
    let ghi = ghi + margin;

    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut lo = glo;
        let mut hi = ghi;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= width_floor.max(4.0 * f64::EPSILON * mid.abs()) {
                break;
            }
            if sturm_count(t, mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        // Newton polish: one or two steps, clipped to the final bracket
        for _ in 0..2 {
            let (_, p, dp) = charpoly_with_derivative(t, x);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            let next = x - step;
            if next.is_finite() && next > lo - (hi - lo) && next < hi + (hi - lo) {
                x = next;
            } else {
                break;
            }
        }
        out.push(x);
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// Implicit-shift QL eigenvalues (no vectors): the fast O(n²) path used by
/// large-n Monte Carlo where per-eigenvalue bracketing is unnecessary.
pub fn eigenvalues_ql(t: &TridiagonalSym) -> Result<Vec<f64>> {
    let n = t.n();
    let mut d = t.diag().to_vec();
    let mut e = t.subdiag().to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::DegenerateSpectrum(
                    "QL iteration failed to converge".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                let w = (d[i] - g) * s + 2.0 * c * b;
                p = s * w;
                d[i + 1] = g + p;
                g = c * w - b;
            }
            if !underflow {
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(d)
}

/// Scaled values of the minor characteristic polynomials P_0..P_n at y.
///
/// Each value is `mantissa(k) · 2^exp2(k)`; the running rescale keeps the
/// recurrence inside the double range for any y.
#[derive(Clone, Debug)]
pub struct CharPolyEval {
    mantissas: Vec<f64>,
    exps: Vec<i32>,
}

impl CharPolyEval {
    /// Matrix order (the evaluation holds n+1 values).
    pub fn order(&self) -> usize {
        self.mantissas.len() - 1
    }

    pub fn mantissa(&self, k: usize) -> f64 {
        self.mantissas[k]
    }

    pub fn exp2(&self, k: usize) -> i32 {
        self.exps[k]
    }

    /// P_k as a plain double; overflows to ±inf when the exponent is large.
    pub fn value(&self, k: usize) -> f64 {
        self.mantissas[k] * 2f64.powi(self.exps[k])
    }

    pub fn log_abs(&self, k: usize) -> f64 {
        self.mantissas[k].abs().ln() + f64::from(self.exps[k]) * std::f64::consts::LN_2
    }

    pub fn sign(&self, k: usize) -> i8 {
        if self.mantissas[k] == 0.0 {
            0
        } else if self.mantissas[k] > 0.0 {
            1
        } else {
            -1
        }
    }
}

const RESCALE_FACTOR: f64 = 8.636168555094445e-78; // 2^-256
const RESCALE_SHIFT: i32 = 256;

// One recurrence step grows magnitudes by at most (|y| + ‖T‖ + max b² + 2);
// keeping the running pair below f64::MAX / (4 · growth) makes the next
// step overflow-free, whatever the argument.
fn rescale_upper(t: &TridiagonalSym, y: f64) -> f64 {
    let bmax = t.subdiag().iter().fold(0.0f64, |m, &b| m.max(b * b));
    let growth = y.abs() + t.norm_bound() + bmax + 2.0;
    f64::MAX / (4.0 * growth)
}

const RESCALE_LOWER: f64 = 7.5e-270; // ~ MIN_POSITIVE * 2^128

/// Evaluate P_0..P_n at y through the three-term recurrence.
pub fn char_poly(t: &TridiagonalSym, y: f64) -> CharPolyEval {
    assert!(y.is_finite(), "char_poly argument must be finite");
    let n = t.n();
    let d = t.diag();
    let b = t.subdiag();
    let upper = rescale_upper(t, y);
    let mut mantissas = Vec::with_capacity(n + 1);
    let mut exps = Vec::with_capacity(n + 1);
    let mut prev = 1.0;
    let mut exp = 0i32;
    mantissas.push(prev);
    exps.push(exp);
    let mut cur = y - d[n - 1];
    mantissas.push(cur);
    exps.push(exp);
    for k in 2..=n {
        let a_k = d[n - k];
        let b_k = b[n - k];
        loop {
            let mag = cur.abs().max(prev.abs());
            if mag > upper {
                cur *= RESCALE_FACTOR;
                prev *= RESCALE_FACTOR;
                exp += RESCALE_SHIFT;
            } else if mag > 0.0 && mag < RESCALE_LOWER {
                cur /= RESCALE_FACTOR;
                prev /= RESCALE_FACTOR;
                exp -= RESCALE_SHIFT;
            } else {
                break;
            }
        }
        let next = (y - a_k) * cur - b_k * b_k * prev;
        prev = cur;
        cur = next;
        mantissas.push(cur);
        exps.push(exp);
    }
    CharPolyEval { mantissas, exps }
}

/// Joint scaled evaluation of (P_{n−1}, P_n, P_n′) at y; the three mantissas
/// share one scale factor, so their ratios are exact in double range.
fn charpoly_with_derivative(t: &TridiagonalSym, y: f64) -> (f64, f64, f64) {
    let n = t.n();
    let d = t.diag();
    let b = t.subdiag();
    let upper = rescale_upper(t, y);
    let mut p_prev: f64 = 1.0;
    let mut dp_prev: f64 = 0.0;
    let mut p_cur: f64 = y - d[n - 1];
    let mut dp_cur: f64 = 1.0;
    if n == 1 {
        return (p_prev, p_cur, dp_cur);
    }
    for k in 2..=n {
        let a_k = d[n - k];
        let bsq = b[n - k] * b[n - k];
        loop {
            let mag = p_cur.abs().max(dp_cur.abs()).max(p_prev.abs()).max(dp_prev.abs());
            if mag > upper {
                p_prev *= RESCALE_FACTOR;
                p_cur *= RESCALE_FACTOR;
                dp_prev *= RESCALE_FACTOR;
                dp_cur *= RESCALE_FACTOR;
            } else if mag > 0.0 && mag < RESCALE_LOWER {
                p_prev /= RESCALE_FACTOR;
                p_cur /= RESCALE_FACTOR;
                dp_prev /= RESCALE_FACTOR;
                dp_cur /= RESCALE_FACTOR;
            } else {
                break;
            }
        }
        let p_next = (y - a_k) * p_cur - bsq * p_prev;
        let dp_next = p_cur + (y - a_k) * dp_cur - bsq * dp_prev;
        p_prev = p_cur;
        dp_prev = dp_cur;
        p_cur = p_next;
        dp_cur = dp_next;
    }
    (p_prev, p_cur, dp_cur)
}

/// Joint evaluation of (P_{n−1}, P_n, P_n′) in double-double with a shared
/// power-of-two rescale; exact ratios survive tiny first-row components,
/// which sit quadratically close to roots of the (n−1)-minor.
fn charpoly_triple_dd(t: &TridiagonalSym, y: Dd) -> (Dd, Dd, Dd) {
    let n = t.n();
    let d = t.diag();
    let b = t.subdiag();
    let mut p_prev = Dd::from_f64(1.0);
    let mut dp_prev = Dd::ZERO;
    let mut p_cur = y.sub(Dd::from_f64(d[n - 1]));
    let mut dp_cur = Dd::from_f64(1.0);
    if n == 1 {
        return (p_prev, p_cur, dp_cur);
    }
    let upper = rescale_upper(t, y.hi);
    for k in 2..=n {
        loop {
            let mag = p_cur
                .hi
                .abs()
                .max(dp_cur.hi.abs())
                .max(p_prev.hi.abs())
                .max(dp_prev.hi.abs());
            if mag > upper {
                p_prev = p_prev.scale_pow2(RESCALE_FACTOR);
                p_cur = p_cur.scale_pow2(RESCALE_FACTOR);
                dp_prev = dp_prev.scale_pow2(RESCALE_FACTOR);
                dp_cur = dp_cur.scale_pow2(RESCALE_FACTOR);
            } else if mag > 0.0 && mag < RESCALE_LOWER {
                p_prev = p_prev.scale_pow2(1.0 / RESCALE_FACTOR);
                p_cur = p_cur.scale_pow2(1.0 / RESCALE_FACTOR);
                dp_prev = dp_prev.scale_pow2(1.0 / RESCALE_FACTOR);
                dp_cur = dp_cur.scale_pow2(1.0 / RESCALE_FACTOR);
            } else {
                break;
            }
        }
        let ymk = y.sub(Dd::from_f64(d[n - k]));
        let bsq = Dd::from_f64(b[n - k]).mul(Dd::from_f64(b[n - k]));
        let p_next = ymk.mul(p_cur).sub(bsq.mul(p_prev));
        let dp_next = p_cur.add(ymk.mul(dp_cur)).sub(bsq.mul(dp_prev));
        p_prev = p_cur;
        dp_prev = dp_cur;
        p_cur = p_next;
        dp_cur = dp_next;
    }
    (p_prev, p_cur, dp_cur)
}

/// Polish a computed eigenvalue to double-double accuracy by Newton steps
/// on the characteristic polynomial.
fn refine_root_dd(t: &TridiagonalSym, x0: f64, guard: f64) -> Dd {
    let mut x = Dd::from_f64(x0);
    for _ in 0..4 {
        let (_, p, dp) = charpoly_triple_dd(t, x);
        if dp.hi == 0.0 {
            break;
        }
        let step = p.div(dp);
        if !step.hi.is_finite() || step.hi.abs() > guard {
            break;
        }
        x = x.sub(step);
        if step.hi.abs() <= 1e-31 * x.hi.abs().max(guard) {
            break;
        }
    }
    x
}

/// First eigenvector row via the Paige formula q_i² = |P_{n−1}(λ_i)/P_n′(λ_i)|,
/// renormalized to unit length. Requires simple eigenvalues.
///
/// Each root is refined and the ratio evaluated in double-double, so the
/// components come out relatively accurate even when some q_i is tiny.
pub fn first_row_eigvec(t: &TridiagonalSym, lambda: &[f64]) -> Result<Vec<f64>> {
    let n = t.n();
    if lambda.len() != n {
        return Err(Error::InvalidParameter(
            "eigenvalue count does not match matrix order".into(),
        ));
    }
    if n == 1 {
        return Ok(vec![1.0]);
    }
    let scale = t.norm_bound().max(f64::MIN_POSITIVE);
    for w in lambda.windows(2) {
        if w[1] - w[0] <= DEGENERACY_TOL * scale {
            return Err(Error::DegenerateSpectrum(format!(
                "eigenvalue gap {} below {} * norm",
                w[1] - w[0],
                DEGENERACY_TOL
            )));
        }
    }
    let min_gap = lambda
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let mut q = Vec::with_capacity(n);
    for &li in lambda {
        let root = refine_root_dd(t, li, 0.4 * min_gap);
        let (p_nm1, _, dp_n) = charpoly_triple_dd(t, root);
        if dp_n.hi == 0.0 || p_nm1.hi == 0.0 {
            return Err(Error::DegenerateSpectrum(
                "characteristic polynomial derivative vanished at a computed eigenvalue".into(),
            ));
        }
        q.push(p_nm1.div(dp_n).abs().sqrt().to_f64());
    }
    let norm: f64 = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut q {
        *x /= norm;
    }
    Ok(q)
}

/// Eigenvalues and first eigenvector row in one call.
pub fn spectrum(t: &TridiagonalSym, tol: f64) -> Result<Spectrum> {
    let lambda = eigenvalues(t, tol)?;
    let q = first_row_eigvec(t, &lambda)?;
    Spectrum::new(lambda, q)
}

fn dd_dot(a: &[Dd], b: &[Dd]) -> Dd {
    let mut acc = Dd::ZERO;
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(x.mul(*y));
    }
    acc
}

/// The unique symmetric tridiagonal matrix with positive subdiagonal whose
/// eigendecomposition yields (λ, q): Lanczos on diag(λ) started at q, with
/// full reorthogonalization. Run in double-double so that the recurrence's
/// cancellation never eats into the leading double.
pub fn reconstruct(spec: &Spectrum) -> Result<TridiagonalSym> {
    let n = spec.n();
    let lambda = spec.lambda();
    let q = spec.q();
    if q.iter().any(|&x| x == 0.0) {
        return Err(Error::BijectionViolation(
            "q has a zero entry; (q, lambda) is outside the bijection's domain".into(),
        ));
    }
    if n == 1 {
        return TridiagonalSym::new(vec![lambda[0]], vec![]);
    }
    let lam: Vec<Dd> = lambda.iter().map(|&x| Dd::from_f64(x)).collect();
    let q0: Vec<Dd> = {
        let raw: Vec<Dd> = q.iter().map(|&x| Dd::from_f64(x)).collect();
        let norm = dd_dot(&raw, &raw).sqrt();
        raw.into_iter().map(|x| x.div(norm)).collect()
    };
    let mut basis: Vec<Vec<Dd>> = Vec::with_capacity(n);
    basis.push(q0);
    let mut alphas = Vec::with_capacity(n);
    let mut betas = Vec::with_capacity(n - 1);
    for k in 0..n {
        let v = &basis[k];
        let mut w: Vec<Dd> = v.iter().zip(&lam).map(|(vi, li)| vi.mul(*li)).collect();
        let alpha = dd_dot(&w, v);
        alphas.push(alpha.to_f64());
        if k + 1 == n {
            break;
        }
        for (wi, vi) in w.iter_mut().zip(v.iter()) {
            *wi = wi.sub(alpha.mul(*vi));
        }
        if k > 0 {
            let beta_prev = Dd::from_f64(betas[k - 1]);
            for (wi, vi) in w.iter_mut().zip(basis[k - 1].iter()) {
                *wi = wi.sub(beta_prev.mul(*vi));
            }
        }
        // full reorthogonalization, two sweeps
        for _ in 0..2 {
            for vb in &basis {
                let proj = dd_dot(&w, vb);
                for (wi, vi) in w.iter_mut().zip(vb.iter()) {
                    *wi = wi.sub(proj.mul(*vi));
                }
            }
        }
        let beta = dd_dot(&w, &w).sqrt();
        let beta_f = beta.to_f64();
        if beta_f <= f64::MIN_POSITIVE.sqrt() {
            return Err(Error::BijectionViolation(
                "Lanczos breakdown: (q, lambda) numerically outside the bijection's domain".into(),
            ));
        }
        betas.push(beta_f);
        basis.push(w.into_iter().map(|x| x.div(beta)).collect());
    }
    TridiagonalSym::new(alphas, betas)
}

/// log |Δ(λ)| with sign, from the ordered pairwise product ∏_{i<j}(λ_j−λ_i).
pub fn vandermonde_direct(lambda: &[f64]) -> LogValue {
    let n = lambda.len();
    let mut log_abs = 0.0;
    let mut sign = 1i8;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = lambda[j] - lambda[i];
            if d == 0.0 {
                return LogValue::new(0, f64::NEG_INFINITY);
            }
            if d < 0.0 {
                sign = -sign;
            }
            log_abs += d.abs().ln();
        }
    }
    LogValue::new(sign, log_abs)
}

/// The tridiagonal Vandermonde identity Δ(λ) = ∏ b_i^i / ∏ q_i, evaluated in
/// log scale. The exponent of a subdiagonal entry is its distance from the
/// bottom of the matrix.
pub fn vandermonde_tridiagonal(t: &TridiagonalSym, q: &[f64]) -> Result<LogValue> {
    let n = t.n();
    if q.len() != n {
        return Err(Error::InvalidParameter("q length mismatch".into()));
    }
    if q.iter().any(|&x| x == 0.0) {
        return Err(Error::DegenerateSpectrum("q has a zero entry".into()));
    }
    if t.is_degenerate() {
        return Ok(LogValue::new(0, f64::NEG_INFINITY));
    }
    let mut log_abs = 0.0;
    for (j, &b) in t.subdiag().iter().enumerate() {
        log_abs += (n - 1 - j) as f64 * b.ln();
    }
    for &qi in q {
        log_abs -= qi.abs().ln();
    }
    Ok(LogValue::new(1, log_abs))
}

/// The Jacobian of T → (q, λ): J = ∏ b_i / ∏ q_i, in log scale.
pub fn jacobian_t_to_qlambda(t: &TridiagonalSym, q: &[f64]) -> Result<LogValue> {
    let n = t.n();
    if q.len() != n {
        return Err(Error::InvalidParameter("q length mismatch".into()));
    }
    if q.iter().any(|&x| x == 0.0) {
        return Err(Error::DegenerateSpectrum("q has a zero entry".into()));
    }
    if t.is_degenerate() {
        return Ok(LogValue::new(0, f64::NEG_INFINITY));
    }
    let mut log_abs = 0.0;
    for &b in t.subdiag() {
        log_abs += b.ln();
    }
    for &qi in q {
        log_abs -= qi.abs().ln();
    }
    Ok(LogValue::new(1, log_abs))
}

/// The Jacobian of B → T = BBᵀ: (2^m x_bottom ∏_{j<m−1} x_j²)⁻¹, where
/// x_bottom is the bottom-right diagonal entry of B.
pub fn jacobian_b_to_t(b: &BidiagonalPos) -> LogValue {
    let m = b.m();
    let d = b.diag();
    let mut log_abs = -(m as f64) * std::f64::consts::LN_2 - d[m - 1].ln();
    for &x in &d[..m - 1] {
        log_abs -= 2.0 * x.ln();
    }
    LogValue::new(1, log_abs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_hermite, HermiteParams};
    use crate::rng::RandomStream;

    fn fixed_t() -> TridiagonalSym {
        TridiagonalSym::new(vec![0.3, -0.7, 1.1, 0.2], vec![0.9, 1.4, 0.5]).unwrap()
    }

    #[test]
    fn order_one_and_two_eigenvalues() {
        let t = TridiagonalSym::new(vec![2.5], vec![]).unwrap();
        assert_eq!(eigenvalues(&t, 1e-10).unwrap(), vec![2.5]);
        let t = TridiagonalSym::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let ev = eigenvalues(&t, 1e-12).unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tolerance_precondition() {
        let t = fixed_t();
        assert!(eigenvalues(&t, 1e-5).is_err());
        assert!(eigenvalues(&t, 0.0).is_err());
        assert!(eigenvalues(&t, 1e-6).is_ok());
    }

    #[test]
    fn sturm_counts_bracket_computed_roots() {
        let t = fixed_t();
        let scale = t.norm_bound();
        let ev = eigenvalues(&t, 1e-12).unwrap();
        for (i, &l) in ev.iter().enumerate() {
            assert_eq!(sturm_count(&t, l - 1e-7 * scale), i);
            assert_eq!(sturm_count(&t, l + 1e-7 * scale), i + 1);
        }
        let (lo, hi) = t.gershgorin();
        assert_eq!(sturm_count(&t, lo - 1.0), 0);
        assert_eq!(sturm_count(&t, hi + 1.0), 4);
    }

    #[test]
    fn ql_matches_bisection() {
        let mut s = RandomStream::new(5150, 0);
        for n in [2usize, 3, 10, 40] {
            let p = HermiteParams::new(2.0, n).unwrap();
            let t = sample_hermite(&p, &mut s);
            let a = eigenvalues(&t, 1e-13).unwrap();
            let b = eigenvalues_ql(&t).unwrap();
            let scale = t.norm_bound();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-11 * scale, "n={n}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn char_poly_small_cases() {
        // bottom-indexed minors: P_1(y) = y - diag[n-1]
        let t = fixed_t();
        let cp = char_poly(&t, 0.7);
        assert_eq!(cp.value(0), 1.0);
        assert!((cp.value(1) - (0.7 - 0.2)).abs() < 1e-15);
        let t2 = TridiagonalSym::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let cp = char_poly(&t2, 2.0);
        assert!((cp.value(2) - 3.0).abs() < 1e-14); // y^2 - 1 at y = 2
    }

    #[test]
    fn char_poly_vanishes_at_eigenvalues() {
        let t = fixed_t();
        let ev = eigenvalues(&t, 1e-13).unwrap();
        for &l in &ev {
            let cp = char_poly(&t, l);
            assert!(cp.value(4).abs() < 1e-10, "P_4({l}) = {}", cp.value(4));
        }
    }

    #[test]
    fn char_poly_huge_argument_scales() {
        let mut s = RandomStream::new(7, 7);
        let p = HermiteParams::new(1.0, 60).unwrap();
        let t = sample_hermite(&p, &mut s);
        let cp = char_poly(&t, 1e200);
        // P_60(1e200) ~ 1e12000: mantissa finite, log magnitude ~ 60*200*ln10
        assert!(cp.mantissa(60).is_finite() && cp.mantissa(60) != 0.0);
        assert_eq!(cp.sign(60), 1);
        let expect = 60.0 * 200.0 * std::f64::consts::LN_10;
        assert!((cp.log_abs(60) - expect).abs() / expect < 1e-3);
    }

    #[test]
    fn paige_two_by_two() {
        let t = TridiagonalSym::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let ev = eigenvalues(&t, 1e-12).unwrap();
        let q = first_row_eigvec(&t, &ev).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((q[0] - r).abs() < 1e-12 && (q[1] - r).abs() < 1e-12);
        let t1 = TridiagonalSym::new(vec![4.2], vec![]).unwrap();
        assert_eq!(first_row_eigvec(&t1, &[4.2]).unwrap(), vec![1.0]);
    }

    #[test]
    fn paige_rejects_collisions() {
        let t = fixed_t();
        let err = first_row_eigvec(&t, &[0.1, 0.1 + 1e-15, 0.5, 0.9]);
        assert!(matches!(err, Err(Error::DegenerateSpectrum(_))));
    }

    #[test]
    fn round_trip_reconstruction() {
        let p = HermiteParams::new(1.5, 30).unwrap();
        let mut s = RandomStream::new(99, 0);
        let t = sample_hermite(&p, &mut s);
        let spec = spectrum(&t, 1e-13).unwrap();
        let back = reconstruct(&spec).unwrap();
        for (a, b) in t.diag().iter().zip(back.diag()) {
            assert!(
                (a - b).abs() / (1.0 + a.abs()) < 1e-8,
                "diag: {a} vs {b}"
            );
        }
        for (a, b) in t.subdiag().iter().zip(back.subdiag()) {
            assert!((a - b).abs() / a.abs() < 1e-8, "subdiag: {a} vs {b}");
        }
    }

    #[test]
    fn reconstruct_two_by_two_exact() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let spec = Spectrum::new(vec![-1.0, 1.0], vec![r, r]).unwrap();
        let t = reconstruct(&spec).unwrap();
        assert!(t.diag()[0].abs() < 1e-14 && t.diag()[1].abs() < 1e-14);
        assert!((t.subdiag()[0] - 1.0).abs() < 1e-14);
        // forward oracle: eigendecomposition of the answer reproduces (q, λ)
        let fwd = spectrum(&t, 1e-13).unwrap();
        assert!((fwd.lambda()[0] + 1.0).abs() < 1e-12);
        assert!((fwd.q()[0] - r).abs() < 1e-12);
        let t1 = reconstruct(&Spectrum::new(vec![3.3], vec![1.0]).unwrap()).unwrap();
        assert_eq!(t1.diag(), &[3.3]);
    }

    #[test]
    fn reconstruct_rejects_zero_q() {
        let spec = Spectrum::new(vec![-1.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            reconstruct(&spec),
            Err(Error::BijectionViolation(_))
        ));
    }

    #[test]
    fn vandermonde_direct_values() {
        assert_eq!(vandermonde_direct(&[5.0]).log_abs(), 0.0);
        let v = vandermonde_direct(&[-1.0, 1.0]);
        assert!((v.value() - 2.0).abs() < 1e-14);
        let v = vandermonde_direct(&[0.0, 1.0, 3.0]);
        assert!((v.value() - 6.0).abs() < 1e-14);
        assert_eq!(vandermonde_direct(&[1.0, 1.0]).sign(), 0);
    }

    #[test]
    fn vandermonde_identity_small() {
        let t = TridiagonalSym::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let ev = eigenvalues(&t, 1e-12).unwrap();
        let q = first_row_eigvec(&t, &ev).unwrap();
        let via_t = vandermonde_tridiagonal(&t, &q).unwrap();
        assert!((via_t.value() - 2.0).abs() < 1e-12);
        let t1 = TridiagonalSym::new(vec![0.4], vec![]).unwrap();
        let v1 = vandermonde_tridiagonal(&t1, &[1.0]).unwrap();
        assert!((v1.value() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vandermonde_identity_random() {
        let p = HermiteParams::new(2.0, 12).unwrap();
        let mut s = RandomStream::new(31337, 0);
        for _ in 0..20 {
            let t = sample_hermite(&p, &mut s);
            let spec = spectrum(&t, 1e-13).unwrap();
            let direct = vandermonde_direct(spec.lambda());
            let via_t = vandermonde_tridiagonal(&t, spec.q()).unwrap();
            let rel = (direct.log_abs() - via_t.log_abs()).abs()
                / direct.log_abs().abs().max(1.0);
            assert!(rel < 1e-8, "log-scale mismatch {rel}");
        }
    }

    #[test]
    fn jacobian_small_cases() {
        let t1 = TridiagonalSym::new(vec![0.4], vec![]).unwrap();
        let j = jacobian_t_to_qlambda(&t1, &[1.0]).unwrap();
        assert!((j.value() - 1.0).abs() < 1e-15);
        let t = TridiagonalSym::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let q = [std::f64::consts::FRAC_1_SQRT_2; 2];
        let j = jacobian_t_to_qlambda(&t, &q).unwrap();
        assert!((j.value() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn jacobian_b_to_t_values() {
        let b = BidiagonalPos::new(vec![2.0], vec![]).unwrap();
        assert!((jacobian_b_to_t(&b).value() - 0.25).abs() < 1e-15);
        // top-to-bottom storage [3, 2]: bottom entry 2, head product 3^2
        let b = BidiagonalPos::new(vec![3.0, 2.0], vec![0.7]).unwrap();
        assert!((jacobian_b_to_t(&b).value() - 1.0 / 72.0).abs() < 1e-16);
        // doubling every diagonal entry scales J by 2^-(2m-1)
        let b2 = BidiagonalPos::new(vec![6.0, 4.0], vec![0.7]).unwrap();
        let ratio = jacobian_b_to_t(&b2).value() / jacobian_b_to_t(&b).value();
        assert!((ratio - 2f64.powi(-3)).abs() < 1e-15);
    }
}
