//! Exact normalization constants and closed-form identities: c_H, c_L, c_J,
//! c_q, joint log-densities, Selberg integral values, discriminant moments,
//! and monic classical orthogonal polynomials for cross-checks.
//!
//! All constants are evaluated in log space through the [`crate::special`]
//! log-Gamma kernel; the raw Gamma products overflow within a few matrix
//! orders. β = 0 is accepted in the Hermite and Laguerre constants and
//! densities as the independent-coordinates limit.

use crate::ensembles::{HermiteParams, LaguerreParams};
use crate::error::{Error, Result};
use crate::special::ln_gamma;
use crate::spectral::vandermonde_direct;
use num::{BigInt, BigRational, One, Signed, Zero};

const LN_2PI: f64 = 1.8378770664093453; // ln(2π)

fn ln_gamma_checked(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Gamma argument must be positive, got {x}"
        )));
    }
    Ok(ln_gamma(x))
}

fn check_beta(beta: f64) -> Result<()> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "beta must be nonnegative, got {beta}"
        )));
    }
    Ok(())
}

/// log c_H: the β-Hermite joint-density normalization constant,
/// (2π)^{−n/2} ∏_{j=1}^n Γ(1+β/2)/Γ(1+βj/2).
pub fn log_c_hermite(beta: f64, n: usize) -> Result<f64> {
    check_beta(beta)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let s = beta / 2.0;
    let mut log_c = -(n as f64) / 2.0 * LN_2PI;
    for j in 1..=n {
        log_c += ln_gamma(1.0 + s) - ln_gamma(1.0 + s * j as f64);
    }
    Ok(log_c)
}

/// log c_L: the β-Laguerre constant,
/// 2^{−ma} ∏_{j=1}^m Γ(1+β/2) / (Γ(1+βj/2) Γ(a − (β/2)(m−j))).
pub fn log_c_laguerre(beta: f64, m: usize, a: f64) -> Result<f64> {
    check_beta(beta)?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let s = beta / 2.0;
    let mut log_c = -(m as f64) * a * std::f64::consts::LN_2;
    for j in 1..=m {
        log_c += ln_gamma(1.0 + s) - ln_gamma(1.0 + s * j as f64);
        log_c -= ln_gamma_checked(a - s * (m - j) as f64)?;
    }
    Ok(log_c)
}

/// log c_J: the β-Jacobi constant,
/// ∏_j Γ(1+β/2) Γ(a₁+a₂−(β/2)(m−j)) / (Γ(1+βj/2) Γ(a₁−(β/2)(m−j)) Γ(a₂−(β/2)(m−j))).
pub fn log_c_jacobi(beta: f64, m: usize, a1: f64, a2: f64) -> Result<f64> {
    check_beta(beta)?;
    if m == 0 {
        return Err(Error::InvalidParameter("m must be >= 1".into()));
    }
    let s = beta / 2.0;
    let mut log_c = 0.0;
    for j in 1..=m {
        let off = s * (m - j) as f64;
        log_c += ln_gamma(1.0 + s) + ln_gamma_checked(a1 + a2 - off)?
            - ln_gamma(1.0 + s * j as f64)
            - ln_gamma_checked(a1 - off)?
            - ln_gamma_checked(a2 - off)?;
    }
    Ok(log_c)
}

/// log c_q = log( 2^{n−1} Γ(βn/2) / Γ(β/2)^n ): the normalizer of the
/// first-eigenvector-row density ∏ q_i^{β−1} on the positive orthant of the
/// unit sphere.
pub fn log_c_q(beta: f64, n: usize) -> Result<f64> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "beta must be positive, got {beta}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let s = beta / 2.0;
    Ok((n as f64 - 1.0) * std::f64::consts::LN_2 + ln_gamma(s * n as f64)
        - n as f64 * ln_gamma(s))
}

/// Unordered β-Hermite joint log-density
/// log c_H + β log|Δ(λ)| − Σ λ_i²/2. Ties give −∞.
pub fn log_density_hermite(lambda: &[f64], beta: f64) -> Result<f64> {
    if lambda.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("eigenvalue"));
    }
    let log_c = log_c_hermite(beta, lambda.len())?;
    let vdm = vandermonde_direct(lambda);
    let sum_sq: f64 = lambda.iter().map(|x| x * x).sum();
    Ok(log_c + beta * vdm.log_abs() - 0.5 * sum_sq)
}

/// Unordered β-Laguerre joint log-density
/// log c_L + β log|Δ| + (a−p) Σ log λ_i − Σ λ_i/2, for λ_i > 0.
pub fn log_density_laguerre(lambda: &[f64], beta: f64, a: f64) -> Result<f64> {
    if lambda.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("eigenvalue"));
    }
    if lambda.iter().any(|&x| x <= 0.0) {
        return Err(Error::Domain(
            "Laguerre eigenvalues must be positive".into(),
        ));
    }
    let m = lambda.len();
    let log_c = log_c_laguerre(beta, m, a)?;
    let p = 1.0 + beta / 2.0 * (m as f64 - 1.0);
    let vdm = vandermonde_direct(lambda);
    let log_sum: f64 = lambda.iter().map(|x| x.ln()).sum();
    let sum: f64 = lambda.iter().sum();
    Ok(log_c + beta * vdm.log_abs() + (a - p) * log_sum - 0.5 * sum)
}

/// Unordered β-Jacobi joint log-density on (0,1)^m.
pub fn log_density_jacobi(lambda: &[f64], beta: f64, a1: f64, a2: f64) -> Result<f64> {
    if lambda.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("eigenvalue"));
    }
    if lambda.iter().any(|&x| x <= 0.0 || x >= 1.0) {
        return Err(Error::Domain("Jacobi eigenvalues must lie in (0,1)".into()));
    }
    let m = lambda.len();
    let log_c = log_c_jacobi(beta, m, a1, a2)?;
    let p = 1.0 + beta / 2.0 * (m as f64 - 1.0);
    let vdm = vandermonde_direct(lambda);
    let log_l: f64 = lambda.iter().map(|x| x.ln()).sum();
    let log_1ml: f64 = lambda.iter().map(|x| (1.0 - x).ln()).sum();
    Ok(log_c + beta * vdm.log_abs() + (a1 - p) * log_l + (a2 - p) * log_1ml)
}

/// log of the Hermite Selberg integral
/// ∫_{ℝⁿ} |Δ(λ)|^β e^{−Σλ²/2} dλ = 1/c_H.
pub fn selberg_hermite(beta: f64, n: usize) -> Result<f64> {
    Ok(-log_c_hermite(beta, n)?)
}

/// log of the Laguerre Selberg integral
/// ∫_{(0,∞)^m} |Δ|^β ∏λ^{a−p} e^{−Σλ/2} dλ = 1/c_L.
pub fn selberg_laguerre(beta: f64, a: f64, m: usize) -> Result<f64> {
    Ok(-log_c_laguerre(beta, m, a)?)
}

/// Rising factorial (x)_k = x(x+1)⋯(x+k−1), exact product form.
/// Errors if some factor x+j is a nonpositive integer (a Gamma-ratio pole).
pub fn rising_factorial(x: f64, k: u32) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("rising factorial argument"));
    }
    let mut prod = 1.0;
    for j in 0..k {
        let factor = x + f64::from(j);
        if factor <= 0.0 && factor.fract() == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "rising factorial ({x})_{k} hits the pole at {factor}"
            )));
        }
        prod *= factor;
    }
    Ok(prod)
}

fn ln_rising_factorial(x: f64, k: u32) -> Result<f64> {
    // signed rising factorials never occur here: every argument is positive
    // for valid ensemble parameters
    let mut sum = 0.0;
    for j in 0..k {
        let factor = x + f64::from(j);
        if factor <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "rising factorial ({x})_{k} has a nonpositive factor {factor}"
            )));
        }
        sum += factor.ln();
    }
    Ok(sum)
}

/// Jacobi ensemble parameters (constants only; no matrix model exists).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiParams {
    beta: f64,
    m: usize,
    a1: f64,
    a2: f64,
}

impl JacobiParams {
    pub fn new(beta: f64, m: usize, a1: f64, a2: f64) -> Result<Self> {
        check_beta(beta)?;
        if m == 0 {
            return Err(Error::InvalidParameter("m must be >= 1".into()));
        }
        let bound = beta / 2.0 * (m as f64 - 1.0);
        if !(a1.is_finite() && a1 > bound) || !(a2.is_finite() && a2 > bound) {
            return Err(Error::InvalidParameter(format!(
                "Jacobi parameters must exceed (beta/2)(m-1) = {bound}, got {a1}, {a2}"
            )));
        }
        Ok(Self { beta, m, a1, a2 })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }
}

/// An ensemble's eigenvalue density together with its log normalization.
#[derive(Clone, Debug)]
pub enum EnsembleDensity {
    Hermite { params: HermiteParams, log_norm: f64 },
    Laguerre { params: LaguerreParams, log_norm: f64 },
    Jacobi { params: JacobiParams, log_norm: f64 },
}

impl EnsembleDensity {
    pub fn hermite(params: HermiteParams) -> Result<Self> {
        let log_norm = log_c_hermite(params.beta(), params.n())?;
        Ok(Self::Hermite { params, log_norm })
    }

    pub fn laguerre(params: LaguerreParams) -> Result<Self> {
        let log_norm = log_c_laguerre(params.beta(), params.m(), params.a())?;
        Ok(Self::Laguerre { params, log_norm })
    }

    pub fn jacobi(params: JacobiParams) -> Result<Self> {
        let log_norm = log_c_jacobi(params.beta(), params.m(), params.a1(), params.a2())?;
        Ok(Self::Jacobi { params, log_norm })
    }

    pub fn log_norm(&self) -> f64 {
        match self {
            Self::Hermite { log_norm, .. }
            | Self::Laguerre { log_norm, .. }
            | Self::Jacobi { log_norm, .. } => *log_norm,
        }
    }

    pub fn log_density(&self, lambda: &[f64]) -> Result<f64> {
        match self {
            Self::Hermite { params, .. } => log_density_hermite(lambda, params.beta()),
            Self::Laguerre { params, .. } => {
                log_density_laguerre(lambda, params.beta(), params.a())
            }
            Self::Jacobi { params, .. } => {
                log_density_jacobi(lambda, params.beta(), params.a1(), params.a2())
            }
        }
    }
}

/// Which ensemble a discriminant moment refers to.
#[derive(Clone, Debug)]
pub enum DiscriminantEnsemble {
    Hermite(HermiteParams),
    Laguerre(LaguerreParams),
    Jacobi(JacobiParams),
}

/// log E[D(λ)^k] with D = Δ(λ)², computed both as a ratio of normalization
/// constants and as the rising-factorial product; the two routes must agree
/// to 1e-10 or the call fails.
pub fn discriminant_moment_log(ens: &DiscriminantEnsemble, k: u32) -> Result<f64> {
    let (via_constants, via_factorials) = discriminant_moment_routes(ens, k)?;
    let tol = 1e-10 * via_constants.abs().max(1.0);
    if (via_constants - via_factorials).abs() > tol {
        return Err(Error::Domain(format!(
            "discriminant moment routes disagree: {via_constants} vs {via_factorials}"
        )));
    }
    Ok(via_factorials)
}

/// Both evaluation routes for the k-th discriminant moment, in log scale:
/// (Gamma-constant ratio, rising-factorial product).
pub fn discriminant_moment_routes(ens: &DiscriminantEnsemble, k: u32) -> Result<(f64, f64)> {
    let kf = f64::from(k);
    let (via_constants, via_factorials) = match ens {
        DiscriminantEnsemble::Hermite(p) => {
            let (beta, n) = (p.beta(), p.n());
            let s = beta / 2.0;
            let a_route = log_c_hermite(beta, n)? - log_c_hermite(beta + 2.0 * kf, n)?;
            let mut b_route = 0.0;
            for j in 1..=n {
                b_route += ln_rising_factorial(1.0 + s * j as f64, k * j as u32)?;
                b_route -= ln_rising_factorial(1.0 + s, k)?;
            }
            (a_route, b_route)
        }
        DiscriminantEnsemble::Laguerre(p) => {
            let (beta, m, a) = (p.beta(), p.m(), p.a());
            let s = beta / 2.0;
            let shifted_a = a + kf * (m as f64 - 1.0);
            let a_route =
                log_c_laguerre(beta, m, a)? - log_c_laguerre(beta + 2.0 * kf, m, shifted_a)?;
            let mut b_route = kf * (m * (m - 1)) as f64 * std::f64::consts::LN_2;
            for j in 1..=m {
                b_route += ln_rising_factorial(1.0 + s * j as f64, k * j as u32)?;
                b_route += ln_rising_factorial(a - s * (m - j) as f64, k * (j as u32 - 1))?;
                b_route -= ln_rising_factorial(1.0 + s, k)?;
            }
            (a_route, b_route)
        }
        DiscriminantEnsemble::Jacobi(p) => {
            let (beta, m, a1, a2) = (p.beta(), p.m(), p.a1(), p.a2());
            let s = beta / 2.0;
            let shift = kf * (m as f64 - 1.0);
            let a_route = log_c_jacobi(beta, m, a1, a2)?
                - log_c_jacobi(beta + 2.0 * kf, m, a1 + shift, a2 + shift)?;
            let mut b_route = 0.0;
            for j in 1..=m {
                let off = s * (m - j) as f64;
                b_route += ln_rising_factorial(1.0 + s * j as f64, k * j as u32)?;
                b_route += ln_rising_factorial(a1 - off, k * (j as u32 - 1))?;
                b_route += ln_rising_factorial(a2 - off, k * (j as u32 - 1))?;
                b_route -= ln_rising_factorial(1.0 + s, k)?;
                b_route -= ln_rising_factorial(a1 + a2 - off, k * (m as u32 + j as u32 - 2))?;
            }
            (a_route, b_route)
        }
    };
    Ok((via_constants, via_factorials))
}

/// Classical orthogonal polynomial families with exact coefficients.
#[derive(Clone, Debug, PartialEq)]
pub enum PolyFamily {
    HermiteProbabilists,
    HermitePhysicists,
    GeneralizedLaguerre { alpha: BigRational },
}

/// A monic polynomial with exact rational coefficients; `monic[i]` is the
/// coefficient of x^i and the leading coefficient is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalPolynomial {
    pub family: PolyFamily,
    pub degree: usize,
    pub monic: Vec<BigRational>,
}

fn poly_mul_x(p: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i + 1] = c.clone();
    }
    out
}

fn poly_axpy(acc: &mut Vec<BigRational>, scale: &BigRational, p: &[BigRational]) {
    if acc.len() < p.len() {
        acc.resize(p.len(), BigRational::zero());
    }
    for (i, c) in p.iter().enumerate() {
        acc[i] += scale * c;
    }
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Monic coefficient vector of the requested degree-n family member.
///
/// Probabilists' Hermite He_n via He_k = x He_{k−1} − (k−1) He_{k−2};
/// physicists' Hermite and generalized Laguerre by their standard
/// recurrences, normalized to leading coefficient 1.
pub fn classical_monic(family: PolyFamily, n: usize) -> ClassicalPolynomial {
    let coeffs: Vec<BigRational> = match &family {
        PolyFamily::HermiteProbabilists => {
            let mut prev = vec![BigRational::one()]; // He_0
            if n == 0 {
                prev
            } else {
                let mut cur = vec![BigRational::zero(), BigRational::one()]; // He_1
                for k in 2..=n {
                    let mut next = poly_mul_x(&cur);
                    poly_axpy(&mut next, &-rational(k as i64 - 1), &prev);
                    prev = cur;
                    cur = next;
                }
                cur
            }
        }
        PolyFamily::HermitePhysicists => {
            // H_k = 2x H_{k-1} - 2(k-1) H_{k-2}, leading coefficient 2^n
            let mut prev = vec![BigRational::one()];
            let mut cur = vec![BigRational::zero(), rational(2)];
            if n == 0 {
                prev
            } else {
                for k in 2..=n {
                    let mut next = poly_mul_x(&cur);
                    for c in next.iter_mut() {
                        *c *= rational(2);
                    }
                    poly_axpy(&mut next, &-rational(2 * (k as i64 - 1)), &prev);
                    prev = cur;
                    cur = next;
                }
                let lead = cur.last().unwrap().clone();
                cur.iter_mut().for_each(|c| *c /= lead.clone());
                cur
            }
        }
        PolyFamily::GeneralizedLaguerre { alpha } => {
            // k L_k = (2k-1+α-x) L_{k-1} - (k-1+α) L_{k-2}; monic = (-1)^n n! L_n
            let mut prev = vec![BigRational::one()];
            let mut cur = vec![alpha + BigRational::one(), -BigRational::one()];
            if n == 0 {
                prev
            } else {
                for k in 2..=n {
                    let kq = rational(k as i64);
                    let mut next = poly_mul_x(&cur);
                    for c in next.iter_mut() {
                        *c = -c.clone();
                    }
                    poly_axpy(&mut next, &(rational(2 * k as i64 - 1) + alpha), &cur);
                    poly_axpy(&mut next, &-(rational(k as i64 - 1) + alpha), &prev);
                    next.iter_mut().for_each(|c| *c /= kq.clone());
                    prev = cur;
                    cur = next;
                }
                let lead = cur.last().unwrap().clone();
                cur.iter_mut().for_each(|c| *c /= lead.clone());
                cur
            }
        }
    };
    debug_assert!(coeffs.last().unwrap().is_one() || n == 0);
    ClassicalPolynomial {
        family,
        degree: n,
        monic: coeffs,
    }
}

impl ClassicalPolynomial {
    /// Evaluate at a rational point, exactly.
    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.monic.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// All coefficients are integers (true for probabilists' Hermite).
    pub fn integer_coefficients(&self) -> bool {
        self.monic.iter().all(|c| c.denom().abs().is_one())
    }
}
