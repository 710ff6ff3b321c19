//! Ensemble constructors: the tridiagonal β-Hermite model, the bidiagonal
//! β-Laguerre factor, dense GOE/GUE for cross-validation, and the
//! Householder / Golub–Kahan reductions connecting dense to sparse.
//!
//! Storage is top-to-bottom (index 0 = top-left). The β-Hermite subdiagonal
//! entry at storage index j is χ_{kβ}/√2 with k = n−1−j, so the bottom
//! entry carries χ_β. The β-Laguerre factor has diagonal χ_{2a−βj} (top
//! entry χ_{2a}) and subdiagonal χ_{β(m−1−j)} (bottom entry χ_β).

use crate::error::{Error, Result};
use crate::matrix::{BidiagonalPos, TridiagonalSym};
use crate::rng::{ChiLaw, RandomStream};
use num_complex::Complex64;

/// β-Hermite ensemble parameters: any β > 0, order n ≥ 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermiteParams {
    beta: f64,
    n: usize,
}

impl HermiteParams {
    pub fn new(beta: f64, n: usize) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {beta}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("matrix order must be >= 1".into()));
        }
        Ok(Self { beta, n })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// β-Laguerre ensemble parameters: β > 0, m ≥ 1, and a continuous Laguerre
/// parameter a > (β/2)(m−1) so every diagonal chi law has positive dof.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaguerreParams {
    beta: f64,
    m: usize,
    a: f64,
}

impl LaguerreParams {
    pub fn new(beta: f64, m: usize, a: f64) -> Result<Self> {
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {beta}"
            )));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("matrix order must be >= 1".into()));
        }
        let bound = beta / 2.0 * (m as f64 - 1.0);
        if !a.is_finite() || a <= bound {
            return Err(Error::InvalidParameter(format!(
                "Laguerre parameter a = {a} must exceed (beta/2)(m-1) = {bound}"
            )));
        }
        Ok(Self { beta, m, a })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// p = 1 + (β/2)(m−1), the exponent offset in the eigenvalue density.
    pub fn p(&self) -> f64 {
        1.0 + self.beta / 2.0 * (self.m as f64 - 1.0)
    }
}

/// Draw a β-Hermite matrix: i.i.d. N(0,1) diagonal, independent
/// χ_{kβ}/√2 subdiagonal.
pub fn sample_hermite(p: &HermiteParams, stream: &mut RandomStream) -> TridiagonalSym {
    let n = p.n;
    let diag: Vec<f64> = (0..n).map(|_| stream.gaussian()).collect();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let subdiag: Vec<f64> = (0..n.saturating_sub(1))
        .map(|j| {
            let k = (n - 1 - j) as f64;
            let law = ChiLaw::new(k * p.beta).expect("positive dof by construction");
            stream.chi(law) * inv_sqrt2
        })
        .collect();
    TridiagonalSym::new(diag, subdiag).expect("sampled entries are finite and nonnegative")
}

/// Draw the bidiagonal β-Laguerre factor B.
pub fn sample_laguerre_factor(p: &LaguerreParams, stream: &mut RandomStream) -> BidiagonalPos {
    let m = p.m;
    let diag: Vec<f64> = (0..m)
        .map(|j| {
            let law = ChiLaw::new(2.0 * p.a - p.beta * j as f64)
                .expect("positive dof by parameter precondition");
            stream.chi(law)
        })
        .collect();
    let subdiag: Vec<f64> = (0..m.saturating_sub(1))
        .map(|j| {
            let law = ChiLaw::new(p.beta * (m - 1 - j) as f64)
                .expect("positive dof by construction");
            stream.chi(law)
        })
        .collect();
    BidiagonalPos::new(diag, subdiag).expect("sampled entries are finite and nonnegative")
}

/// Form T = B Bᵀ from the closed-form entry relations, never materializing
/// a dense product: diag₀ = d₀², diagⱼ = dⱼ² + eⱼ₋₁², subdiagⱼ = dⱼ eⱼ.
pub fn laguerre_from_factor(b: &BidiagonalPos) -> TridiagonalSym {
    let m = b.m();
    let d = b.diag();
    let e = b.subdiag();
    let mut diag = Vec::with_capacity(m);
    diag.push(d[0] * d[0]);
    for j in 1..m {
        diag.push(d[j] * d[j] + e[j - 1] * e[j - 1]);
    }
    let subdiag: Vec<f64> = (0..m.saturating_sub(1)).map(|j| d[j] * e[j]).collect();
    TridiagonalSym::new(diag, subdiag).expect("products of finite nonnegative entries")
}

/// Dense Gaussian invariant ensembles used for cross-validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaussianKind {
    Goe,
    Gue,
}

/// Dense symmetric (real) or Hermitian (complex) matrix, row-major.
#[derive(Clone, Debug)]
pub enum DenseSymmetric {
    Real { n: usize, data: Vec<f64> },
    Complex { n: usize, data: Vec<Complex64> },
}

impl DenseSymmetric {
    pub fn n(&self) -> usize {
        match self {
            DenseSymmetric::Real { n, .. } | DenseSymmetric::Complex { n, .. } => *n,
        }
    }

    pub fn trace(&self) -> f64 {
        match self {
            DenseSymmetric::Real { n, data } => (0..*n).map(|i| data[i * n + i]).sum(),
            DenseSymmetric::Complex { n, data } => (0..*n).map(|i| data[i * n + i].re).sum(),
        }
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        match self {
            DenseSymmetric::Real { data, .. } => data.iter().map(|x| x * x).sum(),
            DenseSymmetric::Complex { data, .. } => data.iter().map(|z| z.norm_sqr()).sum(),
        }
    }
}

/// Sample a dense GOE (diag N(0,1), off-diag N(0,1/2)) or GUE matrix
/// (diag real N(0,1), off-diag complex with N(0,1/2) real and imaginary
/// parts), exactly symmetric / Hermitian by construction.
pub fn sample_dense_classical(
    kind: GaussianKind,
    n: usize,
    stream: &mut RandomStream,
) -> Result<DenseSymmetric> {
    if n == 0 {
        return Err(Error::InvalidParameter("matrix order must be >= 1".into()));
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    match kind {
        GaussianKind::Goe => {
            let mut data = vec![0.0; n * n];
            for i in 0..n {
                data[i * n + i] = stream.gaussian();
                for j in (i + 1)..n {
                    let v = stream.gaussian() * inv_sqrt2;
                    data[i * n + j] = v;
                    data[j * n + i] = v;
                }
            }
            Ok(DenseSymmetric::Real { n, data })
        }
        GaussianKind::Gue => {
            let mut data = vec![Complex64::new(0.0, 0.0); n * n];
            for i in 0..n {
                data[i * n + i] = Complex64::new(stream.gaussian(), 0.0);
                for j in (i + 1)..n {
                    let v = Complex64::new(
                        stream.gaussian() * inv_sqrt2,
                        stream.gaussian() * inv_sqrt2,
                    );
                    data[i * n + j] = v;
                    data[j * n + i] = v.conj();
                }
            }
            Ok(DenseSymmetric::Complex { n, data })
        }
    }
}

/// Householder reduction of a dense symmetric/Hermitian matrix to real
/// symmetric tridiagonal form with nonnegative subdiagonal. Eigenvalues are
/// preserved (orthogonal/unitary similarity); reflector signs are absorbed.
pub fn householder_tridiagonalize(a: &DenseSymmetric) -> TridiagonalSym {
    match a {
        DenseSymmetric::Real { n, data } => householder_real(*n, data.clone()),
        DenseSymmetric::Complex { n, data } => householder_complex(*n, data.clone()),
    }
}

fn householder_real(n: usize, mut a: Vec<f64>) -> TridiagonalSym {
    let idx = |i: usize, j: usize| i * n + j;
    for k in 0..n.saturating_sub(2) {
        let alpha = {
            let mut s = 0.0;
            for i in (k + 1)..n {
                s += a[idx(i, k)] * a[idx(i, k)];
            }
            s.sqrt()
        };
        if alpha == 0.0 {
            continue; // column already reduced
        }
        // u = x + sign(x0) * alpha * e1
        let x0 = a[idx(k + 1, k)];
        let sgn = if x0 >= 0.0 { 1.0 } else { -1.0 };
        let mut u = vec![0.0; n - k - 1];
        for (t, ui) in u.iter_mut().enumerate() {
            *ui = a[idx(k + 1 + t, k)];
        }
        u[0] += sgn * alpha;
        let unorm2: f64 = u.iter().map(|v| v * v).sum();
        if unorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / unorm2;
        // p = tau * A u on the trailing block
        let m = n - k - 1;
        let mut p = vec![0.0; m];
        for i in 0..m {
            let mut s = 0.0;
            for j in 0..m {
                s += a[idx(k + 1 + i, k + 1 + j)] * u[j];
            }
            p[i] = tau * s;
        }
        let up: f64 = u.iter().zip(&p).map(|(x, y)| x * y).sum();
        let kappa = 0.5 * tau * up;
        let w: Vec<f64> = p.iter().zip(&u).map(|(pi, ui)| pi - kappa * ui).collect();
        for i in 0..m {
            for j in 0..m {
                a[idx(k + 1 + i, k + 1 + j)] -= u[i] * w[j] + w[i] * u[j];
            }
        }
        a[idx(k + 1, k)] = -sgn * alpha;
        for i in (k + 2)..n {
            a[idx(i, k)] = 0.0;
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| a[idx(i, i)]).collect();
    let subdiag: Vec<f64> = (0..n.saturating_sub(1))
        .map(|i| a[idx(i + 1, i)].abs())
        .collect();
    TridiagonalSym::new(diag, subdiag).expect("reduction output is finite")
}

fn householder_complex(n: usize, mut a: Vec<Complex64>) -> TridiagonalSym {
    let idx = |i: usize, j: usize| i * n + j;
    for k in 0..n.saturating_sub(2) {
        let alpha = {
            let mut s = 0.0;
            for i in (k + 1)..n {
                s += a[idx(i, k)].norm_sqr();
            }
            s.sqrt()
        };
        if alpha == 0.0 {
            continue;
        }
        let x0 = a[idx(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let mut u = vec![Complex64::new(0.0, 0.0); n - k - 1];
        for (t, ui) in u.iter_mut().enumerate() {
            *ui = a[idx(k + 1 + t, k)];
        }
        u[0] += phase * alpha;
        let unorm2: f64 = u.iter().map(|v| v.norm_sqr()).sum();
        if unorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / unorm2;
        let m = n - k - 1;
        let mut p = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..m {
                s += a[idx(k + 1 + i, k + 1 + j)] * u[j];
            }
            p[i] = tau * s;
        }
        // u* p is real for Hermitian A, keep the real part
        let up: f64 = u
            .iter()
            .zip(&p)
            .map(|(x, y)| (x.conj() * y).re)
            .sum();
        let kappa = 0.5 * tau * up;
        let w: Vec<Complex64> = p.iter().zip(&u).map(|(pi, ui)| pi - kappa * ui).collect();
        for i in 0..m {
            for j in 0..m {
                let delta = u[i] * w[j].conj() + w[i] * u[j].conj();
                a[idx(k + 1 + i, k + 1 + j)] -= delta;
            }
        }
        a[idx(k + 1, k)] = -phase * alpha;
        for i in (k + 2)..n {
            a[idx(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    let diag: Vec<f64> = (0..n).map(|i| a[idx(i, i)].re).collect();
    let subdiag: Vec<f64> = (0..n.saturating_sub(1))
        .map(|i| a[idx(i + 1, i)].norm())
        .collect();
    TridiagonalSym::new(diag, subdiag).expect("reduction output is finite")
}

/// Golub–Kahan reduction of a full-rank m×n (m ≤ n) real matrix to a lower
/// bidiagonal matrix with nonnegative entries and the same singular values.
/// Rank deficiency shows up as zero entries (`BidiagonalPos::is_degenerate`).
pub fn golub_kahan_bidiagonalize(g: &[Vec<f64>]) -> Result<BidiagonalPos> {
    let m = g.len();
    if m == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    let n = g[0].len();
    if g.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidParameter("ragged rows".into()));
    }
    if m > n {
        return Err(Error::InvalidParameter(format!(
            "need m <= n, got {m} x {n}"
        )));
    }
    if g.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("matrix entry"));
    }
    let mut a: Vec<f64> = g.iter().flatten().copied().collect();
    let idx = |i: usize, j: usize| i * n + j;

    for k in 0..m {
        // right reflector: zero row k to the right of column k
        if k + 1 < n {
            let norm: f64 = ((k..n).map(|j| a[idx(k, j)] * a[idx(k, j)]).sum::<f64>()).sqrt();
            if norm > 0.0 {
                let x0 = a[idx(k, k)];
                let sgn = if x0 >= 0.0 { 1.0 } else { -1.0 };
                let mut u: Vec<f64> = (k..n).map(|j| a[idx(k, j)]).collect();
                u[0] += sgn * norm;
                let unorm2: f64 = u.iter().map(|v| v * v).sum();
                if unorm2 > 0.0 {
                    let tau = 2.0 / unorm2;
                    for i in k..m {
                        let dot: f64 = (k..n).map(|j| a[idx(i, j)] * u[j - k]).sum();
                        let c = tau * dot;
                        for j in k..n {
                            a[idx(i, j)] -= c * u[j - k];
                        }
                    }
                }
            }
        }
        // left reflector: zero column k below row k+1 (only needed while
        // at least two entries remain under the diagonal entry)
        if k + 2 < m {
            let norm: f64 = ((k + 1..m)
                .map(|i| a[idx(i, k)] * a[idx(i, k)])
                .sum::<f64>())
            .sqrt();
            if norm > 0.0 {
                let y0 = a[idx(k + 1, k)];
                let sgn = if y0 >= 0.0 { 1.0 } else { -1.0 };
                let mut u: Vec<f64> = (k + 1..m).map(|i| a[idx(i, k)]).collect();
                u[0] += sgn * norm;
                let unorm2: f64 = u.iter().map(|v| v * v).sum();
                if unorm2 > 0.0 {
                    let tau = 2.0 / unorm2;
                    for j in k..n {
                        let dot: f64 = (k + 1..m).map(|i| a[idx(i, j)] * u[i - k - 1]).sum();
                        let c = tau * dot;
                        for i in k + 1..m {
                            a[idx(i, j)] -= c * u[i - k - 1];
                        }
                    }
                }
            }
        }
    }

    let diag: Vec<f64> = (0..m).map(|k| a[idx(k, k)].abs()).collect();
    let subdiag: Vec<f64> = (0..m.saturating_sub(1))
        .map(|k| a[idx(k + 1, k)].abs())
        .collect();
    BidiagonalPos::new(diag, subdiag)
}
