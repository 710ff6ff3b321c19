//! Monte Carlo harness and the statistical verification suites.
//!
//! Each suite turns one family of distributional identities into named
//! checks with pre-registered sample sizes, fixed thresholds, and seeded
//! streams, so a run is deterministic end to end. Samples are keyed by
//! index — sample i always uses stream id `offset + i` — which makes every
//! result independent of worker count and partitioning.

use crate::closedform::{
    discriminant_moment_log, discriminant_moment_routes, log_c_hermite, log_density_hermite,
    log_density_jacobi, log_density_laguerre, DiscriminantEnsemble, JacobiParams,
};
use crate::ensembles::{
    householder_tridiagonalize, laguerre_from_factor, sample_dense_classical, sample_hermite,
    sample_laguerre_factor, GaussianKind, HermiteParams, LaguerreParams,
};
use crate::error::{Error, Result};
use crate::matrix::{BidiagonalPos, TridiagonalSym};
use crate::quadrature::{adaptive_simpson, adaptive_simpson_split};
use crate::rng::RandomStream;
use crate::special::{ln_gamma, regularized_beta, regularized_gamma_p};
use crate::spectral::{
    eigenvalues, eigenvalues_ql, first_row_eigvec, jacobian_b_to_t, jacobian_t_to_qlambda,
    reconstruct, spectrum, sturm_count, vandermonde_direct, vandermonde_tridiagonal,
};
use crate::stats::{ks_two_sample, SampleStats, RETAIN_CAP};
use crate::symbolic::{
    det_moment, expected_elementary_symmetric, MomentEnsemble, MomentQuery, MomentTarget,
};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// Seed used when the caller provides none.
pub const DEFAULT_SEED: u64 = 314159;

const EIG_TOL: f64 = 1e-12;

/// Ensembles the Monte Carlo driver can draw from. The reduced kinds sample
/// the dense invariant ensemble and push it through Householder reduction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "ensemble", rename_all = "snake_case")]
pub enum McEnsemble {
    Hermite { beta: f64, n: usize },
    Laguerre { beta: f64, m: usize, a: f64 },
    GoeReduced { n: usize },
    GueReduced { n: usize },
}

impl McEnsemble {
    fn validate(&self) -> Result<()> {
        match *self {
            McEnsemble::Hermite { beta, n } => HermiteParams::new(beta, n).map(|_| ()),
            McEnsemble::Laguerre { beta, m, a } => LaguerreParams::new(beta, m, a).map(|_| ()),
            McEnsemble::GoeReduced { n } | McEnsemble::GueReduced { n } => {
                if n == 0 {
                    Err(Error::InvalidParameter("matrix order must be >= 1".into()))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Per-sample statistics the driver can collect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum StatKind {
    Trace,
    Determinant,
    DeterminantSq,
    MaxEigenvalue,
    PooledEigenvalues,
    DiagEntry(usize),
    SubdiagEntry(usize),
    QSquared(usize),
    /// q₁² · λ_max, for the q–λ independence correlation surrogate.
    Q1SqMaxEigProduct,
    /// Δ(λ)², the squared Vandermonde (discriminant).
    VandermondeSq,
    ElemSym(usize),
}

#[derive(Clone, Debug)]
pub struct MonteCarloConfig {
    pub ensemble: McEnsemble,
    pub n_samples: usize,
    pub seed: u64,
    /// Disjoint stream-id ranges let several runs share one seed.
    pub stream_offset: u64,
    pub partitions: usize,
    pub stats: Vec<StatKind>,
    pub retain_cap: usize,
    /// Histogram edges applied to the pooled-eigenvalue statistic.
    pub hist_edges: Option<Vec<f64>>,
}

impl MonteCarloConfig {
    pub fn new(ensemble: McEnsemble, n_samples: usize, seed: u64) -> Self {
        Self {
            ensemble,
            n_samples,
            seed,
            stream_offset: 0,
            partitions: 1,
            stats: vec![StatKind::Trace],
            retain_cap: RETAIN_CAP,
            hist_edges: None,
        }
    }

    pub fn with_stats(mut self, stats: Vec<StatKind>) -> Self {
        self.stats = stats;
        self
    }

    pub fn with_partitions(mut self, partitions: usize) -> Self {
        self.partitions = partitions;
        self
    }

    pub fn with_offset(mut self, offset: u64) -> Self {
        self.stream_offset = offset;
        self
    }

    pub fn with_retain_cap(mut self, cap: usize) -> Self {
        self.retain_cap = cap;
        self
    }

    pub fn with_hist_edges(mut self, edges: Vec<f64>) -> Self {
        self.hist_edges = Some(edges);
        self
    }
}

/// Collected statistics plus the number of samples skipped for degenerate
/// spectra (probability-zero events surfaced by floating point).
#[derive(Clone, Debug)]
pub struct McOutput {
    pub stats: BTreeMap<StatKind, SampleStats>,
    pub skipped: u64,
}

impl McOutput {
    pub fn stat(&self, kind: StatKind) -> &SampleStats {
        &self.stats[&kind]
    }
}

fn fresh_stats(cfg: &MonteCarloConfig) -> BTreeMap<StatKind, SampleStats> {
    cfg.stats
        .iter()
        .map(|&k| {
            let s = match (&cfg.hist_edges, k) {
                (Some(edges), StatKind::PooledEigenvalues) => {
                    SampleStats::with_histogram(edges.clone(), cfg.retain_cap)
                }
                _ => SampleStats::new(cfg.retain_cap),
            };
            (k, s)
        })
        .collect()
}

fn elem_sym(eigs: &[f64], i: usize) -> f64 {
    let mut e = vec![0.0; i + 1];
    e[0] = 1.0;
    for &l in eigs {
        for j in (1..=i).rev() {
            e[j] += l * e[j - 1];
        }
    }
    e[i]
}

fn sample_matrix(ens: &McEnsemble, stream: &mut RandomStream) -> TridiagonalSym {
    match *ens {
        McEnsemble::Hermite { beta, n } => {
            let p = HermiteParams::new(beta, n).expect("validated");
            sample_hermite(&p, stream)
        }
        McEnsemble::Laguerre { beta, m, a } => {
            let p = LaguerreParams::new(beta, m, a).expect("validated");
            laguerre_from_factor(&sample_laguerre_factor(&p, stream))
        }
        McEnsemble::GoeReduced { n } => {
            let a = sample_dense_classical(GaussianKind::Goe, n, stream).expect("validated");
            householder_tridiagonalize(&a)
        }
        McEnsemble::GueReduced { n } => {
            let a = sample_dense_classical(GaussianKind::Gue, n, stream).expect("validated");
            householder_tridiagonalize(&a)
        }
    }
}

/// Run the configured Monte Carlo job. Deterministic given (seed,
/// stream_offset); partitioning only regroups the floating-point merges.
pub fn run_monte_carlo(cfg: &MonteCarloConfig) -> Result<McOutput> {
    cfg.ensemble.validate()?;
    if cfg.n_samples == 0 {
        return Err(Error::InvalidParameter("n_samples must be >= 1".into()));
    }
    if cfg.partitions == 0 {
        return Err(Error::InvalidParameter("partitions must be >= 1".into()));
    }
    let needs_q = cfg
        .stats
        .iter()
        .any(|s| matches!(s, StatKind::QSquared(_) | StatKind::Q1SqMaxEigProduct));
    let needs_eig = needs_q
        || cfg.stats.iter().any(|s| {
            matches!(
                s,
                StatKind::MaxEigenvalue
                    | StatKind::PooledEigenvalues
                    | StatKind::VandermondeSq
                    | StatKind::ElemSym(_)
            )
        });

    let chunk = cfg.n_samples.div_ceil(cfg.partitions);
    let ranges: Vec<(usize, usize)> = (0..cfg.partitions)
        .map(|p| (p * chunk, ((p + 1) * chunk).min(cfg.n_samples)))
        .filter(|(a, b)| a < b)
        .collect();

    let run_range = |&(lo, hi): &(usize, usize)| -> (BTreeMap<StatKind, SampleStats>, u64) {
        let mut local = fresh_stats(cfg);
        let mut skipped = 0u64;
        for idx in lo..hi {
            let mut stream = RandomStream::new(cfg.seed, cfg.stream_offset + idx as u64);
            let t = sample_matrix(&cfg.ensemble, &mut stream);
            let eigs = if needs_eig {
                let n = t.n();
                let solved = if needs_q || n <= 32 {
                    eigenvalues(&t, EIG_TOL)
                } else {
                    eigenvalues_ql(&t)
                };
                match solved {
                    Ok(e) => Some(e),
                    Err(_) => {
                        skipped += 1;
                        continue;
                    }
                }
            } else {
                None
            };
            let q = if needs_q {
                match first_row_eigvec(&t, eigs.as_ref().unwrap()) {
                    Ok(q) => Some(q),
                    Err(_) => {
                        skipped += 1;
                        continue;
                    }
                }
            } else {
                None
            };
            for (&kind, stats) in local.iter_mut() {
                match kind {
                    StatKind::Trace => stats.push(t.trace()),
                    StatKind::Determinant => stats.push(t.determinant()),
                    StatKind::DeterminantSq => stats.push(t.determinant().powi(2)),
                    StatKind::MaxEigenvalue => {
                        stats.push(*eigs.as_ref().unwrap().last().unwrap())
                    }
                    StatKind::PooledEigenvalues => {
                        for &l in eigs.as_ref().unwrap() {
                            stats.push(l);
                        }
                    }
                    StatKind::DiagEntry(i) => stats.push(t.diag()[i]),
                    StatKind::SubdiagEntry(i) => stats.push(t.subdiag()[i]),
                    StatKind::QSquared(i) => {
                        let qi = q.as_ref().unwrap()[i];
                        stats.push(qi * qi);
                    }
                    StatKind::Q1SqMaxEigProduct => {
                        let q1 = q.as_ref().unwrap()[0];
                        stats.push(q1 * q1 * eigs.as_ref().unwrap().last().unwrap());
                    }
                    StatKind::VandermondeSq => {
                        let v = vandermonde_direct(eigs.as_ref().unwrap());
                        stats.push((2.0 * v.log_abs()).exp());
                    }
                    StatKind::ElemSym(i) => stats.push(elem_sym(eigs.as_ref().unwrap(), i)),
                }
            }
        }
        (local, skipped)
    };

    let parts: Vec<(BTreeMap<StatKind, SampleStats>, u64)> = if cfg.partitions > 1 {
        ranges.par_iter().map(run_range).collect()
    } else {
        ranges.iter().map(run_range).collect()
    };

    let mut stats = fresh_stats(cfg);
    let mut skipped = 0;
    for (part, sk) in parts {
        skipped += sk;
        for (kind, s) in part {
            let merged = stats.remove(&kind).unwrap().merge(s);
            stats.insert(kind, merged);
        }
    }
    Ok(McOutput { stats, skipped })
}

/// One named check: pass iff `statistic <= threshold`.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
    pub sample_count: u64,
    pub seed: u64,
}

impl Check {
    fn leq(name: impl Into<String>, statistic: f64, threshold: f64, n: u64, seed: u64) -> Self {
        Self {
            name: name.into(),
            statistic,
            threshold,
            pass: statistic.is_finite() && statistic <= threshold,
            sample_count: n,
            seed,
        }
    }
}

/// A suite's result: named checks plus the overall verdict.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub wall_ms: u64,
    pub checks: Vec<Check>,
}

impl Report {
    fn collect(suite: &str, seed: u64, checks: Vec<Check>, started: std::time::Instant) -> Self {
        Self {
            suite: suite.into(),
            seed,
            passed: checks.iter().all(|c| c.pass),
            wall_ms: started.elapsed().as_millis() as u64,
            checks,
        }
    }
}

fn scaled(n: usize, quick: bool) -> usize {
    if quick {
        (n / 10).max(10)
    } else {
        n
    }
}

fn relaxed(threshold: f64, quick: bool) -> f64 {
    if quick {
        2.0 * threshold
    } else {
        threshold
    }
}

const PARTITIONS: usize = 8;

// Disjoint stream-id regions per suite, so suites sharing one seed never
// reuse a stream.
const fn region(suite: u64) -> u64 {
    suite << 40
}

/// Vandermonde lemma: log Δ from eigenvalues equals log(∏ b_i^i / ∏ q_i).
pub fn suite_vandermonde(seed: u64, quick: bool) -> Result<Report> {
    let t0 = std::time::Instant::now();
    let n_samples = scaled(200, quick);
    let p = HermiteParams::new(2.0, 12)?;
    let mut worst: f64 = 0.0;
    for i in 0..n_samples {
        let mut stream = RandomStream::new(seed, region(0) + i as u64);
        let t = sample_hermite(&p, &mut stream);
        let spec = spectrum(&t, EIG_TOL)?;
        let direct = vandermonde_direct(spec.lambda());
        let tri = vandermonde_tridiagonal(&t, spec.q())?;
        worst = worst.max((direct.log_abs() - tri.log_abs()).abs());
    }
    let checks = vec![Check::leq(
        "vandermonde_log_agreement_n12_beta2",
        worst,
        relaxed(1e-8, quick),
        n_samples as u64,
        seed,
    )];
    Ok(Report::collect("vandermonde", seed, checks, t0))
}

/// Bijection round trip: T → (λ, q) → Lanczos reconstruction → T.
pub fn suite_reconstruct(seed: u64, quick: bool) -> Result<Report> {
    let t0 = std::time::Instant::now();
    let sizes: &[usize] = if quick { &[5, 30] } else { &[5, 30, 50] };
    let mut checks = Vec::new();
    let mut offset = region(1);
    for &n in sizes {
        for &beta in &[0.5, 1.0, 2.0, 4.0] {
            let p = HermiteParams::new(beta, n)?;
            let mut worst: f64 = 0.0;
            let reps = if quick { 2 } else { 5 };
            for _ in 0..reps {
                let mut stream = RandomStream::new(seed, offset);
                offset += 1;
                let t = sample_hermite(&p, &mut stream);
                let spec = spectrum(&t, EIG_TOL)?;
                let back = reconstruct(&spec)?;
                for (a, b) in t.diag().iter().zip(back.diag()) {
                    worst = worst.max((a - b).abs() / (1.0 + a.abs()));
                }
                for (a, b) in t.subdiag().iter().zip(back.subdiag()) {
                    worst = worst.max((a - b).abs() / a.abs());
                }
            }
            checks.push(Check::leq(
                format!("reconstruct_roundtrip_n{n}_beta{beta}"),
                worst,
                relaxed(1e-8, quick),
                reps,
                seed,
            ));
        }
    }
    Ok(Report::collect("reconstruct", seed, checks, t0))
}

fn det_lu(mut a: Vec<f64>, n: usize) -> f64 {
    let mut det = 1.0;
    for k in 0..n {
        let mut piv = k;
        for r in (k + 1)..n {
            if a[r * n + k].abs() > a[piv * n + k].abs() {
                piv = r;
            }
        }
        if a[piv * n + k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            for c in 0..n {
                a.swap(k * n + c, piv * n + c);
            }
            det = -det;
        }
        det *= a[k * n + k];
        for r in (k + 1)..n {
            let f = a[r * n + k] / a[k * n + k];
            for c in k..n {
                a[r * n + c] -= f * a[k * n + c];
            }
        }
    }
    det
}

fn bidiagonal_to_tridiagonal_flat(v: &[f64], m: usize) -> Vec<f64> {
    // v = [x_0..x_{m-1}, y_0..y_{m-2}] -> [a_0..a_{m-1}, b_0..b_{m-2}]
    let d = &v[..m];
    let e = &v[m..];
    let mut out = Vec::with_capacity(2 * m - 1);
    out.push(d[0] * d[0]);
    for j in 1..m {
        out.push(d[j] * d[j] + e[j - 1] * e[j - 1]);
    }
    for j in 0..m - 1 {
        out.push(d[j] * e[j]);
    }
    out
}

fn numeric_jacobian_b_to_t(b: &BidiagonalPos) -> f64 {
    let m = b.m();
    let dim = 2 * m - 1;
    let mut v: Vec<f64> = b.diag().to_vec();
    v.extend_from_slice(b.subdiag());
    let mut jac = vec![0.0; dim * dim];
    for col in 0..dim {
        let h = 1e-5 * (1.0 + v[col].abs());
        let mut vp = v.clone();
        vp[col] += h;
        let mut vm = v.clone();
        vm[col] -= h;
        let fp = bidiagonal_to_tridiagonal_flat(&vp, m);
        let fm = bidiagonal_to_tridiagonal_flat(&vm, m);
        for row in 0..dim {
            jac[row * dim + col] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    // dx dy = J da db, so J is the inverse of det ∂(a,b)/∂(x,y)
    1.0 / det_lu(jac, dim)
}

/// Exact Jacobians: the B → T closed form against finite differences, the
/// T → (q, λ) factorization identity, and the trace/determinant identities
/// of T = BBᵀ.
pub fn suite_jacobians(seed: u64, quick: bool) -> Result<Report> {
    let t0 = std::time::Instant::now();
    let mut checks = Vec::new();

    // closed form vs numerically differentiated transformation determinant
    let mut worst_fd: f64 = 0.0;
    for m in 1..=5usize {
        let p = LaguerreParams::new(1.3, m, 1.3 / 2.0 * (m as f64 - 1.0) + 1.2)?;
        let mut stream = RandomStream::new(seed, region(2) + m as u64);
        let b = sample_laguerre_factor(&p, &mut stream);
        let exact = jacobian_b_to_t(&b).value();
        let numeric = numeric_jacobian_b_to_t(&b);
        worst_fd = worst_fd.max(((exact - numeric) / exact).abs());
    }
    checks.push(Check::leq(
        "jacobian_b_to_t_finite_difference_m1to5",
        worst_fd,
        relaxed(1e-6, quick),
        5,
        seed,
    ));

    // μ(a,b) · J = ν(q,λ) for a fixed n = 3 matrix at β = 1
    let n = 3usize;
    let t = TridiagonalSym::new(vec![0.3, -0.1, 0.7], vec![0.9, 1.4])?;
    let spec = spectrum(&t, EIG_TOL)?;
    let log_mu = {
        let mut c = (n as f64 - 1.0) * std::f64::consts::LN_2
            - n as f64 / 2.0 * (2.0 * std::f64::consts::PI).ln();
        for k in 1..n {
            c -= ln_gamma(k as f64 / 2.0);
        }
        let mut v = c;
        for (j, &bj) in t.subdiag().iter().enumerate() {
            let k = (n - 1 - j) as f64;
            v += (k - 1.0) * bj.ln();
        }
        let da: f64 = t.diag().iter().map(|x| x * x).sum();
        let db: f64 = t.subdiag().iter().map(|x| x * x).sum();
        v - 0.5 * da - db
    };
    let log_j = jacobian_t_to_qlambda(&t, spec.q())?.log_abs();
    let log_nu = {
        let ln_nfact: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
        let sphere = (n as f64 - 1.0) * std::f64::consts::LN_2 + ln_gamma(n as f64 / 2.0)
            - n as f64 / 2.0 * std::f64::consts::PI.ln();
        let sum_sq: f64 = spec.lambda().iter().map(|x| x * x).sum();
        ln_nfact + log_c_hermite(1.0, n)? + sphere + vandermonde_direct(spec.lambda()).log_abs()
            - 0.5 * sum_sq
    };
    checks.push(Check::leq(
        "density_factorization_mu_j_nu_n3_beta1",
        (log_mu + log_j - log_nu).abs(),
        relaxed(1e-8, quick),
        1,
        seed,
    ));

    // trace(BBᵀ) = Σx² + Σy², det(BBᵀ) = Πx², and positive definiteness;
    // a = 10 keeps every diagonal chi law away from zero dof, where the
    // determinant recurrence would lose digits to cancellation
    let n_samples = scaled(1000, quick);
    let p = LaguerreParams::new(2.5, 6, 10.0)?;
    let mut worst_trace: f64 = 0.0;
    let mut worst_det: f64 = 0.0;
    let mut spd_failures = 0u64;
    for i in 0..n_samples {
        let mut stream = RandomStream::new(seed, region(2) + 1000 + i as u64);
        let b = sample_laguerre_factor(&p, &mut stream);
        let t = laguerre_from_factor(&b);
        let sum_sq: f64 = b.diag().iter().chain(b.subdiag()).map(|x| x * x).sum();
        worst_trace = worst_trace.max(((t.trace() - sum_sq) / sum_sq).abs());
        let prod: f64 = b.diag().iter().map(|x| x * x).product();
        worst_det = worst_det.max(((t.determinant() - prod) / prod).abs());
        if sturm_count(&t, 0.0) != 0 {
            spd_failures += 1;
        }
    }
    checks.push(Check::leq(
        "laguerre_trace_identity",
        worst_trace,
        relaxed(1e-12, quick),
        n_samples as u64,
        seed,
    ));
    checks.push(Check::leq(
        "laguerre_det_identity",
        worst_det,
        relaxed(1e-12, quick),
        n_samples as u64,
        seed,
    ));
    checks.push(Check::leq(
        "laguerre_positive_definite",
        spd_failures as f64,
        0.0,
        n_samples as u64,
        seed,
    ));
    Ok(Report::collect("jacobians", seed, checks, t0))
}

/// q-distribution: each q_i² marginal is Beta(β/2, β(n−1)/2), and q is
/// uncorrelated with the spectrum.
pub fn suite_qdist(
    seed: u64,
    quick: bool,
    filter: Option<(f64, usize)>,
) -> Result<Report> {
    let t0 = std::time::Instant::now();
    let combos: Vec<(f64, usize)> = match filter {
        Some(c) => vec![c],
        None => {
            let mut v = Vec::new();
            for &beta in &[0.5, 1.0, 2.0, 4.0, 7.3] {
                for &n in &[2usize, 5, 8] {
                    v.push((beta, n));
                }
            }
            v
        }
    };
    let n_samples = scaled(20_000, quick);
    let ks_threshold = relaxed(0.02, quick);
    let corr_threshold = relaxed(0.03, quick);
    let mut checks = Vec::new();
    for (case, &(beta, n)) in combos.iter().enumerate() {
        if n == 1 {
            checks.push(Check::leq(
                format!("qdist_ks_beta{beta}_n1"),
                0.0,
                ks_threshold,
                0,
                seed,
            ));
            continue;
        }
        let mut stats: Vec<StatKind> = (0..n).map(StatKind::QSquared).collect();
        stats.push(StatKind::MaxEigenvalue);
        stats.push(StatKind::Q1SqMaxEigProduct);
        let cfg = MonteCarloConfig::new(McEnsemble::Hermite { beta, n }, n_samples, seed)
            .with_stats(stats)
            .with_offset(region(3) + ((case as u64) << 32))
            .with_partitions(PARTITIONS);
        let out = run_monte_carlo(&cfg)?;
        let alpha = beta / 2.0;
        let b_param = beta * (n as f64 - 1.0) / 2.0;
        let mut worst_ks: f64 = 0.0;
        for i in 0..n {
            let d = out
                .stat(StatKind::QSquared(i))
                .ks_against(|x| regularized_beta(alpha, b_param, x.clamp(0.0, 1.0)));
            worst_ks = worst_ks.max(d);
        }
        checks.push(Check::leq(
            format!("qdist_ks_beta{beta}_n{n}"),
            worst_ks,
            ks_threshold,
            n_samples as u64,
            seed,
        ));
        // correlation surrogate for q ⟂ λ: corr(q₁², λ_max) from moments
        let sx = out.stat(StatKind::QSquared(0));
        let sy = out.stat(StatKind::MaxEigenvalue);
        let sxy = out.stat(StatKind::Q1SqMaxEigProduct);
        let cov = sxy.mean() - sx.mean() * sy.mean();
        let corr = cov / (sx.variance() * sy.variance()).sqrt();
        checks.push(Check::leq(
            format!("qdist_independence_corr_beta{beta}_n{n}"),
            corr.abs(),
            corr_threshold,
            n_samples as u64,
            seed,
        ));
    }
    Ok(Report::collect("qdist", seed, checks, t0))
}

/// GOE/GUE equivalence: Householder-reduced dense samples match the β = 1, 2
/// tridiagonal samplers in distribution, coordinate by coordinate.
pub fn suite_equivalence(seed: u64, quick: bool) -> Result<Report> {
    let t0 = std::time::Instant::now();
    let n = 8usize;
    let n_samples = scaled(20_000, quick);
    let threshold = relaxed(0.02, quick);
    let mut checks = Vec::new();
    let cases: [(&str, McEnsemble, McEnsemble); 2] = [
        (
            "goe_vs_beta1",
            McEnsemble::GoeReduced { n },
            McEnsemble::Hermite { beta: 1.0, n },
        ),
        (
            "gue_vs_beta2",
            McEnsemble::GueReduced { n },
            McEnsemble::Hermite { beta: 2.0, n },
        ),
    ];
    for (case, (name, dense, tri)) in cases.iter().enumerate() {
        let mut stats: Vec<StatKind> = vec![StatKind::MaxEigenvalue, StatKind::Trace];
        for i in 0..n {
            stats.push(StatKind::DiagEntry(i));
        }
        for j in 0..n - 1 {
            stats.push(StatKind::SubdiagEntry(j));
        }
        let base = region(4) + ((2 * case as u64) << 32);
        let cfg_a = MonteCarloConfig::new(*dense, n_samples, seed)
            .with_stats(stats.clone())
            .with_offset(base)
            .with_partitions(PARTITIONS);
        let cfg_b = MonteCarloConfig::new(*tri, n_samples, seed)
            .with_stats(stats.clone())
            .with_offset(base + (1 << 32))
            .with_partitions(PARTITIONS);
        let out_a = run_monte_carlo(&cfg_a)?;
        let out_b = run_monte_carlo(&cfg_b)?;
        let push = |label: &str, kind: StatKind, checks: &mut Vec<Check>| {
            let d = ks_two_sample(
                out_a.stat(kind).retained(),
                out_b.stat(kind).retained(),
            );
            checks.push(Check::leq(
                format!("equivalence_{name}_{label}"),
                d,
                threshold,
                n_samples as u64,
                seed,
            ));
        };
        push("max_eigenvalue", StatKind::MaxEigenvalue, &mut checks);
        push("trace", StatKind::Trace, &mut checks);
        let mut worst_coord: f64 = 0.0;
        for i in 0..n {
            worst_coord = worst_coord.max(ks_two_sample(
                out_a.stat(StatKind::DiagEntry(i)).retained(),
                out_b.stat(StatKind::DiagEntry(i)).retained(),
            ));
        }
        for j in 0..n - 1 {
            worst_coord = worst_coord.max(ks_two_sample(
                out_a.stat(StatKind::SubdiagEntry(j)).retained(),
                out_b.stat(StatKind::SubdiagEntry(j)).retained(),
            ));
        }
        checks.push(Check::leq(
            format!("equivalence_{name}_entrywise"),
            worst_coord,
            threshold,
            n_samples as u64,
            seed,
        ));
    }
    Ok(Report::collect("equivalence", seed, checks, t0))
}

fn hermite2_normalization_error(beta: f64) -> Result<f64> {
    let limit = 10.0;
    let outer = |x: f64| {
        let inner =
            |y: f64| log_density_hermite(&[x, y], beta).map(f64::exp).unwrap_or(0.0);
        adaptive_simpson_split(&inner, &[-limit, x, limit], 1e-10).unwrap_or(f64::NAN)
    };
    let total = adaptive_simpson(&outer, -limit, limit, 1e-9)?;
    Ok((total - 1.0).abs())
}

fn laguerre2_normalization_error(beta: f64, a: f64) -> Result<f64> {
    let limit = 90.0;
    let outer = |x: f64| {
        let inner = |y: f64| {
            if y <= 0.0 {
                return 0.0;
            }
            log_density_laguerre(&[x, y], beta, a).map(f64::exp).unwrap_or(0.0)
        };
        adaptive_simpson_split(&inner, &[1e-12, x.min(limit), limit], 1e-10).unwrap_or(f64::NAN)
    };
    let total = adaptive_simpson_split(&outer, &[1e-12, 2.0, 12.0, limit], 1e-9)?;
    Ok((total - 1.0).abs())
}

fn jacobi2_normalization_error(beta: f64, a1: f64, a2: f64) -> Result<f64> {
    // λ = sin²θ per coordinate removes the endpoint algebraic singularities
    let half_pi = std::f64::consts::FRAC_PI_2;
    let to_lambda = |t: f64| {
        let s = t.sin();
        s * s
    };
    let outer = |t1: f64| {
        let l1 = to_lambda(t1);
        let jac1 = 2.0 * t1.sin() * t1.cos();
        let inner = |t2: f64| {
            let l2 = to_lambda(t2);
            if l1 <= 0.0 || l1 >= 1.0 || l2 <= 0.0 || l2 >= 1.0 {
                return 0.0;
            }
            let jac2 = 2.0 * t2.sin() * t2.cos();
            log_density_jacobi(&[l1, l2], beta, a1, a2)
                .map(|v| v.exp() * jac1 * jac2)
                .unwrap_or(0.0)
        };
        adaptive_simpson_split(&inner, &[0.0, t1, half_pi], 1e-10).unwrap_or(f64::NAN)
    };
    let total = adaptive_simpson(&outer, 0.0, half_pi, 1e-9)?;
    Ok((total - 1.0).abs())
}

/// Density normalizations by quadrature, the continuous Laguerre parameter
/// checks, and the m = 3 symbolic cross-check.
pub fn suite_density(seed: u64, quick: bool) -> Result<Report> {
    let t0 = std::time::Instant::now();
    let mut checks = Vec::new();

    for &beta in &[1.0, 3.5] {
        checks.push(Check::leq(
            format!("hermite_n2_normalization_beta{beta}"),
            hermite2_normalization_error(beta)?,
            relaxed(1e-6, quick),
            0,
            seed,
        ));
    }
    checks.push(Check::leq(
        "laguerre_m2_normalization_beta1_a1.5",
        laguerre2_normalization_error(1.0, 1.5)?,
        relaxed(1e-5, quick),
        0,
        seed,
    ));
    checks.push(Check::leq(
        "jacobi_m2_normalization_beta1_a2_a2",
        jacobi2_normalization_error(1.0, 2.0, 2.0)?,
        relaxed(1e-6, quick),
        0,
        seed,
    ));

    // continuous Laguerre parameter: the m = 1 eigenvalue is chi-square(2a)
    // for non-quantized a
    let n_samples = scaled(20_000, quick);
    for (case, &a) in [0.7f64, 1.0, 3.2].iter().enumerate() {
        let cfg = MonteCarloConfig::new(
            McEnsemble::Laguerre { beta: 1.7, m: 1, a },
            n_samples,
            seed,
        )
        .with_stats(vec![StatKind::PooledEigenvalues])
        .with_offset(region(5) + ((case as u64) << 32))
        .with_partitions(PARTITIONS);
        let out = run_monte_carlo(&cfg)?;
        let d = out
            .stat(StatKind::PooledEigenvalues)
            .ks_against(|x| regularized_gamma_p(a, (x / 2.0).max(0.0)));
        checks.push(Check::leq(
            format!("laguerre_m1_chisq_ks_a{a}"),
            d,
            relaxed(0.02, quick),
            n_samples as u64,
            seed,
        ));
    }

    // m = 3: trace and determinant against the symbolic engine
    let beta = 1.6;
    let m = 3usize;
    let a = 1.3 * beta / 2.0 * (m as f64 - 1.0) + 1.0;
    let s = beta / 2.0;
    let sym_trace = expected_elementary_symmetric(&MomentQuery::new(
        MomentEnsemble::Laguerre { m },
        MomentTarget::ElementarySymmetric(1),
    ))?
    .eval(s, a);
    let sym_det = det_moment(&MomentQuery::new(
        MomentEnsemble::Laguerre { m },
        MomentTarget::DeterminantPower(1),
    ))?
    .eval(s, a);
    let n_samples = scaled(200_000, quick);
    let cfg = MonteCarloConfig::new(McEnsemble::Laguerre { beta, m, a }, n_samples, seed)
        .with_stats(vec![StatKind::Trace, StatKind::Determinant])
        .with_offset(region(5) + (10 << 32))
        .with_partitions(PARTITIONS);
    let out = run_monte_carlo(&cfg)?;
    let tr = out.stat(StatKind::Trace);
    let det = out.stat(StatKind::Determinant);
    checks.push(Check::leq(
        "laguerre_m3_trace_vs_symbolic_z",
        (tr.mean() - sym_trace).abs() / tr.se_mean(),
        relaxed(4.0, quick),
        n_samples as u64,
        seed,
    ));
    checks.push(Check::leq(
        "laguerre_m3_det_vs_symbolic_z",
        (det.mean() - sym_det).abs() / det.se_mean(),
        relaxed(4.0, quick),
        n_samples as u64,
        seed,
    ));
    Ok(Report::collect("density", seed, checks, t0))
}

/// Selberg integral values: 2-D quadrature of the unnormalized integrand
/// against the exact reciprocal constants.
pub fn suite_selberg(seed: u64, quick: bool) -> Result<Report> {
    let t0 = std::time::Instant::now();
    let mut checks = Vec::new();
    for &beta in &[1.0, 2.0, 3.5] {
        checks.push(Check::leq(
            format!("selberg_hermite_n2_beta{beta}"),
            hermite2_normalization_error(beta)?,
            relaxed(1e-6, quick),
            0,
            seed,
        ));
        // a = 1 + β/2 keeps the λ^{a-p} factor constant, so the integrand is
        // smooth away from the diagonal
        let a = 1.0 + beta / 2.0;
        checks.push(Check::leq(
            format!("selberg_laguerre_m2_beta{beta}"),
            laguerre2_normalization_error(beta, a)?,
            relaxed(1e-5, quick),
            0,
            seed,
        ));
    }
    Ok(Report::collect("selberg", seed, checks, t0))
}

/// Discriminant moments: the Gamma-ratio and rising-factorial routes agree,
/// and the n = 2 value matches Monte Carlo.
pub fn suite_discriminant(seed: u64, quick: bool) -> Result<Report> {
    let t0 = std::time::Instant::now();
    let mut checks = Vec::new();
    // worst deviation between the Gamma-ratio and rising-factorial routes
    // across the parameter grid
    let mut worst: f64 = 0.0;
    let mut grid = 0u64;
    for &beta in &[0.5, 1.0, 2.0, 2.7, 4.0] {
        for k in 0..=3u32 {
            for size in 1..=5usize {
                let h = DiscriminantEnsemble::Hermite(HermiteParams::new(beta, size)?);
                let a = 1.3 * beta / 2.0 * (size as f64 - 1.0) + 1.0;
                let l = DiscriminantEnsemble::Laguerre(LaguerreParams::new(beta, size, a)?);
                let j = DiscriminantEnsemble::Jacobi(JacobiParams::new(
                    beta,
                    size,
                    a,
                    a + 0.4,
                )?);
                for ens in [h, l, j] {
                    let (via_c, via_f) = discriminant_moment_routes(&ens, k)?;
                    worst = worst.max((via_c - via_f).abs() / via_c.abs().max(1.0));
                    grid += 1;
                }
            }
        }
    }
    checks.push(Check::leq(
        "discriminant_route_agreement_grid",
        worst,
        relaxed(1e-10, quick),
        grid,
        seed,
    ));

    // Monte Carlo: Hermite n=2, β=2, k=1 has E[Δ²] = 6
    let n_samples = scaled(1_000_000, quick);
    let cfg = MonteCarloConfig::new(
        McEnsemble::Hermite { beta: 2.0, n: 2 },
        n_samples,
        seed,
    )
    .with_stats(vec![StatKind::VandermondeSq])
    .with_offset(region(6))
    .with_partitions(PARTITIONS);
    let out = run_monte_carlo(&cfg)?;
    let stats = out.stat(StatKind::VandermondeSq);
    let expect = discriminant_moment_log(
        &DiscriminantEnsemble::Hermite(HermiteParams::new(2.0, 2)?),
        1,
    )?
    .exp();
    let z = (stats.mean() - expect).abs() / stats.se_mean();
    checks.push(Check::leq(
        "discriminant_mc_hermite_n2_beta2_k1_z",
        z,
        relaxed(3.0, quick),
        n_samples as u64,
        seed,
    ));
    Ok(Report::collect("discriminant", seed, checks, t0))
}

/// Symbolic engine: exact small-case values, integer-coefficient and
/// classical-polynomial identities, and Monte Carlo agreement.
pub fn suite_charpoly(seed: u64, quick: bool) -> Result<Report> {
    let t0 = std::time::Instant::now();
    let mut checks = Vec::new();

    let exact = |name: &str, ok: bool, checks: &mut Vec<Check>| {
        checks.push(Check::leq(
            format!("charpoly_{name}"),
            if ok { 0.0 } else { 1.0 },
            0.0,
            0,
            seed,
        ));
    };

    let det1 = det_moment(&MomentQuery::new(
        MomentEnsemble::Hermite { n: 2 },
        MomentTarget::DeterminantPower(1),
    ))?;
    exact("det_n2_is_minus_s", det1.to_string() == "-s", &mut checks);
    let det2 = det_moment(&MomentQuery::new(
        MomentEnsemble::Hermite { n: 2 },
        MomentTarget::DeterminantPower(2),
    ))?;
    exact("det2_n2_is_s2_s_1", det2.to_string() == "s^2+s+1", &mut checks);

    let mut integer_ok = true;
    for n in 1..=4usize {
        for k in 0..=3u32 {
            let p = det_moment(&MomentQuery::new(
                MomentEnsemble::Hermite { n },
                MomentTarget::DeterminantPower(k),
            ))?;
            integer_ok &= p.integer_coefficients();
        }
    }
    exact("hermite_det_integer_coefficients", integer_ok, &mut checks);

    let mut he_ok = true;
    {
        use crate::closedform::{classical_monic, PolyFamily};
        use num::BigRational;
        use num::One;
        let one = BigRational::one();
        for n in 1..=6usize {
            let p = crate::symbolic::expected_charpoly(
                MomentEnsemble::Hermite { n },
                crate::symbolic::DEFAULT_MONOMIAL_CAP,
            )?;
            let he = classical_monic(PolyFamily::HermiteProbabilists, n);
            for j in 0..=n {
                he_ok &= p.coeff(j).eval_exact(&one, &one) == he.monic[j];
            }
        }
    }
    exact("hermite_charpoly_matches_he_at_beta2", he_ok, &mut checks);

    // Monte Carlo agreement at several β, a = 1.3(β/2)(m−1) + 1
    let n_samples = scaled(1_000_000, quick);
    let mut worst_z: f64 = 0.0;
    let mut case = 0u64;
    for &beta in &[1.0, 2.0, 4.0, 2.7] {
        let s = beta / 2.0;
        // Hermite n = 2: E[det], E[det²]; n = 3: E[e₂], E[e₃]
        let cfg = MonteCarloConfig::new(McEnsemble::Hermite { beta, n: 2 }, n_samples, seed)
            .with_stats(vec![StatKind::Determinant, StatKind::DeterminantSq])
            .with_offset(region(7) + (case << 32))
            .with_partitions(PARTITIONS);
        case += 1;
        let out = run_monte_carlo(&cfg)?;
        let sym = det1.eval(s, 0.0);
        let st = out.stat(StatKind::Determinant);
        worst_z = worst_z.max((st.mean() - sym).abs() / st.se_mean());
        let sym = det2.eval(s, 0.0);
        let st = out.stat(StatKind::DeterminantSq);
        worst_z = worst_z.max((st.mean() - sym).abs() / st.se_mean());

        let cfg = MonteCarloConfig::new(McEnsemble::Hermite { beta, n: 3 }, n_samples, seed)
            .with_stats(vec![StatKind::ElemSym(2), StatKind::ElemSym(3)])
            .with_offset(region(7) + (case << 32))
            .with_partitions(PARTITIONS);
        case += 1;
        let out = run_monte_carlo(&cfg)?;
        for i in [2usize, 3] {
            let sym = expected_elementary_symmetric(&MomentQuery::new(
                MomentEnsemble::Hermite { n: 3 },
                MomentTarget::ElementarySymmetric(i),
            ))?
            .eval(s, 0.0);
            let st = out.stat(StatKind::ElemSym(i));
            worst_z = worst_z.max((st.mean() - sym).abs() / st.se_mean());
        }

        // Laguerre m = 2: E[e₁] (trace), E[det]
        let m = 2usize;
        let a = 1.3 * s * (m as f64 - 1.0) + 1.0;
        let cfg = MonteCarloConfig::new(McEnsemble::Laguerre { beta, m, a }, n_samples, seed)
            .with_stats(vec![StatKind::Trace, StatKind::Determinant])
            .with_offset(region(7) + (case << 32))
            .with_partitions(PARTITIONS);
        case += 1;
        let out = run_monte_carlo(&cfg)?;
        let sym = expected_elementary_symmetric(&MomentQuery::new(
            MomentEnsemble::Laguerre { m },
            MomentTarget::ElementarySymmetric(1),
        ))?
        .eval(s, a);
        let st = out.stat(StatKind::Trace);
        worst_z = worst_z.max((st.mean() - sym).abs() / st.se_mean());
        let sym = det_moment(&MomentQuery::new(
            MomentEnsemble::Laguerre { m },
            MomentTarget::DeterminantPower(1),
        ))?
        .eval(s, a);
        let st = out.stat(StatKind::Determinant);
        worst_z = worst_z.max((st.mean() - sym).abs() / st.se_mean());
    }
    checks.push(Check::leq(
        "symbolic_vs_monte_carlo_worst_z",
        worst_z,
        relaxed(4.0, quick),
        n_samples as u64,
        seed,
    ));
    Ok(Report::collect("charpoly", seed, checks, t0))
}

fn semicircle_cdf(t: f64) -> f64 {
    let r = std::f64::consts::SQRT_2;
    if t <= -r {
        return 0.0;
    }
    if t >= r {
        return 1.0;
    }
    0.5 + (t * (2.0 - t * t).sqrt() / 2.0 + (t / r).asin()) / std::f64::consts::PI
}

/// Scaled pooled spectra against the semicircle density.
pub fn suite_semicircle(seed: u64, quick: bool) -> Result<Report> {
    let t0 = std::time::Instant::now();
    let n = if quick { 100 } else { 200 };
    let n_samples = if quick { 50 } else { 200 };
    let bins = 40usize;
    let r = std::f64::consts::SQRT_2;
    let mut checks = Vec::new();
    for (case, &beta) in [1.0f64, 2.0, 4.0].iter().enumerate() {
        let scale = (beta * n as f64).sqrt();
        let edges: Vec<f64> = (0..=bins)
            .map(|i| (-r + 2.0 * r * i as f64 / bins as f64) * scale)
            .collect();
        let cfg = MonteCarloConfig::new(McEnsemble::Hermite { beta, n }, n_samples, seed)
            .with_stats(vec![StatKind::PooledEigenvalues])
            .with_offset(region(8) + ((case as u64) << 32))
            .with_partitions(PARTITIONS)
            .with_hist_edges(edges);
        let out = run_monte_carlo(&cfg)?;
        let h = out.stat(StatKind::PooledEigenvalues).histogram().unwrap();
        let total = h.total() as f64;
        let mut l1 = (h.underflow() + h.overflow()) as f64 / total;
        for (b, &count) in h.counts().iter().enumerate() {
            let lo = -r + 2.0 * r * b as f64 / bins as f64;
            let hi = -r + 2.0 * r * (b + 1) as f64 / bins as f64;
            let expect = semicircle_cdf(hi) - semicircle_cdf(lo);
            l1 += (count as f64 / total - expect).abs();
        }
        checks.push(Check::leq(
            format!("semicircle_l1_beta{beta}_n{n}"),
            l1,
            relaxed(0.05, quick),
            (n_samples * n) as u64,
            seed,
        ));
    }
    Ok(Report::collect("semicircle", seed, checks, t0))
}

/// All suite names, in the order `all` runs them.
pub const SUITES: [&str; 10] = [
    "vandermonde",
    "reconstruct",
    "jacobians",
    "qdist",
    "equivalence",
    "density",
    "selberg",
    "discriminant",
    "charpoly",
    "semicircle",
];

/// Run one suite by name (or every suite for `all`).
pub fn run_suite(name: &str, seed: u64, quick: bool) -> Result<Vec<Report>> {
    let single = |r: Report| Ok(vec![r]);
    match name {
        "vandermonde" => single(suite_vandermonde(seed, quick)?),
        "reconstruct" => single(suite_reconstruct(seed, quick)?),
        "jacobians" => single(suite_jacobians(seed, quick)?),
        "qdist" => single(suite_qdist(seed, quick, None)?),
        "equivalence" => single(suite_equivalence(seed, quick)?),
        "density" => single(suite_density(seed, quick)?),
        "selberg" => single(suite_selberg(seed, quick)?),
        "discriminant" => single(suite_discriminant(seed, quick)?),
        "charpoly" => single(suite_charpoly(seed, quick)?),
        "semicircle" => single(suite_semicircle(seed, quick)?),
        "all" => SUITES
            .iter()
            .map(|s| run_suite(s, seed, quick).map(|mut v| v.remove(0)))
            .collect(),
        other => Err(Error::InvalidParameter(format!(
            "unknown suite '{other}'; expected one of {SUITES:?} or 'all'"
        ))),
    }
}
