//! Independent-oracle checks: dense linear algebra and Monte Carlo
//! references for the tridiagonal kernels and constants.

mod common;

use betatrix::closedform::log_c_q;
use betatrix::ensembles::{golub_kahan_bidiagonalize, sample_hermite, HermiteParams};
use betatrix::rng::{ChiLaw, RandomStream};
use betatrix::spectral::{char_poly, eigenvalues, first_row_eigvec};
use betatrix::stats::ks_two_sample;
use common::{inverse_iteration_first_row, to_dense};

#[test]
fn paige_matches_inverse_iteration_n10() {
    let p = HermiteParams::new(2.0, 10).unwrap();
    let mut stream = RandomStream::new(4242, 0);
    for _ in 0..20 {
        let t = sample_hermite(&p, &mut stream);
        let lambda = eigenvalues(&t, 1e-13).unwrap();
        let q = first_row_eigvec(&t, &lambda).unwrap();
        let oracle = inverse_iteration_first_row(&t, &lambda);
        for (a, b) in q.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }
}

#[test]
fn char_poly_matches_dense_determinant() {
    let p = HermiteParams::new(1.0, 5).unwrap();
    let mut stream = RandomStream::new(99, 3);
    let t = sample_hermite(&p, &mut stream);
    let dense = to_dense(&t);
    for &y in &[-2.5, -0.3, 0.0, 0.7, 1.9, 4.2] {
        let cp = char_poly(&t, y);
        let oracle = (nalgebra::DMatrix::identity(5, 5) * y - &dense)
            .lu()
            .determinant();
        let got = cp.value(5);
        assert!(
            (got - oracle).abs() <= 1e-10 * oracle.abs().max(1.0),
            "P_5({y}) = {got}, dense LU gives {oracle}"
        );
    }
}

#[test]
fn golub_kahan_gaussian_entry_laws() {
    // reducing an m x n standard Gaussian matrix yields diagonal chi_{n},
    // chi_{n-1}, ... and subdiagonal chi_{m-1}, ...: compare each entry
    // against direct chi draws by two-sample KS
    let (m, n) = (4usize, 7usize);
    let n_samples = 20_000;
    let mut stream = RandomStream::new(2024, 0);
    let mut diag_cols: Vec<Vec<f64>> = vec![Vec::new(); m];
    let mut sub_cols: Vec<Vec<f64>> = vec![Vec::new(); m - 1];
    for _ in 0..n_samples {
        let g: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..n).map(|_| stream.gaussian()).collect())
            .collect();
        let b = golub_kahan_bidiagonalize(&g).unwrap();
        for (k, &x) in b.diag().iter().enumerate() {
            diag_cols[k].push(x);
        }
        for (k, &y) in b.subdiag().iter().enumerate() {
            sub_cols[k].push(y);
        }
    }
    let mut chi_stream = RandomStream::new(2024, 1);
    for (k, col) in diag_cols.iter().enumerate() {
        let law = ChiLaw::new((n - k) as f64).unwrap();
        let refs: Vec<f64> = (0..n_samples).map(|_| chi_stream.chi(law)).collect();
        let d = ks_two_sample(col, &refs);
        assert!(d < 0.02, "diag {k}: KS {d}");
    }
    for (k, col) in sub_cols.iter().enumerate() {
        let law = ChiLaw::new((m - 1 - k) as f64).unwrap();
        let refs: Vec<f64> = (0..n_samples).map(|_| chi_stream.chi(law)).collect();
        let d = ks_two_sample(col, &refs);
        assert!(d < 0.02, "subdiag {k}: KS {d}");
    }
}

#[test]
fn cq_normalizes_the_sphere_density() {
    // c_q ∫_{S₊} Π q_i^{β-1} dq = 1: Monte Carlo over the uniform measure on
    // the positive orthant of the sphere (|gaussians| normalized)
    let n = 3usize;
    let beta = 2.5f64;
    let n_samples = 1_000_000usize;
    let mut stream = RandomStream::new(7171, 0);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_samples {
        let g: Vec<f64> = (0..n).map(|_| stream.gaussian().abs()).collect();
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        let f: f64 = g.iter().map(|x| (x / norm).powf(beta - 1.0)).product();
        sum += f;
        sum_sq += f * f;
    }
    let mean = sum / n_samples as f64;
    let se = ((sum_sq / n_samples as f64 - mean * mean) / n_samples as f64).sqrt();
    // area of the positive orthant: 2 π^{n/2} / Γ(n/2) / 2^n
    let area = 2.0 * std::f64::consts::PI.powf(n as f64 / 2.0)
        / betatrix::special::ln_gamma(n as f64 / 2.0).exp()
        / 2f64.powi(n as i32);
    let integral = mean * area;
    let expect = (-log_c_q(beta, n).unwrap()).exp();
    assert!(
        (integral - expect).abs() < 3.0 * se * area,
        "MC {integral} vs 1/c_q {expect} (3se = {})",
        3.0 * se * area
    );
}

#[test]
fn sturm_counts_localize_roots_generically() {
    use betatrix::spectral::sturm_count;
    let p = HermiteParams::new(0.5, 9).unwrap();
    let mut stream = RandomStream::new(11, 5);
    for _ in 0..50 {
        let t = sample_hermite(&p, &mut stream);
        let ev = eigenvalues(&t, 1e-12).unwrap();
        let scale = t.norm_bound();
        for (i, &l) in ev.iter().enumerate() {
            assert_eq!(sturm_count(&t, l - 1e-6 * scale), i);
            assert_eq!(sturm_count(&t, l + 1e-6 * scale), i + 1);
        }
    }
}
