//! Acceptance suite: every distributional identity and exact small-case
//! value the library is contracted to reproduce, one criterion per test,
//! with pinned seeds, sample sizes, and tolerances. Each test prints a
//! single PASS/FAIL line (visible with `--nocapture`).

mod common;

use betatrix::ensembles::{sample_hermite, HermiteParams};
use betatrix::rng::RandomStream;
use betatrix::spectral::{eigenvalues, first_row_eigvec};
use betatrix::verify::{self, Report};
use common::inverse_iteration_first_row;

const SEED: u64 = verify::DEFAULT_SEED;

fn assert_report(criterion: &str, report: &Report) {
    for c in &report.checks {
        let verdict = if c.pass { "pass" } else { "FAIL" };
        eprintln!(
            "    [{verdict}] {} = {:.3e} (threshold {:.3e}, N = {})",
            c.name, c.statistic, c.threshold, c.sample_count
        );
    }
    let verdict = if report.passed { "PASS" } else { "FAIL" };
    println!("{verdict} {criterion}");
    assert!(report.passed, "{criterion}: {:?}", report.checks);
}

#[test]
fn criterion_01_vandermonde_identity() {
    let r = verify::suite_vandermonde(SEED, false).unwrap();
    assert_report(
        "criterion 1: tridiagonal Vandermonde identity at n=12, beta=2 (200 samples, 1e-8)",
        &r,
    );
}

#[test]
fn criterion_02_bijection_round_trip() {
    let r = verify::suite_reconstruct(SEED, false).unwrap();
    assert_report(
        "criterion 2: (lambda, q) -> Lanczos reconstruction round trip, n in {5,30,50}, beta in {0.5,1,2,4} (1e-8)",
        &r,
    );
}

#[test]
fn criterion_03_paige_formula() {
    let p = HermiteParams::new(2.0, 15).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let mut stream = RandomStream::new(SEED, (9 << 40) + i);
        let t = sample_hermite(&p, &mut stream);
        let lambda = eigenvalues(&t, 1e-13).unwrap();
        let q = first_row_eigvec(&t, &lambda).unwrap();
        let oracle = inverse_iteration_first_row(&t, &lambda);
        for (a, b) in q.iter().zip(&oracle) {
            worst = worst.max((a - b).abs());
        }
    }
    let pass = worst < 1e-10;
    println!(
        "{} criterion 3: Paige first-row formula vs inverse iteration, 100 instances at n=15 (worst {worst:.3e}, tol 1e-10)",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

#[test]
fn criterion_04_q_distribution() {
    let r = verify::suite_qdist(SEED, false, None).unwrap();
    assert_report(
        "criterion 4: q_i^2 marginals are Beta(beta/2, beta(n-1)/2), KS < 0.02 at N=2e4",
        &r,
    );
}

#[test]
fn criterion_05_goe_gue_equivalence() {
    let r = verify::suite_equivalence(SEED, false).unwrap();
    assert_report(
        "criterion 5: Householder-reduced GOE/GUE match beta=1,2 samplers, KS < 0.02 at n=8, N=2e4",
        &r,
    );
}

#[test]
fn criterion_06_selberg_values() {
    let r = verify::suite_selberg(SEED, false).unwrap();
    assert_report(
        "criterion 6: quadrature matches 1/c_H (1e-6) and 1/c_L (1e-5) at n=m=2, beta in {1,2,3.5}",
        &r,
    );
}

#[test]
fn criterion_07_discriminant_moments() {
    let r = verify::suite_discriminant(SEED, false).unwrap();
    assert_report(
        "criterion 7: discriminant moment routes agree to 1e-10; E[disc] = 6 matches MC at n=2, beta=2",
        &r,
    );
}

#[test]
fn criterion_08_symbolic_engine() {
    let r = verify::suite_charpoly(SEED, false).unwrap();
    assert_report(
        "criterion 8: symbolic det moments/charpoly exact values, integer coefficients, He match, MC within 4 SE",
        &r,
    );
}

#[test]
fn criterion_09_continuous_laguerre_parameter() {
    let r = verify::suite_density(SEED, false).unwrap();
    let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
    assert!(names.iter().any(|n| n.contains("laguerre_m1_chisq_ks_a0.7")));
    assert!(names.iter().any(|n| n.contains("laguerre_m1_chisq_ks_a3.2")));
    assert!(names.iter().any(|n| n.contains("laguerre_m3_trace")));
    assert_report(
        "criterion 9: non-quantized Laguerre parameter: m=1 chi-square KS at a in {0.7,3.2}; m=3 moments within 4 SE",
        &r,
    );
}

#[test]
fn criterion_10_laguerre_exact_identities() {
    let r = verify::suite_jacobians(SEED, false).unwrap();
    let trace = r
        .checks
        .iter()
        .find(|c| c.name == "laguerre_trace_identity")
        .unwrap();
    let det = r
        .checks
        .iter()
        .find(|c| c.name == "laguerre_det_identity")
        .unwrap();
    let pass = trace.pass && det.pass;
    println!(
        "{} criterion 10: trace(BBt) = sum of squares and det(BBt) = prod x^2 to 1e-12 on 1e3 samples (worst {:.3e}, {:.3e})",
        if pass { "PASS" } else { "FAIL" },
        trace.statistic,
        det.statistic
    );
    assert!(pass);
}

#[test]
fn criterion_11_semicircle() {
    let r = verify::suite_semicircle(SEED, false).unwrap();
    assert_report(
        "criterion 11: scaled pooled spectrum within L1 < 0.05 of the semicircle at n=200, N=200, beta in {1,2,4}",
        &r,
    );
}

#[test]
fn criterion_12_jacobian_b_to_t() {
    let r = verify::suite_jacobians(SEED, false).unwrap();
    let fd = r
        .checks
        .iter()
        .find(|c| c.name == "jacobian_b_to_t_finite_difference_m1to5")
        .unwrap();
    println!(
        "{} criterion 12: B -> BBt Jacobian closed form vs finite differences for m <= 5 (worst {:.3e}, tol 1e-6)",
        if fd.pass { "PASS" } else { "FAIL" },
        fd.statistic
    );
    assert!(fd.pass);
}
