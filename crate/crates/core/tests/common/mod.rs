//! Shared test oracles, kept independent of the library's own kernels.

use betatrix::matrix::TridiagonalSym;
use nalgebra::{DMatrix, DVector};

pub fn to_dense(t: &TridiagonalSym) -> DMatrix<f64> {
    let n = t.n();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = t.diag()[i];
    }
    for j in 0..n - 1 {
        m[(j + 1, j)] = t.subdiag()[j];
        m[(j, j + 1)] = t.subdiag()[j];
    }
    m
}

/// First component of each unit eigenvector by shifted inverse iteration
/// with dense LU solves — the classical route the Paige formula replaces.
pub fn inverse_iteration_first_row(t: &TridiagonalSym, lambda: &[f64]) -> Vec<f64> {
    let n = t.n();
    let dense = to_dense(t);
    let scale = t.norm_bound().max(1.0);
    lambda
        .iter()
        .map(|&l| {
            // tiny shift off the exact root keeps the LU nonsingular
            let shifted = &dense - DMatrix::identity(n, n) * (l + 1e-13 * scale);
            let lu = shifted.lu();
            let mut v = DVector::from_fn(n, |i, _| 1.0 + 0.1 * (i as f64 + 1.0).sin());
            v /= v.norm();
            for _ in 0..4 {
                let solved = lu.solve(&v).expect("inverse iteration solve");
                let norm = solved.norm();
                v = solved / norm;
            }
            v[0].abs()
        })
        .collect()
}
