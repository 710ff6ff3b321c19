//! Random matrix models for the general-β Hermite (Gaussian) and Laguerre
//! (Wishart) ensembles.
//!
//! The β-Hermite ensemble is realized as a real symmetric tridiagonal matrix
//! with independent Gaussian diagonal and chi-distributed subdiagonal; the
//! β-Laguerre ensemble as `B Bᵀ` for a positive bidiagonal factor `B` with
//! chi-distributed entries and a continuous Laguerre parameter `a`. Both
//! models use O(n) storage and admit any `β > 0`.
//!
//! Alongside the samplers, the crate evaluates the exact objects attached to
//! these ensembles — joint-density normalization constants, the tridiagonal
//! Vandermonde and Jacobian formulas, Selberg integral values, discriminant
//! moments, and expected symmetric polynomials as exact polynomials in
//! `s = β/2` — and ships Monte Carlo suites ([`verify`]) that test the
//! distributional identities end to end.

pub mod closedform;
mod dd;
pub mod ensembles;
pub mod error;
pub mod matrix;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod spectral;
pub mod stats;
pub mod symbolic;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::{BidiagonalPos, MatrixRecord, TridiagonalSym};
pub use rng::{ChiLaw, RandomStream};
