//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter violates its precondition (nonpositive dof, Gamma pole,
    /// Laguerre parameter at or below (β/2)(m−1), bad tolerance, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An input contained NaN or infinity.
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    /// Eigenvalues collide closer than the degeneracy tolerance.
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    /// A (q, λ) pair leaves the domain of the tridiagonal bijection
    /// (some q_i = 0 or repeated eigenvalues).
    #[error("bijection violation: {0}")]
    BijectionViolation(String),

    /// Evaluation outside the density's support.
    #[error("domain error: {0}")]
    Domain(String),

    /// An odd moment of a chi-distributed entry was requested; these are not
    /// polynomials in β/2 and never arise in symmetric-polynomial expansions.
    #[error("odd chi moment has no polynomial form")]
    OddChiMoment,

    /// Symbolic expansion exceeded the configured monomial cap.
    #[error("resource cap exceeded: {needed} monomials, cap {cap}")]
    ResourceCap { needed: u64, cap: u64 },

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
