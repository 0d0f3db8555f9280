//! Spectral calculus on the CR sphere S^{2n+1} and the Cayley bridge to the
//! Heisenberg group H^n, with a Galerkin solver for sign-changing solutions of
//! the fractional Yamabe-type equation.
//!
//! The library is organized around a small set of geometric and spectral
//! primitives:
//!
//! * [`special`]: log-Gamma, Gamma-ratio eigenvalues, Jacobi/Legendre
//!   polynomials, Gauss–Legendre nodes, and the closed-form constants of the
//!   sharp Sobolev inequality and the singular integral kernel.
//! * [`sphere`]: points on S^{2n+1}, the Hermitian pairing, the CR distance,
//!   reproducible uniform sampling, and sharded Monte Carlo integration.
//! * [`heisenberg`]: the group law, gauge norm, Korányi–Cygan metric, the
//!   Cayley transform with its Jacobian and inverse, and the induced measure
//!   and distance identities.
//! * [`harmonics`]: bidegree harmonic spaces H_{j,k}, their dimensions, zonal
//!   reproducing kernels, and Monte Carlo projections.
//! * [`operators`]: the intertwining operator A_γ, the H^γ inner product, the
//!   Funk–Hecke operator K_γ, the sharp Sobolev inequality check, the constant
//!   solution, pullback to H^n, and the convolution fixed-point residual.
//! * [`symmetry`]: block-unitary groups G_i, swap augmentations Ĝ_i, Haar
//!   sampling, the ⊛-action on functions, invariance testing, and the
//!   constructive transitivity canonicalizer.
//! * [`admissible`]: the exact-rational admissibility calculus for γ and the
//!   summary table.
//! * [`solver`]: the Ĝ₁-invariant Legendre–Galerkin reduction at n = 1 and the
//!   Nehari-quotient descent producing nodal solutions.
//!
//! Everything that consumes randomness is deterministic given a
//! `(seed, stream_id)` pair, independent of thread count.

pub mod admissible;
pub mod harmonics;
pub mod heisenberg;
pub mod operators;
pub mod report;
pub mod solver;
pub mod special;
pub mod sphere;
pub mod symmetry;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),
    #[error("pole proximity: {0}")]
    Pole(String),
    #[error("no convergence after {iters} iterations (residual {residual:.3e}, target {target:.3e})")]
    NoConvergence {
        iters: usize,
        residual: f64,
        target: f64,
    },
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Homogeneous dimension Q = 2n+2 of H^n.
#[inline]
pub fn homogeneous_dim(n: usize) -> usize {
    2 * n + 2
}

/// Critical exponent p = 2Q/(Q-2γ).
#[inline]
pub fn critical_exponent(n: usize, gamma: f64) -> f64 {
    let q = homogeneous_dim(n) as f64;
    2.0 * q / (q - 2.0 * gamma)
}
