//! Exact-arithmetic tools for the cohomology ring of rank-2 twisted Higgs
//! moduli spaces: the explicit ring presentation, weight and perverse
//! filtrations with their comparison (P=W), curious hard Lefschetz, Betti
//! numbers of compactified Jacobians of A_k-singular spectral curves, and
//! braid-monodromy invariants of the associated local systems.
//!
//! Everything is computed over arbitrary-precision rationals; no floats,
//! no modular shortcuts.

pub mod braid;
pub mod exterior;
pub mod jacobian;
pub mod lefschetz;
pub mod matrix;
pub mod pw;
pub mod rational;
pub mod report;
pub mod ring;
pub mod sl2;
pub mod subspace;

use thiserror::Error;

/// Errors reported by the exact-arithmetic pipeline.
#[derive(Debug, Error)]
pub enum PwError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("genus mismatch: left has g={left}, right has g={right}")]
    GenusMismatch { left: usize, right: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("element is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("linear solve has no solution: {0}")]
    NoSolution(String),
}

pub type Result<T> = std::result::Result<T, PwError>;
