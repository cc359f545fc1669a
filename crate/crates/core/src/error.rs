use thiserror::Error;

use crate::arith::Real;

/// Errors raised by the numeric kernels, the series summer and the catalog.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at a pole of ψ⁽ᵐ⁾ or of a cotangent derivative.
    #[error("pole: {0}")]
    Pole(String),

    /// An iterative kernel failed to reach the requested accuracy.
    #[error("precision not reached: {0}")]
    Precision(String),

    /// A caller violated a documented precondition (parity, constraint, parameters).
    #[error("usage error: {0}")]
    Usage(String),

    /// Direct summation hit `max_terms` before the tail bound fell below tolerance.
    #[error("series truncated after {terms} terms without reaching tolerance")]
    Truncation {
        terms: usize,
        partial: Box<Real>,
        tail_bound: Option<Box<Real>>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
