//! Error type shared by all modules.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Failures reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two inputs that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The operation requires a state on the zero-mean subspace.
    #[error("state is not reduced (nonzero total momentum or position)")]
    NotReduced,

    /// The operation requires real data (η = conj ξ).
    #[error("coordinates are not real")]
    NotReal,

    /// The inverse Flaschka map needs every a_j > -1.
    #[error("a[{index}] = {value} is not greater than -1")]
    FlaschkaDomain { index: usize, value: f64 },

    /// The eigensolver did not converge.
    #[error("eigensolver failed to converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    /// A spectral cluster is not separated from the rest of the spectrum.
    #[error("eigenvalue cluster {index} is not separated (distance {distance:e}, residual {residual:e})")]
    NotSeparated {
        index: usize,
        distance: f64,
        residual: f64,
    },

    /// The perturbed projector is too far from the free one.
    #[error("projector distance {distance} is not below 1 for index {index}")]
    ProjectorTooFar { index: usize, distance: f64 },

    /// A linear solve hit a singular matrix.
    #[error("singular linear system (eigenvalue on the contour?)")]
    Singular,

    /// Time integration produced a non-finite value.
    #[error("non-finite state at step {step}")]
    NonFinite { step: usize },

    /// Two power-series maps cannot be combined.
    #[error("arity mismatch: {0}")]
    Arity(String),

    /// A power-series map violates the structural precondition of an operation.
    #[error("malformed map: {0}")]
    Malformed(String),

    /// The right-hand sides of the Moser problem are not compatible.
    #[error("incompatible data: {0}")]
    Incompatible(String),

    /// The requested operation would leave the coefficient field (e.g. π in rational mode).
    #[error("not representable in this coefficient field: {0}")]
    NotRepresentable(String),
}
