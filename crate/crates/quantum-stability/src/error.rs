//! Error type shared by every module.

use alloc::string::String;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Coarse classification of an [`Error`], used by front ends to pick exit
/// codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input.
    Input,
    /// A numerical certificate failed (residual, divergence, unwrapping).
    Numerical,
    /// A flow or grouping hit a degenerate, non-generic configuration.
    NonGeneric,
}

/// Errors raised by the library.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    /// Two classes or matrices of different rank were combined.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch {
        /// Rank of the left operand.
        left: usize,
        /// Rank of the right operand.
        right: usize,
    },
    /// An argument is outside the documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The Euler pairing of classes declared integral is not an integer.
    #[error("euler pairing {value} is not integral: corrupted K-class")]
    NonIntegralPairing {
        /// The offending rational value.
        value: String,
    },
    /// A collection violates the exceptional-collection invariants.
    #[error("not an exceptional collection: {0}")]
    NotExceptional(String),
    /// A resonant entry of the series recursion has a nonzero right-hand side.
    #[error("resonant entry ({row}, {col}) at order {order} has right-hand side {residual:e}")]
    ResonanceViolation {
        /// Recursion order.
        order: usize,
        /// Row index.
        row: usize,
        /// Column index.
        col: usize,
        /// Size of the right-hand side.
        residual: f64,
    },
    /// A path passes through or winds around the origin.
    #[error("path passes through or around z = 0")]
    PathThroughOrigin,
    /// The adaptive integrator could not make progress.
    #[error("target too close to irregular singularity near z = {re} + {im}i")]
    TooCloseToSingularity {
        /// Real part of the point where the step size underflowed.
        re: f64,
        /// Imaginary part of that point.
        im: f64,
    },
    /// The requested point does not lie on the sampled path.
    #[error("z is not on the frame path")]
    NotOnPath,
    /// The rescaled central charge grows or decays exponentially.
    #[error("divergence detected: wrong u for this object (exponential slope {slope:e})")]
    WrongRate {
        /// Fitted coefficient of 1/r in the logarithm of the rescaled charge.
        slope: f64,
    },
    /// A flow hit simultaneous or non-adjacent crossings.
    #[error("non-generic path: {0}")]
    NonGeneric(String),
    /// The phase stops being admissible during a flow.
    #[error("phase becomes inadmissible at t = {t}")]
    Inadmissible {
        /// Flow parameter where admissibility fails.
        t: f64,
    },
    /// Consecutive phases violate the gap condition.
    #[error("not a stability datum: ceil(phi_i) >= phi_(i+1) at i = {index}")]
    GapViolation {
        /// Index `i` of the failing pair.
        index: usize,
    },
    /// A phase computation landed on the boundary of the heart cone.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    /// A class is not a nonnegative integral combination of the heart generators.
    #[error("class is not in the heart: {0}")]
    NotInHeart(String),
    /// Two grouping keys fall inside the ambiguity band.
    #[error("ambiguous grouping, adjust tol (|delta Im| = {gap:e})")]
    AmbiguousGrouping {
        /// The ambiguous difference of imaginary parts.
        gap: f64,
    },
    /// Path construction requires strictly increasing Im(-u).
    #[error("Im(-u) is not strictly increasing along the collection: reorder or use grouping mode")]
    NotOrdered,
    /// Phase unwrapping failed after the refinement cap.
    #[error("phase unwrapping failed: {0}")]
    UnwrapFailure(String),
    /// A documented precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Any other numerical failure.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Classifies the error for exit-code selection.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DimensionMismatch { .. }
            | Error::InvalidArgument(_)
            | Error::NotExceptional(_)
            | Error::NotOnPath
            | Error::GapViolation { .. }
            | Error::NotInHeart(_)
            | Error::NotOrdered
            | Error::Precondition(_)
            | Error::PathThroughOrigin => ErrorKind::Input,
            Error::NonGeneric(_)
            | Error::Inadmissible { .. }
            | Error::AmbiguousGrouping { .. }
            | Error::Degenerate(_) => ErrorKind::NonGeneric,
            Error::NonIntegralPairing { .. }
            | Error::ResonanceViolation { .. }
            | Error::TooCloseToSingularity { .. }
            | Error::WrongRate { .. }
            | Error::UnwrapFailure(_)
            | Error::Numerical(_) => ErrorKind::Numerical,
        }
    }
}
