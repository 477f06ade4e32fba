//! Error taxonomy shared by all modules.

use thiserror::Error;

/// Errors produced by constructors, solvers and operator algebra.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Preconditions on arguments violated (bad index, zero dof, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An iterative solver ran out of its iteration budget.
    #[error("numerical failure in {context}: no convergence after {iterations} iterations (residual {residual:.3e})")]
    NumericalFailure {
        context: &'static str,
        iterations: usize,
        residual: f64,
    },

    /// The requested eigenvalue coincides with another root, so the mode is
    /// defective (exceptional point) and no ladder operator exists.
    #[error("degenerate mode: eigenvalue {0} coincides with another root within tolerance")]
    DegenerateMode(String),

    /// Parameter combination makes a closed-form expression singular.
    #[error("singular parameters: {0}")]
    SingularParameters(String),

    /// A polynomial operation would exceed the configured degree capacity.
    #[error("polynomial degree {needed} exceeds capacity {cap}")]
    DegreeCapacity { needed: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
