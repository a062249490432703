//! Error type shared by all modules of the crate.

use crate::spectrum::TheoryKind;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A precondition on the inputs was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The map parameter lies outside (r_minus, r_plus): the image spheres
    /// would sit one inside the other, a configuration we do not support.
    #[error(
        "interior sphere-in-sphere configuration: scale {scale} is outside \
         ({r_minus}, {r_plus})"
    )]
    InteriorConfiguration {
        scale: f64,
        r_minus: f64,
        r_plus: f64,
    },

    /// The requested point is a singular point of the conformal map.
    #[error("singular point of the conformal map: {0}")]
    SingularPoint(String),

    /// No exact mode sum is known for this field theory.
    #[error("no exact solution is known for {0}")]
    NoExactSolution(TheoryKind),

    /// A series or quadrature failed to reach its tolerance.
    #[error("failed to converge: {0}")]
    Convergence(String),

    /// The least-squares system is too ill-conditioned to solve reliably.
    #[error("least-squares basis is ill-conditioned on this grid (estimate {estimate:.3e})")]
    IllConditioned { estimate: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
