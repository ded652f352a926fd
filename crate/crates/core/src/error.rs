//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by mesh construction, linear algebra, and the nonlinear solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// Mesh resolution below the supported minimum.
    #[error("mesh too coarse: n = {n}, need n >= {min}")]
    MeshTooCoarse { n: usize, min: usize },

    /// A constructor or operation received an out-of-range argument.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The linear system is singular or its right-hand side is incompatible.
    #[error("singular operator: {0}")]
    SingularOperator(String),

    /// The weight fails the admissibility requirements of the operation.
    #[error("weight not admissible: {0}")]
    WeightNotAdmissible(String),

    /// An iteration hit its cap or its damping floor without converging.
    #[error("no convergence after {iterations} iterations: {context}")]
    NoConvergence { iterations: usize, context: String },

    /// The candidate violates the discrete subsolution inequality.
    #[error("not a subsolution: {0}")]
    NotASubsolution(String),

    /// The candidate violates the discrete supersolution inequality.
    #[error("not a supersolution: {0}")]
    NotASupersolution(String),

    /// Monotone iterates escaped the sub/supersolution bracket.
    #[error("bracket violated: {0}")]
    BracketViolated(String),

    /// Malformed experiment configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Filesystem failure while reading inputs or writing reports.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
