//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Observation outside the support of a model family.
    #[error("{family}: observation {x} outside support")]
    Support { family: String, x: f64 },

    /// Adaptive quadrature exhausted its subdivision budget. The best
    /// estimate obtained so far is carried along for diagnostics.
    #[error("quadrature failed to converge (best estimate {best}, error bound {error_bound})")]
    Quadrature { best: f64, error_bound: f64 },

    /// Iterative solver did not reach its tolerance. Carries the best
    /// iterate so callers can inspect or retry.
    #[error("solver did not converge after {iterations} iterations (gradient norm {gradient_norm:e})")]
    NonConvergence {
        best: Vec<f64>,
        iterations: usize,
        gradient_norm: f64,
    },

    /// One fixed-point update could not be applied (e.g. nonpositive
    /// denominator); the caller may fall back to another solver.
    #[error("fixed-point step failed: {0}")]
    StepFailure(String),

    /// Sample that cannot identify the parameters (zero variance, empty, ...).
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// Singular or numerically indefinite matrix.
    #[error("matrix error: {0}")]
    Singular(String),

    /// Restriction map failed a rank or shape requirement.
    #[error("restriction error: {0}")]
    Restriction(String),

    /// Power query without a meaningful answer (e.g. theta* = theta0).
    #[error("degenerate query: {0}")]
    DegenerateQuery(String),

    /// Malformed user input: unknown names, unparseable files or grids.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
