use thiserror::Error;

/// Errors raised by the numerical kernels and solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Cholesky pivot was not strictly positive. Usually the basis is too
    /// large for the working precision.
    #[error(
        "matrix is not positive definite (pivot {pivot} at row {row}); raise the working precision or shrink the basis"
    )]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("symmetric eigensolver did not converge after {sweeps} sweeps")]
    IterationLimit { sweeps: usize },

    #[error("polynomial of degree 0 has no roots")]
    EmptyResult,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("quadrature did not reach tolerance (estimate {estimate}, error {error:e})")]
    QuadratureFailure { estimate: f64, error: f64 },

    #[error("operation `{0}` produced NaN")]
    NotANumber(&'static str),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
