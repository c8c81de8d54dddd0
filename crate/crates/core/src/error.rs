use thiserror::Error;

/// Errors raised by the optimisation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Cholesky factorisation hit a non-positive pivot.
    #[error("ill-conditioned kernel matrix: non-positive pivot at index {pivot}")]
    IllConditioned { pivot: usize },

    #[error("internal consistency violated: {0}")]
    Internal(String),

    #[error("degenerate quantile: F^-1(1 - 1/T) evaluated to {0}")]
    DegenerateQuantile(f64),

    #[error("repeat {repeat}, iteration t={iteration}: {source}")]
    AtIteration {
        repeat: usize,
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dims(expected: usize, got: usize, what: &str) -> Result<()> {
    if expected != got {
        return Err(Error::InvalidInput(format!(
            "{what} has dimension {got}, expected {expected}"
        )));
    }
    Ok(())
}
