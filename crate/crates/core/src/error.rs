use thiserror::Error;

/// Errors raised across the crate.
///
/// The variants map onto the two failure classes the CLI distinguishes:
/// bad input (`Validation`, `Domain`, `Argument`, `Precondition`) and
/// failures of the computation itself (`Resource`, `Optimizer`, `Internal`).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    Validation(String),
    #[error("value out of domain: {0}")]
    Domain(String),
    #[error("bad argument: {0}")]
    Argument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resource guard exceeded: {0}")]
    Resource(String),
    #[error("optimizer failure: {0}")]
    Optimizer(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by the computation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Validation(_) | Error::Domain(_) | Error::Argument(_) | Error::Precondition(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
