use thiserror::Error;

/// Errors produced by the link-design operations.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// Input outside the operation's domain (bad index, invalid parameter,
    /// violated precondition). The message names the offending quantity.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative numeric routine failed to converge.
    #[error("numeric error in {op}: no convergence within {iterations} iterations (dimension {dimension})")]
    NonConvergence {
        op: &'static str,
        iterations: usize,
        dimension: usize,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for [`Error::Domain`]; used by callers that map error classes to
    /// process exit codes.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
