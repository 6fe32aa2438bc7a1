use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("undecidable at this precision: {0}")]
    Undecidable(String),
    #[error("empty component: the slabs eliminate the ball")]
    EmptyBody,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("p too small for this epsilon: vertex {vertex} does not contain the inscribed slice")]
    PTooSmall { vertex: usize },
    #[error("k too small: centers {0}, {1}, {2} fail the collinearity slack")]
    KTooSmall(usize, usize, usize),
    #[error("packing failure: cannot place {n} disjoint components at epsilon {epsilon}")]
    Packing { n: usize, epsilon: f64 },
    #[error("invalid input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
    pub fn undecidable(msg: impl Into<String>) -> Self {
        Error::Undecidable(msg.into())
    }
}
