use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("probability {0} is outside [0, 1]")]
    OutOfRange(f64),

    #[error("value is NaN")]
    NaN,

    #[error("domain error: {0}")]
    Domain(String),

    /// Conditioning on an observation that has zero marginal probability.
    #[error("degenerate posterior: prior puts all mass at theta = {0}")]
    DegeneratePosterior(f64),

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("linear program is infeasible")]
    Infeasible,

    #[error("linear program is unbounded")]
    Unbounded,

    #[error("prior file: {0}")]
    PriorFile(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
